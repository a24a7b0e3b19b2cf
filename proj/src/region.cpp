#include "landca/region.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "landca/normalize.hpp"

namespace landca {

namespace {

// Cyclic Jacobi eigensolver for small symmetric matrices. Returns eigenvalues
// in descending order with matching unit eigenvectors as matrix columns.
void jacobi_eigen(Matrix a, std::vector<double>& eigenvalues, Matrix& eigenvectors) {
    const std::size_t n = a.rows;
    eigenvectors = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) eigenvectors.at(i, i) = 1.0;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a.at(p, q) * a.at(p, q);
        if (off < 1e-30) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a.at(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a.at(i, p), aiq = a.at(i, q);
                    a.at(i, p) = c * aip - s * aiq;
                    a.at(i, q) = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a.at(p, i), aqi = a.at(q, i);
                    a.at(p, i) = c * api - s * aqi;
                    a.at(q, i) = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = eigenvectors.at(i, p), viq = eigenvectors.at(i, q);
                    eigenvectors.at(i, p) = c * vip - s * viq;
                    eigenvectors.at(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a.at(i, i) > a.at(j, j); });
    eigenvalues.resize(n);
    Matrix sorted(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        eigenvalues[k] = a.at(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) sorted.at(i, k) = eigenvectors.at(i, order[k]);
    }
    eigenvectors = std::move(sorted);
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa <= 0.0 || sbb <= 0.0) return 2.0;  // sentinel: undefined
    return sab / std::sqrt(saa * sbb);
}

}  // namespace

void validate_index_table(const IndexTable& table) {
    if (table.unit_ids.size() < 3) {
        fail(Errc::bad_config, "index table needs at least 3 units, got " +
                                   std::to_string(table.unit_ids.size()));
    }
    if (table.index_names.size() < 2) {
        fail(Errc::bad_config, "index table needs at least 2 indexes, got " +
                                   std::to_string(table.index_names.size()));
    }
    if (table.values.rows != table.unit_ids.size() || table.values.cols != table.index_names.size()) {
        fail(Errc::bad_config, "index table shape does not match its unit/index name lists");
    }
    std::set<std::string> seen(table.unit_ids.begin(), table.unit_ids.end());
    if (seen.size() != table.unit_ids.size()) {
        fail(Errc::bad_config, "index table contains duplicate unit ids");
    }
}

Matrix minmax_columns(const Matrix& m) {
    Matrix out(m.rows, m.cols);
    std::vector<double> col(m.rows);
    for (std::size_t c = 0; c < m.cols; ++c) {
        for (std::size_t r = 0; r < m.rows; ++r) col[r] = m.at(r, c);
        const std::vector<double> norm = normalize_minmax(col);
        for (std::size_t r = 0; r < m.rows; ++r) out.at(r, c) = norm[r];
    }
    return out;
}

PcaResult pca_top2(const IndexTable& table) {
    validate_index_table(table);
    const Matrix x = minmax_columns(table.values);
    const std::size_t n = x.rows, s = x.cols;

    Matrix centered(n, s);
    for (std::size_t c = 0; c < s; ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < n; ++r) mean += x.at(r, c);
        mean /= static_cast<double>(n);
        for (std::size_t r = 0; r < n; ++r) centered.at(r, c) = x.at(r, c) - mean;
    }

    Matrix cov(s, s);
    for (std::size_t a = 0; a < s; ++a) {
        for (std::size_t b = a; b < s; ++b) {
            double acc = 0.0;
            for (std::size_t r = 0; r < n; ++r) acc += centered.at(r, a) * centered.at(r, b);
            acc /= static_cast<double>(n - 1);
            cov.at(a, b) = acc;
            cov.at(b, a) = acc;
        }
    }

    std::vector<double> eigenvalues;
    Matrix eigenvectors;
    jacobi_eigen(cov, eigenvalues, eigenvectors);

    double total = 0.0;
    for (double& ev : eigenvalues) {
        if (ev < 0.0) ev = 0.0;  // numeric dust from Jacobi
        total += ev;
    }
    if (total <= 1e-12 || eigenvalues[0] <= 1e-12) {
        fail(Errc::insufficient_variance,
             "pca_top2: index table has no usable variance after normalization");
    }

    // Sign convention: the largest-magnitude component of each axis points
    // positive, so scores are reproducible run to run.
    for (std::size_t k = 0; k < 2 && k < s; ++k) {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < s; ++i)
            if (std::fabs(eigenvectors.at(i, k)) > std::fabs(eigenvectors.at(arg, k))) arg = i;
        if (eigenvectors.at(arg, k) < 0.0)
            for (std::size_t i = 0; i < s; ++i) eigenvectors.at(i, k) = -eigenvectors.at(i, k);
    }

    PcaResult out;
    out.scores = Matrix(n, 2);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < 2; ++k) {
            double acc = 0.0;
            if (k < s) {
                for (std::size_t c = 0; c < s; ++c) acc += centered.at(r, c) * eigenvectors.at(c, k);
            }
            out.scores.at(r, k) = acc;
        }
    }
    const double top2 = eigenvalues[0] + (eigenvalues.size() > 1 ? eigenvalues[1] : 0.0);
    out.explained_variance = top2 / total;
    return out;
}

std::vector<int> centroid_cluster(const Matrix& vectors, int k,
                                  const std::vector<std::string>* unit_ids) {
    const std::size_t n = vectors.rows;
    if (k < 1 || static_cast<std::size_t>(k) > n) {
        fail(Errc::bad_config, "centroid_cluster: k=" + std::to_string(k) + " outside 1.." +
                                   std::to_string(n));
    }

    auto row_vec = [&](std::size_t r) {
        std::vector<double> v(vectors.cols);
        for (std::size_t c = 0; c < vectors.cols; ++c) v[c] = vectors.at(r, c);
        return v;
    };
    auto unit_name = [&](std::size_t r) {
        return unit_ids ? (*unit_ids)[r] : ("unit " + std::to_string(r));
    };

    for (std::size_t r = 0; r < n; ++r) {
        const std::vector<double> v = row_vec(r);
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        if (var <= 0.0) {
            fail(Errc::undefined_metric,
                 "centroid_cluster: Pearson correlation is undefined for the constant index vector "
                 "of " + unit_name(r));
        }
    }

    struct Cluster {
        int label;  // smallest member row index
        std::vector<std::size_t> members;
        std::vector<double> centroid;
    };
    std::vector<Cluster> active;
    active.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        active.push_back(Cluster{static_cast<int>(r), {r}, row_vec(r)});
    }

    auto recompute_centroid = [&](Cluster& c) {
        std::fill(c.centroid.begin(), c.centroid.end(), 0.0);
        for (std::size_t m : c.members)
            for (std::size_t col = 0; col < vectors.cols; ++col)
                c.centroid[col] += vectors.at(m, col);
        for (double& x : c.centroid) x /= static_cast<double>(c.members.size());
    };

    while (active.size() > static_cast<std::size_t>(k)) {
        double best_r = -2.0;
        std::size_t bi = 0, bj = 0;
        bool found = false;
        for (std::size_t i = 0; i < active.size(); ++i) {
            for (std::size_t j = i + 1; j < active.size(); ++j) {
                const double r = pearson(active[i].centroid, active[j].centroid);
                if (r > 1.5) {
                    fail(Errc::undefined_metric,
                         "centroid_cluster: Pearson correlation became undefined between the "
                         "centroids of clusters " + std::to_string(active[i].label) + " and " +
                             std::to_string(active[j].label));
                }
                const auto key = std::minmax(active[i].label, active[j].label);
                const auto best_key = std::minmax(active[bi].label, active[bj].label);
                if (!found || r > best_r || (r == best_r && key < best_key)) {
                    best_r = r;
                    bi = i;
                    bj = j;
                    found = true;
                }
            }
        }
        Cluster& a = active[std::min(bi, bj)];
        Cluster& b = active[std::max(bi, bj)];
        a.label = std::min(a.label, b.label);
        a.members.insert(a.members.end(), b.members.begin(), b.members.end());
        recompute_centroid(a);
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(std::max(bi, bj)));
    }

    std::sort(active.begin(), active.end(),
              [](const Cluster& a, const Cluster& b) { return a.label < b.label; });
    std::vector<int> labels(n, 0);
    for (std::size_t c = 0; c < active.size(); ++c)
        for (std::size_t m : active[c].members) labels[m] = static_cast<int>(c) + 1;
    return labels;
}

RegionPartition split_by_adjacency(const std::vector<std::string>& unit_ids,
                                   const std::vector<int>& cluster_of, const AdjacencyGraph& graph) {
    const std::size_t n = unit_ids.size();
    if (cluster_of.size() != n) {
        fail(Errc::bad_config, "split_by_adjacency: cluster labels do not cover all units");
    }
    std::map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < n; ++i) index_of[unit_ids[i]] = i;

    std::vector<std::vector<std::size_t>> neighbors(n);
    for (const auto& [a, b] : graph.edges) {
        if (a == b) fail(Errc::bad_config, "adjacency contains self-loop on unit " + a);
        const auto ia = index_of.find(a), ib = index_of.find(b);
        if (ia == index_of.end() || ib == index_of.end()) {
            fail(Errc::bad_config,
                 "adjacency edge (" + a + "," + b + ") names a unit absent from the index table");
        }
        neighbors[ia->second].push_back(ib->second);
        neighbors[ib->second].push_back(ia->second);
    }

    RegionPartition part;
    part.unit_ids = unit_ids;
    part.cluster_of = cluster_of;
    part.region_of.assign(n, 0);
    part.cluster_count = *std::max_element(cluster_of.begin(), cluster_of.end());

    // Flood each cluster's induced subgraph; scan order over unit index keeps
    // region numbering stable.
    int next_region = 0;
    for (std::size_t start = 0; start < n; ++start) {
        if (part.region_of[start] != 0) continue;
        ++next_region;
        std::vector<std::size_t> stack{start};
        part.region_of[start] = next_region;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v : neighbors[u]) {
                if (part.region_of[v] == 0 && cluster_of[v] == cluster_of[u]) {
                    part.region_of[v] = next_region;
                    stack.push_back(v);
                }
            }
        }
    }
    part.region_count = next_region;
    return part;
}

RegionPartition cluster_regions(const IndexTable& table, const AdjacencyGraph& graph, int k) {
    validate_index_table(table);
    const PcaResult pca = pca_top2(table);
    const Matrix normalized = minmax_columns(table.values);
    const std::vector<int> clusters = centroid_cluster(normalized, k, &table.unit_ids);
    RegionPartition part = split_by_adjacency(table.unit_ids, clusters, graph);
    part.explained_variance = pca.explained_variance;
    return part;
}

}  // namespace landca
