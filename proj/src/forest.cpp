#include "landca/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace landca {

namespace {

constexpr std::uint64_t kTreeStreamTag = 0x54524545ull;   // per-tree bootstrap/splits
constexpr std::uint64_t kNoiseStreamTag = 0x4E4F4953ull;  // contribution noise columns

double misclassification_rate(const Forest& forest, const TrainingSet& data) {
    std::size_t wrong = 0;
    for (std::size_t r = 0; r < data.rows(); ++r) {
        if (classify(forest, data.row(r)) != data.labels[r]) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(data.rows());
}

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double impurity = 0.0;  // children impurity, row-weighted
};

double gini(std::span<const std::size_t> counts, std::size_t total) {
    if (total == 0) return 0.0;
    double sum_sq = 0.0;
    for (std::size_t c : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

}  // namespace

namespace detail {

DecisionTree grow_tree(const TrainingSet& data, std::span<const std::uint32_t> rows,
                       const ForestParams& params, int class_count, Rng& rng) {
    DecisionTree tree;
    const std::size_t s = data.feature_count();
    const int mtry = params.mtry > 0
                         ? std::min<int>(params.mtry, static_cast<int>(s))
                         : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(s))));

    std::vector<std::uint32_t> work(rows.begin(), rows.end());
    std::vector<int> feature_pool(s);
    std::vector<std::uint32_t> sorted;
    std::vector<std::size_t> left_counts(static_cast<std::size_t>(class_count) + 1);
    std::vector<std::size_t> right_counts(static_cast<std::size_t>(class_count) + 1);

    // Recursive growth over [begin, end) of `work`; children are partitions
    // of the parent's range, so no per-node row copies are made.
    auto build = [&](auto&& self, std::size_t begin, std::size_t end, int depth) -> int {
        const std::size_t n = end - begin;
        std::vector<std::size_t> counts(static_cast<std::size_t>(class_count) + 1, 0);
        for (std::size_t i = begin; i < end; ++i)
            ++counts[static_cast<std::size_t>(data.labels[work[i]])];

        int majority = 1;
        for (int c = 1; c <= class_count; ++c)
            if (counts[static_cast<std::size_t>(c)] > counts[static_cast<std::size_t>(majority)])
                majority = c;
        const bool pure = counts[static_cast<std::size_t>(majority)] == n;

        const int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(TreeNode{});

        if (pure || depth >= params.max_depth || n < 2 * static_cast<std::size_t>(params.min_leaf)) {
            tree.nodes[static_cast<std::size_t>(node_id)].label = majority;
            return node_id;
        }

        // Random feature subset for this node, then exhaustive threshold scan
        // over the subset.
        std::iota(feature_pool.begin(), feature_pool.end(), 0);
        for (int k = 0; k < mtry; ++k) {
            const std::size_t pick =
                static_cast<std::size_t>(k) +
                rng.next_below(static_cast<std::uint64_t>(s - static_cast<std::size_t>(k)));
            std::swap(feature_pool[static_cast<std::size_t>(k)], feature_pool[pick]);
        }

        SplitChoice best;
        bool has_best = false;
        for (int k = 0; k < mtry; ++k) {
            const int f = feature_pool[static_cast<std::size_t>(k)];
            sorted.assign(work.begin() + static_cast<std::ptrdiff_t>(begin),
                          work.begin() + static_cast<std::ptrdiff_t>(end));
            std::sort(sorted.begin(), sorted.end(), [&](std::uint32_t a, std::uint32_t b) {
                const double va = data.features[a * s + static_cast<std::size_t>(f)];
                const double vb = data.features[b * s + static_cast<std::size_t>(f)];
                return va < vb || (va == vb && a < b);
            });

            std::fill(left_counts.begin(), left_counts.end(), 0);
            std::copy(counts.begin(), counts.end(), right_counts.begin());
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const std::uint32_t row = sorted[i];
                ++left_counts[static_cast<std::size_t>(data.labels[row])];
                --right_counts[static_cast<std::size_t>(data.labels[row])];
                const double v = data.features[row * s + static_cast<std::size_t>(f)];
                const double v_next = data.features[sorted[i + 1] * s + static_cast<std::size_t>(f)];
                if (v == v_next) continue;
                const std::size_t nl = i + 1, nr = n - nl;
                if (nl < static_cast<std::size_t>(params.min_leaf) ||
                    nr < static_cast<std::size_t>(params.min_leaf))
                    continue;
                const double impurity =
                    (static_cast<double>(nl) * gini(left_counts, nl) +
                     static_cast<double>(nr) * gini(right_counts, nr)) /
                    static_cast<double>(n);
                if (!has_best || impurity < best.impurity) {
                    best = SplitChoice{f, (v + v_next) / 2.0, impurity};
                    has_best = true;
                }
            }
        }

        if (!has_best) {
            tree.nodes[static_cast<std::size_t>(node_id)].label = majority;
            return node_id;
        }

        const auto mid = std::stable_partition(
            work.begin() + static_cast<std::ptrdiff_t>(begin),
            work.begin() + static_cast<std::ptrdiff_t>(end), [&](std::uint32_t r) {
                return data.features[r * s + static_cast<std::size_t>(best.feature)] <=
                       best.threshold;
            });
        const std::size_t split = static_cast<std::size_t>(mid - work.begin());

        tree.nodes[static_cast<std::size_t>(node_id)].feature = best.feature;
        tree.nodes[static_cast<std::size_t>(node_id)].threshold = best.threshold;
        const int left = self(self, begin, split, depth + 1);
        tree.nodes[static_cast<std::size_t>(node_id)].left = left;
        const int right = self(self, split, end, depth + 1);
        tree.nodes[static_cast<std::size_t>(node_id)].right = right;
        return node_id;
    };

    build(build, 0, work.size(), 0);
    return tree;
}

}  // namespace detail

Forest train_forest(const TrainingSet& data, const ForestParams& params, TrainReport* report) {
    if (data.rows() == 0) fail(Errc::empty_training_data, "train_forest: no training rows");
    if (data.feature_count() == 0) fail(Errc::empty_training_data, "train_forest: no features");
    if (params.m_trees < 1) fail(Errc::bad_config, "train_forest: m_trees must be >= 1");
    if (!(params.sample_fraction > 0.0 && params.sample_fraction <= 1.0)) {
        fail(Errc::bad_config, "train_forest: sample_fraction must lie in (0, 1]");
    }

    int max_label = 0;
    for (int label : data.labels) {
        if (label < 1) fail(Errc::bad_config, "train_forest: labels must be positive codes");
        max_label = std::max(max_label, label);
    }
    const int class_count = params.class_count > 0 ? params.class_count : max_label;
    if (max_label > class_count) {
        fail(Errc::bad_config, "train_forest: label " + std::to_string(max_label) +
                                   " exceeds class_count " + std::to_string(class_count));
    }

    std::vector<bool> present(static_cast<std::size_t>(class_count) + 1, false);
    for (int label : data.labels) present[static_cast<std::size_t>(label)] = true;
    const int classes_present =
        static_cast<int>(std::count(present.begin(), present.end(), true));
    if (report) *report = TrainReport{data.rows(), classes_present, classes_present < 2};

    Forest forest;
    forest.class_count = class_count;
    forest.feature_names = data.feature_names;
    forest.params = params;
    forest.trees.resize(static_cast<std::size_t>(params.m_trees));
    forest.oob_rows.resize(static_cast<std::size_t>(params.m_trees));

    const std::size_t n = data.rows();
    const std::size_t draws = static_cast<std::size_t>(
        std::ceil(params.sample_fraction * static_cast<double>(n)));

    for (int t = 0; t < params.m_trees; ++t) {
        Rng rng(substream_seed(params.seed, kTreeStreamTag, static_cast<std::uint64_t>(t)));
        std::vector<std::uint32_t> bootstrap(draws);
        std::vector<bool> drawn(n, false);
        for (std::size_t d = 0; d < draws; ++d) {
            const std::uint32_t r = static_cast<std::uint32_t>(rng.next_below(n));
            bootstrap[d] = r;
            drawn[r] = true;
        }
        forest.trees[static_cast<std::size_t>(t)] =
            detail::grow_tree(data, bootstrap, params, class_count, rng);
        auto& oob = forest.oob_rows[static_cast<std::size_t>(t)];
        for (std::uint32_t r = 0; r < n; ++r)
            if (!drawn[r]) oob.push_back(r);
    }
    return forest;
}

int VoteVector::argmax() const {
    int best = 1;
    for (int c = 2; c < static_cast<int>(votes.size()); ++c)
        if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)]) best = c;
    return best;
}

VoteVector predict_votes(const Forest& forest, std::span<const double> x) {
    if (x.size() != forest.feature_names.size()) {
        fail(Errc::wrong_arity, "predict_votes: input has " + std::to_string(x.size()) +
                                    " features, forest expects " +
                                    std::to_string(forest.feature_names.size()));
    }
    VoteVector v;
    v.votes.assign(static_cast<std::size_t>(forest.class_count) + 1, 0);
    v.total = static_cast<std::uint32_t>(forest.trees.size());
    for (const DecisionTree& tree : forest.trees)
        ++v.votes[static_cast<std::size_t>(tree.predict(x))];
    return v;
}

int classify(const Forest& forest, std::span<const double> x) {
    return predict_votes(forest, x).argmax();
}

OobReport oob_error(const Forest& forest, const TrainingSet& data) {
    OobReport report;
    const std::size_t n = data.rows();
    std::vector<std::vector<std::uint32_t>> votes_per_row(
        n, std::vector<std::uint32_t>(static_cast<std::size_t>(forest.class_count) + 1, 0));
    std::vector<bool> has_vote(n, false);

    for (std::size_t t = 0; t < forest.trees.size(); ++t) {
        for (std::uint32_t r : forest.oob_rows[t]) {
            if (r >= n) continue;
            const int label = forest.trees[t].predict(data.row(r));
            ++votes_per_row[r][static_cast<std::size_t>(label)];
            has_vote[r] = true;
        }
    }

    std::size_t wrong = 0;
    for (std::size_t r = 0; r < n; ++r) {
        if (!has_vote[r]) {
            ++report.skipped;
            continue;
        }
        int best = 1;
        for (int c = 2; c <= forest.class_count; ++c)
            if (votes_per_row[r][static_cast<std::size_t>(c)] >
                votes_per_row[r][static_cast<std::size_t>(best)])
                best = c;
        ++report.evaluated;
        if (best != data.labels[r]) ++wrong;
    }
    report.error = report.evaluated > 0
                       ? static_cast<double>(wrong) / static_cast<double>(report.evaluated)
                       : 0.0;
    return report;
}

std::vector<double> variable_contribution(const Forest& forest, const TrainingSet& data,
                                          std::uint64_t seed, ContributionMode mode) {
    if (data.rows() == 0) fail(Errc::empty_training_data, "variable_contribution: no rows");
    if (data.feature_count() != forest.feature_names.size()) {
        fail(Errc::wrong_arity, "variable_contribution: data does not match the forest's features");
    }
    const std::size_t s = data.feature_count();
    const double ae_true = misclassification_rate(forest, data);

    std::vector<double> deltas(s, 0.0);
    for (std::size_t f = 0; f < s; ++f) {
        TrainingSet corrupted = data;
        Rng rng(substream_seed(seed, kNoiseStreamTag, f));
        for (std::size_t r = 0; r < corrupted.rows(); ++r)
            corrupted.features[r * s + f] = rng.next_unit();

        double ae = 0.0;
        if (mode == ContributionMode::corrupt_evaluate) {
            ae = misclassification_rate(forest, corrupted);
        } else {
            const Forest retrained = train_forest(corrupted, forest.params);
            ae = misclassification_rate(retrained, data);
        }
        deltas[f] = std::fabs(ae - ae_true);
    }

    const double total = std::accumulate(deltas.begin(), deltas.end(), 0.0);
    if (total <= 0.0) {
        fail(Errc::undefined_contribution,
             "variable_contribution: noise injection changed no prediction; contribution shares "
             "are undefined");
    }
    for (double& d : deltas) d /= total;
    return deltas;
}

}  // namespace landca
