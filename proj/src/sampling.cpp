#include "landca/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "landca/rng.hpp"

namespace landca {

namespace {
constexpr std::uint64_t kSampleStreamTag = 0x5A4D504Cull;  // sampling substreams
}

ChangeMap build_change_map(const Raster<LandClass>& grid_t0, const Raster<LandClass>& grid_t1) {
    require_aligned(grid_t0, grid_t1, "build_change_map");
    ChangeMap out;
    out.codes = grid_t0.like(0, 0);
    for (std::size_t i = 0; i < grid_t0.size(); ++i) {
        if (grid_t0[i] == LandClass::NoData || grid_t1[i] == LandClass::NoData) continue;
        const int code = conversion_code(grid_t0[i], grid_t1[i]);
        out.codes[i] = code;
        ++out.class_counts[static_cast<std::size_t>(code)];
    }
    return out;
}

std::array<double, kConversionTypes + 1> capped_proportions(
    const std::array<std::size_t, kConversionTypes + 1>& line_counts, double phi) {
    std::array<double, kConversionTypes + 1> p{};
    std::size_t total = 0;
    for (int c = 1; c <= kConversionTypes; ++c) total += line_counts[c];
    if (total == 0) return p;
    for (int c = 1; c <= kConversionTypes; ++c)
        p[c] = static_cast<double>(line_counts[c]) / static_cast<double>(total);

    // Single pass; mass pushed onto a later class can leave it above phi,
    // which is accepted rather than iterated.
    for (int c = 1; c <= kConversionTypes; ++c) {
        if (p[c] >= phi) {
            p[c] = phi;
            const double bonus = (1.0 - phi) / 8.0;
            for (int j = 1; j <= kConversionTypes; ++j)
                if (j != c) p[j] += bonus;
        }
    }
    return p;
}

std::array<std::size_t, kConversionTypes + 1> allocate_quota(
    const std::array<double, kConversionTypes + 1>& proportions, std::size_t quota) {
    std::array<std::size_t, kConversionTypes + 1> n{};
    double sum = 0.0;
    for (int c = 1; c <= kConversionTypes; ++c) sum += proportions[c];
    if (sum <= 0.0 || quota == 0) return n;

    std::array<double, kConversionTypes + 1> frac{};
    std::size_t assigned = 0;
    for (int c = 1; c <= kConversionTypes; ++c) {
        const double share = proportions[c] / sum * static_cast<double>(quota);
        n[c] = static_cast<std::size_t>(share);
        frac[c] = share - static_cast<double>(n[c]);
        assigned += n[c];
    }
    std::array<int, kConversionTypes> order{};
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return frac[a] > frac[b]; });
    for (std::size_t k = 0; assigned < quota; ++k) {
        ++n[order[k % kConversionTypes]];
        ++assigned;
    }
    return n;
}

SampleResult stratified_sample(const ChangeMap& change, const std::vector<Raster<double>>& variables,
                               const std::vector<std::string>& variable_names,
                               const SamplingPolicy& policy) {
    if (variables.empty() || variables.size() != variable_names.size()) {
        fail(Errc::bad_config, "stratified_sample: variable rasters and names must match and be non-empty");
    }
    for (std::size_t k = 0; k < variables.size(); ++k) {
        require_aligned(change.codes, variables[k], "stratified_sample");
        for (std::size_t i = 0; i < variables[k].size(); ++i) {
            if (variables[k].is_nodata(i)) continue;
            const double v = variables[k][i];
            if (v < 0.0 || v > 1.0) {
                fail(Errc::bad_config, "stratified_sample: variable '" + variable_names[k] +
                                           "' is not normalized (value " + std::to_string(v) +
                                           " at cell " + std::to_string(i) + ")");
            }
        }
    }
    if (!(policy.phi > 1.0 / 9.0 && policy.phi <= 1.0)) {
        fail(Errc::bad_config, "stratified_sample: phi must lie in (1/9, 1], got " +
                                   std::to_string(policy.phi));
    }
    if (policy.n_total == 0) {
        fail(Errc::bad_config, "stratified_sample: requested sample size is zero");
    }

    const std::size_t nrows = change.codes.nrows;
    const std::size_t ncols = change.codes.ncols;
    const std::size_t s = variables.size();

    // Equal per-line quota; the division remainder goes to the first rows so
    // quotas add up to exactly n_total.
    const std::size_t base = policy.n_total / nrows;
    const std::size_t rem = policy.n_total % nrows;

    SampleResult out;
    out.requested = policy.n_total;
    out.data.feature_names = variable_names;

    std::vector<std::size_t> class_cells[kConversionTypes + 1];
    for (std::size_t row = 0; row < nrows; ++row) {
        const std::size_t quota = base + (row < rem ? 1 : 0);
        if (quota == 0) continue;

        std::array<std::size_t, kConversionTypes + 1> counts{};
        for (int c = 0; c <= kConversionTypes; ++c) class_cells[c].clear();
        for (std::size_t col = 0; col < ncols; ++col) {
            const std::size_t i = change.codes.index(row, col);
            const int code = change.codes[i];
            if (code == 0) continue;
            bool usable = true;
            for (std::size_t k = 0; k < s; ++k) {
                if (variables[k].is_nodata(i)) {
                    usable = false;
                    break;
                }
            }
            if (!usable) continue;
            ++counts[static_cast<std::size_t>(code)];
            class_cells[code].push_back(i);
        }

        const auto props = capped_proportions(counts, policy.phi);
        auto wanted = allocate_quota(props, quota);

        Rng rng(substream_seed(policy.seed, kSampleStreamTag, row));
        for (int code = 1; code <= kConversionTypes; ++code) {
            auto& cells = class_cells[code];
            const std::size_t take = std::min(wanted[code], cells.size());
            // Partial Fisher-Yates: the first `take` slots become the draw.
            for (std::size_t j = 0; j < take; ++j) {
                const std::size_t pick = j + rng.next_below(cells.size() - j);
                std::swap(cells[j], cells[pick]);
                const std::size_t cell = cells[j];
                for (std::size_t k = 0; k < s; ++k) out.data.features.push_back(variables[k][cell]);
                out.data.labels.push_back(code);
                out.cells.push_back(cell);
            }
        }
    }

    out.truncated = out.data.rows() < policy.n_total;
    return out;
}

}  // namespace landca
