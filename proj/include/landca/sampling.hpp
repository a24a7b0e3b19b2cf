#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "landca/landclass.hpp"
#include "landca/raster.hpp"

namespace landca {

// Per-cell conversion codes between two observed epochs. Code 0 marks cells
// that are NoData in either epoch.
struct ChangeMap {
    Raster<int> codes;
    std::array<std::size_t, kConversionTypes + 1> class_counts{};  // indexed by code, [0] unused
};

ChangeMap build_change_map(const Raster<LandClass>& grid_t0, const Raster<LandClass>& grid_t1);

// Labeled feature rows mined from the change map; features are the normalized
// spatial variables at the sampled cell.
struct TrainingSet {
    std::vector<std::string> feature_names;
    std::vector<double> features;  // rows * feature_count, row-major
    std::vector<int> labels;       // conversion codes 1..9

    std::size_t feature_count() const { return feature_names.size(); }
    std::size_t rows() const { return labels.size(); }
    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(features).subspan(r * feature_count(), feature_count());
    }
};

struct SamplingPolicy {
    std::size_t n_total = 5000;  // requested sample size over the whole map
    double phi = 0.5;            // per-line cap on any one class's share, (1/9, 1]
    std::uint64_t seed = 0;
};

// Per-class sampling shares for one raster line after the cap: any class at
// or above phi is clipped to phi and each other class gains (1 - phi)/8.
// Applied in a single pass over class codes; the result is intentionally not
// renormalized here (callers allocate quotas against the vector's sum).
std::array<double, kConversionTypes + 1> capped_proportions(
    const std::array<std::size_t, kConversionTypes + 1>& line_counts, double phi);

// Largest-remainder allocation of `quota` draws across classes proportional
// to `proportions`; ties go to the lowest class code.
std::array<std::size_t, kConversionTypes + 1> allocate_quota(
    const std::array<double, kConversionTypes + 1>& proportions, std::size_t quota);

struct SampleResult {
    TrainingSet data;
    std::vector<std::size_t> cells;  // flat cell index per row, for auditing
    std::size_t requested = 0;
    bool truncated = false;  // fewer rows than requested were available
};

// Line-by-line stratified draw: each raster row gets an equal share of
// n_total, splits it across conversion types by capped proportion, and draws
// cells uniformly without replacement within each type. Cells are sampleable
// when the change map and every variable are valid there. Deterministic:
// each row uses its own (seed, row) substream.
SampleResult stratified_sample(const ChangeMap& change, const std::vector<Raster<double>>& variables,
                               const std::vector<std::string>& variable_names,
                               const SamplingPolicy& policy);

}  // namespace landca
