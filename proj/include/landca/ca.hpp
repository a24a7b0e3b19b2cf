#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "landca/forest.hpp"
#include "landca/landclass.hpp"
#include "landca/raster.hpp"

namespace landca {

struct SimulationConfig {
    double p_threshold = 0.8;  // P above this makes a cell a conversion candidate
    double alpha = 1.0;        // perturbation exponent; 0 pins the factor at exactly 2
    int window = 3;            // odd neighborhood width
    int max_iterations = 100;
    double min_expansion_rate = 0.0;         // stop when the per-step rate drops below this
    std::size_t min_new_cells_per_step = 0;  // stop when a step converts fewer cells
    std::size_t demand_cells = 0;            // total new urban cells this epoch must produce
    std::uint64_t seed = 0;
    bool allow_limited_conversion = false;

    void validate() const;
};

enum class StopReason { none, demand_met, rate_below_min, new_cells_below_min, max_iterations };

const char* stop_reason_name(StopReason r);

struct SimulationState {
    Raster<LandClass> grid;
    int iteration = 0;
    std::vector<std::size_t> urban_count_history;  // index 0 is the initial count
    std::size_t converted_total = 0;
};

SimulationState make_state(const Raster<LandClass>& initial);

// Forest-mined development probability of one cell: urban cells are fixed at
// 1; other classes take the vote fraction of their to-urban conversion type
// (limited-development cells only when conversion there is enabled).
double global_probability(const Forest& forest, LandClass cell_class, std::span<const double> x,
                          bool allow_limited_conversion);

// Urban share of the w-by-w window centered on (row, col), center included.
// Off-grid and NoData positions count as non-urban.
double neighborhood_effect(const Raster<LandClass>& grid, std::size_t row, std::size_t col,
                           int window);

// Stochastic factor 1 + (-ln gamma)^alpha with gamma uniform on (0, 1].
double perturbation(Rng& rng, double alpha);
double perturbation_value(double gamma, double alpha);

// Product of the three components, clamped into [0,1] (the perturbation can
// push it above 1; candidate ranking is unaffected by the clamp).
double conversion_probability(double pg, double omega, double ra);

struct StepOptions {
    int threads = 1;
    // Precomputed global probability per cell (NaN = not convertible). The
    // spatial variables are static over a run, so run_simulation fills this
    // once and reuses it every step.
    const std::vector<double>* pg_cache = nullptr;
    // Evaluation-order permutation over all cells. Purely a verification
    // hook: the synchronous step must produce the same grid under any order.
    const std::vector<std::uint32_t>* eval_order = nullptr;
    // Cells allowed to convert (by flat index); null means the whole grid.
    const std::vector<std::uint8_t>* convertible_mask = nullptr;
};

// One synchronous update. All probabilities are evaluated against the
// time-t grid, candidates above p_threshold convert highest-probability
// first until remaining demand is exhausted. Returns the number of cells
// converted.
std::size_t ca_step(SimulationState& state, const Forest& forest,
                    const std::vector<Raster<double>>& variables, const SimulationConfig& config,
                    const StepOptions& options = {});

// (N(t) - N(t-1)) / N(t-1) over the last two history entries.
double expansion_rate(std::span<const std::size_t> urban_history);

struct StepRecord {
    int iteration = 0;
    std::size_t urban_count = 0;
    std::size_t new_cells = 0;
    double rate = 0.0;  // NaN when the previous count was zero
};

struct RunResult {
    SimulationState state;
    std::vector<StepRecord> history;
    StopReason reason = StopReason::none;
};

// Iterates ca_step until one of the stopping conditions fires, checked in
// the order: demand reached, expansion rate below minimum, per-step new
// cells below minimum, iteration cap.
RunResult run_simulation(const Raster<LandClass>& initial, const Forest& forest,
                         const std::vector<Raster<double>>& variables,
                         const SimulationConfig& config, int threads = 1,
                         const std::vector<std::uint8_t>* convertible_mask = nullptr);

// Class-count transition model estimated from an observed epoch pair,
// projected forward to set per-epoch urban demand.
struct MarkovDemand {
    std::array<std::array<double, 3>, 3> transition{};     // row-stochastic over Urban/NonUrban/Limited
    std::array<double, 3> counts_t0{};
    std::array<double, 3> counts_t1{};
    std::vector<std::array<double, 3>> projected;          // counts_t1 advanced 1..horizon epochs
    std::vector<std::size_t> demand;                       // new urban cells per projected epoch

    // Applies the estimated transition one epoch forward. Multiplication
    // happens before division so feeding back the observed t0 counts
    // reproduces the t1 counts exactly.
    std::array<double, 3> advance(const std::array<double, 3>& counts) const;

    std::array<std::array<double, 3>, 3> cross_tab{};
};

MarkovDemand estimate_markov_demand(const std::array<std::size_t, kConversionTypes + 1>& conversion_counts,
                                    int horizon);

}  // namespace landca
