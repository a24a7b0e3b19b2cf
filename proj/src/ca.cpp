#include "landca/ca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "landca/parallel.hpp"

namespace landca {

namespace {
constexpr std::uint64_t kPerturbStreamTag = 0x52414E44ull;  // per-cell perturbation draws

bool convertible(LandClass c, bool allow_limited) {
    return c == LandClass::NonUrban || (allow_limited && c == LandClass::Limited);
}

// Global probabilities are static over a run; cells that can never convert
// (wrong class, or any variable missing) carry NaN.
std::vector<double> compute_pg_cache(const SimulationState& state, const Forest& forest,
                                     const std::vector<Raster<double>>& variables,
                                     const SimulationConfig& config,
                                     const std::vector<std::uint8_t>* mask, int threads) {
    const std::size_t n = state.grid.size();
    const std::size_t s = variables.size();
    std::vector<double> pg(n, std::numeric_limits<double>::quiet_NaN());
    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
        std::vector<double> x(s);
        for (std::size_t i = begin; i < end; ++i) {
            if (mask && !(*mask)[i]) continue;
            const LandClass c = state.grid[i];
            if (!convertible(c, config.allow_limited_conversion)) continue;
            bool usable = true;
            for (std::size_t k = 0; k < s; ++k) {
                if (variables[k].is_nodata(i)) {
                    usable = false;
                    break;
                }
                x[k] = variables[k][i];
            }
            if (!usable) continue;
            pg[i] = global_probability(forest, c, x, config.allow_limited_conversion);
        }
    });
    return pg;
}

}  // namespace

void SimulationConfig::validate() const {
    if (!(p_threshold > 0.0 && p_threshold <= 1.0)) {
        fail(Errc::bad_config, "p_threshold must lie in (0, 1]");
    }
    if (alpha < 0.0) fail(Errc::bad_config, "alpha must be >= 0");
    if (window < 3 || window % 2 == 0) {
        fail(Errc::bad_config, "window must be odd and >= 3, got " + std::to_string(window));
    }
    if (max_iterations < 1) fail(Errc::bad_config, "max_iterations must be >= 1");
    if (min_expansion_rate < 0.0) fail(Errc::bad_config, "min_expansion_rate must be >= 0");
}

const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::demand_met: return "demand-met";
        case StopReason::rate_below_min: return "rate-below-min";
        case StopReason::new_cells_below_min: return "new-cells-below-min";
        case StopReason::max_iterations: return "max-iterations";
        default: return "none";
    }
}

SimulationState make_state(const Raster<LandClass>& initial) {
    SimulationState state;
    state.grid = initial;
    std::size_t urban = 0;
    for (std::size_t i = 0; i < initial.size(); ++i)
        if (initial[i] == LandClass::Urban) ++urban;
    state.urban_count_history.push_back(urban);
    return state;
}

double global_probability(const Forest& forest, LandClass cell_class, std::span<const double> x,
                          bool allow_limited_conversion) {
    switch (cell_class) {
        case LandClass::Urban:
            return 1.0;
        case LandClass::NonUrban:
            return predict_votes(forest, x).prob(code_nonurban_to_urban());
        case LandClass::Limited:
            if (!allow_limited_conversion) return 0.0;
            return predict_votes(forest, x).prob(code_limited_to_urban());
        default:
            fail(Errc::invalid_class, "global_probability: NoData cells have no development probability");
    }
}

double neighborhood_effect(const Raster<LandClass>& grid, std::size_t row, std::size_t col,
                           int window) {
    const int half = window / 2;
    const int r0 = static_cast<int>(row), c0 = static_cast<int>(col);
    int urban = 0;
    for (int dr = -half; dr <= half; ++dr) {
        const int r = r0 + dr;
        if (r < 0 || r >= static_cast<int>(grid.nrows)) continue;
        for (int dc = -half; dc <= half; ++dc) {
            const int c = c0 + dc;
            if (c < 0 || c >= static_cast<int>(grid.ncols)) continue;
            if (grid.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) == LandClass::Urban)
                ++urban;
        }
    }
    return static_cast<double>(urban) / static_cast<double>(window * window);
}

double perturbation_value(double gamma, double alpha) {
    return 1.0 + std::pow(-std::log(gamma), alpha);
}

double perturbation(Rng& rng, double alpha) {
    return perturbation_value(rng.next_unit_positive(), alpha);
}

double conversion_probability(double pg, double omega, double ra) {
    return std::clamp(pg * omega * ra, 0.0, 1.0);
}

std::size_t ca_step(SimulationState& state, const Forest& forest,
                    const std::vector<Raster<double>>& variables, const SimulationConfig& config,
                    const StepOptions& options) {
    config.validate();
    for (const auto& v : variables) require_aligned(state.grid, v, "ca_step");

    const std::size_t n = state.grid.size();
    std::vector<double> local_pg;
    const std::vector<double>* pg = options.pg_cache;
    if (!pg) {
        local_pg = compute_pg_cache(state, forest, variables, config, options.convertible_mask,
                                    options.threads);
        pg = &local_pg;
    }

    const std::size_t remaining =
        config.demand_cells > state.converted_total ? config.demand_cells - state.converted_total : 0;
    const int iteration = state.iteration + 1;

    // Evaluate every cell against the frozen time-t grid. probability[] is
    // indexed by cell, so the result cannot depend on evaluation order or
    // thread count.
    std::vector<double> probability(n, -1.0);
    auto evaluate_cell = [&](std::size_t i) {
        if (state.grid[i] == LandClass::Urban) return;
        const double g = (*pg)[i];
        if (std::isnan(g) || g <= 0.0) return;
        const double omega =
            neighborhood_effect(state.grid, state.grid.row_of(i), state.grid.col_of(i), config.window);
        Rng cell_rng(substream_seed(config.seed, kPerturbStreamTag,
                                    static_cast<std::uint64_t>(iteration), i));
        const double ra = perturbation(cell_rng, config.alpha);
        probability[i] = conversion_probability(g, omega, ra);
    };

    if (options.eval_order) {
        for (const std::uint32_t i : *options.eval_order) evaluate_cell(i);
    } else {
        parallel_for(n, options.threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) evaluate_cell(i);
        });
    }

    std::vector<std::uint32_t> candidates;
    for (std::size_t i = 0; i < n; ++i)
        if (probability[i] > config.p_threshold) candidates.push_back(static_cast<std::uint32_t>(i));

    if (candidates.size() > remaining) {
        std::sort(candidates.begin(), candidates.end(), [&](std::uint32_t a, std::uint32_t b) {
            return probability[a] > probability[b] || (probability[a] == probability[b] && a < b);
        });
        candidates.resize(remaining);
    }

    for (const std::uint32_t i : candidates) state.grid[i] = LandClass::Urban;
    state.converted_total += candidates.size();
    state.iteration = iteration;
    state.urban_count_history.push_back(state.urban_count_history.back() + candidates.size());
    return candidates.size();
}

double expansion_rate(std::span<const std::size_t> urban_history) {
    if (urban_history.size() < 2) {
        fail(Errc::undefined_rate, "expansion_rate: need at least two history entries");
    }
    const auto prev = urban_history[urban_history.size() - 2];
    const auto curr = urban_history[urban_history.size() - 1];
    if (prev == 0) {
        fail(Errc::undefined_rate, "expansion_rate: previous urban count is zero");
    }
    return (static_cast<double>(curr) - static_cast<double>(prev)) / static_cast<double>(prev);
}

RunResult run_simulation(const Raster<LandClass>& initial, const Forest& forest,
                         const std::vector<Raster<double>>& variables,
                         const SimulationConfig& config, int threads,
                         const std::vector<std::uint8_t>* convertible_mask) {
    config.validate();
    RunResult result;
    result.state = make_state(initial);

    const std::vector<double> pg_cache =
        compute_pg_cache(result.state, forest, variables, config, convertible_mask, threads);
    StepOptions options;
    options.threads = threads;
    options.pg_cache = &pg_cache;
    options.convertible_mask = convertible_mask;

    for (;;) {
        const std::size_t prev_urban = result.state.urban_count_history.back();
        const std::size_t new_cells = ca_step(result.state, forest, variables, config, options);

        StepRecord rec;
        rec.iteration = result.state.iteration;
        rec.urban_count = result.state.urban_count_history.back();
        rec.new_cells = new_cells;
        rec.rate = prev_urban > 0 ? static_cast<double>(new_cells) / static_cast<double>(prev_urban)
                                  : std::numeric_limits<double>::quiet_NaN();
        result.history.push_back(rec);

        if (result.state.converted_total >= config.demand_cells) {
            result.reason = StopReason::demand_met;
            break;
        }
        if (prev_urban > 0 && rec.rate < config.min_expansion_rate) {
            result.reason = StopReason::rate_below_min;
            break;
        }
        if (new_cells < config.min_new_cells_per_step) {
            result.reason = StopReason::new_cells_below_min;
            break;
        }
        if (result.state.iteration >= config.max_iterations) {
            result.reason = StopReason::max_iterations;
            break;
        }
    }
    return result;
}

std::array<double, 3> MarkovDemand::advance(const std::array<double, 3>& counts) const {
    std::array<double, 3> next{};
    for (int i = 0; i < 3; ++i) {
        double row_total = 0.0;
        for (int j = 0; j < 3; ++j) row_total += cross_tab[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (row_total <= 0.0) {
            next[static_cast<std::size_t>(i)] += counts[static_cast<std::size_t>(i)];  // identity row
            continue;
        }
        for (int j = 0; j < 3; ++j) {
            next[static_cast<std::size_t>(j)] +=
                counts[static_cast<std::size_t>(i)] *
                cross_tab[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] / row_total;
        }
    }
    return next;
}

MarkovDemand estimate_markov_demand(
    const std::array<std::size_t, kConversionTypes + 1>& conversion_counts, int horizon) {
    if (horizon < 0) fail(Errc::bad_config, "estimate_markov_demand: horizon must be >= 0");

    MarkovDemand md;
    for (int code = 1; code <= kConversionTypes; ++code) {
        const ConversionType ct = decode_conversion(code);
        md.cross_tab[static_cast<std::size_t>(ct.from)][static_cast<std::size_t>(ct.to)] =
            static_cast<double>(conversion_counts[static_cast<std::size_t>(code)]);
    }
    for (int i = 0; i < 3; ++i) {
        double row_total = 0.0;
        for (int j = 0; j < 3; ++j) {
            row_total += md.cross_tab[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            md.counts_t1[static_cast<std::size_t>(j)] +=
                md.cross_tab[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        md.counts_t0[static_cast<std::size_t>(i)] = row_total;
        for (int j = 0; j < 3; ++j) {
            md.transition[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                row_total > 0.0
                    ? md.cross_tab[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] / row_total
                    : (i == j ? 1.0 : 0.0);
        }
    }

    std::array<double, 3> current = md.counts_t1;
    double prev_urban = current[static_cast<std::size_t>(LandClass::Urban)];
    for (int k = 1; k <= horizon; ++k) {
        current = md.advance(current);
        md.projected.push_back(current);
        const double urban = current[static_cast<std::size_t>(LandClass::Urban)];
        const double growth = urban - prev_urban;
        md.demand.push_back(growth > 0.0 ? static_cast<std::size_t>(growth) : 0);
        prev_urban = urban;
    }
    return md;
}

}  // namespace landca
