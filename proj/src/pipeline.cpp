#include "landca/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>

#include "landca/ascii_grid.hpp"
#include "landca/csv.hpp"
#include "landca/forest_io.hpp"
#include "landca/normalize.hpp"
#include "landca/parallel.hpp"
#include "landca/render.hpp"
#include "landca/rng.hpp"
#include "landca/sampling.hpp"

namespace landca {

namespace {

constexpr std::uint64_t kTagSample = 0x100001ull;
constexpr std::uint64_t kTagForest = 0x200002ull;
constexpr std::uint64_t kTagContrib = 0x300003ull;
constexpr std::uint64_t kTagSim = 0x400004ull;

struct LoadedInputs {
    Raster<LandClass> t0;
    Raster<LandClass> t1;
    std::vector<Raster<double>> variables;  // normalized
    std::vector<NormalizationStats> stats;
    std::vector<std::string> variable_names;
    Raster<int> units;
    Raster<int> farmland;
    IndexTable socio;
    AdjacencyGraph adjacency;
};

LoadedInputs load_inputs(const PipelineConfig& config) {
    LoadedInputs in;
    in.t0 = load_class_grid(config.land_t0);
    in.t1 = load_class_grid(config.land_t1);
    require_aligned(in.t0, in.t1, "pipeline epochs");

    in.variable_names = config.variable_names;
    if (in.variable_names.empty()) {
        for (const auto& p : config.variable_paths) {
            in.variable_names.push_back(std::filesystem::path(p).stem().string());
        }
    }
    for (std::size_t k = 0; k < config.variable_paths.size(); ++k) {
        Raster<double> raw = load_ascii_grid(config.variable_paths[k]);
        require_aligned(in.t0, raw, "variable " + in.variable_names[k]);
        auto [normalized, stats] = normalize_sigma(raw);
        in.variables.push_back(std::move(normalized));
        in.stats.push_back(stats);
    }

    in.units = load_ascii_grid_int(config.unit_raster);
    require_aligned(in.t0, in.units, "unit raster");
    in.farmland = load_ascii_grid_int(config.farmland_flag);
    require_aligned(in.t0, in.farmland, "farmland flag raster");

    in.socio = read_index_table(config.socio_csv);
    in.adjacency = read_adjacency(config.adjacency_csv);
    return in;
}

// unit_id strings must be the integer codes used by the unit raster.
std::map<int, std::size_t> unit_code_index(const IndexTable& socio) {
    std::map<int, std::size_t> out;
    for (std::size_t u = 0; u < socio.unit_ids.size(); ++u) {
        const std::string& id = socio.unit_ids[u];
        int code = 0;
        const auto res = std::from_chars(id.data(), id.data() + id.size(), code);
        if (res.ec != std::errc{} || res.ptr != id.data() + id.size()) {
            fail(Errc::bad_config, "unit id '" + id + "' is not an integer; unit ids must match "
                                       "the unit raster's codes");
        }
        out[code] = u;
    }
    return out;
}

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double std_of(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double mu = mean_of(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - mu) * (x - mu);
    return std::sqrt(acc / static_cast<double>(xs.size()));
}

void run_region_lane(RegionSummary& lane, const PipelineConfig& config, const LoadedInputs& in,
                     const std::vector<int>& region_of_cell, Forest& forest_out,
                     SampleResult& sample_out) {
    const int region = lane.region_id;
    const std::size_t n = in.t0.size();

    std::vector<std::uint8_t> mask(n, 0);
    for (std::size_t i = 0; i < n; ++i) mask[i] = region_of_cell[i] == region ? 1 : 0;
    lane.cell_count = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));

    Raster<LandClass> masked_t0 = in.t0;
    Raster<LandClass> masked_t1 = in.t1;
    for (std::size_t i = 0; i < n; ++i) {
        if (!mask[i]) {
            masked_t0[i] = LandClass::NoData;
            masked_t1[i] = LandClass::NoData;
        }
    }

    const ChangeMap change = build_change_map(masked_t0, masked_t1);
    lane.observed_growth =
        change.class_counts[static_cast<std::size_t>(code_nonurban_to_urban())] +
        change.class_counts[static_cast<std::size_t>(code_limited_to_urban())];
    lane.markov = estimate_markov_demand(change.class_counts, config.horizon);

    SamplingPolicy policy;
    policy.n_total = config.sample_size;
    policy.phi = config.phi;
    policy.seed = substream_seed(config.seed, kTagSample, static_cast<std::uint64_t>(region));
    sample_out = stratified_sample(change, in.variables, in.variable_names, policy);
    if (sample_out.data.rows() == 0) {
        fail(Errc::empty_training_data,
             "region " + std::to_string(region) + " produced no training rows");
    }

    ForestParams params = config.forest;
    params.class_count = kConversionTypes;
    params.seed = substream_seed(config.seed, kTagForest, static_cast<std::uint64_t>(region));
    forest_out = train_forest(sample_out.data, params, &lane.train_report);
    lane.oob = oob_error(forest_out, sample_out.data);
    lane.contribution = variable_contribution(
        forest_out, sample_out.data,
        substream_seed(config.seed, kTagContrib, static_cast<std::uint64_t>(region)),
        config.contribution_mode);

    // Epoch 0 replays the observed change (demand = observed growth) for
    // validation; later epochs continue the simulated trajectory under the
    // projected demand.
    const int epochs = 1 + config.horizon;
    lane.runs.assign(static_cast<std::size_t>(epochs), {});
    lane.confusion.clear();

    for (int rep = 0; rep < config.repetitions; ++rep) {
        Raster<LandClass> current = in.t0;
        for (int epoch = 0; epoch < epochs; ++epoch) {
            SimulationConfig sim = config.ca;
            sim.demand_cells = epoch == 0
                                   ? lane.observed_growth
                                   : lane.markov.demand[static_cast<std::size_t>(epoch - 1)];
            sim.seed = substream_seed(
                config.seed, kTagSim,
                static_cast<std::uint64_t>(region) * 1024 + static_cast<std::uint64_t>(epoch),
                static_cast<std::uint64_t>(rep));
            RunResult result = run_simulation(current, forest_out, in.variables, sim, 1, &mask);

            EpochRun run;
            run.reason = result.reason;
            run.history = std::move(result.history);
            for (std::size_t i = 0; i < n; ++i) {
                if (current[i] != LandClass::Urban && result.state.grid[i] == LandClass::Urban)
                    run.converted.push_back(static_cast<std::uint32_t>(i));
            }
            current = std::move(result.state.grid);

            if (epoch == 0) {
                Raster<LandClass> masked_sim = masked_t0;
                for (std::uint32_t cell : run.converted) masked_sim[cell] = LandClass::Urban;
                lane.confusion.push_back(change_confusion(masked_t0, masked_t1, masked_sim));
            }
            lane.runs[static_cast<std::size_t>(epoch)].push_back(std::move(run));
        }
    }

    // Per-repetition metrics; denominators can be legitimately zero in
    // regions with no observed change, reported as NaN.
    std::vector<double> foms, producers, users;
    for (const ChangeConfusion& c : lane.confusion) {
        foms.push_back(c.hits + c.misses + c.false_alarms > 0
                           ? figure_of_merit(c)
                           : std::numeric_limits<double>::quiet_NaN());
        producers.push_back(c.hits + c.misses > 0 ? producer_accuracy(c)
                                                  : std::numeric_limits<double>::quiet_NaN());
        users.push_back(c.hits + c.false_alarms > 0 ? user_accuracy(c)
                                                    : std::numeric_limits<double>::quiet_NaN());
    }
    lane.fom_mean = mean_of(foms);
    lane.fom_std = std_of(foms);
    lane.producer_mean = mean_of(producers);
    lane.producer_std = std_of(producers);
    lane.user_mean = mean_of(users);
    lane.user_std = std_of(users);

    // Spread of the validation-epoch urban trajectory across repetitions.
    std::size_t min_len = std::numeric_limits<std::size_t>::max();
    for (const EpochRun& run : lane.runs[0]) min_len = std::min(min_len, run.history.size());
    std::vector<double> rsd;
    for (std::size_t t = 0; t < min_len; ++t) {
        std::vector<double> counts;
        for (const EpochRun& run : lane.runs[0])
            counts.push_back(static_cast<double>(run.history[t].urban_count));
        const double mu = mean_of(counts);
        if (mu > 0) rsd.push_back(std_of(counts) / mu);
    }
    if (!rsd.empty()) {
        lane.urban_rsd_mean = mean_of(rsd);
        lane.urban_rsd_max = *std::max_element(rsd.begin(), rsd.end());
    }
    lane.ok = true;
}

}  // namespace

PipelineReport run_pipeline(const PipelineConfig& config) {
    config.validate();
    const LoadedInputs in = load_inputs(config);
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);
    const auto out_path = [&](const std::string& name) {
        return (fs::path(config.output_dir) / name).string();
    };

    PipelineReport report;
    report.partition = cluster_regions(in.socio, in.adjacency, config.k_clusters);

    // Project unit-level region labels onto cells via the unit raster.
    const std::map<int, std::size_t> unit_index = unit_code_index(in.socio);
    std::vector<int> region_of_cell(in.t0.size(), 0);
    for (std::size_t i = 0; i < in.units.size(); ++i) {
        if (in.units.is_nodata(i)) continue;
        const auto it = unit_index.find(in.units[i]);
        if (it == unit_index.end()) {
            fail(Errc::bad_config, "unit raster code " + std::to_string(in.units[i]) +
                                       " has no row in the socio-economic table");
        }
        region_of_cell[i] = report.partition.region_of[it->second];
    }

    const int n_regions = report.partition.region_count;
    report.regions.resize(static_cast<std::size_t>(n_regions));
    std::vector<Forest> forests(static_cast<std::size_t>(n_regions));
    std::vector<SampleResult> samples(static_cast<std::size_t>(n_regions));
    for (int r = 0; r < n_regions; ++r) {
        report.regions[static_cast<std::size_t>(r)].region_id = r + 1;
        for (std::size_t u = 0; u < report.partition.unit_ids.size(); ++u) {
            if (report.partition.region_of[u] == r + 1)
                report.regions[static_cast<std::size_t>(r)].unit_ids.push_back(
                    report.partition.unit_ids[u]);
        }
    }

    // Region lanes are independent; a failure is recorded on its lane and the
    // other lanes keep going.
    parallel_for(static_cast<std::size_t>(n_regions), config.workers,
                 [&](std::size_t begin, std::size_t end) {
                     for (std::size_t r = begin; r < end; ++r) {
                         RegionSummary& lane = report.regions[r];
                         try {
                             run_region_lane(lane, config, in, region_of_cell, forests[r],
                                             samples[r]);
                         } catch (const std::exception& e) {
                             lane.ok = false;
                             lane.error = e.what();
                         }
                     }
                 });

    // ---- aggregation ----
    const int reps = config.repetitions;
    const int epochs = 1 + config.horizon;

    std::vector<double> national_fom, national_producer, national_user;
    ChangeConfusion national_mean;
    for (int rep = 0; rep < reps; ++rep) {
        ChangeConfusion total;
        bool any = false;
        for (const RegionSummary& lane : report.regions) {
            if (!lane.ok) continue;
            const ChangeConfusion& c = lane.confusion[static_cast<std::size_t>(rep)];
            total.hits += c.hits;
            total.misses += c.misses;
            total.false_alarms += c.false_alarms;
            total.correct_rejections += c.correct_rejections;
            any = true;
        }
        if (!any) continue;
        if (total.hits + total.misses + total.false_alarms > 0) {
            national_fom.push_back(figure_of_merit(total));
            national_producer.push_back(total.hits + total.misses > 0 ? producer_accuracy(total)
                                                                      : 0.0);
            national_user.push_back(total.hits + total.false_alarms > 0 ? user_accuracy(total)
                                                                        : 0.0);
        }
        national_mean.hits += total.hits;
        national_mean.misses += total.misses;
        national_mean.false_alarms += total.false_alarms;
        national_mean.correct_rejections += total.correct_rejections;
    }
    if (reps > 0) {
        national_mean.hits /= static_cast<std::size_t>(reps);
        national_mean.misses /= static_cast<std::size_t>(reps);
        national_mean.false_alarms /= static_cast<std::size_t>(reps);
        national_mean.correct_rejections /= static_cast<std::size_t>(reps);
    }
    report.national_confusion = national_mean;
    report.national_fom_mean = mean_of(national_fom);
    report.national_fom_std = std_of(national_fom);
    report.national_producer_mean = mean_of(national_producer);
    report.national_user_mean = mean_of(national_user);

    // ---- farmland accounting (chained simulated trajectory) ----
    auto farmland_count = [&](const Raster<LandClass>& grid) {
        std::size_t count = 0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (grid[i] == LandClass::NonUrban && !in.farmland.is_nodata(i) && in.farmland[i] != 0)
                ++count;
        return static_cast<double>(count);
    };
    const double area_per_cell = in.t0.cellsize * in.t0.cellsize;
    const double farm_t0 = farmland_count(in.t0);
    const double farm_t1 = farmland_count(in.t1);

    report.farmland_sim.assign(static_cast<std::size_t>(epochs) + 1, 0.0);
    report.farmland_actual.assign(static_cast<std::size_t>(epochs) + 1,
                                  std::numeric_limits<double>::quiet_NaN());
    report.farmland_sim[0] = farm_t0 * area_per_cell;
    report.farmland_actual[0] = farm_t0 * area_per_cell;
    report.farmland_actual[1] = farm_t1 * area_per_cell;
    for (int rep = 0; rep < reps; ++rep) {
        double lost = 0.0;
        for (int epoch = 0; epoch < epochs; ++epoch) {
            for (const RegionSummary& lane : report.regions) {
                if (!lane.ok) continue;
                for (std::uint32_t cell :
                     lane.runs[static_cast<std::size_t>(epoch)][static_cast<std::size_t>(rep)]
                         .converted) {
                    if (in.t0[cell] == LandClass::NonUrban && !in.farmland.is_nodata(cell) &&
                        in.farmland[cell] != 0)
                        lost += 1.0;
                }
            }
            report.farmland_sim[static_cast<std::size_t>(epoch) + 1] +=
                (farm_t0 - lost) * area_per_cell / static_cast<double>(reps);
        }
    }

    // ---- outputs ----
    {
        CsvTable csv;
        csv.header = {"unit_id", "cluster", "region"};
        for (std::size_t u = 0; u < report.partition.unit_ids.size(); ++u) {
            csv.rows.push_back({report.partition.unit_ids[u],
                                std::to_string(report.partition.cluster_of[u]),
                                std::to_string(report.partition.region_of[u])});
        }
        write_csv(out_path("regions.csv"), csv);
    }
    {
        CsvTable csv;
        csv.header = {"variable", "mu", "sigma", "x1", "x2"};
        for (std::size_t k = 0; k < in.stats.size(); ++k) {
            csv.rows.push_back({in.variable_names[k], format_double(in.stats[k].mu),
                                format_double(in.stats[k].sigma), format_double(in.stats[k].x1),
                                format_double(in.stats[k].x2)});
        }
        write_csv(out_path("stats.csv"), csv);
    }
    for (const RegionSummary& lane : report.regions) {
        if (!lane.ok) continue;
        const std::string suffix = "_r" + std::to_string(lane.region_id);
        write_training_csv(samples[static_cast<std::size_t>(lane.region_id - 1)].data,
                           out_path("training" + suffix + ".csv"));
        save_forest(forests[static_cast<std::size_t>(lane.region_id - 1)],
                    out_path("forest" + suffix + ".bin"));
    }
    {
        CsvTable csv;
        csv.header = {"region", "fom", "fom_std", "producer", "producer_std", "user", "user_std",
                      "hits", "misses", "false_alarms"};
        for (const RegionSummary& lane : report.regions) {
            if (!lane.ok) continue;
            double hits = 0, misses = 0, fa = 0;
            for (const ChangeConfusion& c : lane.confusion) {
                hits += static_cast<double>(c.hits);
                misses += static_cast<double>(c.misses);
                fa += static_cast<double>(c.false_alarms);
            }
            const double k = static_cast<double>(lane.confusion.size());
            csv.rows.push_back({std::to_string(lane.region_id), format_double(lane.fom_mean),
                                format_double(lane.fom_std), format_double(lane.producer_mean),
                                format_double(lane.producer_std), format_double(lane.user_mean),
                                format_double(lane.user_std), format_double(hits / k),
                                format_double(misses / k), format_double(fa / k)});
        }
        csv.rows.push_back({"national", format_double(report.national_fom_mean),
                            format_double(report.national_fom_std),
                            format_double(report.national_producer_mean), "",
                            format_double(report.national_user_mean), "",
                            format_double(static_cast<double>(report.national_confusion.hits)),
                            format_double(static_cast<double>(report.national_confusion.misses)),
                            format_double(static_cast<double>(report.national_confusion.false_alarms))});
        write_csv(out_path("metrics.csv"), csv);
    }
    {
        CsvTable csv;
        csv.header = {"region", "feature", "weight"};
        std::vector<double> national(in.variable_names.size(), 0.0);
        double weight_total = 0.0;
        for (const RegionSummary& lane : report.regions) {
            if (!lane.ok) continue;
            for (std::size_t f = 0; f < in.variable_names.size(); ++f) {
                csv.rows.push_back({std::to_string(lane.region_id), in.variable_names[f],
                                    format_double(lane.contribution[f])});
                national[f] += lane.contribution[f] * static_cast<double>(lane.train_report.rows);
            }
            weight_total += static_cast<double>(lane.train_report.rows);
        }
        if (weight_total > 0) {
            for (std::size_t f = 0; f < in.variable_names.size(); ++f) {
                csv.rows.push_back(
                    {"national", in.variable_names[f], format_double(national[f] / weight_total)});
            }
        }
        write_csv(out_path("contribution.csv"), csv);
    }
    {
        CsvTable csv;
        csv.header = {"region", "epoch", "projected_urban", "projected_nonurban",
                      "projected_limited", "demand"};
        for (const RegionSummary& lane : report.regions) {
            if (!lane.ok) continue;
            for (std::size_t e = 0; e < lane.markov.projected.size(); ++e) {
                csv.rows.push_back({std::to_string(lane.region_id), std::to_string(e + 2),
                                    format_double(lane.markov.projected[e][0]),
                                    format_double(lane.markov.projected[e][1]),
                                    format_double(lane.markov.projected[e][2]),
                                    std::to_string(lane.markov.demand[e])});
            }
        }
        write_csv(out_path("demand.csv"), csv);
    }
    {
        CsvTable csv;
        csv.header = {"region", "epoch", "rep", "iteration", "urban_count", "new_cells",
                      "stop_reason"};
        for (const RegionSummary& lane : report.regions) {
            if (!lane.ok) continue;
            for (std::size_t e = 0; e < lane.runs.size(); ++e) {
                for (std::size_t rep = 0; rep < lane.runs[e].size(); ++rep) {
                    const EpochRun& run = lane.runs[e][rep];
                    for (const StepRecord& step : run.history) {
                        csv.rows.push_back({std::to_string(lane.region_id), std::to_string(e + 1),
                                            std::to_string(rep), std::to_string(step.iteration),
                                            std::to_string(step.urban_count),
                                            std::to_string(step.new_cells),
                                            step.iteration == run.history.back().iteration
                                                ? stop_reason_name(run.reason)
                                                : ""});
                    }
                }
            }
        }
        write_csv(out_path("history.csv"), csv);
    }
    {
        CsvTable csv;
        csv.header = {"epoch", "sim_area", "actual_area"};
        for (std::size_t e = 0; e < report.farmland_sim.size(); ++e) {
            const double actual = report.farmland_actual[e];
            csv.rows.push_back({std::to_string(e), format_double(report.farmland_sim[e]),
                                std::isnan(actual) ? "" : format_double(actual)});
        }
        write_csv(out_path("farmland.csv"), csv);
    }

    // Merged epoch rasters (repetition 0) along the chained trajectory.
    {
        Raster<LandClass> merged = in.t0;
        for (int epoch = 0; epoch < epochs; ++epoch) {
            for (const RegionSummary& lane : report.regions) {
                if (!lane.ok || lane.runs.empty()) continue;
                for (std::uint32_t cell : lane.runs[static_cast<std::size_t>(epoch)][0].converted)
                    merged[cell] = LandClass::Urban;
            }
            const std::string base = "sim_epoch" + std::to_string(epoch + 1);
            save_class_grid(merged, out_path(base + ".asc"));
            render_class_map(merged, out_path(base + ".ppm"));
        }
    }

    // ---- run report ----
    {
        std::ofstream out(out_path("report.txt"));
        if (!out) fail(Errc::io_failure, "cannot write report.txt");
        out << "land change pipeline report\n";
        out << "regions: " << n_regions << " from " << report.partition.cluster_count
            << " clusters (pca explained variance " << format_double(report.partition.explained_variance)
            << ")\n";
        for (const RegionSummary& lane : report.regions) {
            out << "region " << lane.region_id << ": units=";
            for (std::size_t u = 0; u < lane.unit_ids.size(); ++u)
                out << (u ? "," : "") << lane.unit_ids[u];
            if (!lane.ok) {
                out << " FAILED: " << lane.error << "\n";
                continue;
            }
            out << " cells=" << lane.cell_count << " training_rows=" << lane.train_report.rows
                << " classes=" << lane.train_report.classes_present
                << (lane.train_report.single_class ? " (single-class, degenerate forest)" : "")
                << "\n";
            out << "  oob_error=" << format_double(lane.oob.error) << " (evaluated "
                << lane.oob.evaluated << ", skipped " << lane.oob.skipped << ")\n";
            out << "  contribution:";
            for (std::size_t f = 0; f < lane.contribution.size(); ++f)
                out << " " << in.variable_names[f] << "=" << format_double(lane.contribution[f]);
            out << "\n";
            out << "  observed_growth=" << lane.observed_growth << " demand:";
            for (std::size_t e = 0; e < lane.markov.demand.size(); ++e)
                out << " epoch" << (e + 2) << "=" << lane.markov.demand[e];
            out << "\n";
            out << "  fom=" << format_double(lane.fom_mean) << " +/- "
                << format_double(lane.fom_std) << " producer=" << format_double(lane.producer_mean)
                << " user=" << format_double(lane.user_mean) << "\n";
            out << "  urban_rsd mean=" << format_double(lane.urban_rsd_mean)
                << " max=" << format_double(lane.urban_rsd_max) << "\n";
            for (std::size_t e = 0; e < lane.runs.size(); ++e) {
                out << "  epoch " << (e + 1) << ": stop=" << stop_reason_name(lane.runs[e][0].reason)
                    << " iterations=" << lane.runs[e][0].history.size() << " converted="
                    << lane.runs[e][0].converted.size() << " (rep 0)\n";
            }
        }
        out << "national: fom=" << format_double(report.national_fom_mean) << " +/- "
            << format_double(report.national_fom_std)
            << " producer=" << format_double(report.national_producer_mean)
            << " user=" << format_double(report.national_user_mean) << "\n";
        const bool partial = std::any_of(report.regions.begin(), report.regions.end(),
                                         [](const RegionSummary& r) { return !r.ok; });
        out << "status: " << (partial ? "partial" : "ok") << "\n";
    }

    report.exit_code = std::any_of(report.regions.begin(), report.regions.end(),
                                   [](const RegionSummary& r) { return !r.ok; })
                           ? 1
                           : 0;
    return report;
}

}  // namespace landca
