// Command-line front end: each subcommand wraps one pipeline stage so stages
// can be rerun independently on their documented file formats.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "landca/ascii_grid.hpp"
#include "landca/ca.hpp"
#include "landca/config.hpp"
#include "landca/csv.hpp"
#include "landca/forest_io.hpp"
#include "landca/normalize.hpp"
#include "landca/pipeline.hpp"
#include "landca/render.hpp"
#include "landca/sampling.hpp"
#include "landca/synthworld.hpp"
#include "landca/validation.hpp"

namespace {

using namespace landca;

std::vector<Raster<double>> load_normalized_variables(const std::vector<std::string>& paths,
                                                      const std::string& stats_csv,
                                                      const std::string& stats_out) {
    std::vector<Raster<double>> rasters;
    std::vector<NormalizationStats> stats;
    if (!stats_csv.empty()) {
        const CsvTable csv = read_csv(stats_csv);
        for (const auto& row : csv.rows) {
            stats.push_back(NormalizationStats{std::stod(row[1]), std::stod(row[2]),
                                               std::stod(row[3]), std::stod(row[4])});
        }
        if (stats.size() != paths.size()) {
            fail(Errc::bad_config, "stats file has " + std::to_string(stats.size()) +
                                       " rows but " + std::to_string(paths.size()) +
                                       " variables were given");
        }
    }
    CsvTable out_csv;
    out_csv.header = {"variable", "mu", "sigma", "x1", "x2"};
    for (std::size_t k = 0; k < paths.size(); ++k) {
        Raster<double> raw = load_ascii_grid(paths[k]);
        NormalizationStats s = stats.empty() ? sigma_stats(raw) : stats[k];
        rasters.push_back(normalize_with(raw, s));
        out_csv.rows.push_back({std::filesystem::path(paths[k]).stem().string(), format_double(s.mu),
                                format_double(s.sigma), format_double(s.x1), format_double(s.x2)});
    }
    if (!stats_out.empty()) write_csv(stats_out, out_csv);
    return rasters;
}

std::vector<std::string> names_from_paths(const std::vector<std::string>& paths) {
    std::vector<std::string> names;
    for (const auto& p : paths) names.push_back(std::filesystem::path(p).stem().string());
    return names;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random-forest cellular automata land change simulator"};
    app.require_subcommand(1);

    // ---- cluster ----
    std::string socio_path, adjacency_path, out_path;
    int k_clusters = 6;
    auto* cluster_cmd = app.add_subcommand("cluster", "group admin units into homogeneous regions");
    cluster_cmd->add_option("--socio", socio_path, "socio-economic CSV (unit_id,<index>...)")->required();
    cluster_cmd->add_option("--adjacency", adjacency_path, "adjacency CSV (unit_a,unit_b)")->required();
    cluster_cmd->add_option("--k", k_clusters, "cluster count");
    cluster_cmd->add_option("--out", out_path, "output regions CSV")->required();

    // ---- sample ----
    std::string t0_path, t1_path, stats_in, stats_out;
    std::vector<std::string> variable_paths;
    std::size_t n_total = 5000;
    double phi = 0.5;
    std::uint64_t seed = 0;
    auto* sample_cmd = app.add_subcommand("sample", "draw a stratified training sample");
    sample_cmd->add_option("--t0", t0_path, "land classes at the first epoch")->required();
    sample_cmd->add_option("--t1", t1_path, "land classes at the second epoch")->required();
    sample_cmd->add_option("--variables", variable_paths, "spatial variable rasters")->required();
    sample_cmd->add_option("--stats", stats_in, "reuse normalization stats CSV");
    sample_cmd->add_option("--stats-out", stats_out, "write normalization stats CSV");
    sample_cmd->add_option("--n", n_total, "sample size");
    sample_cmd->add_option("--phi", phi, "per-line class share cap");
    sample_cmd->add_option("--seed", seed, "RNG seed");
    sample_cmd->add_option("--out", out_path, "output training CSV")->required();

    // ---- train ----
    std::string data_path, dump_path;
    ForestParams params;
    auto* train_cmd = app.add_subcommand("train", "train the forest on a training CSV");
    train_cmd->add_option("--data", data_path, "training CSV")->required();
    train_cmd->add_option("--trees", params.m_trees, "number of trees");
    train_cmd->add_option("--fraction", params.sample_fraction, "bootstrap fraction");
    train_cmd->add_option("--max-depth", params.max_depth, "depth limit");
    train_cmd->add_option("--min-leaf", params.min_leaf, "minimum rows per leaf");
    train_cmd->add_option("--mtry", params.mtry, "features tried per node (0 = sqrt)");
    train_cmd->add_option("--seed", params.seed, "RNG seed");
    train_cmd->add_option("--out", out_path, "output forest file")->required();
    train_cmd->add_option("--dump", dump_path, "also write a text dump");

    // ---- contribute ----
    std::string forest_path;
    bool retrain_mode = false;
    auto* contribute_cmd =
        app.add_subcommand("contribute", "noise-injection variable contributions");
    contribute_cmd->add_option("--forest", forest_path, "trained forest file")->required();
    contribute_cmd->add_option("--data", data_path, "training CSV")->required();
    contribute_cmd->add_option("--seed", seed, "noise seed");
    contribute_cmd->add_flag("--retrain", retrain_mode, "retrain per variable instead of re-evaluating");
    contribute_cmd->add_option("--out", out_path, "output contribution CSV")->required();

    // ---- demand ----
    int horizon = 2;
    auto* demand_cmd = app.add_subcommand("demand", "project urban demand with a class-transition chain");
    demand_cmd->add_option("--t0", t0_path, "land classes at the first epoch")->required();
    demand_cmd->add_option("--t1", t1_path, "land classes at the second epoch")->required();
    demand_cmd->add_option("--horizon", horizon, "epochs to project");
    demand_cmd->add_option("--out", out_path, "output projection CSV")->required();

    // ---- simulate ----
    std::string initial_path, history_path;
    SimulationConfig sim;
    std::size_t demand_cells = 0;
    auto* simulate_cmd = app.add_subcommand("simulate", "run the cellular automaton");
    simulate_cmd->add_option("--initial", initial_path, "starting land classes")->required();
    simulate_cmd->add_option("--forest", forest_path, "trained forest file")->required();
    simulate_cmd->add_option("--variables", variable_paths, "spatial variable rasters")->required();
    simulate_cmd->add_option("--stats", stats_in, "normalization stats CSV from sampling");
    simulate_cmd->add_option("--demand", demand_cells, "new urban cells to produce")->required();
    simulate_cmd->add_option("--pt", sim.p_threshold, "conversion probability threshold");
    simulate_cmd->add_option("--alpha", sim.alpha, "perturbation exponent");
    simulate_cmd->add_option("--window", sim.window, "neighborhood width (odd)");
    simulate_cmd->add_option("--iterations", sim.max_iterations, "iteration cap");
    simulate_cmd->add_option("--min-rate", sim.min_expansion_rate, "minimum expansion rate");
    simulate_cmd->add_option("--min-new", sim.min_new_cells_per_step, "minimum new cells per step");
    simulate_cmd->add_flag("--allow-limited", sim.allow_limited_conversion,
                           "let limited-development cells convert");
    simulate_cmd->add_option("--seed", seed, "RNG seed");
    simulate_cmd->add_option("--out", out_path, "output land class raster")->required();
    simulate_cmd->add_option("--history", history_path, "per-step history CSV");

    // ---- validate ----
    std::string sim_path;
    auto* validate_cmd = app.add_subcommand("validate", "change-detection accuracy metrics");
    validate_cmd->add_option("--t0", t0_path, "observed first epoch")->required();
    validate_cmd->add_option("--t1", t1_path, "observed second epoch")->required();
    validate_cmd->add_option("--sim", sim_path, "simulated second epoch")->required();
    validate_cmd->add_option("--out", out_path, "output metrics CSV")->required();

    // ---- render ----
    std::string input_path, type = "class";
    auto* render_cmd = app.add_subcommand("render", "render a raster to a PPM image");
    render_cmd->add_option("--input", input_path, "raster to render")->required();
    render_cmd->add_option("--type", type, "class|ratio")->check(CLI::IsMember({"class", "ratio"}));
    render_cmd->add_option("--out", out_path, "output PPM path")->required();

    // ---- pipeline ----
    std::string config_path, output_override;
    std::vector<std::string> overrides;
    int workers_override = 0;
    auto* pipeline_cmd = app.add_subcommand("pipeline", "run the full pipeline from a config file");
    pipeline_cmd->add_option("--config", config_path, "pipeline config file")->required();
    pipeline_cmd->add_option("--set", overrides, "override any key as section.key=value");
    pipeline_cmd->add_option("--output", output_override, "override io.output_dir");
    pipeline_cmd->add_option("--workers", workers_override, "override run.workers");

    // ---- synth ----
    std::string synth_dir;
    SynthWorldSpec synth_spec;
    auto* synth_cmd = app.add_subcommand("synth", "generate the synthetic demo world");
    synth_cmd->add_option("--out", synth_dir, "output directory")->required();
    synth_cmd->add_option("--size", synth_spec.ncols, "grid width/height");
    synth_cmd->add_option("--seed", synth_spec.seed, "generator seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cluster_cmd) {
            const IndexTable socio = read_index_table(socio_path);
            const AdjacencyGraph adjacency = read_adjacency(adjacency_path);
            const RegionPartition part = cluster_regions(socio, adjacency, k_clusters);
            CsvTable csv;
            csv.header = {"unit_id", "cluster", "region"};
            for (std::size_t u = 0; u < part.unit_ids.size(); ++u) {
                csv.rows.push_back({part.unit_ids[u], std::to_string(part.cluster_of[u]),
                                    std::to_string(part.region_of[u])});
            }
            write_csv(out_path, csv);
            std::cout << part.region_count << " regions from " << part.cluster_count
                      << " clusters; pca explained variance "
                      << format_double(part.explained_variance) << "\n";
        } else if (*sample_cmd) {
            const Raster<LandClass> t0 = load_class_grid(t0_path);
            const Raster<LandClass> t1 = load_class_grid(t1_path);
            const auto variables = load_normalized_variables(variable_paths, stats_in, stats_out);
            const ChangeMap change = build_change_map(t0, t1);
            SamplingPolicy policy{n_total, phi, seed};
            const SampleResult result =
                stratified_sample(change, variables, names_from_paths(variable_paths), policy);
            write_training_csv(result.data, out_path);
            std::cout << result.data.rows() << " rows written";
            if (result.truncated) std::cout << " (truncated: requested " << result.requested << ")";
            std::cout << "\n";
        } else if (*train_cmd) {
            const TrainingSet data = read_training_csv(data_path);
            params.class_count = kConversionTypes;
            TrainReport report;
            const Forest forest = train_forest(data, params, &report);
            save_forest(forest, out_path);
            const OobReport oob = oob_error(forest, data);
            std::cout << "trained " << forest.trees.size() << " trees on " << report.rows
                      << " rows (" << report.classes_present << " classes"
                      << (report.single_class ? ", degenerate single-class" : "") << "); oob error "
                      << format_double(oob.error) << "\n";
            if (!dump_path.empty()) {
                std::ofstream dump(dump_path);
                dump_forest_text(forest, dump);
            }
        } else if (*contribute_cmd) {
            const Forest forest = load_forest(forest_path);
            const TrainingSet data = read_training_csv(data_path);
            const auto contribution = variable_contribution(
                forest, data, seed,
                retrain_mode ? ContributionMode::retrain : ContributionMode::corrupt_evaluate);
            CsvTable csv;
            csv.header = {"feature", "weight"};
            for (std::size_t f = 0; f < contribution.size(); ++f)
                csv.rows.push_back({forest.feature_names[f], format_double(contribution[f])});
            write_csv(out_path, csv);
        } else if (*demand_cmd) {
            const Raster<LandClass> t0 = load_class_grid(t0_path);
            const Raster<LandClass> t1 = load_class_grid(t1_path);
            const ChangeMap change = build_change_map(t0, t1);
            const MarkovDemand md = estimate_markov_demand(change.class_counts, horizon);
            CsvTable csv;
            csv.header = {"epoch", "projected_urban", "projected_nonurban", "projected_limited",
                          "demand"};
            for (std::size_t e = 0; e < md.projected.size(); ++e) {
                csv.rows.push_back({std::to_string(e + 2), format_double(md.projected[e][0]),
                                    format_double(md.projected[e][1]),
                                    format_double(md.projected[e][2]),
                                    std::to_string(md.demand[e])});
            }
            write_csv(out_path, csv);
            std::cout << "transition matrix (rows from urban/nonurban/limited):\n";
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j)
                    std::cout << (j ? " " : "  ")
                              << format_double(md.transition[static_cast<std::size_t>(i)]
                                                            [static_cast<std::size_t>(j)]);
                std::cout << "\n";
            }
        } else if (*simulate_cmd) {
            const Raster<LandClass> initial = load_class_grid(initial_path);
            const Forest forest = load_forest(forest_path);
            const auto variables = load_normalized_variables(variable_paths, stats_in, "");
            sim.demand_cells = demand_cells;
            sim.seed = seed;
            const RunResult result = run_simulation(initial, forest, variables, sim);
            save_class_grid(result.state.grid, out_path);
            if (!history_path.empty()) {
                CsvTable csv;
                csv.header = {"iteration", "urban_count", "new_cells"};
                for (const StepRecord& step : result.history) {
                    csv.rows.push_back({std::to_string(step.iteration),
                                        std::to_string(step.urban_count),
                                        std::to_string(step.new_cells)});
                }
                write_csv(history_path, csv);
            }
            std::cout << "stopped after " << result.history.size() << " iterations ("
                      << stop_reason_name(result.reason) << "), converted "
                      << result.state.converted_total << " cells\n";
        } else if (*validate_cmd) {
            const Raster<LandClass> t0 = load_class_grid(t0_path);
            const Raster<LandClass> t1 = load_class_grid(t1_path);
            const Raster<LandClass> simulated = load_class_grid(sim_path);
            const ChangeConfusion c = change_confusion(t0, t1, simulated);
            CsvTable csv;
            csv.header = {"region", "fom", "producer", "user", "hits", "misses", "false_alarms"};
            csv.rows.push_back({"all", format_double(figure_of_merit(c)),
                                format_double(producer_accuracy(c)), format_double(user_accuracy(c)),
                                std::to_string(c.hits), std::to_string(c.misses),
                                std::to_string(c.false_alarms)});
            write_csv(out_path, csv);
            std::cout << "fom " << format_double(figure_of_merit(c)) << " hits " << c.hits
                      << " misses " << c.misses << " false alarms " << c.false_alarms << "\n";
        } else if (*render_cmd) {
            if (type == "class") {
                render_class_map(load_class_grid(input_path), out_path);
            } else {
                render_ratio_map(load_ascii_grid(input_path), out_path);
            }
        } else if (*pipeline_cmd) {
            PipelineConfig config = parse_config_file(config_path);
            for (const auto& assignment : overrides) apply_override(config, assignment);
            if (!output_override.empty()) config.output_dir = output_override;
            if (workers_override > 0) config.workers = workers_override;
            const PipelineReport report = run_pipeline(config);
            std::cout << "pipeline finished: " << report.regions.size() << " regions, national fom "
                      << format_double(report.national_fom_mean) << " (outputs in "
                      << config.output_dir << ")\n";
            return report.exit_code;
        } else if (*synth_cmd) {
            synth_spec.nrows = synth_spec.ncols;
            const SynthWorld world = make_synth_world(synth_spec);
            const std::string cfg = write_synth_world(world, synth_dir);
            std::cout << "synthetic world written; config at " << cfg << "\n";
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
