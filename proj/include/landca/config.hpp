#pragma once

#include <string>
#include <vector>

#include "landca/ca.hpp"
#include "landca/forest.hpp"

namespace landca {

// Everything a pipeline run needs, gathered from one config file so a run is
// reproducible from a single artifact. Grammar: '[section]' blocks holding
// 'key = value' lines; '#' or ';' start a comment. Any key can be overridden
// from the command line as --set section.key=value.
struct PipelineConfig {
    // [io]
    std::string land_t0;
    std::string land_t1;
    std::vector<std::string> variable_paths;
    std::vector<std::string> variable_names;
    std::string unit_raster;
    std::string socio_csv;
    std::string adjacency_csv;
    std::string farmland_flag;
    std::string output_dir = "out";

    // [cluster]
    int k_clusters = 6;

    // [sampling]
    std::size_t sample_size = 5000;  // per region
    double phi = 0.5;

    // [forest]
    ForestParams forest;  // trees=80, fraction=0.60 by default
    ContributionMode contribution_mode = ContributionMode::corrupt_evaluate;

    // [ca] (demand_cells and seed are filled per region/repetition)
    SimulationConfig ca;

    // [run]
    std::uint64_t seed = 42;
    int repetitions = 10;
    int horizon = 2;  // projected epochs beyond the observed pair
    int workers = 1;

    void validate() const;
};

PipelineConfig parse_config_file(const std::string& path);

// Applies one 'section.key=value' override; unknown keys are rejected.
void apply_override(PipelineConfig& config, const std::string& assignment);

}  // namespace landca
