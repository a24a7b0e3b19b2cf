#pragma once

#include <string>
#include <vector>

#include "landca/ca.hpp"
#include "landca/config.hpp"
#include "landca/forest.hpp"
#include "landca/region.hpp"
#include "landca/validation.hpp"

namespace landca {

// One (epoch, repetition) simulation run inside a region lane.
struct EpochRun {
    std::vector<std::uint32_t> converted;  // cells newly urban this epoch
    StopReason reason = StopReason::none;
    std::vector<StepRecord> history;
};

struct RegionSummary {
    int region_id = 0;
    bool ok = false;
    std::string error;  // set when the lane failed

    std::vector<std::string> unit_ids;
    std::size_t cell_count = 0;
    std::size_t observed_growth = 0;  // newly urban cells between the observed epochs

    TrainReport train_report;
    OobReport oob;
    std::vector<double> contribution;
    MarkovDemand markov;

    std::vector<std::vector<EpochRun>> runs;  // [epoch][repetition], epoch 0 = validation epoch
    std::vector<ChangeConfusion> confusion;   // per repetition, over this region's cells

    double fom_mean = 0.0, fom_std = 0.0;
    double producer_mean = 0.0, producer_std = 0.0;
    double user_mean = 0.0, user_std = 0.0;

    // Relative standard deviation of per-step urban counts across
    // repetitions of the validation epoch.
    double urban_rsd_mean = 0.0, urban_rsd_max = 0.0;
};

struct PipelineReport {
    RegionPartition partition;
    std::vector<RegionSummary> regions;
    ChangeConfusion national_confusion;  // summed over regions, repetition means
    double national_fom_mean = 0.0, national_fom_std = 0.0;
    double national_producer_mean = 0.0, national_user_mean = 0.0;
    std::vector<double> farmland_sim;     // mean area per epoch, index 0 = observed start
    std::vector<double> farmland_actual;  // NaN where unobserved
    int exit_code = 0;                    // 0 ok, 1 some lanes failed
};

// Full orchestration: cluster -> per-region (sample, train, contribution,
// demand, simulate x repetitions) -> validate -> aggregate. Region lanes run
// concurrently up to config.workers; a lane failure is recorded and the
// other lanes proceed. All outputs land in config.output_dir.
PipelineReport run_pipeline(const PipelineConfig& config);

}  // namespace landca
