#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "landca/landclass.hpp"
#include "landca/raster.hpp"
#include "landca/region.hpp"

namespace landca {

// Self-contained two-region test world with planted, learnable conversion
// rules: the western half grows along a synthetic road network, the eastern
// half toward a population gradient. Used by the test suites and by the
// `synth` subcommand so a pipeline run can be tried without real data.
struct SynthWorldSpec {
    std::size_t ncols = 256;
    std::size_t nrows = 256;
    std::uint64_t seed = 7;
    int growth_rounds = 8;          // planted-growth iterations between the epochs
    std::size_t growth_per_round = 260;  // cells converted per half per round
};

struct SynthWorld {
    Raster<LandClass> land_t0;
    Raster<LandClass> land_t1;
    std::vector<Raster<double>> variables;  // raw (unnormalized) spatial variables
    std::vector<std::string> variable_names;
    Raster<int> unit_raster;
    Raster<int> farmland_flag;
    IndexTable socio;
    AdjacencyGraph adjacency;
};

SynthWorld make_synth_world(const SynthWorldSpec& spec = {});

// Writes the world plus a ready-to-run pipeline config into `dir` and
// returns the config path.
std::string write_synth_world(const SynthWorld& world, const std::string& dir);

}  // namespace landca
