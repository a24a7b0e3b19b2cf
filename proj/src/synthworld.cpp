#include "landca/synthworld.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "landca/ascii_grid.hpp"
#include "landca/csv.hpp"
#include "landca/rng.hpp"

namespace landca {

namespace {

double dist_to_segments(double x, double y, const std::vector<std::array<double, 4>>& segments) {
    double best = 1e18;
    for (const auto& s : segments) {
        const double vx = s[2] - s[0], vy = s[3] - s[1];
        const double wx = x - s[0], wy = y - s[1];
        const double len2 = vx * vx + vy * vy;
        const double t = len2 > 0 ? std::clamp((wx * vx + wy * vy) / len2, 0.0, 1.0) : 0.0;
        const double dx = x - (s[0] + t * vx), dy = y - (s[1] + t * vy);
        best = std::min(best, std::sqrt(dx * dx + dy * dy));
    }
    return best;
}

}  // namespace

SynthWorld make_synth_world(const SynthWorldSpec& spec) {
    const std::size_t w = spec.ncols, h = spec.nrows;
    SynthWorld world;
    Rng rng(substream_seed(spec.seed, 0x53594E54ull));

    auto blank_double = [&](double nodata) {
        Raster<double> r(w, h, 0.0, nodata);
        r.cellsize = 30.0;
        return r;
    };

    // Roads: a western grid of streets plus one eastern trunk line.
    const double fw = static_cast<double>(w), fh = static_cast<double>(h);
    const std::vector<std::array<double, 4>> roads = {
        {fw * 0.25, 0.0, fw * 0.25, fh},          // western north-south street
        {0.0, fh * 0.30, fw * 0.5, fh * 0.30},    // western east-west street
        {0.0, fh * 0.70, fw * 0.5, fh * 0.70},    // second western street
        {fw * 0.75, 0.0, fw * 0.75, fh},          // eastern trunk road
    };

    Raster<double> road_dist = blank_double(-9999.0);
    Raster<double> pop = blank_double(-9999.0);
    Raster<double> slope = blank_double(-9999.0);
    Raster<double> scatter = blank_double(-9999.0);

    // Population: gaussian bumps around the eastern cities, weak in the west.
    const std::vector<std::array<double, 3>> pop_centers = {
        {fw * 0.75, fh * 0.25, 30.0},
        {fw * 0.75, fh * 0.75, 26.0},
        {fw * 0.20, fh * 0.30, 14.0},
    };

    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            const double x = static_cast<double>(c), y = static_cast<double>(r);
            const std::size_t i = road_dist.index(r, c);
            road_dist[i] = dist_to_segments(x, y, roads);
            double density = 0.0;
            for (const auto& p : pop_centers) {
                const double dx = x - p[0], dy = y - p[1];
                density += 1000.0 * std::exp(-(dx * dx + dy * dy) / (2.0 * p[2] * p[2]));
            }
            pop[i] = density + 5.0 * rng.next_unit();
            slope[i] = 10.0 + 8.0 * std::sin(x * 0.05) * std::cos(y * 0.07) + rng.next_unit();
            scatter[i] = rng.next_unit() * 100.0;
        }
    }

    // Land cover at t0: urban seeds at the road/population foci, one limited
    // lake, everything else non-urban.
    world.land_t0 = Raster<LandClass>(w, h, LandClass::NonUrban, LandClass::NoData);
    world.land_t0.cellsize = 30.0;
    auto seed_urban = [&](double cx, double cy, double radius) {
        for (std::size_t r = 0; r < h; ++r)
            for (std::size_t c = 0; c < w; ++c) {
                const double dx = static_cast<double>(c) - cx, dy = static_cast<double>(r) - cy;
                if (dx * dx + dy * dy <= radius * radius)
                    world.land_t0.at(r, c) = LandClass::Urban;
            }
    };
    seed_urban(fw * 0.25, fh * 0.30, 6.0);
    seed_urban(fw * 0.25, fh * 0.70, 5.0);
    seed_urban(fw * 0.75, fh * 0.25, 7.0);
    seed_urban(fw * 0.75, fh * 0.75, 6.0);

    // central lake, scaled to the grid so it never swallows the city seeds
    const double lake_rx = fw * 0.07, lake_ry = fh * 0.20;
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            const double dx = (static_cast<double>(c) - fw * 0.5) / lake_rx;
            const double dy = (static_cast<double>(r) - fh * 0.5) / lake_ry;
            if (dx * dx + dy * dy <= 1.0) world.land_t0.at(r, c) = LandClass::Limited;
        }
    }

    // Planted growth: western cells follow the road network, eastern cells
    // the population surface; both also need an urban neighbor, so growth
    // stays compact the way the simulator expects.
    world.land_t1 = world.land_t0;
    const std::size_t half_col = w / 2;
    for (int round = 0; round < spec.growth_rounds; ++round) {
        struct Scored {
            double score;
            std::uint32_t cell;
        };
        std::vector<Scored> west, east;
        for (std::size_t r = 0; r < h; ++r) {
            for (std::size_t c = 0; c < w; ++c) {
                const std::size_t i = world.land_t1.index(r, c);
                if (world.land_t1[i] != LandClass::NonUrban) continue;
                bool near_urban = false;
                for (int dr = -1; dr <= 1 && !near_urban; ++dr)
                    for (int dc = -1; dc <= 1 && !near_urban; ++dc) {
                        const int rr = static_cast<int>(r) + dr, cc = static_cast<int>(c) + dc;
                        if (rr < 0 || cc < 0 || rr >= static_cast<int>(h) || cc >= static_cast<int>(w))
                            continue;
                        if (world.land_t1.at(static_cast<std::size_t>(rr),
                                             static_cast<std::size_t>(cc)) == LandClass::Urban)
                            near_urban = true;
                    }
                if (!near_urban) continue;
                const double jitter = 1e-4 * rng.next_unit();
                if (c < half_col) {
                    west.push_back(Scored{-road_dist[i] + jitter, static_cast<std::uint32_t>(i)});
                } else {
                    east.push_back(Scored{pop[i] + jitter, static_cast<std::uint32_t>(i)});
                }
            }
        }
        auto grow = [&](std::vector<Scored>& side) {
            std::sort(side.begin(), side.end(), [](const Scored& a, const Scored& b) {
                return a.score > b.score || (a.score == b.score && a.cell < b.cell);
            });
            const std::size_t take = std::min(spec.growth_per_round, side.size());
            for (std::size_t k = 0; k < take; ++k) world.land_t1[side[k].cell] = LandClass::Urban;
        };
        grow(west);
        grow(east);
    }

    world.variables = {road_dist, pop, slope, scatter};
    world.variable_names = {"road_dist", "pop_density", "slope", "scatter"};

    // Twelve admin units in a 4x3 block grid; the west/east halves form two
    // socio-economic clusters and are internally contiguous.
    world.unit_raster = Raster<int>(w, h, 0, -9999);
    world.unit_raster.cellsize = 30.0;
    const std::size_t block_w = (w + 3) / 4, block_h = (h + 2) / 3;
    for (std::size_t r = 0; r < h; ++r)
        for (std::size_t c = 0; c < w; ++c) {
            const std::size_t bx = std::min<std::size_t>(c / block_w, 3);
            const std::size_t by = std::min<std::size_t>(r / block_h, 2);
            world.unit_raster.at(r, c) = static_cast<int>(by * 4 + bx + 1);
        }

    world.socio.index_names = {"gdp", "gdp_growth", "gdp_per_capita", "industry_share",
                               "service_share", "population"};
    world.socio.values = Matrix(12, 6);
    for (int u = 0; u < 12; ++u) {
        world.socio.unit_ids.push_back(std::to_string(u + 1));
        const bool western = (u % 4) < 2;
        for (int j = 0; j < 6; ++j) {
            const double base = western ? 10.0 + 3.0 * j : 28.0 - 3.0 * j;
            world.socio.values.at(static_cast<std::size_t>(u), static_cast<std::size_t>(j)) =
                base + 0.4 * rng.next_unit();
        }
    }
    for (int by = 0; by < 3; ++by) {
        for (int bx = 0; bx < 4; ++bx) {
            const int u = by * 4 + bx + 1;
            if (bx + 1 < 4 && (bx + 1 != 2))  // east-west edges, none across the half boundary
                world.adjacency.edges.emplace_back(std::to_string(u), std::to_string(u + 1));
            if (by + 1 < 3)
                world.adjacency.edges.emplace_back(std::to_string(u), std::to_string(u + 4));
        }
    }

    // Farmland: the flagged subset of non-urban land, concentrated in the
    // fertile southern two thirds.
    world.farmland_flag = Raster<int>(w, h, 0, -9999);
    world.farmland_flag.cellsize = 30.0;
    for (std::size_t r = h / 3; r < h; ++r)
        for (std::size_t c = 0; c < w; ++c)
            if (world.land_t0.at(r, c) == LandClass::NonUrban) world.farmland_flag.at(r, c) = 1;

    return world;
}

std::string write_synth_world(const SynthWorld& world, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const auto path = [&](const std::string& name) { return (fs::path(dir) / name).string(); };

    save_class_grid(world.land_t0, path("land_t0.asc"));
    save_class_grid(world.land_t1, path("land_t1.asc"));
    for (std::size_t k = 0; k < world.variables.size(); ++k)
        save_ascii_grid(world.variables[k], path(world.variable_names[k] + ".asc"));
    save_ascii_grid(world.unit_raster, path("units.asc"));
    save_ascii_grid(world.farmland_flag, path("farmland.asc"));

    CsvTable socio;
    socio.header.push_back("unit_id");
    for (const auto& n : world.socio.index_names) socio.header.push_back(n);
    for (std::size_t u = 0; u < world.socio.unit_ids.size(); ++u) {
        std::vector<std::string> row{world.socio.unit_ids[u]};
        for (std::size_t j = 0; j < world.socio.index_names.size(); ++j)
            row.push_back(format_double(world.socio.values.at(u, j)));
        socio.rows.push_back(std::move(row));
    }
    write_csv(path("socio.csv"), socio);

    CsvTable adj;
    adj.header = {"unit_a", "unit_b"};
    for (const auto& [a, b] : world.adjacency.edges) adj.rows.push_back({a, b});
    write_csv(path("adjacency.csv"), adj);

    const std::string config_path = path("world.cfg");
    std::ofstream cfg(config_path);
    if (!cfg) fail(Errc::io_failure, "cannot write " + config_path);
    cfg << "[io]\n";
    cfg << "land_t0 = " << path("land_t0.asc") << "\n";
    cfg << "land_t1 = " << path("land_t1.asc") << "\n";
    cfg << "variables = ";
    for (std::size_t k = 0; k < world.variable_names.size(); ++k)
        cfg << (k ? ", " : "") << path(world.variable_names[k] + ".asc");
    cfg << "\n";
    cfg << "variable_names = ";
    for (std::size_t k = 0; k < world.variable_names.size(); ++k)
        cfg << (k ? ", " : "") << world.variable_names[k];
    cfg << "\n";
    cfg << "unit_raster = " << path("units.asc") << "\n";
    cfg << "socio_csv = " << path("socio.csv") << "\n";
    cfg << "adjacency_csv = " << path("adjacency.csv") << "\n";
    cfg << "farmland_flag = " << path("farmland.asc") << "\n";
    cfg << "output_dir = " << path("out") << "\n\n";
    cfg << "[cluster]\nk = 2\n\n";
    cfg << "[sampling]\nn_total = 4000\nphi = 0.5\n\n";
    cfg << "[forest]\ntrees = 80\nsample_fraction = 0.6\n\n";
    cfg << "[ca]\np_threshold = 0.3\nalpha = 1\nwindow = 3\nmax_iterations = 100\n\n";
    cfg << "[run]\nseed = 42\nrepetitions = 10\nhorizon = 2\nworkers = 2\n";
    if (!cfg) fail(Errc::io_failure, "write failed for " + config_path);
    return config_path;
}

}  // namespace landca
