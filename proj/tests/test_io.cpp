#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "landca/ascii_grid.hpp"
#include "landca/config.hpp"
#include "landca/csv.hpp"
#include "landca/render.hpp"
#include "landca/rng.hpp"

using namespace landca;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

std::string file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("integer grids round-trip losslessly") {
    Rng rng(5);
    Raster<int> r(7, 5, 0, -9999);
    r.cellsize = 30.0;
    r.origin_x = 1234.5;
    r.origin_y = -77.25;
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = rng.next_below(10) == 0 ? -9999 : static_cast<int>(rng.next_below(100));

    const auto path = temp_file("landca_int.asc");
    save_ascii_grid(r, path.string());
    const Raster<int> back = load_ascii_grid_int(path.string());
    CHECK(back.values == r.values);
    CHECK(back.ncols == r.ncols);
    CHECK(back.nrows == r.nrows);
    CHECK(back.cellsize == r.cellsize);
    CHECK(back.origin_x == r.origin_x);
    CHECK(back.origin_y == r.origin_y);
    CHECK(back.nodata == r.nodata);
}

TEST_CASE("numeric grids round-trip at full precision") {
    Rng rng(6);
    Raster<double> r(6, 4, 0.0, -9999.0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = rng.next_unit() * 1e6 - 5e5;
    const auto path = temp_file("landca_double.asc");
    save_ascii_grid(r, path.string());
    const Raster<double> back = load_ascii_grid(path.string());
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(back[i] == r[i]);
}

TEST_CASE("class grids round-trip through their integer codes") {
    Raster<LandClass> r(4, 2, LandClass::NonUrban, LandClass::NoData);
    r[0] = LandClass::Urban;
    r[1] = LandClass::Limited;
    r[5] = LandClass::NoData;
    const auto path = temp_file("landca_class.asc");
    save_class_grid(r, path.string());
    const Raster<LandClass> back = load_class_grid(path.string());
    CHECK(back.values == r.values);
}

TEST_CASE("malformed grids are reported with their line number") {
    SUBCASE("extra data row") {
        const auto path = temp_file("landca_extra_rows.asc");
        write_text(path,
                   "ncols 3\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 30\nNODATA_value -9999\n"
                   "1 2 3\n4 5 6\n7 8 9\n");
        try {
            load_ascii_grid_int(path.string());
            FAIL("expected bad_format");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::bad_format);
            CHECK(std::string(e.what()).find("line 9") != std::string::npos);
        }
    }
    SUBCASE("short row") {
        const auto path = temp_file("landca_short_row.asc");
        write_text(path,
                   "ncols 3\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 30\nNODATA_value -9999\n"
                   "1 2 3\n4 5\n");
        try {
            load_ascii_grid_int(path.string());
            FAIL("expected bad_format");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("line 8") != std::string::npos);
        }
    }
    SUBCASE("non-numeric token") {
        const auto path = temp_file("landca_token.asc");
        write_text(path,
                   "ncols 2\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 30\nNODATA_value -9999\n"
                   "1 oops\n");
        try {
            load_ascii_grid_int(path.string());
            FAIL("expected bad_format");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("oops") != std::string::npos);
            CHECK(std::string(e.what()).find("line 7") != std::string::npos);
        }
    }
    SUBCASE("header keys out of order") {
        const auto path = temp_file("landca_header.asc");
        write_text(path, "nrows 2\nncols 3\nxllcorner 0\nyllcorner 0\ncellsize 30\nNODATA_value 0\n");
        CHECK_THROWS_AS(load_ascii_grid_int(path.string()), Error);
    }
    SUBCASE("missing rows") {
        const auto path = temp_file("landca_missing.asc");
        write_text(path,
                   "ncols 3\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 30\nNODATA_value -9999\n"
                   "1 2 3\n");
        CHECK_THROWS_AS(load_ascii_grid_int(path.string()), Error);
    }
}

TEST_CASE("training CSVs round-trip") {
    TrainingSet data;
    data.feature_names = {"a", "b"};
    Rng rng(9);
    for (int r = 0; r < 25; ++r) {
        data.features.push_back(rng.next_unit());
        data.features.push_back(rng.next_unit());
        data.labels.push_back(1 + static_cast<int>(rng.next_below(9)));
    }
    const auto path = temp_file("landca_training.csv");
    write_training_csv(data, path.string());
    const TrainingSet back = read_training_csv(path.string());
    CHECK(back.feature_names == data.feature_names);
    CHECK(back.labels == data.labels);
    CHECK(back.features == data.features);
}

TEST_CASE("index tables reject missing values") {
    const auto path = temp_file("landca_socio.csv");
    write_text(path, "unit_id,gdp,pop\nu1,1.5,2.5\nu2,2.5,\nu3,1,2\n");
    CHECK_THROWS_AS(read_index_table(path.string()), Error);
}

TEST_CASE("config files parse with sections, comments and overrides") {
    const auto path = temp_file("landca_config.cfg");
    write_text(path,
               "# comment\n[io]\nland_t0 = a.asc\nland_t1 = b.asc\n"
               "variables = v1.asc, v2.asc\nunit_raster = u.asc\n"
               "socio_csv = s.csv\nadjacency_csv = adj.csv\nfarmland_flag = f.asc\n"
               "output_dir = out\n\n[cluster]\nk = 4 ; trailing comment\n"
               "[forest]\ntrees = 33\n[ca]\nalpha = 0.5\n[run]\nseed = 9\nworkers = 3\n");
    PipelineConfig config = parse_config_file(path.string());
    CHECK(config.land_t0 == "a.asc");
    CHECK(config.variable_paths.size() == 2);
    CHECK(config.k_clusters == 4);
    CHECK(config.forest.m_trees == 33);
    CHECK(config.ca.alpha == 0.5);
    CHECK(config.seed == 9);
    CHECK(config.workers == 3);

    apply_override(config, "forest.trees=55");
    CHECK(config.forest.m_trees == 55);
    apply_override(config, "ca.p_threshold = 0.7");
    CHECK(config.ca.p_threshold == 0.7);
    CHECK_THROWS_AS(apply_override(config, "forest.typo=1"), Error);
    CHECK_THROWS_AS(apply_override(config, "nonsense"), Error);
}

TEST_CASE("defaults match the documented experiment configuration") {
    PipelineConfig config;
    CHECK(config.forest.m_trees == 80);
    CHECK(config.forest.sample_fraction == 0.60);
    CHECK(config.ca.max_iterations == 100);
    CHECK(config.ca.window == 3);
    CHECK(config.k_clusters == 6);
    CHECK(config.phi == 0.5);
    CHECK(config.repetitions == 10);
}

TEST_CASE("config validation catches missing inputs and bad ranges") {
    PipelineConfig config;
    CHECK_THROWS_AS(config.validate(), Error);
    config.land_t0 = "a";
    config.land_t1 = "b";
    config.variable_paths = {"v"};
    config.unit_raster = "u";
    config.socio_csv = "s";
    config.adjacency_csv = "adj";
    config.farmland_flag = "f";
    config.phi = 0.05;
    CHECK_THROWS_AS(config.validate(), Error);
    config.phi = 0.5;
    config.validate();
}

TEST_CASE("rendering is deterministic with the documented palette") {
    Raster<LandClass> single(1, 1, LandClass::Urban, LandClass::NoData);
    const auto p1 = temp_file("landca_px.ppm");
    render_class_map(single, p1.string());
    const std::string bytes = file_bytes(p1.string());
    // P6 header for a 1x1 image plus the urban color (178, 24, 43)
    CHECK(bytes == std::string("P6\n1 1\n255\n") + '\xb2' + '\x18' + '\x2b');

    Raster<LandClass> board(8, 8, LandClass::NonUrban, LandClass::NoData);
    for (std::size_t i = 0; i < board.size(); ++i) {
        if (i % 3 == 0) board[i] = LandClass::Urban;
        if (i % 3 == 1) board[i] = LandClass::Limited;
    }
    const auto p2 = temp_file("landca_board.ppm");
    const auto p3 = temp_file("landca_board2.ppm");
    render_class_map(board, p2.string());
    render_class_map(board, p3.string());
    const std::string b2 = file_bytes(p2.string());
    CHECK(b2 == file_bytes(p3.string()));
    CHECK(b2.find('\xb2') != std::string::npos);  // urban red present
    CHECK(b2.find('\xd8') != std::string::npos);  // nonurban green present

    Raster<double> ratio(4, 1, 0.0, -9999.0);
    ratio[0] = 0.0;
    ratio[1] = 0.5;
    ratio[2] = 1.0;
    ratio[3] = -9999.0;
    const auto p4 = temp_file("landca_ratio.ppm");
    render_ratio_map(ratio, p4.string());
    const std::string b4 = file_bytes(p4.string());
    CHECK(b4.substr(0, 10) == "P6\n4 1\n255");
}

}  // TEST_SUITE
