#include "landca/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

namespace landca {

namespace {

void write_ppm(const std::string& path, std::size_t ncols, std::size_t nrows,
               const std::vector<std::array<unsigned char, 3>>& pixels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io_failure, "cannot write " + path);
    out << "P6\n" << ncols << " " << nrows << "\n255\n";
    for (const auto& px : pixels) out.write(reinterpret_cast<const char*>(px.data()), 3);
    if (!out) fail(Errc::io_failure, "write failed for " + path);
}

}  // namespace

void render_class_map(const Raster<LandClass>& raster, const std::string& path) {
    static constexpr std::array<std::array<unsigned char, 3>, 4> palette = {{
        {178, 24, 43},    // urban
        {196, 216, 166},  // nonurban
        {116, 169, 207},  // limited
        {0, 0, 0},        // nodata
    }};
    std::vector<std::array<unsigned char, 3>> pixels(raster.size());
    for (std::size_t i = 0; i < raster.size(); ++i)
        pixels[i] = palette[static_cast<std::size_t>(raster[i])];
    write_ppm(path, raster.ncols, raster.nrows, pixels);
}

void render_ratio_map(const Raster<double>& raster, const std::string& path) {
    std::vector<std::array<unsigned char, 3>> pixels(raster.size());
    for (std::size_t i = 0; i < raster.size(); ++i) {
        if (raster.is_nodata(i) || std::isnan(raster[i])) {
            pixels[i] = {0, 0, 0};
            continue;
        }
        const double v = std::clamp(raster[i], 0.0, 1.0);
        // white (255,255,255) -> dark red (103,0,13)
        pixels[i] = {static_cast<unsigned char>(std::lround(255.0 - v * 152.0)),
                     static_cast<unsigned char>(std::lround(255.0 - v * 255.0)),
                     static_cast<unsigned char>(std::lround(255.0 - v * 242.0))};
    }
    write_ppm(path, raster.ncols, raster.nrows, pixels);
}

}  // namespace landca
