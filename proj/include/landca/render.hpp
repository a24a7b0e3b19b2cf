#pragma once

#include <string>

#include "landca/landclass.hpp"
#include "landca/raster.hpp"

namespace landca {

// Binary PPM (P6) writers with fixed palettes, so identical rasters always
// produce byte-identical images.
//
// Class palette: urban (178,24,43), nonurban (196,216,166), limited
// (116,169,207), nodata (0,0,0).
void render_class_map(const Raster<LandClass>& raster, const std::string& path);

// Ratio palette: values clamped to [0,1] ramp linearly from white to dark
// red; nodata cells are black.
void render_ratio_map(const Raster<double>& raster, const std::string& path);

}  // namespace landca
