#pragma once

#include <string>

#include "landca/landclass.hpp"
#include "landca/raster.hpp"

namespace landca {

// ASCII grid files: a six-line header (ncols, nrows, xllcorner, yllcorner,
// cellsize, NODATA_value, in that order) followed by nrows whitespace-
// separated data lines, first line = northernmost row. Numeric rasters are
// written with 17 significant digits so save/load round-trips exactly.
Raster<double> load_ascii_grid(const std::string& path);
Raster<int> load_ascii_grid_int(const std::string& path);
void save_ascii_grid(const Raster<double>& raster, const std::string& path);
void save_ascii_grid(const Raster<int>& raster, const std::string& path);

// Land-class rasters use codes 1=urban, 2=nonurban, 3=limited; NoData cells
// carry the file's NODATA_value.
Raster<LandClass> load_class_grid(const std::string& path);
void save_class_grid(const Raster<LandClass>& raster, const std::string& path);

}  // namespace landca
