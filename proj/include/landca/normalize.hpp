#pragma once

#include <utility>
#include <vector>

#include "landca/raster.hpp"

namespace landca {

// Clipped-linear rescaling statistics. sigma is the mean absolute deviation,
// not the usual root-mean-square deviation; the clip bounds keep the three-
// sigma band inside the observed data range:
//   x1 = max(mu - 3*sigma, min),  x2 = min(mu + 3*sigma, max).
// Stats computed on a calibration raster are meant to be stored and reapplied
// to later rasters of the same variable so all epochs share one scale.
struct NormalizationStats {
    double mu = 0.0;
    double sigma = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;
};

// Stats over the valid cells of a raster. Requires at least two distinct
// valid values; a constant raster has no usable scale and is rejected
// (Errc::degenerate_range) instead of silently mapping to a flat output.
NormalizationStats sigma_stats(const Raster<double>& values);

// Piecewise map into [0,1]: 0 below x1, 1 above x2, linear in between.
// Nodata cells pass through unchanged.
Raster<double> normalize_with(const Raster<double>& values, const NormalizationStats& stats);

// Convenience: compute stats on `values` and apply them in one call.
std::pair<Raster<double>, NormalizationStats> normalize_sigma(const Raster<double>& values);

// Plain (x - min) / (max - min). Rejects constant input.
std::vector<double> normalize_minmax(const std::vector<double>& xs);

}  // namespace landca
