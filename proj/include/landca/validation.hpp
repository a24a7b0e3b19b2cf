#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "landca/landclass.hpp"
#include "landca/raster.hpp"

namespace landca {

// Change-detection cross-classification over cells valid in all three
// rasters; "change" means conversion to urban between the two epochs.
struct ChangeConfusion {
    std::size_t hits = 0;                // observed change, simulated change
    std::size_t misses = 0;              // observed change, simulated persistence
    std::size_t false_alarms = 0;        // observed persistence, simulated change
    std::size_t correct_rejections = 0;  // observed persistence, simulated persistence

    std::size_t total() const { return hits + misses + false_alarms + correct_rejections; }
};

ChangeConfusion change_confusion(const Raster<LandClass>& observed_t0,
                                 const Raster<LandClass>& observed_t1,
                                 const Raster<LandClass>& simulated_t1);

// hits / (hits + misses + false_alarms); the headline change-accuracy score.
double figure_of_merit(const ChangeConfusion& c);

double producer_accuracy(const ChangeConfusion& c);  // hits / (hits + misses)
double user_accuracy(const ChangeConfusion& c);      // hits / (hits + false_alarms)

// Farmland area (count * cellsize^2) per epoch. Farmland is the non-urban
// subset flagged by a separate boolean raster, since the three-class scheme
// does not distinguish farmland inside non-urban.
std::vector<double> farmland_series(const std::vector<Raster<LandClass>>& epochs,
                                    const Raster<int>& farmland_flag);

struct SeriesFit {
    double std_dev = 0.0;    // population std of the (sim - actual) residuals
    double r_squared = 0.0;  // 1 - SS_res / SS_tot
};

SeriesFit series_fit(std::span<const double> sim, std::span<const double> actual);

}  // namespace landca
