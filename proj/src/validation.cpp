#include "landca/validation.hpp"

#include <cmath>

namespace landca {

ChangeConfusion change_confusion(const Raster<LandClass>& observed_t0,
                                 const Raster<LandClass>& observed_t1,
                                 const Raster<LandClass>& simulated_t1) {
    require_aligned(observed_t0, observed_t1, "change_confusion");
    require_aligned(observed_t0, simulated_t1, "change_confusion");

    ChangeConfusion c;
    for (std::size_t i = 0; i < observed_t0.size(); ++i) {
        if (observed_t0[i] == LandClass::NoData || observed_t1[i] == LandClass::NoData ||
            simulated_t1[i] == LandClass::NoData)
            continue;
        const bool was_urban = observed_t0[i] == LandClass::Urban;
        const bool observed_change = !was_urban && observed_t1[i] == LandClass::Urban;
        const bool simulated_change = !was_urban && simulated_t1[i] == LandClass::Urban;
        if (observed_change && simulated_change) ++c.hits;
        else if (observed_change) ++c.misses;
        else if (simulated_change) ++c.false_alarms;
        else ++c.correct_rejections;
    }
    return c;
}

double figure_of_merit(const ChangeConfusion& c) {
    const std::size_t denom = c.hits + c.misses + c.false_alarms;
    if (denom == 0) {
        fail(Errc::undefined_metric, "figure_of_merit: no change observed or simulated");
    }
    return static_cast<double>(c.hits) / static_cast<double>(denom);
}

double producer_accuracy(const ChangeConfusion& c) {
    const std::size_t denom = c.hits + c.misses;
    if (denom == 0) {
        fail(Errc::undefined_metric, "producer_accuracy: no observed change");
    }
    return static_cast<double>(c.hits) / static_cast<double>(denom);
}

double user_accuracy(const ChangeConfusion& c) {
    const std::size_t denom = c.hits + c.false_alarms;
    if (denom == 0) {
        fail(Errc::undefined_metric, "user_accuracy: no simulated change");
    }
    return static_cast<double>(c.hits) / static_cast<double>(denom);
}

std::vector<double> farmland_series(const std::vector<Raster<LandClass>>& epochs,
                                    const Raster<int>& farmland_flag) {
    if (epochs.empty()) {
        fail(Errc::bad_config, "farmland_series: no epochs given");
    }
    std::vector<double> areas;
    areas.reserve(epochs.size());
    for (const auto& grid : epochs) {
        require_aligned(grid, farmland_flag, "farmland_series");
        std::size_t count = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (grid[i] == LandClass::NonUrban && !farmland_flag.is_nodata(i) && farmland_flag[i] != 0)
                ++count;
        }
        areas.push_back(static_cast<double>(count) * grid.cellsize * grid.cellsize);
    }
    return areas;
}

SeriesFit series_fit(std::span<const double> sim, std::span<const double> actual) {
    if (sim.size() != actual.size() || sim.size() < 2) {
        fail(Errc::bad_config, "series_fit: series must have equal length >= 2");
    }
    const std::size_t n = sim.size();

    double residual_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual_mean += sim[i] - actual[i];
    residual_mean /= static_cast<double>(n);

    double residual_var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = (sim[i] - actual[i]) - residual_mean;
        residual_var += d * d;
    }

    double actual_mean = 0.0;
    for (double a : actual) actual_mean += a;
    actual_mean /= static_cast<double>(n);

    double ss_tot = 0.0, ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ss_tot += (actual[i] - actual_mean) * (actual[i] - actual_mean);
        ss_res += (actual[i] - sim[i]) * (actual[i] - sim[i]);
    }
    if (ss_tot <= 0.0) {
        fail(Errc::undefined_metric, "series_fit: R^2 is undefined for a constant actual series");
    }

    SeriesFit fit;
    fit.std_dev = std::sqrt(residual_var / static_cast<double>(n));
    fit.r_squared = 1.0 - ss_res / ss_tot;
    return fit;
}

}  // namespace landca
