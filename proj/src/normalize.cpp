#include "landca/normalize.hpp"

#include <algorithm>
#include <cmath>

namespace landca {

NormalizationStats sigma_stats(const Raster<double>& values) {
    double sum = 0.0;
    double lo = 0.0, hi = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values.is_nodata(i)) continue;
        const double x = values[i];
        if (n == 0) {
            lo = hi = x;
        } else {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        sum += x;
        ++n;
    }
    if (n < 2 || lo == hi) {
        fail(Errc::degenerate_range,
             "sigma_stats: need at least two distinct valid values (got " + std::to_string(n) +
                 " valid cells); a constant raster cannot be normalized");
    }
    NormalizationStats s;
    s.mu = sum / static_cast<double>(n);
    double dev = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values.is_nodata(i)) continue;
        dev += std::fabs(s.mu - values[i]);
    }
    s.sigma = dev / static_cast<double>(n);
    s.x1 = std::max(s.mu - 3.0 * s.sigma, lo);
    s.x2 = std::min(s.mu + 3.0 * s.sigma, hi);
    if (!(s.x1 < s.x2)) {
        fail(Errc::degenerate_range, "sigma_stats: degenerate clip range [" + std::to_string(s.x1) +
                                         ", " + std::to_string(s.x2) + "]");
    }
    return s;
}

Raster<double> normalize_with(const Raster<double>& values, const NormalizationStats& stats) {
    Raster<double> out = values;
    const double span = stats.x2 - stats.x1;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values.is_nodata(i)) continue;
        const double x = values[i];
        if (x < stats.x1) {
            out[i] = 0.0;
        } else if (x > stats.x2) {
            out[i] = 1.0;
        } else {
            out[i] = (x - stats.x1) / span;
        }
    }
    return out;
}

std::pair<Raster<double>, NormalizationStats> normalize_sigma(const Raster<double>& values) {
    const NormalizationStats stats = sigma_stats(values);
    return {normalize_with(values, stats), stats};
}

std::vector<double> normalize_minmax(const std::vector<double>& xs) {
    if (xs.size() < 2) {
        fail(Errc::degenerate_range, "normalize_minmax: need at least two values");
    }
    const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
    const double lo = *lo_it, hi = *hi_it;
    if (lo == hi) {
        fail(Errc::degenerate_range, "normalize_minmax: constant input (all values " +
                                         std::to_string(lo) + ") has no range");
    }
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (xs[i] - lo) / (hi - lo);
    return out;
}

}  // namespace landca
