#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "landca/error.hpp"

namespace landca {

// Row-major grid with row 0 at the top (north). origin_x/origin_y locate the
// lower-left corner in world coordinates, matching the ASCII grid header.
// Every raster taking part in one pipeline must share the same geometry;
// cross-raster operations call require_aligned() first.
template <typename T>
struct Raster {
    std::size_t ncols = 0;
    std::size_t nrows = 0;
    double cellsize = 30.0;
    double origin_x = 0.0;
    double origin_y = 0.0;
    T nodata = T{};
    std::vector<T> values;

    Raster() = default;
    Raster(std::size_t cols, std::size_t rows, T fill, T nodata_value)
        : ncols(cols), nrows(rows), nodata(nodata_value), values(cols * rows, fill) {}

    std::size_t size() const { return ncols * nrows; }
    std::size_t index(std::size_t row, std::size_t col) const { return row * ncols + col; }
    std::size_t row_of(std::size_t i) const { return i / ncols; }
    std::size_t col_of(std::size_t i) const { return i % ncols; }

    T& at(std::size_t row, std::size_t col) { return values[index(row, col)]; }
    const T& at(std::size_t row, std::size_t col) const { return values[index(row, col)]; }
    T& operator[](std::size_t i) { return values[i]; }
    const T& operator[](std::size_t i) const { return values[i]; }

    bool is_nodata(std::size_t i) const { return values[i] == nodata; }

    template <typename U>
    bool same_geometry(const Raster<U>& other) const {
        auto near = [](double a, double b) {
            return std::fabs(a - b) <= 1e-9 * std::max({1.0, std::fabs(a), std::fabs(b)});
        };
        return ncols == other.ncols && nrows == other.nrows && near(cellsize, other.cellsize) &&
               near(origin_x, other.origin_x) && near(origin_y, other.origin_y);
    }

    // Same shape/geometry, fresh cell payload.
    template <typename U>
    Raster<U> like(U fill, U nodata_value) const {
        Raster<U> out(ncols, nrows, fill, nodata_value);
        out.cellsize = cellsize;
        out.origin_x = origin_x;
        out.origin_y = origin_y;
        return out;
    }
};

template <typename A, typename B>
void require_aligned(const Raster<A>& a, const Raster<B>& b, const std::string& what) {
    if (!a.same_geometry(b)) {
        fail(Errc::geometry_mismatch,
             what + ": rasters are not aligned (" + std::to_string(a.ncols) + "x" +
                 std::to_string(a.nrows) + " vs " + std::to_string(b.ncols) + "x" +
                 std::to_string(b.nrows) + ")");
    }
}

}  // namespace landca
