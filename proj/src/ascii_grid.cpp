#include "landca/ascii_grid.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace landca {

namespace {

struct GridHeader {
    std::size_t ncols = 0, nrows = 0;
    double xllcorner = 0.0, yllcorner = 0.0, cellsize = 0.0, nodata = 0.0;
};

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

double parse_number(const std::string& token, const std::string& path, int line) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != token.size()) {
        fail(Errc::bad_format, path + ": non-numeric token '" + token + "' at line " +
                                   std::to_string(line));
    }
    return value;
}

GridHeader read_header(std::istream& in, const std::string& path, int& line) {
    static const char* keys[6] = {"ncols", "nrows", "xllcorner", "yllcorner", "cellsize",
                                  "nodata_value"};
    double values[6] = {0, 0, 0, 0, 0, 0};
    std::string text;
    for (int k = 0; k < 6; ++k) {
        if (!std::getline(in, text)) {
            fail(Errc::bad_format, path + ": truncated header, expected key '" + keys[k] +
                                       "' at line " + std::to_string(line + 1));
        }
        ++line;
        std::istringstream fields(text);
        std::string key, value, extra;
        if (!(fields >> key >> value) || (fields >> extra)) {
            fail(Errc::bad_format, path + ": malformed header at line " + std::to_string(line) +
                                       " (expected 'key value')");
        }
        if (lower(key) != keys[k]) {
            fail(Errc::bad_format, path + ": expected header key '" + keys[k] + "' at line " +
                                       std::to_string(line) + ", got '" + key + "'");
        }
        values[k] = parse_number(value, path, line);
    }
    GridHeader h;
    if (values[0] < 1 || values[1] < 1) {
        fail(Errc::bad_format, path + ": ncols/nrows must be positive");
    }
    h.ncols = static_cast<std::size_t>(values[0]);
    h.nrows = static_cast<std::size_t>(values[1]);
    h.xllcorner = values[2];
    h.yllcorner = values[3];
    h.cellsize = values[4];
    h.nodata = values[5];
    return h;
}

template <typename T, typename Parse>
Raster<T> load_grid(const std::string& path, T nodata_cast, Parse parse) {
    std::ifstream in(path);
    if (!in) fail(Errc::io_failure, "cannot open " + path);
    int line = 0;
    const GridHeader h = read_header(in, path, line);

    Raster<T> raster(h.ncols, h.nrows, nodata_cast, nodata_cast);
    raster.cellsize = h.cellsize;
    raster.origin_x = h.xllcorner;
    raster.origin_y = h.yllcorner;
    raster.nodata = parse(h.nodata, path, line);

    std::size_t row = 0;
    std::string text;
    while (std::getline(in, text)) {
        ++line;
        std::istringstream fields(text);
        std::string token;
        std::size_t col = 0;
        while (fields >> token) {
            if (row >= h.nrows) {
                fail(Errc::bad_format, path + ": expected " + std::to_string(h.nrows) +
                                           " data rows but found extra data at line " +
                                           std::to_string(line));
            }
            if (col >= h.ncols) {
                fail(Errc::bad_format, path + ": row at line " + std::to_string(line) +
                                           " has more than " + std::to_string(h.ncols) + " values");
            }
            raster.at(row, col) = parse(parse_number(token, path, line), path, line);
            ++col;
        }
        if (col == 0) continue;  // blank line
        if (col != h.ncols) {
            fail(Errc::bad_format, path + ": row at line " + std::to_string(line) + " has " +
                                       std::to_string(col) + " values, expected " +
                                       std::to_string(h.ncols));
        }
        ++row;
    }
    if (row != h.nrows) {
        fail(Errc::bad_format, path + ": found " + std::to_string(row) + " data rows, expected " +
                                   std::to_string(h.nrows));
    }
    return raster;
}

void write_header(std::ostream& out, std::size_t ncols, std::size_t nrows, double x, double y,
                  double cellsize, const std::string& nodata) {
    char buf[64];
    out << "ncols " << ncols << "\n";
    out << "nrows " << nrows << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out << "xllcorner " << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", y);
    out << "yllcorner " << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", cellsize);
    out << "cellsize " << buf << "\n";
    out << "NODATA_value " << nodata << "\n";
}

}  // namespace

Raster<double> load_ascii_grid(const std::string& path) {
    return load_grid<double>(path, 0.0, [](double v, const std::string&, int) { return v; });
}

Raster<int> load_ascii_grid_int(const std::string& path) {
    return load_grid<int>(path, 0, [](double v, const std::string& p, int line) {
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v) {
            fail(Errc::bad_format, p + ": expected integer value, got non-integer at line " +
                                       std::to_string(line));
        }
        return i;
    });
}

void save_ascii_grid(const Raster<double>& raster, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(Errc::io_failure, "cannot write " + path);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", raster.nodata);
    write_header(out, raster.ncols, raster.nrows, raster.origin_x, raster.origin_y, raster.cellsize,
                 buf);
    for (std::size_t r = 0; r < raster.nrows; ++r) {
        for (std::size_t c = 0; c < raster.ncols; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", raster.at(r, c));
            out << (c ? " " : "") << buf;
        }
        out << "\n";
    }
    if (!out) fail(Errc::io_failure, "write failed for " + path);
}

void save_ascii_grid(const Raster<int>& raster, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(Errc::io_failure, "cannot write " + path);
    write_header(out, raster.ncols, raster.nrows, raster.origin_x, raster.origin_y, raster.cellsize,
                 std::to_string(raster.nodata));
    for (std::size_t r = 0; r < raster.nrows; ++r) {
        for (std::size_t c = 0; c < raster.ncols; ++c) {
            out << (c ? " " : "") << raster.at(r, c);
        }
        out << "\n";
    }
    if (!out) fail(Errc::io_failure, "write failed for " + path);
}

Raster<LandClass> load_class_grid(const std::string& path) {
    const Raster<int> codes = load_ascii_grid_int(path);
    Raster<LandClass> out = codes.like(LandClass::NoData, LandClass::NoData);
    for (std::size_t i = 0; i < codes.size(); ++i) {
        if (codes.is_nodata(i)) continue;
        const int c = codes[i];
        if (c < 1 || c > 3) {
            fail(Errc::bad_format, path + ": land class code " + std::to_string(c) + " at cell (" +
                                       std::to_string(codes.row_of(i)) + "," +
                                       std::to_string(codes.col_of(i)) +
                                       ") outside 1..3");
        }
        out[i] = static_cast<LandClass>(c - 1);
    }
    return out;
}

void save_class_grid(const Raster<LandClass>& raster, const std::string& path) {
    Raster<int> codes = raster.like(-9999, -9999);
    for (std::size_t i = 0; i < raster.size(); ++i) {
        if (raster[i] != LandClass::NoData) codes[i] = land_class_file_code(raster[i]);
    }
    save_ascii_grid(codes, path);
}

}  // namespace landca
