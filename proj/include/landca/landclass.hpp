#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "landca/raster.hpp"

namespace landca {

// The three simulated land states plus the missing-data sentinel. The enum
// order fixes the conversion-code numbering below; do not reorder.
enum class LandClass : std::uint8_t { Urban = 0, NonUrban = 1, Limited = 2, NoData = 3 };

inline const char* land_class_name(LandClass c) {
    switch (c) {
        case LandClass::Urban: return "urban";
        case LandClass::NonUrban: return "nonurban";
        case LandClass::Limited: return "limited";
        default: return "nodata";
    }
}

// Stable integer encoding used by class rasters on disk (NoData -> the file's
// NODATA_value).
inline int land_class_file_code(LandClass c) { return static_cast<int>(c) + 1; }

constexpr int kConversionTypes = 9;

// Directed conversion relation between two non-NoData states.
// code = 3*index(from) + index(to) + 1, a bijection onto 1..9.
struct ConversionType {
    LandClass from;
    LandClass to;
    int code;
};

int conversion_code(LandClass from, LandClass to);
ConversionType decode_conversion(int code);

inline int code_nonurban_to_urban() { return conversion_code(LandClass::NonUrban, LandClass::Urban); }
inline int code_limited_to_urban() { return conversion_code(LandClass::Limited, LandClass::Urban); }

// Reclassification of raw category rasters into the three simulated states.
// The mapping must cover every non-nodata code present in the source.
struct ReclassResult {
    Raster<LandClass> classes;
    std::array<std::size_t, 4> counts{};  // indexed by LandClass value, NoData included
};

ReclassResult reclassify(const Raster<int>& source, const std::map<int, LandClass>& mapping);

}  // namespace landca
