#include "landca/landclass.hpp"

namespace landca {

int conversion_code(LandClass from, LandClass to) {
    if (from == LandClass::NoData || to == LandClass::NoData) {
        fail(Errc::invalid_class, std::string("conversion_code: NoData is not a convertible class (") +
                                      land_class_name(from) + " -> " + land_class_name(to) + ")");
    }
    return 3 * static_cast<int>(from) + static_cast<int>(to) + 1;
}

ConversionType decode_conversion(int code) {
    if (code < 1 || code > kConversionTypes) {
        fail(Errc::invalid_class, "decode_conversion: code " + std::to_string(code) + " outside 1..9");
    }
    const int z = code - 1;
    return ConversionType{static_cast<LandClass>(z / 3), static_cast<LandClass>(z % 3), code};
}

ReclassResult reclassify(const Raster<int>& source, const std::map<int, LandClass>& mapping) {
    ReclassResult out;
    out.classes = source.like(LandClass::NoData, LandClass::NoData);
    for (std::size_t i = 0; i < source.size(); ++i) {
        LandClass c;
        if (source.is_nodata(i)) {
            c = LandClass::NoData;
        } else {
            const auto it = mapping.find(source[i]);
            if (it == mapping.end()) {
                fail(Errc::unmapped_code,
                     "reclassify: unmapped category code " + std::to_string(source[i]) + " at cell (" +
                         std::to_string(source.row_of(i)) + "," + std::to_string(source.col_of(i)) + ")");
            }
            c = it->second;
        }
        out.classes[i] = c;
        ++out.counts[static_cast<std::size_t>(c)];
    }
    return out;
}

}  // namespace landca
