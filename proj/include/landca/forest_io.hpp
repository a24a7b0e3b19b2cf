#pragma once

#include <iosfwd>
#include <string>

#include "landca/forest.hpp"

namespace landca {

// Versioned little-endian binary forest format ("LCAF"). Byte order is fixed
// in the encoder, so files move between machines; a text dump is available
// for inspection.
void save_forest(const Forest& forest, const std::string& path);
Forest load_forest(const std::string& path);
void dump_forest_text(const Forest& forest, std::ostream& out);

}  // namespace landca
