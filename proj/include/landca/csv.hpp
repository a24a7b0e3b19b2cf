#pragma once

#include <string>
#include <vector>

#include "landca/region.hpp"
#include "landca/sampling.hpp"

namespace landca {

// Comma-separated tables with a mandatory header row. Fields are trimmed and
// must not themselves contain commas; every schema used here is plain
// identifiers and numbers.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const CsvTable& table);

std::string format_double(double v);  // %.17g, the project-wide CSV number format

// Socio-economic table: unit_id, <index name>...
IndexTable read_index_table(const std::string& path);

// Adjacency edge list: unit_a, unit_b
AdjacencyGraph read_adjacency(const std::string& path);

// Training rows: <feature name>..., label
TrainingSet read_training_csv(const std::string& path);
void write_training_csv(const TrainingSet& data, const std::string& path);

}  // namespace landca
