#include "landca/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace landca {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& text) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(text);
    while (std::getline(in, field, ',')) out.push_back(trim(field));
    if (!text.empty() && text.back() == ',') out.push_back("");
    return out;
}

double parse_field(const std::string& field, const std::string& path, std::size_t line) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (field.empty() || used != field.size()) {
        fail(Errc::bad_format, path + ": expected a number, got '" + field + "' at line " +
                                   std::to_string(line));
    }
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::io_failure, "cannot open " + path);
    CsvTable table;
    std::string text;
    bool first = true;
    while (std::getline(in, text)) {
        if (trim(text).empty()) continue;
        auto fields = split_fields(text);
        if (first) {
            table.header = std::move(fields);
            first = false;
        } else {
            table.rows.push_back(std::move(fields));
        }
    }
    if (first) fail(Errc::bad_format, path + ": empty CSV (missing header row)");
    return table;
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path);
    if (!out) fail(Errc::io_failure, "cannot write " + path);
    auto write_row = [&out](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    };
    write_row(table.header);
    for (const auto& row : table.rows) write_row(row);
    if (!out) fail(Errc::io_failure, "write failed for " + path);
}

IndexTable read_index_table(const std::string& path) {
    const CsvTable csv = read_csv(path);
    if (csv.header.size() < 3 || csv.header[0] != "unit_id") {
        fail(Errc::bad_format, path + ": expected header 'unit_id,<index>,<index>,...'");
    }
    IndexTable table;
    table.index_names.assign(csv.header.begin() + 1, csv.header.end());
    table.values = Matrix(csv.rows.size(), table.index_names.size());
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        if (row.size() != csv.header.size()) {
            fail(Errc::bad_format, path + ": row " + std::to_string(r + 2) + " has " +
                                       std::to_string(row.size()) + " fields, expected " +
                                       std::to_string(csv.header.size()) +
                                       " (missing values are rejected)");
        }
        table.unit_ids.push_back(row[0]);
        for (std::size_t c = 1; c < row.size(); ++c) {
            table.values.at(r, c - 1) = parse_field(row[c], path, r + 2);
        }
    }
    validate_index_table(table);
    return table;
}

AdjacencyGraph read_adjacency(const std::string& path) {
    const CsvTable csv = read_csv(path);
    if (csv.header.size() != 2 || csv.header[0] != "unit_a" || csv.header[1] != "unit_b") {
        fail(Errc::bad_format, path + ": expected header 'unit_a,unit_b'");
    }
    AdjacencyGraph graph;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        if (row.size() != 2 || row[0].empty() || row[1].empty()) {
            fail(Errc::bad_format, path + ": malformed edge at line " + std::to_string(r + 2));
        }
        graph.edges.emplace_back(row[0], row[1]);
    }
    return graph;
}

TrainingSet read_training_csv(const std::string& path) {
    const CsvTable csv = read_csv(path);
    if (csv.header.size() < 2 || csv.header.back() != "label") {
        fail(Errc::bad_format, path + ": expected header '<feature>,...,label'");
    }
    TrainingSet data;
    data.feature_names.assign(csv.header.begin(), csv.header.end() - 1);
    const std::size_t s = data.feature_names.size();
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        if (row.size() != s + 1) {
            fail(Errc::bad_format, path + ": row " + std::to_string(r + 2) + " has " +
                                       std::to_string(row.size()) + " fields, expected " +
                                       std::to_string(s + 1));
        }
        for (std::size_t c = 0; c < s; ++c)
            data.features.push_back(parse_field(row[c], path, r + 2));
        const double label = parse_field(row[s], path, r + 2);
        data.labels.push_back(static_cast<int>(label));
    }
    return data;
}

void write_training_csv(const TrainingSet& data, const std::string& path) {
    CsvTable csv;
    csv.header = data.feature_names;
    csv.header.push_back("label");
    const std::size_t s = data.feature_count();
    csv.rows.reserve(data.rows());
    for (std::size_t r = 0; r < data.rows(); ++r) {
        std::vector<std::string> row;
        row.reserve(s + 1);
        for (std::size_t c = 0; c < s; ++c) row.push_back(format_double(data.features[r * s + c]));
        row.push_back(std::to_string(data.labels[r]));
        csv.rows.push_back(std::move(row));
    }
    write_csv(path, csv);
}

}  // namespace landca
