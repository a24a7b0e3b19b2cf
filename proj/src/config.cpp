#include "landca/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace landca {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

long long parse_int(const std::string& key, const std::string& value) {
    long long v = 0;
    const auto* begin = value.data();
    const auto* end = begin + value.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        fail(Errc::bad_config, "config key '" + key + "': expected integer, got '" + value + "'");
    }
    return v;
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used == value.size()) return v;
    } catch (const std::exception&) {
    }
    fail(Errc::bad_config, "config key '" + key + "': expected number, got '" + value + "'");
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    fail(Errc::bad_config, "config key '" + key + "': expected true/false, got '" + value + "'");
}

using Setter = std::function<void(PipelineConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"io.land_t0", [](PipelineConfig& c, const std::string&, const std::string& v) { c.land_t0 = v; }},
        {"io.land_t1", [](PipelineConfig& c, const std::string&, const std::string& v) { c.land_t1 = v; }},
        {"io.variables",
         [](PipelineConfig& c, const std::string&, const std::string& v) { c.variable_paths = split_list(v); }},
        {"io.variable_names",
         [](PipelineConfig& c, const std::string&, const std::string& v) { c.variable_names = split_list(v); }},
        {"io.unit_raster",
         [](PipelineConfig& c, const std::string&, const std::string& v) { c.unit_raster = v; }},
        {"io.socio_csv",
         [](PipelineConfig& c, const std::string&, const std::string& v) { c.socio_csv = v; }},
        {"io.adjacency_csv",
         [](PipelineConfig& c, const std::string&, const std::string& v) { c.adjacency_csv = v; }},
        {"io.farmland_flag",
         [](PipelineConfig& c, const std::string&, const std::string& v) { c.farmland_flag = v; }},
        {"io.output_dir",
         [](PipelineConfig& c, const std::string&, const std::string& v) { c.output_dir = v; }},
        {"cluster.k",
         [](PipelineConfig& c, const std::string& k, const std::string& v) {
             c.k_clusters = static_cast<int>(parse_int(k, v));
         }},
        {"sampling.n_total",
         [](PipelineConfig& c, const std::string& k, const std::string& v) {
             c.sample_size = static_cast<std::size_t>(parse_int(k, v));
         }},
        {"sampling.phi",
         [](PipelineConfig& c, const std::string& k, const std::string& v) { c.phi = parse_real(k, v); }},
        {"forest.trees",
         [](PipelineConfig& c, const std::string& k, const std::string& v) {
             c.forest.m_trees = static_cast<int>(parse_int(k, v));
         }},
        {"forest.sample_fraction",
         [](PipelineConfig& c, const std::string& k, const std::string& v) {
             c.forest.sample_fraction = parse_real(k, v);
         }},
        {"forest.max_depth",
         [](PipelineConfig& c, const std::string& k, const std::string& v) {
             c.forest.max_depth = static_cast<int>(parse_int(k, v));
         }},
        {"forest.min_leaf",
         [](PipelineConfig& c, const std::string& k, const std::string& v) {
             c.forest.min_leaf = static_cast<int>(parse_int(k, v));
         }},
        {"forest.mtry",
         [](PipelineConfig& c, const std::string& k, const std::string& v) {
             c.forest.mtry = static_cast<int>(parse_int(k, v));
         }},
        {"forest.contribution_mode",
         [](PipelineConfig& c, const std::string& k, const std::string& v) {
             if (v == "corrupt_evaluate") c.contribution_mode = ContributionMode::corrupt_evaluate;
             else if (v == "retrain") c.contribution_mode = ContributionMode::retrain;
             else fail(Errc::bad_config, "config key '" + k + "': expected corrupt_evaluate or retrain");
         }},
        {"ca.p_threshold",
         [](PipelineConfig& c, const std::string& k, const std::string& v) {
             c.ca.p_threshold = parse_real(k, v);
         }},
        {"ca.alpha",
         [](PipelineConfig& c, const std::string& k, const std::string& v) { c.ca.alpha = parse_real(k, v); }},
        {"ca.window",
         [](PipelineConfig& c, const std::string& k, const std::string& v) {
             c.ca.window = static_cast<int>(parse_int(k, v));
         }},
        {"ca.max_iterations",
         [](PipelineConfig& c, const std::string& k, const std::string& v) {
             c.ca.max_iterations = static_cast<int>(parse_int(k, v));
         }},
        {"ca.min_expansion_rate",
         [](PipelineConfig& c, const std::string& k, const std::string& v) {
             c.ca.min_expansion_rate = parse_real(k, v);
         }},
        {"ca.min_new_cells",
         [](PipelineConfig& c, const std::string& k, const std::string& v) {
             c.ca.min_new_cells_per_step = static_cast<std::size_t>(parse_int(k, v));
         }},
        {"ca.allow_limited",
         [](PipelineConfig& c, const std::string& k, const std::string& v) {
             c.ca.allow_limited_conversion = parse_bool(k, v);
         }},
        {"run.seed",
         [](PipelineConfig& c, const std::string& k, const std::string& v) {
             c.seed = static_cast<std::uint64_t>(parse_int(k, v));
         }},
        {"run.repetitions",
         [](PipelineConfig& c, const std::string& k, const std::string& v) {
             c.repetitions = static_cast<int>(parse_int(k, v));
         }},
        {"run.horizon",
         [](PipelineConfig& c, const std::string& k, const std::string& v) {
             c.horizon = static_cast<int>(parse_int(k, v));
         }},
        {"run.workers",
         [](PipelineConfig& c, const std::string& k, const std::string& v) {
             c.workers = static_cast<int>(parse_int(k, v));
         }},
    };
    return table;
}

void set_key(PipelineConfig& config, const std::string& dotted, const std::string& value,
             const std::string& where) {
    const auto it = setters().find(dotted);
    if (it == setters().end()) {
        fail(Errc::bad_config, where + ": unknown config key '" + dotted + "'");
    }
    it->second(config, dotted, value);
}

}  // namespace

void PipelineConfig::validate() const {
    if (land_t0.empty() || land_t1.empty()) {
        fail(Errc::bad_config, "config: io.land_t0 and io.land_t1 are required");
    }
    if (variable_paths.empty()) fail(Errc::bad_config, "config: io.variables is required");
    if (!variable_names.empty() && variable_names.size() != variable_paths.size()) {
        fail(Errc::bad_config, "config: io.variable_names must match io.variables in length");
    }
    if (unit_raster.empty() || socio_csv.empty() || adjacency_csv.empty()) {
        fail(Errc::bad_config,
             "config: io.unit_raster, io.socio_csv and io.adjacency_csv are required");
    }
    if (farmland_flag.empty()) fail(Errc::bad_config, "config: io.farmland_flag is required");
    if (k_clusters < 1) fail(Errc::bad_config, "config: cluster.k must be >= 1");
    if (sample_size == 0) fail(Errc::bad_config, "config: sampling.n_total must be positive");
    if (!(phi > 1.0 / 9.0 && phi <= 1.0)) {
        fail(Errc::bad_config, "config: sampling.phi must lie in (1/9, 1]");
    }
    if (repetitions < 1) fail(Errc::bad_config, "config: run.repetitions must be >= 1");
    if (horizon < 0) fail(Errc::bad_config, "config: run.horizon must be >= 0");
    if (workers < 1) fail(Errc::bad_config, "config: run.workers must be >= 1");
    ca.validate();
}

PipelineConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::io_failure, "cannot open config " + path);

    PipelineConfig config;
    std::string text, section;
    int line = 0;
    while (std::getline(in, text)) {
        ++line;
        const auto comment = text.find_first_of("#;");
        if (comment != std::string::npos) text.erase(comment);
        text = trim(text);
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']') {
                fail(Errc::bad_config, path + ": malformed section at line " + std::to_string(line));
            }
            section = trim(text.substr(1, text.size() - 2));
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            fail(Errc::bad_config, path + ": expected 'key = value' at line " + std::to_string(line));
        }
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (section.empty()) {
            fail(Errc::bad_config, path + ": key '" + key + "' outside any [section] at line " +
                                       std::to_string(line));
        }
        set_key(config, section + "." + key, value, path + ":" + std::to_string(line));
    }
    return config;
}

void apply_override(PipelineConfig& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        fail(Errc::bad_config, "override '" + assignment + "' must look like section.key=value");
    }
    set_key(config, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)), "--set");
}

}  // namespace landca
