#include "landca/forest_io.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <ostream>

#include "landca/csv.hpp"

namespace landca {

namespace {

constexpr char kMagic[4] = {'L', 'C', 'A', 'F'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                 static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
    out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    put_u32(out, static_cast<std::uint32_t>(v & 0xFFFFFFFFull));
    put_u32(out, static_cast<std::uint32_t>(v >> 32));
}

void put_i32(std::ostream& out, std::int32_t v) { put_u32(out, static_cast<std::uint32_t>(v)); }
void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

void put_string(std::ostream& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t get_u32(std::istream& in, const std::string& path) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) {
        fail(Errc::bad_format, path + ": truncated forest file");
    }
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint64_t get_u64(std::istream& in, const std::string& path) {
    const std::uint64_t lo = get_u32(in, path);
    const std::uint64_t hi = get_u32(in, path);
    return lo | (hi << 32);
}

std::int32_t get_i32(std::istream& in, const std::string& path) {
    return static_cast<std::int32_t>(get_u32(in, path));
}

double get_f64(std::istream& in, const std::string& path) {
    return std::bit_cast<double>(get_u64(in, path));
}

std::string get_string(std::istream& in, const std::string& path) {
    const std::uint32_t len = get_u32(in, path);
    if (len > (1u << 20)) fail(Errc::bad_format, path + ": implausible string length");
    std::string s(len, '\0');
    if (!in.read(s.data(), len)) fail(Errc::bad_format, path + ": truncated forest file");
    return s;
}

}  // namespace

void save_forest(const Forest& forest, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io_failure, "cannot write " + path);
    out.write(kMagic, 4);
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(forest.class_count));
    put_u32(out, static_cast<std::uint32_t>(forest.feature_names.size()));
    for (const auto& name : forest.feature_names) put_string(out, name);

    put_u32(out, static_cast<std::uint32_t>(forest.params.m_trees));
    put_f64(out, forest.params.sample_fraction);
    put_u32(out, static_cast<std::uint32_t>(forest.params.max_depth));
    put_u32(out, static_cast<std::uint32_t>(forest.params.min_leaf));
    put_u32(out, static_cast<std::uint32_t>(forest.params.mtry));
    put_u32(out, static_cast<std::uint32_t>(forest.params.class_count));
    put_u64(out, forest.params.seed);

    put_u32(out, static_cast<std::uint32_t>(forest.trees.size()));
    for (std::size_t t = 0; t < forest.trees.size(); ++t) {
        const auto& nodes = forest.trees[t].nodes;
        put_u32(out, static_cast<std::uint32_t>(nodes.size()));
        for (const TreeNode& n : nodes) {
            put_i32(out, n.feature);
            put_f64(out, n.threshold);
            put_i32(out, n.left);
            put_i32(out, n.right);
            put_i32(out, n.label);
        }
        const auto& oob = forest.oob_rows[t];
        put_u32(out, static_cast<std::uint32_t>(oob.size()));
        for (std::uint32_t r : oob) put_u32(out, r);
    }
    if (!out) fail(Errc::io_failure, "write failed for " + path);
}

Forest load_forest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::io_failure, "cannot open " + path);
    char magic[4];
    if (!in.read(magic, 4) || magic[0] != kMagic[0] || magic[1] != kMagic[1] ||
        magic[2] != kMagic[2] || magic[3] != kMagic[3]) {
        fail(Errc::bad_format, path + ": not a forest file (bad magic)");
    }
    const std::uint32_t version = get_u32(in, path);
    if (version != kVersion) {
        fail(Errc::bad_format, path + ": unsupported forest format version " +
                                   std::to_string(version));
    }

    Forest forest;
    forest.class_count = static_cast<int>(get_u32(in, path));
    const std::uint32_t n_features = get_u32(in, path);
    for (std::uint32_t i = 0; i < n_features; ++i) forest.feature_names.push_back(get_string(in, path));

    forest.params.m_trees = static_cast<int>(get_u32(in, path));
    forest.params.sample_fraction = get_f64(in, path);
    forest.params.max_depth = static_cast<int>(get_u32(in, path));
    forest.params.min_leaf = static_cast<int>(get_u32(in, path));
    forest.params.mtry = static_cast<int>(get_u32(in, path));
    forest.params.class_count = static_cast<int>(get_u32(in, path));
    forest.params.seed = get_u64(in, path);

    const std::uint32_t n_trees = get_u32(in, path);
    forest.trees.resize(n_trees);
    forest.oob_rows.resize(n_trees);
    for (std::uint32_t t = 0; t < n_trees; ++t) {
        const std::uint32_t n_nodes = get_u32(in, path);
        auto& nodes = forest.trees[t].nodes;
        nodes.resize(n_nodes);
        for (std::uint32_t i = 0; i < n_nodes; ++i) {
            nodes[i].feature = get_i32(in, path);
            nodes[i].threshold = get_f64(in, path);
            nodes[i].left = get_i32(in, path);
            nodes[i].right = get_i32(in, path);
            nodes[i].label = get_i32(in, path);
        }
        const std::uint32_t n_oob = get_u32(in, path);
        auto& oob = forest.oob_rows[t];
        oob.resize(n_oob);
        for (std::uint32_t i = 0; i < n_oob; ++i) oob[i] = get_u32(in, path);
    }
    return forest;
}

void dump_forest_text(const Forest& forest, std::ostream& out) {
    out << "forest classes=" << forest.class_count << " trees=" << forest.trees.size()
        << " features=";
    for (std::size_t i = 0; i < forest.feature_names.size(); ++i)
        out << (i ? "," : "") << forest.feature_names[i];
    out << " seed=" << forest.params.seed << "\n";
    for (std::size_t t = 0; t < forest.trees.size(); ++t) {
        out << "tree " << t << " nodes=" << forest.trees[t].nodes.size()
            << " oob=" << forest.oob_rows[t].size() << "\n";
        const auto& nodes = forest.trees[t].nodes;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const TreeNode& n = nodes[i];
            if (n.is_leaf()) {
                out << "  " << i << ": leaf label=" << n.label << "\n";
            } else {
                out << "  " << i << ": x[" << n.feature << "] <= " << format_double(n.threshold)
                    << " ? " << n.left << " : " << n.right << "\n";
            }
        }
    }
}

}  // namespace landca
