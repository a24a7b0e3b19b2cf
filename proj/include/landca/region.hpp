#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "landca/error.hpp"

namespace landca {

// Minimal dense row-major matrix; the clustering inputs are tens of rows, so
// nothing heavier is warranted.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> v;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), v(r * c, fill) {}
    double& at(std::size_t r, std::size_t c) { return v[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return v[r * cols + c]; }
};

// Socio-economic indexes per administrative unit. Loaders reject missing
// values, so a constructed table is always dense.
struct IndexTable {
    std::vector<std::string> unit_ids;
    std::vector<std::string> index_names;
    Matrix values;  // units x indexes
};

void validate_index_table(const IndexTable& table);

// Contiguity relation between admin units, as an undirected edge list.
struct AdjacencyGraph {
    std::vector<std::pair<std::string, std::string>> edges;
};

// Final assignment of units to clusters (socio-economic similarity) and
// regions (clusters split into contiguous components). Regions refine
// clusters by construction.
struct RegionPartition {
    std::vector<std::string> unit_ids;
    std::vector<int> cluster_of;  // 1..cluster_count, parallel to unit_ids
    std::vector<int> region_of;   // 1..region_count, parallel to unit_ids
    int cluster_count = 0;
    int region_count = 0;
    double explained_variance = 0.0;
};

// Column-wise min-max normalization of an index matrix.
Matrix minmax_columns(const Matrix& m);

struct PcaResult {
    Matrix scores;  // units x 2 projections, eigenvector signs fixed
    double explained_variance = 0.0;
};

// Projects the column-centered, min-max-normalized table onto its two leading
// principal axes. Normalization happens inside, so callers pass raw indexes.
// Rejects tables with no variance at all (Errc::insufficient_variance); a
// single nonzero eigenvalue is allowed and simply yields a zero second column
// with explained_variance 1.
PcaResult pca_top2(const IndexTable& table);

// Agglomerative centroid clustering under the 1 - Pearson(r) distance,
// computed between cluster centroids in the full normalized index space, cut
// at k clusters. Ties merge the lexicographically smallest label pair, so the
// hierarchy is deterministic. A zero-variance row has no defined correlation
// and is rejected naming the offending unit.
std::vector<int> centroid_cluster(const Matrix& vectors, int k,
                                  const std::vector<std::string>* unit_ids = nullptr);

// Splits every cluster into the connected components of its induced subgraph.
// Units absent from the graph are isolated components, never an error.
RegionPartition split_by_adjacency(const std::vector<std::string>& unit_ids,
                                   const std::vector<int>& cluster_of,
                                   const AdjacencyGraph& graph);

// The full chain: min-max normalize -> PCA metadata -> centroid clustering ->
// contiguity split.
RegionPartition cluster_regions(const IndexTable& table, const AdjacencyGraph& graph, int k);

}  // namespace landca
