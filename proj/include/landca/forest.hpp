#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "landca/rng.hpp"
#include "landca/sampling.hpp"

namespace landca {

// One binary decision node. feature < 0 marks a leaf carrying `label`;
// otherwise rows with x[feature] <= threshold descend to `left`.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = 0;

    bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    int predict(std::span<const double> x) const {
        int i = 0;
        while (!nodes[static_cast<std::size_t>(i)].is_leaf()) {
            const TreeNode& n = nodes[static_cast<std::size_t>(i)];
            i = (x[static_cast<std::size_t>(n.feature)] <= n.threshold) ? n.left : n.right;
        }
        return nodes[static_cast<std::size_t>(i)].label;
    }
};

struct ForestParams {
    int m_trees = 80;
    double sample_fraction = 0.60;  // bootstrap size as a fraction of the training rows
    int max_depth = 25;
    int min_leaf = 1;
    int mtry = 0;         // features tried per node; 0 means ceil(sqrt(S))
    int class_count = 0;  // 0 means the largest label present in the data
    std::uint64_t seed = 0;
};

struct TrainReport {
    std::size_t rows = 0;
    int classes_present = 0;
    bool single_class = false;  // degenerate forest of one-leaf trees
};

// Bagged ensemble of CART trees (Gini splits, per-node random feature
// subsets). oob_rows[t] lists the training rows tree t never saw, which
// drives the internal error estimate.
struct Forest {
    std::vector<DecisionTree> trees;
    std::vector<std::vector<std::uint32_t>> oob_rows;
    int class_count = 0;
    std::vector<std::string> feature_names;
    ForestParams params;
};

Forest train_forest(const TrainingSet& data, const ForestParams& params,
                    TrainReport* report = nullptr);

// Per-class vote tallies for one input. Fractions are exact multiples of
// 1/total and always add up to 1 because the tallies are integers.
struct VoteVector {
    std::vector<std::uint32_t> votes;  // indexed by class label, [0] unused
    std::uint32_t total = 0;

    double prob(int label) const {
        return static_cast<double>(votes[static_cast<std::size_t>(label)]) /
               static_cast<double>(total);
    }
    int argmax() const;  // ties resolve to the lowest label
};

VoteVector predict_votes(const Forest& forest, std::span<const double> x);
int classify(const Forest& forest, std::span<const double> x);

struct OobReport {
    double error = 0.0;        // misclassified fraction among evaluated rows
    std::size_t evaluated = 0; // rows with at least one out-of-bag tree
    std::size_t skipped = 0;   // rows every tree trained on
};

OobReport oob_error(const Forest& forest, const TrainingSet& data);

enum class ContributionMode {
    corrupt_evaluate,  // evaluate the trained forest on noise-injected inputs (default)
    retrain,           // retrain with the noisy column, evaluate on the original rows
};

// Share of the forest's error inflation attributable to each variable when
// that variable is replaced by uniform [0,1) noise; shares add up to 1.
std::vector<double> variable_contribution(const Forest& forest, const TrainingSet& data,
                                          std::uint64_t seed,
                                          ContributionMode mode = ContributionMode::corrupt_evaluate);

namespace detail {
// Exposed for direct tree-level verification. `rows` indexes into `data`.
DecisionTree grow_tree(const TrainingSet& data, std::span<const std::uint32_t> rows,
                       const ForestParams& params, int class_count, Rng& rng);
}  // namespace detail

}  // namespace landca
