#pragma once

#include <cstdint>
#include <vector>

#include "autotandem/dataset.hpp"
#include "autotandem/linalg.hpp"

namespace autotandem {

/// Axis-aligned regression tree over multi-output targets, stored as
/// flattened node arrays. Internal nodes split on feature/threshold; leaves
/// index into leaf_values (one p-vector per leaf).
struct RegressionTree {
    std::vector<int> feature;      // -1 at leaves
    std::vector<double> threshold; // midpoint between adjacent sorted values
    std::vector<int> left;
    std::vector<int> right;
    std::vector<int> leaf;         // row in leaf_values, -1 at internal nodes
    Matrix leaf_values;

    Vector predict(const Vector& x) const;
};

struct ForestModel {
    std::vector<RegressionTree> trees;
    int input_dim = 0;
    int output_dim = 0;

    int tree_count() const { return static_cast<int>(trees.size()); }
};

/// Bagged regression forest: each tree fits a bootstrap resample (size |D|,
/// with replacement) using exhaustive variance-reduction splits over all
/// features, grown to single-sample or pure leaves. `bootstrap=false` fits
/// every tree on the full dataset, which makes predictions at training
/// points exact (used by tests).
ForestModel forest_train(const LabeledDataset& d, int trees, std::uint64_t seed,
                         bool bootstrap = true);

}  // namespace autotandem
