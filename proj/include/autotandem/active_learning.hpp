#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "autotandem/bounds.hpp"
#include "autotandem/dataset.hpp"
#include "autotandem/pso.hpp"
#include "autotandem/uncertainty.hpp"

namespace autotandem {

enum class ModelKind { forest, deep_ensemble };

struct ALConfig {
    int n0 = 20;
    int k = 5;
    int n_max = 0;
    PsoConfig pso;
    ModelKind model_kind = ModelKind::forest;
    int de_members = 10;
    int de_epochs = 200;
    int forest_trees = 150;

    void validate() const;  // n0 >= 2, k >= 1, n_max >= n0, (n_max − n0) % k == 0
};

/// High-fidelity response function queried for labels.
using ResponseFn = std::function<Vector(const Vector&)>;

/// Per-round acquisition trace: the batch of maximizers, their uncertainty
/// values, and the PSO stream ids that produced them.
struct AcquisitionRound {
    int round = 0;
    Matrix points;
    std::vector<double> uncertainty;
    std::vector<std::uint64_t> pso_stream_ids;
};

struct ActiveLearnResult {
    LabeledDataset data;     // exactly n_max rows: LHS seed design first,
                             // then batches in acquisition order
    UncertaintyModel model;  // retrained on the final dataset
    std::vector<AcquisitionRound> rounds;
};

/// Batch active learning: seed the dataset with an n0-point Latin hypercube
/// design, then, while the evaluation budget n_max is not exhausted, acquire
/// k points per round by independently seeded PSO maximizations of the
/// model's total uncertainty, label them through H, and retrain the model
/// from scratch. H is called exactly n_max times; a wrong-length or
/// non-finite response raises an error naming the sample index.
ActiveLearnResult active_learn(const ResponseFn& h, const BoundsBox& b,
                               const ALConfig& cfg, std::uint64_t seed);

}  // namespace autotandem
