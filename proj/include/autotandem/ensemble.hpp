#pragma once

#include <cstdint>
#include <vector>

#include "autotandem/dataset.hpp"
#include "autotandem/mlp.hpp"
#include "autotandem/scaling.hpp"

namespace autotandem {

/// One deep-ensemble member: min-max input scaling feeding an MLP trained on
/// raw targets.
struct EnsembleMember {
    ScalerParams input_scaler;
    MlpModel net;
};

struct EnsembleModel {
    std::vector<EnsembleMember> members;

    int member_count() const { return static_cast<int>(members.size()); }
    Vector predict_member(int i, const Vector& x) const;
};

/// Train `members` identically configured MLPs (hidden 100/200/100, ReLU,
/// Adam lr 1e-3, L2 1e-4) on the full dataset, each from a distinct derived
/// seed; diversity comes from initialization and batch order only. A member
/// ending with a non-finite loss aborts the whole training.
EnsembleModel de_train(const LabeledDataset& d, int members, std::uint64_t seed,
                       int epochs = 200);

}  // namespace autotandem
