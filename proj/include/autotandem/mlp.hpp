#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "autotandem/linalg.hpp"

namespace autotandem {

enum class Activation { relu };

/// Training loss. `rmse` fits the net's own output against targets.
/// `tandem` fits an inverse net y→x̂ so that a frozen forward net maps x̂
/// back onto the original y; only the inverse net's weights are updated.
enum class LossKind { rmse, tandem };

struct MlpSpec {
    int input_dim = 0;
    std::vector<int> hidden;
    int output_dim = 0;
    Activation activation = Activation::relu;
    double learning_rate = 1e-3;
    int epochs = 2000;
    int batch_size = 32;
    // Fraction held out for early stopping; 0 trains on everything with no
    // early stop (ensemble members train that way).
    double val_fraction = 0.1;
    int patience = 10;
    double l2 = 0.0;  // penalty l2/(2·batch)·Σ‖W‖², weights only

    void validate() const;  // throws std::invalid_argument
};

/// Feed-forward net: ReLU hidden layers, linear output. Layer l maps
/// fan_in→fan_out via weights[l] (fan_in × fan_out) and biases[l].
struct MlpModel {
    MlpSpec spec;
    std::vector<Matrix> weights;
    std::vector<Vector> biases;
    std::vector<std::pair<double, double>> loss_history;  // (train, val) per epoch

    std::size_t layer_count() const { return weights.size(); }
};

/// Fan-scaled uniform init, U(−s, s) with s = sqrt(6/(fan_in+fan_out));
/// biases start at zero. Deterministic in seed.
MlpModel mlp_init(const MlpSpec& spec, std::uint64_t seed);

Matrix mlp_forward(const MlpModel& m, const Matrix& x);

/// Loss value and parameter gradients for one batch, including the L2 term.
/// For LossKind::tandem, `frozen_forward` must be the forward net; its
/// weights receive no gradient.
struct LossGrad {
    double loss = 0.0;
    std::vector<Matrix> weight_grads;
    std::vector<Vector> bias_grads;
};

LossGrad mlp_loss_grad(const MlpModel& m, const Matrix& x, const Matrix& y,
                       LossKind kind, const MlpModel* frozen_forward);

/// Mini-batch Adam with a one-time seeded validation split (last
/// val_fraction of the shuffled rows), early stopping on the validation
/// loss (improvement = best − 1e-6, patience epochs), and restoration of
/// the best-validation weights. Returns the trained model with
/// loss_history filled; validation entries are NaN when val_fraction is 0.
MlpModel mlp_train(MlpModel m, const Matrix& x, const Matrix& y, LossKind kind,
                   const MlpModel* frozen_forward, std::uint64_t seed);

}  // namespace autotandem
