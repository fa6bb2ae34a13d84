#pragma once

#include <utility>
#include <variant>

#include "autotandem/ensemble.hpp"
#include "autotandem/forest.hpp"

namespace autotandem {

/// Uncertainty-bearing forward model: deep ensemble or regression forest,
/// both answering per-output mean and spread across their members/trees.
using UncertaintyModel = std::variant<ForestModel, EnsembleModel>;

Eigen::Index model_input_dim(const UncertaintyModel& m);
Eigen::Index model_output_dim(const UncertaintyModel& m);

/// Per-output mean and population standard deviation across members/trees.
std::pair<Vector, Vector> predict_mean_std(const UncertaintyModel& m,
                                           const Vector& x);

/// Mean prediction for each row of x.
Matrix predict_mean_rows(const UncertaintyModel& m, const Matrix& x);

/// Total predictive uncertainty: the stds summed over output dimensions.
double total_uncertainty(const UncertaintyModel& m, const Vector& x);

}  // namespace autotandem
