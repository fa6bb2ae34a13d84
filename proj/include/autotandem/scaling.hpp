#pragma once

#include "autotandem/linalg.hpp"

namespace autotandem {

/// Column-wise min-max scaler parameters. Non-degenerate columns map onto
/// [0,1]; a constant column transforms to 0 and inverts back to its value.
struct ScalerParams {
    Vector col_min;
    Vector col_max;

    Eigen::Index dim() const { return col_min.size(); }

    /// Pass-through scaler (transform and inverse are the identity on [0,1]^d).
    static ScalerParams identity(Eigen::Index d) {
        return ScalerParams{Vector::Zero(d), Vector::Ones(d)};
    }
};

ScalerParams minmax_fit(const Matrix& data);

Vector minmax_transform(const Vector& x, const ScalerParams& s);
Vector minmax_inverse(const Vector& z, const ScalerParams& s);

// Row-wise batch forms.
Matrix minmax_transform(const Matrix& x, const ScalerParams& s);
Matrix minmax_inverse(const Matrix& z, const ScalerParams& s);

}  // namespace autotandem
