#include "autotandem/scaling.hpp"

#include <stdexcept>

namespace autotandem {

ScalerParams minmax_fit(const Matrix& data) {
    if (data.rows() < 1 || data.cols() < 1)
        throw std::invalid_argument("minmax_fit: empty matrix");
    return ScalerParams{data.colwise().minCoeff(), data.colwise().maxCoeff()};
}

static void check_dim(Eigen::Index got, const ScalerParams& s, const char* who) {
    if (got != s.dim())
        throw std::invalid_argument(std::string(who) + ": dimension mismatch (" +
                                    std::to_string(got) + " vs scaler " +
                                    std::to_string(s.dim()) + ")");
}

Vector minmax_transform(const Vector& x, const ScalerParams& s) {
    check_dim(x.size(), s, "minmax_transform");
    Vector z(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double w = s.col_max[i] - s.col_min[i];
        z[i] = w > 0.0 ? (x[i] - s.col_min[i]) / w : 0.0;
    }
    return z;
}

Vector minmax_inverse(const Vector& z, const ScalerParams& s) {
    check_dim(z.size(), s, "minmax_inverse");
    Vector x(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double w = s.col_max[i] - s.col_min[i];
        x[i] = w > 0.0 ? s.col_min[i] + z[i] * w : s.col_min[i];
    }
    return x;
}

Matrix minmax_transform(const Matrix& x, const ScalerParams& s) {
    check_dim(x.cols(), s, "minmax_transform");
    Matrix z(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double w = s.col_max[j] - s.col_min[j];
        if (w > 0.0)
            z.col(j) = (x.col(j).array() - s.col_min[j]) / w;
        else
            z.col(j).setZero();
    }
    return z;
}

Matrix minmax_inverse(const Matrix& z, const ScalerParams& s) {
    check_dim(z.cols(), s, "minmax_inverse");
    Matrix x(z.rows(), z.cols());
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
        const double w = s.col_max[j] - s.col_min[j];
        if (w > 0.0)
            x.col(j) = z.col(j).array() * w + s.col_min[j];
        else
            x.col(j).setConstant(s.col_min[j]);
    }
    return x;
}

}  // namespace autotandem
