#pragma once

#include <string>

#include "autotandem/linalg.hpp"

namespace autotandem {

/// Paired design vectors x (n×d) and responses f(x) (n×p), row-aligned.
struct LabeledDataset {
    Matrix x;
    Matrix y;

    Eigen::Index size() const { return x.rows(); }
    Eigen::Index input_dim() const { return x.cols(); }
    Eigen::Index output_dim() const { return y.cols(); }

    /// Append rows of (xs, ys); allocates once per call.
    void append(const Matrix& xs, const Matrix& ys);
};

/// SHA-256 over dims plus row-major little-endian doubles of x then y.
std::string dataset_hash(const LabeledDataset& d);

}  // namespace autotandem
