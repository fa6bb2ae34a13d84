#pragma once

#include <Eigen/Dense>

namespace autotandem {

// Rows are samples throughout: an n-sample dataset over d variables is n×d.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace autotandem
