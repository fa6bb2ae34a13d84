#pragma once

#include <cstdint>
#include <string>

#include "autotandem/dataset.hpp"
#include "autotandem/mlp.hpp"
#include "autotandem/scaling.hpp"

namespace autotandem {

/// Forward/inverse network pair sharing one pair of min-max scalers: the
/// forward net maps scaled x to scaled y, the inverse net the reverse, with
/// the scalers applied in swapped roles.
struct TandemModel {
    MlpModel forward_net;  // scaled x → scaled y
    MlpModel inverse_net;  // scaled y → scaled x
    ScalerParams x_scaler;
    ScalerParams y_scaler;
    std::string tandem_loss_space = "scaled";  // space in which the composed loss was computed

    Eigen::Index design_dim() const { return forward_net.spec.input_dim; }
    Eigen::Index response_dim() const { return forward_net.spec.output_dim; }
};

/// Fit scalers on the dataset, train the forward net with the RMSE loss,
/// then train the inverse net with the composed loss against the frozen
/// forward net. `spec` supplies architecture and training settings; its
/// input/output dims are replaced per net. Requires at least 20 samples.
TandemModel tandem_fit(const LabeledDataset& d, const MlpSpec& spec,
                       std::uint64_t seed);

/// Recover a design for a requested response: scale, run the inverse net,
/// unscale.
Vector tandem_predict_design(const TandemModel& t, const Vector& y);
Matrix tandem_predict_design(const TandemModel& t, const Matrix& y_rows);

}  // namespace autotandem
