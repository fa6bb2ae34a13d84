#include "autotandem/tandem.hpp"

#include <stdexcept>

#include "autotandem/rng.hpp"

namespace autotandem {

TandemModel tandem_fit(const LabeledDataset& d, const MlpSpec& spec,
                       std::uint64_t seed) {
    if (d.size() < 20)
        throw std::invalid_argument("tandem_fit: need at least 20 samples, got " +
                                    std::to_string(d.size()));

    TandemModel t;
    t.x_scaler = minmax_fit(d.x);
    t.y_scaler = minmax_fit(d.y);
    const Matrix xs = minmax_transform(d.x, t.x_scaler);
    const Matrix ys = minmax_transform(d.y, t.y_scaler);

    const Rng rng(seed);

    MlpSpec fwd_spec = spec;
    fwd_spec.input_dim = static_cast<int>(d.input_dim());
    fwd_spec.output_dim = static_cast<int>(d.output_dim());
    MlpModel fwd = mlp_init(fwd_spec, rng.derive("forward_init").stream_id());
    t.forward_net = mlp_train(std::move(fwd), xs, ys, LossKind::rmse, nullptr,
                              rng.derive("forward_train").stream_id());

    MlpSpec inv_spec = spec;
    inv_spec.input_dim = static_cast<int>(d.output_dim());
    inv_spec.output_dim = static_cast<int>(d.input_dim());
    MlpModel inv = mlp_init(inv_spec, rng.derive("inverse_init").stream_id());
    t.inverse_net = mlp_train(std::move(inv), ys, xs, LossKind::tandem,
                              &t.forward_net, rng.derive("inverse_train").stream_id());
    return t;
}

Vector tandem_predict_design(const TandemModel& t, const Vector& y) {
    if (y.size() != t.response_dim())
        throw std::invalid_argument("tandem_predict_design: expected response of length " +
                                    std::to_string(t.response_dim()) + ", got " +
                                    std::to_string(y.size()));
    const Vector ys = minmax_transform(y, t.y_scaler);
    const Matrix xs = mlp_forward(t.inverse_net, ys.transpose());
    return minmax_inverse(Vector(xs.row(0).transpose()), t.x_scaler);
}

Matrix tandem_predict_design(const TandemModel& t, const Matrix& y_rows) {
    if (y_rows.cols() != t.response_dim())
        throw std::invalid_argument("tandem_predict_design: response dimension mismatch");
    const Matrix ys = minmax_transform(y_rows, t.y_scaler);
    const Matrix xs = mlp_forward(t.inverse_net, ys);
    return minmax_inverse(xs, t.x_scaler);
}

}  // namespace autotandem
