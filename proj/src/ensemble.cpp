#include "autotandem/ensemble.hpp"

#include <cmath>
#include <stdexcept>

#include "autotandem/rng.hpp"

namespace autotandem {

Vector EnsembleModel::predict_member(int i, const Vector& x) const {
    const EnsembleMember& m = members.at(static_cast<std::size_t>(i));
    const Vector xs = minmax_transform(x, m.input_scaler);
    return mlp_forward(m.net, xs.transpose()).row(0).transpose();
}

EnsembleModel de_train(const LabeledDataset& d, int members, std::uint64_t seed,
                       int epochs) {
    if (members < 2)
        throw std::invalid_argument("de_train: need at least 2 members");
    if (d.size() < 10)
        throw std::invalid_argument("de_train: need at least 10 samples, got " +
                                    std::to_string(d.size()));
    if (epochs < 1)
        throw std::invalid_argument("de_train: epochs must be positive");

    MlpSpec spec;
    spec.input_dim = static_cast<int>(d.input_dim());
    spec.hidden = {100, 200, 100};
    spec.output_dim = static_cast<int>(d.output_dim());
    spec.learning_rate = 1e-3;
    spec.epochs = epochs;
    spec.batch_size = 200;  // clamped to the dataset size in training
    spec.val_fraction = 0.0;  // members see the full dataset, no early stop
    spec.l2 = 1e-4;

    const ScalerParams scaler = minmax_fit(d.x);
    const Matrix xs = minmax_transform(d.x, scaler);

    EnsembleModel ensemble;
    ensemble.members.reserve(static_cast<std::size_t>(members));
    const Rng base(seed);
    for (int i = 0; i < members; ++i) {
        const auto salt = static_cast<std::uint64_t>(i);
        MlpModel net = mlp_init(spec, base.derive("member_init", salt).stream_id());
        net = mlp_train(std::move(net), xs, d.y, LossKind::rmse, nullptr,
                        base.derive("member_train", salt).stream_id());
        const double final_loss = net.loss_history.back().first;
        if (!std::isfinite(final_loss))
            throw std::runtime_error("de_train: member " + std::to_string(i) +
                                     " diverged (non-finite loss)");
        ensemble.members.push_back(EnsembleMember{scaler, std::move(net)});
    }
    return ensemble;
}

}  // namespace autotandem
