#include "autotandem/active_learning.hpp"

#include <cmath>
#include <stdexcept>

#include "autotandem/rng.hpp"
#include "autotandem/samplers.hpp"

namespace autotandem {

void ALConfig::validate() const {
    if (n0 < 2) throw std::invalid_argument("ALConfig: n0 must be at least 2");
    if (k < 1) throw std::invalid_argument("ALConfig: k must be at least 1");
    if (n_max < n0) throw std::invalid_argument("ALConfig: n_max must be >= n0");
    if ((n_max - n0) % k != 0)
        throw std::invalid_argument("ALConfig: (n_max - n0) must be divisible by k");
    pso.validate();
}

namespace {

class CheckedResponse {
public:
    CheckedResponse(const ResponseFn& h, Eigen::Index d) : h_(h), d_(d) {}

    Vector operator()(const Vector& x) {
        const Vector y = h_(x);
        if (p_ < 0) p_ = y.size();
        if (y.size() != p_)
            throw std::runtime_error("active_learn: response length changed at sample " +
                                     std::to_string(count_) + " (" +
                                     std::to_string(y.size()) + " vs " +
                                     std::to_string(p_) + ")");
        for (Eigen::Index j = 0; j < y.size(); ++j)
            if (!std::isfinite(y[j]))
                throw std::runtime_error("active_learn: non-finite response at sample " +
                                         std::to_string(count_));
        ++count_;
        return y;
    }

    Eigen::Index output_dim() const { return p_; }

private:
    const ResponseFn& h_;
    Eigen::Index d_;
    Eigen::Index p_ = -1;
    long count_ = 0;
};

UncertaintyModel train_model(const LabeledDataset& d, const ALConfig& cfg,
                             std::uint64_t seed) {
    if (cfg.model_kind == ModelKind::forest)
        return forest_train(d, cfg.forest_trees, seed);
    return de_train(d, cfg.de_members, seed, cfg.de_epochs);
}

}  // namespace

ActiveLearnResult active_learn(const ResponseFn& h, const BoundsBox& b,
                               const ALConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const Rng rng(seed);
    CheckedResponse response(h, b.dim());

    ActiveLearnResult result;
    const SampleBatch seed_design =
        lhs_sample(b, cfg.n0, rng.derive("seed_design").stream_id());
    Matrix y0;
    for (int i = 0; i < cfg.n0; ++i) {
        const Vector yi = response(seed_design.points.row(i).transpose());
        if (i == 0) y0.resize(cfg.n0, yi.size());
        y0.row(i) = yi.transpose();
    }
    result.data.append(seed_design.points, y0);
    result.model = train_model(result.data, cfg, rng.derive("model", 0).stream_id());

    int round = 0;
    while (result.data.size() < cfg.n_max) {
        ++round;
        AcquisitionRound trace;
        trace.round = round;
        trace.points.resize(cfg.k, b.dim());

        // k independent uncertainty maximizations, each from its own stream.
        const UncertaintyModel& model = result.model;
        const Objective u = [&model](const Vector& x) {
            return total_uncertainty(model, x);
        };
        for (int i = 0; i < cfg.k; ++i) {
            const Rng pso_rng = rng.derive("pso", static_cast<std::uint64_t>(round))
                                    .derive(static_cast<std::uint64_t>(i));
            const Vector best = pso_maximize(u, b, cfg.pso, pso_rng.stream_id());
            trace.points.row(i) = best.transpose();
            trace.uncertainty.push_back(total_uncertainty(model, best));
            trace.pso_stream_ids.push_back(pso_rng.stream_id());
        }

        Matrix batch_y(cfg.k, result.data.output_dim());
        for (int i = 0; i < cfg.k; ++i)
            batch_y.row(i) = response(trace.points.row(i).transpose()).transpose();
        result.data.append(trace.points, batch_y);
        result.rounds.push_back(std::move(trace));

        result.model = train_model(
            result.data, cfg,
            rng.derive("model", static_cast<std::uint64_t>(round)).stream_id());
    }
    return result;
}

}  // namespace autotandem
