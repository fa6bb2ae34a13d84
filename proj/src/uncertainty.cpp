#include "autotandem/uncertainty.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace autotandem {

Eigen::Index model_input_dim(const UncertaintyModel& m) {
    if (const auto* f = std::get_if<ForestModel>(&m)) return f->input_dim;
    return std::get<EnsembleModel>(m).members.front().net.spec.input_dim;
}

Eigen::Index model_output_dim(const UncertaintyModel& m) {
    if (const auto* f = std::get_if<ForestModel>(&m)) return f->output_dim;
    return std::get<EnsembleModel>(m).members.front().net.spec.output_dim;
}

std::pair<Vector, Vector> predict_mean_std(const UncertaintyModel& m,
                                           const Vector& x) {
    if (x.size() != model_input_dim(m))
        throw std::invalid_argument("predict_mean_std: expected input of length " +
                                    std::to_string(model_input_dim(m)) + ", got " +
                                    std::to_string(x.size()));
    const Eigen::Index p = model_output_dim(m);
    std::vector<Vector> preds;
    if (const auto* forest = std::get_if<ForestModel>(&m)) {
        preds.reserve(forest->trees.size());
        for (const auto& tree : forest->trees) preds.push_back(tree.predict(x));
    } else {
        const auto& ens = std::get<EnsembleModel>(m);
        preds.reserve(static_cast<std::size_t>(ens.member_count()));
        for (int i = 0; i < ens.member_count(); ++i)
            preds.push_back(ens.predict_member(i, x));
    }
    // Two-pass mean/std, same arithmetic as the naive reference loop.
    const double n = static_cast<double>(preds.size());
    Vector mean = Vector::Zero(p);
    for (const Vector& v : preds) mean += v;
    mean /= n;
    Vector var = Vector::Zero(p);
    for (const Vector& v : preds) var += (v - mean).cwiseAbs2();
    var /= n;
    return {std::move(mean), var.cwiseSqrt()};
}

Matrix predict_mean_rows(const UncertaintyModel& m, const Matrix& x) {
    Matrix out(x.rows(), model_output_dim(m));
    for (Eigen::Index r = 0; r < x.rows(); ++r)
        out.row(r) = predict_mean_std(m, x.row(r).transpose()).first.transpose();
    return out;
}

double total_uncertainty(const UncertaintyModel& m, const Vector& x) {
    return predict_mean_std(m, x).second.sum();
}

}  // namespace autotandem
