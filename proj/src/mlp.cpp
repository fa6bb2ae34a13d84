#include "autotandem/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "autotandem/rng.hpp"

namespace autotandem {

void MlpSpec::validate() const {
    if (input_dim < 1) throw std::invalid_argument("MlpSpec: input_dim must be positive");
    if (output_dim < 1) throw std::invalid_argument("MlpSpec: output_dim must be positive");
    if (hidden.empty()) throw std::invalid_argument("MlpSpec: hidden layers required");
    for (int h : hidden)
        if (h < 1) throw std::invalid_argument("MlpSpec: hidden width must be positive");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("MlpSpec: learning_rate must be positive");
    if (epochs < 1) throw std::invalid_argument("MlpSpec: epochs must be positive");
    if (batch_size < 1) throw std::invalid_argument("MlpSpec: batch_size must be positive");
    if (!(val_fraction >= 0.0 && val_fraction < 1.0))
        throw std::invalid_argument("MlpSpec: val_fraction must be in [0,1)");
    if (patience < 1) throw std::invalid_argument("MlpSpec: patience must be positive");
    if (l2 < 0.0) throw std::invalid_argument("MlpSpec: l2 must be nonnegative");
}

MlpModel mlp_init(const MlpSpec& spec, std::uint64_t seed) {
    spec.validate();
    std::vector<int> dims;
    dims.push_back(spec.input_dim);
    dims.insert(dims.end(), spec.hidden.begin(), spec.hidden.end());
    dims.push_back(spec.output_dim);

    MlpModel m;
    m.spec = spec;
    Rng rng = Rng(seed).derive("mlp_init");
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        const int fan_in = dims[l];
        const int fan_out = dims[l + 1];
        const double s = std::sqrt(6.0 / (fan_in + fan_out));
        Matrix w(fan_in, fan_out);
        for (int i = 0; i < fan_in; ++i)
            for (int j = 0; j < fan_out; ++j) w(i, j) = rng.uniform(-s, s);
        m.weights.push_back(std::move(w));
        m.biases.push_back(Vector::Zero(fan_out));
    }
    return m;
}

namespace {

struct ForwardCache {
    // acts[0] is the input batch, acts[l] the post-activation of layer l.
    std::vector<Matrix> acts;
};

Matrix forward_impl(const MlpModel& m, const Matrix& x, ForwardCache* cache) {
    if (x.cols() != m.spec.input_dim)
        throw std::invalid_argument("mlp_forward: expected " +
                                    std::to_string(m.spec.input_dim) + " columns, got " +
                                    std::to_string(x.cols()));
    Matrix a = x;
    if (cache) cache->acts.push_back(a);
    const std::size_t last = m.layer_count() - 1;
    for (std::size_t l = 0; l < m.layer_count(); ++l) {
        Matrix z = (a * m.weights[l]).rowwise() + m.biases[l].transpose();
        a = (l == last) ? std::move(z) : z.cwiseMax(0.0);
        if (cache) cache->acts.push_back(a);
    }
    return a;
}

/// Backpropagate d(loss)/d(output) through the net. Fills weight/bias grads
/// when `grads` is set and returns d(loss)/d(input).
Matrix backward_impl(const MlpModel& m, const ForwardCache& cache,
                     const Matrix& d_output, LossGrad* grads) {
    const std::size_t layers = m.layer_count();
    if (grads) {
        grads->weight_grads.resize(layers);
        grads->bias_grads.resize(layers);
    }
    Matrix dz = d_output;  // output layer is linear
    for (std::size_t li = layers; li-- > 0;) {
        if (grads) {
            grads->weight_grads[li].noalias() = cache.acts[li].transpose() * dz;
            grads->bias_grads[li] = dz.colwise().sum();
        }
        if (li == 0) {
            return dz * m.weights[0].transpose();
        }
        Matrix da = dz * m.weights[li].transpose();
        // ReLU mask from stored activations (positive ⇔ pass-through).
        dz = da.cwiseProduct(
            (cache.acts[li].array() > 0.0).cast<double>().matrix());
    }
    return Matrix();
}

/// RMSE over all entries of (pred − target); gradient w.r.t. pred.
double rmse_loss_grad(const Matrix& pred, const Matrix& target, Matrix& d_pred) {
    const double n = static_cast<double>(pred.rows() * pred.cols());
    const Matrix diff = pred - target;
    const double loss = std::sqrt(diff.squaredNorm() / n);
    if (loss < 1e-12)
        d_pred = Matrix::Zero(pred.rows(), pred.cols());
    else
        d_pred = diff / (n * loss);
    return loss;
}

double data_loss(const MlpModel& m, const Matrix& x, const Matrix& y,
                 LossKind kind, const MlpModel* frozen_forward) {
    const Matrix pred = forward_impl(m, x, nullptr);
    if (kind == LossKind::rmse) {
        const double n = static_cast<double>(pred.rows() * pred.cols());
        return std::sqrt((pred - y).squaredNorm() / n);
    }
    const Matrix recon = forward_impl(*frozen_forward, pred, nullptr);
    const double n = static_cast<double>(recon.rows() * recon.cols());
    return std::sqrt((recon - x).squaredNorm() / n);
}

}  // namespace

Matrix mlp_forward(const MlpModel& m, const Matrix& x) {
    return forward_impl(m, x, nullptr);
}

LossGrad mlp_loss_grad(const MlpModel& m, const Matrix& x, const Matrix& y,
                       LossKind kind, const MlpModel* frozen_forward) {
    if (x.rows() != y.rows())
        throw std::invalid_argument("mlp_loss_grad: row count mismatch");
    if (kind == LossKind::tandem) {
        if (!frozen_forward)
            throw std::invalid_argument("mlp_loss_grad: tandem loss needs a frozen forward net");
        if (frozen_forward->spec.input_dim != m.spec.output_dim ||
            frozen_forward->spec.output_dim != m.spec.input_dim)
            throw std::invalid_argument("mlp_loss_grad: frozen forward net shape mismatch");
    }

    LossGrad lg;
    ForwardCache cache;
    const Matrix pred = forward_impl(m, x, &cache);

    Matrix d_pred;
    if (kind == LossKind::rmse) {
        lg.loss = rmse_loss_grad(pred, y, d_pred);
    } else {
        // Reconstruction loss: the frozen forward net maps the prediction
        // back to the input space and is compared against the input batch.
        ForwardCache fwd_cache;
        const Matrix recon = forward_impl(*frozen_forward, pred, &fwd_cache);
        Matrix d_recon;
        lg.loss = rmse_loss_grad(recon, x, d_recon);
        d_pred = backward_impl(*frozen_forward, fwd_cache, d_recon, nullptr);
    }
    backward_impl(m, cache, d_pred, &lg);

    if (m.spec.l2 > 0.0) {
        const double scale = m.spec.l2 / static_cast<double>(x.rows());
        for (std::size_t l = 0; l < m.layer_count(); ++l) {
            lg.loss += 0.5 * scale * m.weights[l].squaredNorm();
            lg.weight_grads[l] += scale * m.weights[l];
        }
    }
    return lg;
}

MlpModel mlp_train(MlpModel m, const Matrix& x, const Matrix& y, LossKind kind,
                   const MlpModel* frozen_forward, std::uint64_t seed) {
    m.spec.validate();
    if (x.rows() != y.rows())
        throw std::invalid_argument("mlp_train: row count mismatch");
    if (x.cols() != m.spec.input_dim || y.cols() != m.spec.output_dim)
        throw std::invalid_argument("mlp_train: data does not match spec dims");

    const Eigen::Index n = x.rows();
    Rng rng(seed);

    // One seeded shuffle, then the last val_fraction rows become the
    // validation set.
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    Eigen::Index n_val = 0;
    if (m.spec.val_fraction > 0.0) {
        Rng split_rng = rng.derive("split");
        for (std::size_t i = perm.size(); i > 1; --i)
            std::swap(perm[i - 1], perm[split_rng.below(i)]);
        n_val = std::max<Eigen::Index>(
            1, static_cast<Eigen::Index>(std::floor(m.spec.val_fraction *
                                                    static_cast<double>(n))));
    }
    const Eigen::Index n_train = n - n_val;
    if (n_train < 2)
        throw std::invalid_argument("mlp_train: fewer than 2 training samples after split");

    Matrix x_train(n_train, x.cols()), y_train(n_train, y.cols());
    for (Eigen::Index i = 0; i < n_train; ++i) {
        x_train.row(i) = x.row(perm[static_cast<std::size_t>(i)]);
        y_train.row(i) = y.row(perm[static_cast<std::size_t>(i)]);
    }
    Matrix x_val(n_val, x.cols()), y_val(n_val, y.cols());
    for (Eigen::Index i = 0; i < n_val; ++i) {
        x_val.row(i) = x.row(perm[static_cast<std::size_t>(n_train + i)]);
        y_val.row(i) = y.row(perm[static_cast<std::size_t>(n_train + i)]);
    }

    const Eigen::Index batch =
        std::min<Eigen::Index>(m.spec.batch_size, n_train);

    // Adam state
    constexpr double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
    std::vector<Matrix> mw, vw;
    std::vector<Vector> mb, vb;
    for (std::size_t l = 0; l < m.layer_count(); ++l) {
        mw.push_back(Matrix::Zero(m.weights[l].rows(), m.weights[l].cols()));
        vw.push_back(Matrix::Zero(m.weights[l].rows(), m.weights[l].cols()));
        mb.push_back(Vector::Zero(m.biases[l].size()));
        vb.push_back(Vector::Zero(m.biases[l].size()));
    }
    long step = 0;

    Rng shuffle_rng = rng.derive("shuffle");
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n_train));
    std::iota(order.begin(), order.end(), Eigen::Index{0});

    // Snapshots track the strict minimum so the returned weights match the
    // lowest recorded validation loss; the patience counter only resets on
    // improvements beyond the 1e-6 threshold.
    double best_val = std::numeric_limits<double>::infinity();
    double patience_ref = std::numeric_limits<double>::infinity();
    std::vector<Matrix> best_weights;
    std::vector<Vector> best_biases;
    int epochs_without_improvement = 0;
    constexpr double improvement_eps = 1e-6;

    m.loss_history.clear();
    Matrix xb, yb;
    for (int epoch = 0; epoch < m.spec.epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng.below(i)]);

        double train_loss_sum = 0.0;
        int batches = 0;
        for (Eigen::Index start = 0; start < n_train; start += batch) {
            const Eigen::Index count = std::min(batch, n_train - start);
            xb.resize(count, x.cols());
            yb.resize(count, y.cols());
            for (Eigen::Index i = 0; i < count; ++i) {
                xb.row(i) = x_train.row(order[static_cast<std::size_t>(start + i)]);
                yb.row(i) = y_train.row(order[static_cast<std::size_t>(start + i)]);
            }
            const LossGrad lg = mlp_loss_grad(m, xb, yb, kind, frozen_forward);
            train_loss_sum += lg.loss;
            ++batches;

            ++step;
            const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
            for (std::size_t l = 0; l < m.layer_count(); ++l) {
                mw[l] = beta1 * mw[l] + (1.0 - beta1) * lg.weight_grads[l];
                vw[l] = beta2 * vw[l] +
                        (1.0 - beta2) * lg.weight_grads[l].cwiseAbs2();
                m.weights[l].array() -=
                    m.spec.learning_rate * (mw[l].array() / bc1) /
                    ((vw[l].array() / bc2).sqrt() + adam_eps);
                mb[l] = beta1 * mb[l] + (1.0 - beta1) * lg.bias_grads[l];
                vb[l] = beta2 * vb[l] + (1.0 - beta2) * lg.bias_grads[l].cwiseAbs2();
                m.biases[l].array() -= m.spec.learning_rate * (mb[l].array() / bc1) /
                                       ((vb[l].array() / bc2).sqrt() + adam_eps);
            }
        }

        const double train_loss = train_loss_sum / std::max(batches, 1);
        double val_loss = std::numeric_limits<double>::quiet_NaN();
        if (n_val > 0) {
            val_loss = data_loss(m, x_val, y_val, kind, frozen_forward);
        }
        m.loss_history.emplace_back(train_loss, val_loss);

        if (n_val > 0) {
            if (val_loss < best_val) {
                best_val = val_loss;
                best_weights = m.weights;
                best_biases = m.biases;
            }
            if (val_loss < patience_ref - improvement_eps) {
                patience_ref = val_loss;
                epochs_without_improvement = 0;
            } else if (++epochs_without_improvement >= m.spec.patience) {
                break;
            }
        }
    }

    if (n_val > 0 && !best_weights.empty()) {
        m.weights = std::move(best_weights);
        m.biases = std::move(best_biases);
    }
    return m;
}

}  // namespace autotandem
