#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>

#include "autotandem/mlp.hpp"
#include "autotandem/model_io.hpp"
#include "autotandem/rng.hpp"
#include "autotandem/tandem.hpp"

using namespace autotandem;

namespace {

MlpSpec small_spec(int in, std::vector<int> hidden, int out) {
    MlpSpec s;
    s.input_dim = in;
    s.hidden = std::move(hidden);
    s.output_dim = out;
    s.epochs = 200;
    s.batch_size = 32;
    s.val_fraction = 0.1;
    s.patience = 10;
    return s;
}

/// Two-layer net computing the identity on nonnegative inputs.
MlpModel identity_net(int dim) {
    MlpSpec s = small_spec(dim, {dim}, dim);
    MlpModel m = mlp_init(s, 0);
    m.weights[0] = Matrix::Identity(dim, dim);
    m.weights[1] = Matrix::Identity(dim, dim);
    m.biases[0].setZero();
    m.biases[1].setZero();
    return m;
}

Matrix random_matrix(Rng& rng, int rows, int cols, double lo, double hi) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
    return m;
}

double loss_value(const MlpModel& m, const Matrix& x, const Matrix& y,
                  LossKind kind, const MlpModel* frozen) {
    return mlp_loss_grad(m, x, y, kind, frozen).loss;
}

/// Hidden-unit sign pattern of the whole computation; central differences are
/// only valid where no ReLU changes side between the two probes.
std::vector<bool> activation_pattern(const MlpModel& m, const Matrix& x,
                                     const MlpModel* frozen) {
    std::vector<bool> pattern;
    auto walk = [&pattern](const MlpModel& net, const Matrix& input) {
        Matrix a = input;
        for (std::size_t l = 0; l < net.layer_count(); ++l) {
            Matrix z = (a * net.weights[l]).rowwise() + net.biases[l].transpose();
            if (l + 1 < net.layer_count()) {
                for (Eigen::Index i = 0; i < z.size(); ++i)
                    pattern.push_back(z(i) > 0.0);
                a = z.cwiseMax(0.0);
            } else {
                a = std::move(z);
            }
        }
        return a;
    };
    const Matrix mid = walk(m, x);
    if (frozen) walk(*frozen, mid);
    return pattern;
}

/// Central-difference check of every parameter coordinate at differentiable
/// points (coordinates whose perturbation flips a ReLU are skipped).
void check_gradients(MlpModel m, const Matrix& x, const Matrix& y, LossKind kind,
                     const MlpModel* frozen, double h, double tol) {
    const LossGrad lg = mlp_loss_grad(m, x, y, kind, frozen);
    int checked = 0;
    auto probe = [&](double& param, double ana) {
        const double saved = param;
        param = saved + h;
        const double up = loss_value(m, x, y, kind, frozen);
        const auto pattern_up = activation_pattern(m, x, frozen);
        param = saved - h;
        const double down = loss_value(m, x, y, kind, frozen);
        const auto pattern_down = activation_pattern(m, x, frozen);
        param = saved;
        if (pattern_up != pattern_down) return;  // straddles a kink
        const double num = (up - down) / (2 * h);
        const double rel =
            std::abs(num - ana) / std::max(1e-8, std::abs(num) + std::abs(ana));
        CHECK(rel < tol);
        ++checked;
    };
    for (std::size_t l = 0; l < m.layer_count(); ++l) {
        for (Eigen::Index r = 0; r < m.weights[l].rows(); ++r)
            for (Eigen::Index c = 0; c < m.weights[l].cols(); ++c)
                probe(m.weights[l](r, c), lg.weight_grads[l](r, c));
        for (Eigen::Index r = 0; r < m.biases[l].size(); ++r)
            probe(m.biases[l][r], lg.bias_grads[l][r]);
    }
    CHECK(checked > 0);
}

}  // namespace

TEST_CASE("mlp_init builds the requested layer chain deterministically") {
    MlpSpec spec = small_spec(5, {64, 128, 256, 128, 64}, 75);
    const MlpModel a = mlp_init(spec, 11);
    const MlpModel b = mlp_init(spec, 11);
    REQUIRE(a.layer_count() == 6);
    const int expected[][2] = {{5, 64},   {64, 128}, {128, 256},
                               {256, 128}, {128, 64}, {64, 75}};
    for (std::size_t l = 0; l < a.layer_count(); ++l) {
        CHECK(a.weights[l].rows() == expected[l][0]);
        CHECK(a.weights[l].cols() == expected[l][1]);
        CHECK(a.weights[l] == b.weights[l]);  // bit-identical
    }
    const MlpModel c = mlp_init(spec, 12);
    CHECK(a.weights[0] != c.weights[0]);

    MlpSpec bad = spec;
    bad.hidden.clear();
    CHECK_THROWS_AS(mlp_init(bad, 1), std::invalid_argument);
}

TEST_CASE("mlp_forward basics") {
    MlpSpec spec = small_spec(2, {3}, 2);
    MlpModel zero = mlp_init(spec, 3);
    for (auto& w : zero.weights) w.setZero();
    Matrix x(4, 2);
    x << 1, 2, -1, 0.5, 3, -2, 0, 0;
    CHECK(mlp_forward(zero, x).isZero(0.0));

    const MlpModel id = identity_net(2);
    Matrix pos(3, 2);
    pos << 0.5, 1.0, 2.0, 0.1, 0.0, 3.0;
    CHECK(mlp_forward(id, pos).isApprox(pos, 1e-15));

    CHECK_THROWS_AS(mlp_forward(id, Matrix(2, 3)), std::invalid_argument);
}

TEST_CASE("mlp_forward matches a worked 1-2-1 example") {
    MlpSpec spec = small_spec(1, {2}, 1);
    MlpModel m = mlp_init(spec, 0);
    m.weights[0] << 2.0, -3.0;
    m.biases[0] << 0.5, 1.0;
    m.weights[1] << 1.0, 2.0;
    m.biases[1] << -0.25;
    Matrix x(1, 1);
    x << 0.4;
    // hidden = relu([1.3, -0.2]) = [1.3, 0]; out = 1.3 - 0.25
    CHECK(mlp_forward(m, x)(0, 0) == doctest::Approx(1.05).epsilon(1e-15));
}

TEST_CASE("analytic gradients match central differences (rmse loss)") {
    Rng rng(424);
    for (int probe = 0; probe < 10; ++probe) {
        MlpSpec spec = small_spec(3, {4}, 2);
        MlpModel m = mlp_init(spec, 1000 + probe);
        const Matrix x = random_matrix(rng, 6, 3, -1.0, 1.0);
        const Matrix y = random_matrix(rng, 6, 2, -1.0, 1.0);
        check_gradients(m, x, y, LossKind::rmse, nullptr, 1e-5, 1e-4);
    }
}

TEST_CASE("analytic gradients match central differences (tandem loss)") {
    Rng rng(555);
    for (int probe = 0; probe < 10; ++probe) {
        MlpSpec inv_spec = small_spec(3, {4}, 2);
        MlpModel inv = mlp_init(inv_spec, 2000 + probe);
        MlpSpec fwd_spec = small_spec(2, {5}, 3);
        const MlpModel frozen = mlp_init(fwd_spec, 3000 + probe);
        const Matrix x = random_matrix(rng, 6, 3, -1.0, 1.0);
        const Matrix y = random_matrix(rng, 6, 2, -1.0, 1.0);
        check_gradients(inv, x, y, LossKind::tandem, &frozen, 1e-5, 1e-4);
    }
}

TEST_CASE("gradients include the L2 penalty") {
    Rng rng(808);
    MlpSpec spec = small_spec(3, {4}, 2);
    spec.l2 = 0.05;
    MlpModel m = mlp_init(spec, 4242);
    const Matrix x = random_matrix(rng, 5, 3, -1.0, 1.0);
    const Matrix y = random_matrix(rng, 5, 2, -1.0, 1.0);
    check_gradients(m, x, y, LossKind::rmse, nullptr, 1e-5, 1e-4);
}

TEST_CASE("mlp_train learns y = 2x") {
    Rng rng(909);
    const int n = 200;
    Matrix x(n, 1), y(n, 1);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = rng.uniform01();       // already in [0,1]
        y(i, 0) = x(i, 0);               // y = 2x scaled back onto [0,1]
    }
    MlpSpec spec = small_spec(1, {16}, 1);
    spec.epochs = 300;
    MlpModel m = mlp_init(spec, 7);
    m = mlp_train(std::move(m), x, y, LossKind::rmse, nullptr, 8);
    CHECK(m.loss_history.back().first < 0.05);
}

TEST_CASE("training loss trends downward over 50-epoch windows") {
    Rng rng(1001);
    const int n = 150;
    Matrix x = random_matrix(rng, n, 2, 0.0, 1.0);
    Matrix y(n, 2);
    for (int i = 0; i < n; ++i) {
        y(i, 0) = 0.7 * x(i, 0) + 0.2 * x(i, 1);
        y(i, 1) = x(i, 0) * x(i, 1);
    }
    MlpSpec spec = small_spec(2, {16}, 2);
    spec.epochs = 300;
    spec.val_fraction = 0.0;  // run every epoch; the trend is on train loss
    MlpModel m = mlp_init(spec, 3);
    m = mlp_train(std::move(m), x, y, LossKind::rmse, nullptr, 4);
    REQUIRE(m.loss_history.size() == 300);
    double prev_window = std::numeric_limits<double>::infinity();
    for (int w = 0; w < 6; ++w) {
        double avg = 0.0;
        for (int e = 0; e < 50; ++e) avg += m.loss_history[size_t(50 * w + e)].first;
        avg /= 50.0;
        CHECK(avg <= prev_window);
        prev_window = avg;
    }
}

TEST_CASE("tandem loss with an identity forward net reduces to reconstruction") {
    Rng rng(321);
    const MlpModel frozen = identity_net(2);
    const Matrix y = random_matrix(rng, 100, 2, 0.1, 0.9);
    const Matrix x_targets = random_matrix(rng, 100, 2, 0.0, 1.0);  // unused by the loss

    MlpSpec spec = small_spec(2, {16}, 2);
    spec.epochs = 300;
    MlpModel inv = mlp_init(spec, 55);
    const std::vector<Matrix> frozen_weights = frozen.weights;
    inv = mlp_train(std::move(inv), y, x_targets, LossKind::tandem, &frozen, 56);

    // the frozen net must be untouched, bit for bit
    for (std::size_t l = 0; l < frozen.layer_count(); ++l)
        CHECK(frozen.weights[l] == frozen_weights[l]);

    // composed loss approached plain reconstruction: inv(y) ≈ y
    const Matrix recon = mlp_forward(inv, y);
    CHECK(std::sqrt((recon - y).squaredNorm() / double(y.size())) < 0.1);
}

TEST_CASE("early stopping restores the minimum-validation weights") {
    Rng rng(616);
    const Matrix x = random_matrix(rng, 40, 2, 0.0, 1.0);
    Matrix y = x * 0.7;
    MlpSpec spec = small_spec(2, {8}, 2);
    spec.epochs = 400;
    spec.learning_rate = 1e-3;
    spec.val_fraction = 0.2;
    const std::uint64_t train_seed = 99;
    MlpModel m = mlp_init(spec, 98);
    m = mlp_train(std::move(m), x, y, LossKind::rmse, nullptr, train_seed);

    // history ends within patience epochs of the recorded minimum
    std::size_t argmin = 0;
    for (std::size_t e = 0; e < m.loss_history.size(); ++e)
        if (m.loss_history[e].second < m.loss_history[argmin].second) argmin = e;
    CHECK(m.loss_history.size() <= argmin + 1 + std::size_t(spec.patience));

    // replicate the split (one seeded shuffle, last 20% held out) and verify
    // the returned weights reproduce the minimum recorded validation loss
    std::vector<Eigen::Index> perm(40);
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    Rng split_rng = Rng(train_seed).derive("split");
    for (std::size_t i = perm.size(); i > 1; --i)
        std::swap(perm[i - 1], perm[split_rng.below(i)]);
    const Eigen::Index n_val = 8;
    Matrix xv(n_val, 2), yv(n_val, 2);
    for (Eigen::Index i = 0; i < n_val; ++i) {
        xv.row(i) = x.row(perm[std::size_t(40 - n_val + i)]);
        yv.row(i) = y.row(perm[std::size_t(40 - n_val + i)]);
    }
    const Matrix pred = mlp_forward(m, xv);
    const double val = std::sqrt((pred - yv).squaredNorm() / double(yv.size()));
    CHECK(val == doctest::Approx(m.loss_history[argmin].second).epsilon(1e-12));
}

TEST_CASE("patience halts training when validation never improves") {
    // A zero net on zero targets sits at loss 0 with zero gradient, so no
    // epoch after the first can improve: patience=10 must stop the run by
    // epoch 11 with the epoch-1 weights intact.
    Rng rng(717);
    const Matrix x = random_matrix(rng, 30, 2, 0.0, 1.0);
    const Matrix y = Matrix::Zero(30, 2);
    MlpSpec spec = small_spec(2, {8}, 2);
    spec.epochs = 200;
    spec.val_fraction = 0.2;
    MlpModel m = mlp_init(spec, 1);
    for (auto& w : m.weights) w.setZero();
    m = mlp_train(std::move(m), x, y, LossKind::rmse, nullptr, 2);
    CHECK(m.loss_history.size() == 11);  // epoch 1 + patience epochs
    CHECK(m.loss_history.size() <= 12);
    for (const auto& [train, val] : m.loss_history) {
        CHECK(train == 0.0);
        CHECK(val == 0.0);
    }
    for (const auto& w : m.weights) CHECK(w.isZero(0.0));  // epoch-1 weights
}

TEST_CASE("chaotic training still obeys the early-stop window") {
    Rng rng(718);
    const Matrix x = random_matrix(rng, 30, 2, 0.0, 1.0);
    const Matrix y = x * 0.5;
    MlpSpec spec = small_spec(2, {8}, 2);
    spec.epochs = 200;
    spec.learning_rate = 50.0;  // wildly unstable on purpose
    spec.val_fraction = 0.2;
    MlpModel m = mlp_init(spec, 1);
    m = mlp_train(std::move(m), x, y, LossKind::rmse, nullptr, 2);
    CHECK(m.loss_history.size() < 200);
    std::size_t argmin = 0;
    for (std::size_t e = 0; e < m.loss_history.size(); ++e)
        if (m.loss_history[e].second < m.loss_history[argmin].second) argmin = e;
    CHECK(m.loss_history.size() <= argmin + 1 + std::size_t(spec.patience));
}

TEST_CASE("training is deterministic in the seed") {
    Rng rng(818);
    const Matrix x = random_matrix(rng, 50, 3, 0.0, 1.0);
    const Matrix y = random_matrix(rng, 50, 2, 0.0, 1.0);
    MlpSpec spec = small_spec(3, {8}, 2);
    spec.epochs = 50;
    MlpModel a = mlp_train(mlp_init(spec, 5), x, y, LossKind::rmse, nullptr, 6);
    MlpModel b = mlp_train(mlp_init(spec, 5), x, y, LossKind::rmse, nullptr, 6);
    REQUIRE(a.loss_history.size() == b.loss_history.size());
    for (std::size_t e = 0; e < a.loss_history.size(); ++e) {
        CHECK(a.loss_history[e].first == b.loss_history[e].first);
        CHECK(a.loss_history[e].second == b.loss_history[e].second);
    }
    for (std::size_t l = 0; l < a.layer_count(); ++l)
        CHECK(a.weights[l] == b.weights[l]);
}

TEST_CASE("mlp_train rejects undersized datasets") {
    MlpSpec spec = small_spec(1, {4}, 1);
    Matrix x(2, 1), y(2, 1);
    x << 0, 1;
    y << 0, 1;
    // 2 samples minus 1 validation row leaves a single training sample
    CHECK_THROWS_AS(
        mlp_train(mlp_init(spec, 1), x, y, LossKind::rmse, nullptr, 2),
        std::invalid_argument);
}

TEST_CASE("tandem_fit recovers an affine bijection") {
    Rng rng(2718);
    const int n = 300, d = 3;
    Matrix a(d, d);
    a << 1.0, 0.2, -0.1, 0.0, 0.8, 0.3, 0.2, -0.1, 1.1;
    Vector b(d);
    b << 0.5, -0.2, 1.0;

    LabeledDataset data;
    data.x = random_matrix(rng, n, d, 0.0, 1.0);
    data.y = (data.x * a.transpose()).rowwise() + b.transpose();

    MlpSpec spec = small_spec(d, {24, 24}, d);
    spec.epochs = 500;
    const TandemModel t = tandem_fit(data, spec, 31415);

    // held-out responses reconstructed through the true map
    const Matrix x_test = random_matrix(rng, 200, d, 0.05, 0.95);
    const Matrix y_test = (x_test * a.transpose()).rowwise() + b.transpose();
    const Matrix x_hat = tandem_predict_design(t, y_test);
    const Matrix y_recon = (x_hat * a.transpose()).rowwise() + b.transpose();

    double ss_res = 0.0, ss_tot = 0.0;
    for (int j = 0; j < d; ++j) {
        const double mean = y_test.col(j).mean();
        ss_res += (y_test.col(j) - y_recon.col(j)).squaredNorm();
        ss_tot += (y_test.col(j).array() - mean).matrix().squaredNorm();
    }
    CHECK(1.0 - ss_res / ss_tot > 0.95);
}

TEST_CASE("tandem_fit preconditions and determinism") {
    Rng rng(141);
    LabeledDataset tiny;
    tiny.x = random_matrix(rng, 10, 2, 0.0, 1.0);
    tiny.y = tiny.x;
    MlpSpec spec = small_spec(2, {8}, 2);
    CHECK_THROWS_AS(tandem_fit(tiny, spec, 1), std::invalid_argument);

    LabeledDataset data;
    data.x = random_matrix(rng, 40, 2, 0.0, 1.0);
    data.y = data.x * 2.0;
    spec.epochs = 30;
    const TandemModel t1 = tandem_fit(data, spec, 9);
    const TandemModel t2 = tandem_fit(data, spec, 9);
    REQUIRE(t1.forward_net.loss_history.size() == t2.forward_net.loss_history.size());
    for (std::size_t e = 0; e < t1.forward_net.loss_history.size(); ++e)
        CHECK(t1.forward_net.loss_history[e] == t2.forward_net.loss_history[e]);
    for (std::size_t e = 0; e < t1.inverse_net.loss_history.size(); ++e)
        CHECK(t1.inverse_net.loss_history[e] == t2.inverse_net.loss_history[e]);
}

TEST_CASE("tandem_predict_design applies scalers around the inverse net") {
    TandemModel t;
    t.forward_net = identity_net(2);
    t.inverse_net = identity_net(2);
    t.x_scaler = ScalerParams::identity(2);
    t.y_scaler = ScalerParams::identity(2);
    Vector y(2);
    y << 0.25, 0.75;
    CHECK(tandem_predict_design(t, y).isApprox(y, 1e-15));

    Vector wrong(3);
    CHECK_THROWS_AS(tandem_predict_design(t, wrong), std::invalid_argument);
}

TEST_CASE("tandem model json round trip preserves predictions bit for bit") {
    Rng rng(995);
    LabeledDataset data;
    data.x = random_matrix(rng, 30, 2, 0.0, 2.0);
    data.y = data.x * 1.5;
    MlpSpec spec = small_spec(2, {6}, 2);
    spec.epochs = 20;
    const TandemModel t = tandem_fit(data, spec, 4);

    const auto path = std::filesystem::temp_directory_path() / "tandem_roundtrip.json";
    save_tandem(t, path);
    const TandemModel back = load_tandem(path);
    std::filesystem::remove(path);

    Vector y(2);
    y << 1.0, 2.0;
    const Vector p1 = tandem_predict_design(t, y);
    const Vector p2 = tandem_predict_design(back, y);
    CHECK(p1 == p2);
    CHECK(back.tandem_loss_space == "scaled");
}
