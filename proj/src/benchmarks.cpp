#include "autotandem/benchmarks.hpp"

#include <cmath>
#include <stdexcept>

#include "autotandem/rng.hpp"

namespace autotandem {

Matrix evaluate_rows(const BenchmarkProblem& prob, const Matrix& x) {
    if (x.cols() != prob.design_dim)
        throw std::invalid_argument(prob.name + ": design dimension mismatch");
    Matrix y(x.rows(), prob.response_dim);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const Vector yi = prob.evaluate(x.row(i).transpose());
        if (yi.size() != prob.response_dim)
            throw std::runtime_error(prob.name + ": wrong response length at row " +
                                     std::to_string(i));
        for (Eigen::Index j = 0; j < yi.size(); ++j)
            if (!std::isfinite(yi[j]))
                throw std::runtime_error(prob.name + ": non-finite response at row " +
                                         std::to_string(i));
        y.row(i) = yi.transpose();
    }
    return y;
}

Matrix sbr_solve(const Vector& bc_top, double dt) {
    if (bc_top.size() != kSbrCells)
        throw std::invalid_argument("sbr_solve: expected " + std::to_string(kSbrCells) +
                                    " boundary values");
    for (Eigen::Index i = 0; i < bc_top.size(); ++i)
        if (!std::isfinite(bc_top[i]))
            throw std::invalid_argument("sbr_solve: non-finite boundary value");

    constexpr int n = kSbrCells;
    constexpr double h = 1.0 / n;
    const double stability = 0.5 * h * h / (4.0 * kSbrDiffusivity);
    if (!(dt > 0.0) || dt > stability)
        throw std::invalid_argument("sbr_solve: dt must be in (0, " +
                                    std::to_string(stability) + "]");
    const double steps_real = kSbrEndTime / dt;
    const long steps = std::lround(steps_real);
    if (std::abs(steps_real - static_cast<double>(steps)) > 1e-9)
        throw std::invalid_argument("sbr_solve: dt must divide the end time");

    const double alpha = kSbrDiffusivity * dt / (h * h);
    Matrix cur = Matrix::Zero(n, n);
    Matrix nxt(n, n);
    for (long step = 0; step < steps; ++step) {
        for (int ix = 0; ix < n; ++ix) {
            for (int iy = 0; iy < n; ++iy) {
                const double c = cur(ix, iy);
                // Zero-flux faces contribute nothing; the top face imposes
                // the Dirichlet value at the face itself.
                double lap = 0.0;
                if (ix > 0) lap += cur(ix - 1, iy) - c;
                if (ix < n - 1) lap += cur(ix + 1, iy) - c;
                if (iy > 0) lap += cur(ix, iy - 1) - c;
                if (iy < n - 1)
                    lap += cur(ix, iy + 1) - c;
                else
                    lap += 2.0 * (bc_top[ix] - c);
                nxt(ix, iy) = c + alpha * lap;
            }
        }
        cur.swap(nxt);
    }
    return cur;
}

Matrix sbr_measurement_points() {
    static const double xs[] = {0.1, 0.3, 0.5, 0.7, 0.9};
    static const double ys[] = {0.15, 0.3, 0.45, 0.6, 0.75, 0.9};
    Matrix pts(30, 2);
    int k = 0;
    for (double x : xs)
        for (double y : ys) {
            pts(k, 0) = x;
            pts(k, 1) = y;
            ++k;
        }
    return pts;
}

Vector sbr_measure(const Matrix& field) {
    if (field.rows() != kSbrCells || field.cols() != kSbrCells)
        throw std::invalid_argument("sbr_measure: expected a 20x20 field");
    constexpr double h = 1.0 / kSbrCells;
    const Matrix pts = sbr_measurement_points();
    Vector out(pts.rows());
    for (Eigen::Index k = 0; k < pts.rows(); ++k) {
        const double u = pts(k, 0) / h - 0.5;
        const double v = pts(k, 1) / h - 0.5;
        const int i0 = std::clamp(static_cast<int>(std::floor(u)), 0, kSbrCells - 2);
        const int j0 = std::clamp(static_cast<int>(std::floor(v)), 0, kSbrCells - 2);
        const double fx = u - i0;
        const double fy = v - j0;
        out[k] = (1 - fx) * (1 - fy) * field(i0, j0) +
                 fx * (1 - fy) * field(i0 + 1, j0) +
                 (1 - fx) * fy * field(i0, j0 + 1) +
                 fx * fy * field(i0 + 1, j0 + 1);
    }
    return out;
}

BenchmarkProblem sbr_problem() {
    BenchmarkProblem p;
    p.name = "sbr";
    p.design_dim = kSbrCells;
    p.response_dim = 30;
    p.bounds = BoundsBox(Vector::Zero(kSbrCells), Vector::Constant(kSbrCells, 30.0));
    for (int i = 1; i <= kSbrCells; ++i) p.dim_names.push_back("bc_" + std::to_string(i));
    p.evaluate = [](const Vector& bc) { return sbr_measure(sbr_solve(bc)); };
    return p;
}

BenchmarkProblem aidlike_problem() {
    BenchmarkProblem p;
    p.name = "aidlike";
    p.design_dim = 5;
    p.response_dim = 75;
    Vector lo(5), hi(5);
    lo << 0.02, 0.2, 0.06, 4e6, 0.0;
    hi << 0.09, 0.7, 0.15, 6e6, 7.0;
    p.bounds = BoundsBox(lo, hi);
    p.dim_names = {"m", "p", "t", "Re", "alpha"};
    const BoundsBox bounds = p.bounds;
    p.evaluate = [bounds](const Vector& x) {
        const Vector u = bounds.normalize(x);
        Vector y(75);
        for (int j = 0; j < 75; ++j) {
            const double s = static_cast<double>(j) / 74.0;
            y[j] = u[0] * std::sin(2.0 * M_PI * u[1] * s) * std::exp(-3.0 * u[2] * s) +
                   0.5 * u[3] * (1.0 - s) * (1.0 - s) + u[4] * s;
        }
        return y;
    };
    return p;
}

BenchmarkProblem psidlike_problem() {
    BenchmarkProblem p;
    p.name = "psidlike";
    p.design_dim = 3;
    p.response_dim = 822;
    Vector lo(3), hi(3);
    lo << 0.2, 10.0, 0.02;
    hi << 1.3, 700.0, 28.0;
    p.bounds = BoundsBox(lo, hi);
    p.dim_names = {"Lp", "Ss", "Sp"};
    const BoundsBox bounds = p.bounds;
    p.evaluate = [bounds](const Vector& x) {
        const Vector u = bounds.normalize(x);
        Vector y(822);
        for (int j = 0; j < 822; ++j) {
            const double w = static_cast<double>(j) / 821.0;
            const double gate = 1.0 / (1.0 + std::exp(-4.0 * (u[0] - w)));
            const double envelope =
                0.3 + 0.6 * u[1] * std::exp(-(w - u[2]) * (w - u[2]) / 0.05);
            y[j] = gate * envelope;
        }
        return y;
    };
    return p;
}

BenchmarkProblem get_problem(const std::string& name) {
    if (name == "sbr") return sbr_problem();
    if (name == "aidlike") return aidlike_problem();
    if (name == "psidlike") return psidlike_problem();
    throw std::invalid_argument("unknown benchmark '" + name +
                                "' (expected sbr, aidlike or psidlike)");
}

std::vector<std::string> problem_names() { return {"sbr", "aidlike", "psidlike"}; }

TestSet make_test_set(const BenchmarkProblem& prob, int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("make_test_set: n must be >= 1");
    Rng rng = Rng(seed).derive("testset");
    Matrix tx(n, prob.design_dim);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < prob.design_dim; ++j)
            tx(i, j) = rng.uniform(prob.bounds.lower[j], prob.bounds.upper[j]);
    Matrix ty = evaluate_rows(prob, tx);
    return TestSet{std::move(tx), std::move(ty)};
}

}  // namespace autotandem
