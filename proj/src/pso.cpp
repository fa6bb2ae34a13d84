#include "autotandem/pso.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "autotandem/rng.hpp"

namespace autotandem {

void PsoConfig::validate() const {
    if (swarm_size < 2)
        throw std::invalid_argument("PsoConfig: swarm_size must be at least 2");
    if (max_evals < swarm_size)
        throw std::invalid_argument("PsoConfig: max_evals must cover one swarm evaluation");
    if (!(inertia >= 0.0) || !(cognitive >= 0.0) || !(social >= 0.0))
        throw std::invalid_argument("PsoConfig: coefficients must be nonnegative");
}

namespace {

double checked_eval(const Objective& objective, const Vector& x) {
    const double v = objective(x);
    if (!std::isfinite(v)) {
        std::ostringstream oss;
        oss << "pso_maximize: non-finite objective at [";
        for (Eigen::Index i = 0; i < x.size(); ++i)
            oss << (i ? ", " : "") << x[i];
        oss << "]";
        throw std::runtime_error(oss.str());
    }
    return v;
}

}  // namespace

Vector pso_maximize(const Objective& objective, const BoundsBox& b,
                    const PsoConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Rng rng = Rng(seed).derive("pso");
    const Eigen::Index d = b.dim();
    const Vector vmax = 0.5 * b.range();

    Matrix pos(cfg.swarm_size, d);
    Matrix vel = Matrix::Zero(cfg.swarm_size, d);
    for (int i = 0; i < cfg.swarm_size; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            pos(i, j) = rng.uniform(b.lower[j], b.upper[j]);

    Matrix personal_best = pos;
    std::vector<double> personal_value(static_cast<std::size_t>(cfg.swarm_size));
    Vector global_best;
    double global_value = -std::numeric_limits<double>::infinity();

    int evals = 0;
    for (int i = 0; i < cfg.swarm_size; ++i) {
        const double v = checked_eval(objective, pos.row(i).transpose());
        ++evals;
        personal_value[static_cast<std::size_t>(i)] = v;
        if (v > global_value) {
            global_value = v;
            global_best = pos.row(i).transpose();
        }
    }

    while (evals < cfg.max_evals) {
        for (int i = 0; i < cfg.swarm_size && evals < cfg.max_evals; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) {
                const double r1 = rng.uniform01();
                const double r2 = rng.uniform01();
                double v = cfg.inertia * vel(i, j) +
                           cfg.cognitive * r1 * (personal_best(i, j) - pos(i, j)) +
                           cfg.social * r2 * (global_best[j] - pos(i, j));
                v = std::clamp(v, -vmax[j], vmax[j]);
                vel(i, j) = v;
                pos(i, j) = std::clamp(pos(i, j) + v, b.lower[j], b.upper[j]);
            }
            const double value = checked_eval(objective, pos.row(i).transpose());
            ++evals;
            if (value > personal_value[static_cast<std::size_t>(i)]) {
                personal_value[static_cast<std::size_t>(i)] = value;
                personal_best.row(i) = pos.row(i);
            }
            if (value > global_value) {
                global_value = value;
                global_best = pos.row(i).transpose();
            }
        }
    }
    return global_best;
}

}  // namespace autotandem
