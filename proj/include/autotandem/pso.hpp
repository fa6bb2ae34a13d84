#pragma once

#include <cstdint>
#include <functional>

#include "autotandem/bounds.hpp"
#include "autotandem/linalg.hpp"

namespace autotandem {

struct PsoConfig {
    int swarm_size = 10;
    double inertia = 0.72;
    double cognitive = 1.49;
    double social = 1.49;
    int max_evals = 100;

    void validate() const;  // swarm_size >= 2, max_evals >= swarm_size
};

using Objective = std::function<double(const Vector&)>;

/// Global-best PSO maximization over a bounded box. Positions are clamped to
/// the bounds, velocities to half the per-dimension range; the search spends
/// exactly cfg.max_evals objective evaluations and returns the best position
/// found. A non-finite objective value raises an error naming the point.
Vector pso_maximize(const Objective& objective, const BoundsBox& b,
                    const PsoConfig& cfg, std::uint64_t seed);

}  // namespace autotandem
