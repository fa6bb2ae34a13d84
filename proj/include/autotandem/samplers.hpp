#pragma once

#include <cstdint>
#include <functional>

#include "autotandem/bounds.hpp"
#include "autotandem/linalg.hpp"

namespace autotandem {

/// n design points, one per row, all inside the generating bounds.
struct SampleBatch {
    Matrix points;

    Eigen::Index size() const { return points.rows(); }
};

/// i.i.d. uniform per dimension.
SampleBatch random_sample(const BoundsBox& b, int n, std::uint64_t seed);

/// Latin hypercube: per dimension exactly one point in each of the n equal
/// strata, uniform within its stratum, strata permuted independently per
/// dimension.
SampleBatch lhs_sample(const BoundsBox& b, int n, std::uint64_t seed);

/// Candidate count for max-min selection iteration i (1-based: the i-th
/// point after the uniform seed point).
using CandidateSchedule = std::function<int(int iter)>;

/// Observer hook for tests: sees each iteration's candidate set (rows, in
/// bounds-normalized coordinates), the selected index, and the selected
/// candidate's min-distance to the current sample set.
using SelectionObserver =
    std::function<void(int iter, const Matrix& candidates_norm, int chosen)>;

/// Index of the candidate farthest (in Euclidean distance, normalized
/// coordinates) from its nearest already-selected point. Ties keep the
/// earliest candidate.
int farthest_candidate(const Matrix& selected_norm, const Matrix& candidates_norm);

/// Greedy max-min sampler core: first point uniform, then per iteration draw
/// schedule(i) uniform candidates and keep the farthest-from-selected one.
/// Distances are computed in bounds-normalized [0,1]^d space.
SampleBatch maxmin_sample(const BoundsBox& b, int n, std::uint64_t seed,
                          const CandidateSchedule& schedule,
                          const SelectionObserver& observer = {});

/// Constant candidate pool per iteration.
SampleBatch greedyfp_sample(const BoundsBox& b, int n, std::uint64_t seed,
                            int candidates_per_iter = 100);

/// Growing candidate pool: base·i candidates at iteration i.
SampleBatch bestcandidate_sample(const BoundsBox& b, int n, std::uint64_t seed,
                                 int base = 10);

}  // namespace autotandem
