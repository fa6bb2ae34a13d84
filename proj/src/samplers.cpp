#include "autotandem/samplers.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "autotandem/rng.hpp"

namespace autotandem {

namespace {

void require_positive(int n, const char* who) {
    if (n < 1) throw std::invalid_argument(std::string(who) + ": n must be >= 1");
}

}  // namespace

SampleBatch random_sample(const BoundsBox& b, int n, std::uint64_t seed) {
    require_positive(n, "random_sample");
    Rng rng = Rng(seed).derive("random_sample");
    Matrix pts(n, b.dim());
    for (int i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < b.dim(); ++j)
            pts(i, j) = rng.uniform(b.lower[j], b.upper[j]);
    return SampleBatch{std::move(pts)};
}

SampleBatch lhs_sample(const BoundsBox& b, int n, std::uint64_t seed) {
    require_positive(n, "lhs_sample");
    Rng rng = Rng(seed).derive("lhs_sample");
    Matrix pts(n, b.dim());
    std::vector<int> strata(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < b.dim(); ++j) {
        std::iota(strata.begin(), strata.end(), 0);
        for (std::size_t i = strata.size(); i > 1; --i)
            std::swap(strata[i - 1], strata[rng.below(i)]);
        const double width = (b.upper[j] - b.lower[j]) / n;
        for (int i = 0; i < n; ++i) {
            const double u = (strata[static_cast<std::size_t>(i)] + rng.uniform01());
            pts(i, j) = b.lower[j] + u * width;
        }
    }
    return SampleBatch{std::move(pts)};
}

int farthest_candidate(const Matrix& selected_norm, const Matrix& candidates_norm) {
    if (candidates_norm.rows() < 1)
        throw std::invalid_argument("farthest_candidate: empty candidate set");
    int best = 0;
    double best_dist = -1.0;
    for (Eigen::Index c = 0; c < candidates_norm.rows(); ++c) {
        double nearest = std::numeric_limits<double>::infinity();
        for (Eigen::Index s = 0; s < selected_norm.rows(); ++s) {
            const double d2 =
                (candidates_norm.row(c) - selected_norm.row(s)).squaredNorm();
            nearest = std::min(nearest, d2);
        }
        if (nearest > best_dist) {
            best_dist = nearest;
            best = static_cast<int>(c);
        }
    }
    return best;
}

SampleBatch maxmin_sample(const BoundsBox& b, int n, std::uint64_t seed,
                          const CandidateSchedule& schedule,
                          const SelectionObserver& observer) {
    require_positive(n, "maxmin_sample");
    Rng rng = Rng(seed).derive("maxmin_sample");
    const Eigen::Index d = b.dim();

    // All work in normalized coordinates; denormalize at the end. Zero-width
    // dimensions pin to 0 so they contribute nothing to distances.
    const Vector width = b.range();
    auto draw_row = [&](Matrix& target, Eigen::Index row) {
        for (Eigen::Index j = 0; j < d; ++j) {
            const double u = rng.uniform01();
            target(row, j) = width[j] > 0.0 ? u : 0.0;
        }
    };

    Matrix selected(n, d);
    draw_row(selected, 0);

    for (int i = 1; i < n; ++i) {
        const int count = schedule(i);
        if (count < 1)
            throw std::invalid_argument("maxmin_sample: candidate schedule must be positive");
        Matrix cands(count, d);
        for (int c = 0; c < count; ++c) draw_row(cands, c);
        const int chosen = farthest_candidate(selected.topRows(i), cands);
        if (observer) observer(i, cands, chosen);
        selected.row(i) = cands.row(chosen);
    }

    Matrix pts(n, d);
    for (int i = 0; i < n; ++i)
        pts.row(i) = b.denormalize(selected.row(i).transpose()).transpose();
    return SampleBatch{std::move(pts)};
}

SampleBatch greedyfp_sample(const BoundsBox& b, int n, std::uint64_t seed,
                            int candidates_per_iter) {
    return maxmin_sample(b, n, seed, [=](int) { return candidates_per_iter; });
}

SampleBatch bestcandidate_sample(const BoundsBox& b, int n, std::uint64_t seed,
                                 int base) {
    return maxmin_sample(b, n, seed, [=](int iter) { return base * iter; });
}

}  // namespace autotandem
