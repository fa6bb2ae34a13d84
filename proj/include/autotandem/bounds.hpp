#pragma once

#include <stdexcept>

#include "autotandem/linalg.hpp"

namespace autotandem {

/// Axis-aligned design-space box: per-dimension lower/upper limits.
struct BoundsBox {
    Vector lower;
    Vector upper;

    BoundsBox() = default;
    BoundsBox(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi)) {
        if (lower.size() != upper.size())
            throw std::invalid_argument("BoundsBox: lower/upper length mismatch");
        for (Eigen::Index i = 0; i < lower.size(); ++i)
            if (!(lower[i] <= upper[i]))
                throw std::invalid_argument("BoundsBox: lower > upper at dimension " +
                                            std::to_string(i));
    }

    Eigen::Index dim() const { return lower.size(); }

    Vector range() const { return upper - lower; }

    bool contains(const Vector& x) const {
        if (x.size() != dim()) return false;
        for (Eigen::Index i = 0; i < dim(); ++i)
            if (x[i] < lower[i] || x[i] > upper[i]) return false;
        return true;
    }

    Vector clamp(const Vector& x) const {
        return x.cwiseMax(lower).cwiseMin(upper);
    }

    /// Map into [0,1]^d. Zero-width dimensions map to 0.
    Vector normalize(const Vector& x) const {
        Vector z(dim());
        for (Eigen::Index i = 0; i < dim(); ++i) {
            const double w = upper[i] - lower[i];
            z[i] = w > 0.0 ? (x[i] - lower[i]) / w : 0.0;
        }
        return z;
    }

    Vector denormalize(const Vector& z) const {
        Vector x(dim());
        for (Eigen::Index i = 0; i < dim(); ++i)
            x[i] = lower[i] + z[i] * (upper[i] - lower[i]);
        return x;
    }
};

}  // namespace autotandem
