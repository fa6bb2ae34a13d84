#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "autotandem/bounds.hpp"
#include "autotandem/linalg.hpp"

namespace autotandem {

/// A built-in high-fidelity problem: the response function H plus its
/// design-space description.
struct BenchmarkProblem {
    std::string name;
    int design_dim = 0;
    int response_dim = 0;
    BoundsBox bounds;
    std::vector<std::string> dim_names;
    std::function<Vector(const Vector&)> evaluate;
};

/// Row-wise evaluation with response validation; throws naming the row on a
/// wrong-length or non-finite response.
Matrix evaluate_rows(const BenchmarkProblem& prob, const Matrix& x);

// --- Scalar boundary reconstruction -----------------------------------------
//
// Unit-square diffusion ∂c/∂t = D∇²c, D = 1, solved by an explicit
// finite-volume scheme on a 20×20 cell grid from c ≡ 0 to t = 0.1 s. The 20
// top-boundary faces carry Dirichlet values bc_top; left/right/bottom are
// zero-flux. The field is indexed (ix, iy) with iy = 19 at the top.

inline constexpr int kSbrCells = 20;
inline constexpr double kSbrDiffusivity = 1.0;
inline constexpr double kSbrEndTime = 0.1;
inline constexpr double kSbrDefaultDt = 2e-4;

/// Cell-centered field at t = 0.1. dt above half the explicit stability
/// limit h²/(4D) is rejected as a configuration error.
Matrix sbr_solve(const Vector& bc_top, double dt = kSbrDefaultDt);

/// Bilinear interpolation of the field at 30 fixed interior points
/// (x ∈ {0.1,…,0.9} × y ∈ {0.15,…,0.9}, x-major order).
Vector sbr_measure(const Matrix& field);

/// The 30 measurement locations, one (x, y) row each.
Matrix sbr_measurement_points();

BenchmarkProblem sbr_problem();

// --- Analytic stand-ins ------------------------------------------------------
// Smooth, deterministic, non-bijective responses with the airfoil and
// photonic-surface design-space dimensions and bounds. The formulas are
// frozen constants of this repository.

BenchmarkProblem aidlike_problem();
BenchmarkProblem psidlike_problem();

/// Lookup by name: "sbr", "aidlike", "psidlike".
BenchmarkProblem get_problem(const std::string& name);
std::vector<std::string> problem_names();

// --- Test sets ---------------------------------------------------------------

struct TestSet {
    Matrix tx;
    Matrix ty;
};

/// Uniform-random designs evaluated through the problem. The RNG stream is
/// derived with a dedicated tag so it never collides with training streams.
TestSet make_test_set(const BenchmarkProblem& prob, int n, std::uint64_t seed);

}  // namespace autotandem
