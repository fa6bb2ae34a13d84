#pragma once

#include <span>

#include "autotandem/linalg.hpp"

namespace autotandem {

/// Multi-output regression scores of a prediction matrix against the truth.
struct MetricsReport {
    double rmse = 0.0;
    double r2 = 0.0;
    double nmae = 0.0;
};

/// Root mean square error pooled over all n·p entries.
double rmse(const Matrix& y, const Matrix& yhat);

/// Coefficient of determination with per-column means, columns pooled:
/// 1 − Σ_j Σ_i (y_ij − ŷ_ij)² / Σ_j Σ_i (y_ij − ȳ_j)².
/// Throws if every column of y is constant (zero denominator).
double r2(const Matrix& y, const Matrix& yhat);

/// Normalized maximum absolute error, averaged over columns:
/// (1/p) Σ_j max_i|y_ij − ŷ_ij| / max_i|y_ij − ȳ_j|.
/// Throws if any column of y has zero maximum deviation from its mean.
double nmae(const Matrix& y, const Matrix& yhat);

MetricsReport compute_metrics(const Matrix& y, const Matrix& yhat);

/// Descriptive statistics of repeated-run results.
struct SummaryStats {
    double mean = 0.0;
    double std = 0.0;  // population standard deviation
    double max = 0.0;
    double min = 0.0;
};

SummaryStats summarize(std::span<const double> values);

}  // namespace autotandem
