#include "autotandem/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace autotandem {

static void check_shapes(const Matrix& y, const Matrix& yhat, const char* who) {
    if (y.rows() != yhat.rows() || y.cols() != yhat.cols())
        throw std::invalid_argument(std::string(who) + ": shape mismatch");
    if (y.rows() < 1 || y.cols() < 1)
        throw std::invalid_argument(std::string(who) + ": empty matrices");
}

double rmse(const Matrix& y, const Matrix& yhat) {
    check_shapes(y, yhat, "rmse");
    const double mse = (y - yhat).squaredNorm() /
                       static_cast<double>(y.rows() * y.cols());
    return std::sqrt(mse);
}

double r2(const Matrix& y, const Matrix& yhat) {
    check_shapes(y, yhat, "r2");
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
        const double col_mean = y.col(j).mean();
        ss_res += (y.col(j) - yhat.col(j)).squaredNorm();
        ss_tot += (y.col(j).array() - col_mean).matrix().squaredNorm();
    }
    if (ss_tot <= 0.0)
        throw std::domain_error("r2: all truth columns are constant");
    return 1.0 - ss_res / ss_tot;
}

double nmae(const Matrix& y, const Matrix& yhat) {
    check_shapes(y, yhat, "nmae");
    double acc = 0.0;
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
        const double col_mean = y.col(j).mean();
        const double max_err = (y.col(j) - yhat.col(j)).cwiseAbs().maxCoeff();
        const double max_dev = (y.col(j).array() - col_mean).abs().maxCoeff();
        if (max_dev <= 0.0)
            throw std::domain_error("nmae: zero-deviation truth column " +
                                    std::to_string(j));
        acc += max_err / max_dev;
    }
    return acc / static_cast<double>(y.cols());
}

MetricsReport compute_metrics(const Matrix& y, const Matrix& yhat) {
    return MetricsReport{rmse(y, yhat), r2(y, yhat), nmae(y, yhat)};
}

SummaryStats summarize(std::span<const double> values) {
    if (values.empty())
        throw std::invalid_argument("summarize: empty list");
    SummaryStats s;
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(sq / static_cast<double>(values.size()));
    return s;
}

}  // namespace autotandem
