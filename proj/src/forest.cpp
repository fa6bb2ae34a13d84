#include "autotandem/forest.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "autotandem/rng.hpp"

namespace autotandem {

Vector RegressionTree::predict(const Vector& x) const {
    int node = 0;
    while (feature[node] >= 0)
        node = x[feature[node]] <= threshold[node] ? left[node] : right[node];
    return leaf_values.row(leaf[node]).transpose();
}

namespace {

struct TreeBuilder {
    const Matrix& x;
    const Matrix& y;
    RegressionTree tree;
    std::vector<Vector> leaves;

    int new_node() {
        tree.feature.push_back(-1);
        tree.threshold.push_back(0.0);
        tree.left.push_back(-1);
        tree.right.push_back(-1);
        tree.leaf.push_back(-1);
        return static_cast<int>(tree.feature.size()) - 1;
    }

    int make_leaf(const std::vector<int>& idx) {
        const int node = new_node();
        Vector mean = Vector::Zero(y.cols());
        for (int i : idx) mean += y.row(i).transpose();
        mean /= static_cast<double>(idx.size());
        tree.leaf[node] = static_cast<int>(leaves.size());
        leaves.push_back(std::move(mean));
        return node;
    }

    // Sum over outputs of squared deviation from the node mean.
    double node_sse(const std::vector<int>& idx) const {
        Vector sum = Vector::Zero(y.cols());
        double sq = 0.0;
        for (int i : idx) {
            sum += y.row(i).transpose();
            sq += y.row(i).squaredNorm();
        }
        return sq - sum.squaredNorm() / static_cast<double>(idx.size());
    }

    int build(std::vector<int> idx) {
        const double sse = node_sse(idx);
        if (idx.size() < 2 || sse <= 1e-24) return make_leaf(idx);

        // Exhaustive scan: every feature, every midpoint between adjacent
        // distinct sorted values, minimizing total child SSE.
        int best_feature = -1;
        double best_threshold = 0.0;
        double best_cost = sse;
        std::vector<int> sorted = idx;
        const Eigen::Index p = y.cols();
        Vector left_sum(p);
        for (int f = 0; f < x.cols(); ++f) {
            std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
                return x(a, f) < x(b, f) || (x(a, f) == x(b, f) && a < b);
            });
            left_sum.setZero();
            double left_sq = 0.0;
            Vector total_sum = Vector::Zero(p);
            double total_sq = 0.0;
            for (int i : sorted) {
                total_sum += y.row(i).transpose();
                total_sq += y.row(i).squaredNorm();
            }
            const std::size_t n = sorted.size();
            for (std::size_t k = 0; k + 1 < n; ++k) {
                const int i = sorted[k];
                left_sum += y.row(i).transpose();
                left_sq += y.row(i).squaredNorm();
                const double xv = x(i, f);
                const double xn = x(sorted[k + 1], f);
                if (xn <= xv) continue;  // no boundary between equal values
                const double nl = static_cast<double>(k + 1);
                const double nr = static_cast<double>(n - k - 1);
                const double sse_l = left_sq - left_sum.squaredNorm() / nl;
                const Vector right_sum = total_sum - left_sum;
                const double sse_r =
                    (total_sq - left_sq) - right_sum.squaredNorm() / nr;
                const double cost = sse_l + sse_r;
                if (cost < best_cost) {
                    best_cost = cost;
                    best_feature = f;
                    best_threshold = 0.5 * (xv + xn);
                }
            }
        }
        if (best_feature < 0) return make_leaf(idx);  // all x identical

        std::vector<int> left_idx, right_idx;
        for (int i : idx)
            (x(i, best_feature) <= best_threshold ? left_idx : right_idx).push_back(i);

        const int node = new_node();
        tree.feature[node] = best_feature;
        tree.threshold[node] = best_threshold;
        const int l = build(std::move(left_idx));
        const int r = build(std::move(right_idx));
        tree.left[node] = l;
        tree.right[node] = r;
        return node;
    }

    RegressionTree finish() {
        tree.leaf_values.resize(static_cast<Eigen::Index>(leaves.size()), y.cols());
        for (std::size_t i = 0; i < leaves.size(); ++i)
            tree.leaf_values.row(static_cast<Eigen::Index>(i)) = leaves[i].transpose();
        return std::move(tree);
    }
};

}  // namespace

ForestModel forest_train(const LabeledDataset& d, int trees, std::uint64_t seed,
                         bool bootstrap) {
    if (trees < 2)
        throw std::invalid_argument("forest_train: need at least 2 trees");
    if (d.size() < 5)
        throw std::invalid_argument("forest_train: need at least 5 samples, got " +
                                    std::to_string(d.size()));

    ForestModel forest;
    forest.input_dim = static_cast<int>(d.input_dim());
    forest.output_dim = static_cast<int>(d.output_dim());
    forest.trees.reserve(static_cast<std::size_t>(trees));

    const Rng base(seed);
    const auto n = static_cast<std::uint64_t>(d.size());
    for (int t = 0; t < trees; ++t) {
        std::vector<int> idx(d.size());
        if (bootstrap) {
            Rng rng = base.derive("bootstrap", static_cast<std::uint64_t>(t));
            for (auto& i : idx) i = static_cast<int>(rng.below(n));
        } else {
            std::iota(idx.begin(), idx.end(), 0);
        }
        // The build is deterministic given the resample; nodes in the
        // resample can repeat, which weights them exactly as drawn.
        TreeBuilder builder{d.x, d.y, {}, {}};
        builder.build(std::move(idx));
        forest.trees.push_back(builder.finish());
    }
    return forest;
}

}  // namespace autotandem
