#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <string>

#include "autotandem/active_learning.hpp"
#include "autotandem/rng.hpp"

using namespace autotandem;

namespace {

BoundsBox unit_box(int d) {
    return BoundsBox(Vector::Zero(d), Vector::Ones(d));
}

ALConfig cheap_config(int n_max, ModelKind kind = ModelKind::forest) {
    ALConfig cfg;
    cfg.n0 = 20;
    cfg.k = 5;
    cfg.n_max = n_max;
    cfg.model_kind = kind;
    cfg.forest_trees = 10;
    cfg.de_members = 2;
    cfg.de_epochs = 5;
    cfg.pso.max_evals = 30;
    return cfg;
}

Vector toy_response(const Vector& x) {
    Vector y(2);
    y[0] = std::sin(3.0 * x[0]) + x[1];
    y[1] = x[0] * x[1];
    return y;
}

}  // namespace

TEST_CASE("pso recovers the maximum of a parabola") {
    const BoundsBox b = unit_box(1);
    PsoConfig cfg;  // defaults: swarm 10, 100 evals
    int hits = 0;
    for (int seed = 0; seed < 20; ++seed) {
        const Vector best = pso_maximize(
            [](const Vector& x) { return -(x[0] - 0.3) * (x[0] - 0.3); }, b, cfg,
            7000 + seed);
        if (std::abs(best[0] - 0.3) < 0.05) ++hits;
    }
    CHECK(hits >= 19);
}

TEST_CASE("pso spends exactly the evaluation budget") {
    const BoundsBox b = unit_box(2);
    PsoConfig cfg;
    cfg.swarm_size = 7;
    cfg.max_evals = 95;  // not a multiple of the swarm size
    int evals = 0;
    pso_maximize(
        [&evals](const Vector& x) {
            ++evals;
            return -x.squaredNorm();
        },
        b, cfg, 3);
    CHECK(evals == 95);
}

TEST_CASE("pso handles constant objectives and degenerate boxes") {
    const BoundsBox b = unit_box(3);
    PsoConfig cfg;
    const Vector best =
        pso_maximize([](const Vector&) { return 1.0; }, b, cfg, 5);
    CHECK(b.contains(best));

    Vector point(2);
    point << 0.4, -1.0;
    const BoundsBox degenerate(point, point);
    int evals = 0;
    const Vector got = pso_maximize(
        [&](const Vector&) {
            ++evals;
            return 0.0;
        },
        degenerate, cfg, 6);
    CHECK(evals == cfg.max_evals);
    CHECK(got.isApprox(point));
}

TEST_CASE("pso reports the offending point on a non-finite objective") {
    const BoundsBox b = unit_box(1);
    PsoConfig cfg;
    try {
        pso_maximize([](const Vector&) { return std::nan(""); }, b, cfg, 1);
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("non-finite") != std::string::npos);
        CHECK(std::string(e.what()).find('[') != std::string::npos);
    }

    PsoConfig bad;
    bad.swarm_size = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.swarm_size = 10;
    bad.max_evals = 5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("active learning spends exactly n_max evaluations") {
    const BoundsBox b = unit_box(2);
    for (int n_max : {20, 30, 50}) {
        int calls = 0;
        const ResponseFn counted = [&calls](const Vector& x) {
            ++calls;
            return toy_response(x);
        };
        const ActiveLearnResult r = active_learn(counted, b, cheap_config(n_max), 11);
        CHECK(calls == n_max);
        CHECK(r.data.size() == n_max);
        CHECK(static_cast<int>(r.rounds.size()) == (n_max - 20) / 5);
        for (Eigen::Index i = 0; i < r.data.x.rows(); ++i)
            CHECK(b.contains(r.data.x.row(i).transpose()));
    }
}

TEST_CASE("active learning dataset starts with the stratified seed design") {
    const BoundsBox b = unit_box(2);
    const ActiveLearnResult r = active_learn(toy_response, b, cheap_config(30), 21);
    // first n0 rows form a Latin hypercube: exactly one point per stratum
    const Matrix seed_design = r.data.x.topRows(20);
    for (int j = 0; j < 2; ++j) {
        std::set<int> strata;
        for (int i = 0; i < 20; ++i)
            strata.insert(static_cast<int>(seed_design(i, j) * 20.0));
        CHECK(strata.size() == 20);
    }
}

TEST_CASE("active learning is deterministic and uses distinct pso streams") {
    const BoundsBox b = unit_box(2);
    const ActiveLearnResult a = active_learn(toy_response, b, cheap_config(35), 77);
    const ActiveLearnResult c = active_learn(toy_response, b, cheap_config(35), 77);
    CHECK(a.data.x == c.data.x);
    CHECK(a.data.y == c.data.y);

    std::set<std::uint64_t> ids;
    for (const auto& round : a.rounds)
        for (auto id : round.pso_stream_ids) ids.insert(id);
    CHECK(ids.size() == a.rounds.size() * 5);  // all distinct
}

TEST_CASE("n_max equal to n0 returns the pure seed design") {
    const BoundsBox b = unit_box(2);
    int calls = 0;
    const ResponseFn counted = [&calls](const Vector& x) {
        ++calls;
        return toy_response(x);
    };
    const ActiveLearnResult r = active_learn(counted, b, cheap_config(20), 5);
    CHECK(calls == 20);
    CHECK(r.data.size() == 20);
    CHECK(r.rounds.empty());
}

TEST_CASE("constant responses keep acquisition alive with zero uncertainty") {
    const BoundsBox b = unit_box(2);
    const ResponseFn constant = [](const Vector&) {
        Vector y(1);
        y[0] = 4.2;
        return y;
    };
    const ActiveLearnResult r = active_learn(constant, b, cheap_config(30), 9);
    CHECK(r.data.size() == 30);
    // leaf means of identical values can differ in the last ulp across trees
    for (const auto& round : r.rounds)
        for (double u : round.uncertainty) CHECK(u < 1e-12);
    for (Eigen::Index i = 0; i < r.data.x.rows(); ++i)
        CHECK(b.contains(r.data.x.row(i).transpose()));
}

TEST_CASE("bad responses are rejected with the sample index") {
    const BoundsBox b = unit_box(1);
    int calls = 0;
    const ResponseFn flaky = [&calls](const Vector& x) {
        Vector y(1);
        y[0] = calls == 7 ? std::nan("") : x[0];
        ++calls;
        return y;
    };
    try {
        active_learn(flaky, b, cheap_config(30), 3);
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("sample 7") != std::string::npos);
    }

    int calls2 = 0;
    const ResponseFn shrinking = [&calls2](const Vector& x) {
        Vector y(calls2 < 3 ? 2 : 1);
        y.setConstant(x[0]);
        ++calls2;
        return y;
    };
    try {
        active_learn(shrinking, b, cheap_config(30), 3);
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("length") != std::string::npos);
        CHECK(std::string(e.what()).find("sample 3") != std::string::npos);
    }
}

TEST_CASE("al config validation") {
    ALConfig cfg = cheap_config(30);
    cfg.n0 = 1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = cheap_config(30);
    cfg.n_max = 19;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = cheap_config(33);  // (33-20) not divisible by 5
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("active learning works with the deep ensemble model") {
    const BoundsBox b = unit_box(2);
    ALConfig cfg = cheap_config(25, ModelKind::deep_ensemble);
    const ActiveLearnResult r = active_learn(toy_response, b, cfg, 13);
    CHECK(r.data.size() == 25);
    CHECK(std::holds_alternative<EnsembleModel>(r.model));
}
