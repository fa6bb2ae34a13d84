#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "autotandem/active_learning.hpp"
#include "autotandem/benchmarks.hpp"
#include "autotandem/experiment.hpp"
#include "autotandem/metrics.hpp"
#include "autotandem/model_io.hpp"
#include "autotandem/rng.hpp"
#include "autotandem/samplers.hpp"

namespace py = pybind11;
using namespace autotandem;

namespace {

SampleBatch dispatch_sampler(const std::string& method, const BoundsBox& bounds,
                             int n, std::uint64_t seed) {
    if (method == "random") return random_sample(bounds, n, seed);
    if (method == "lhs") return lhs_sample(bounds, n, seed);
    if (method == "gfp") return greedyfp_sample(bounds, n, seed);
    if (method == "bc") return bestcandidate_sample(bounds, n, seed);
    throw std::invalid_argument("unknown sampler '" + method +
                                "' (expected random, lhs, gfp or bc)");
}

MlpSpec spec_from_kwargs(int input_dim, int output_dim, std::vector<int> hidden,
                         int epochs, int batch_size, double learning_rate,
                         double val_fraction, int patience, double l2) {
    MlpSpec spec;
    spec.input_dim = input_dim;
    spec.output_dim = output_dim;
    spec.hidden = std::move(hidden);
    spec.epochs = epochs;
    spec.batch_size = batch_size;
    spec.learning_rate = learning_rate;
    spec.val_fraction = val_fraction;
    spec.patience = patience;
    spec.l2 = l2;
    return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Active-learning tandem-network inverse design toolkit";
    m.attr("__version__") = "0.1.0";

    // ---- metrics ------------------------------------------------------------
    m.def("rmse", &rmse, py::arg("y"), py::arg("yhat"),
          "Root mean square error pooled over all entries");
    m.def("r2", &r2, py::arg("y"), py::arg("yhat"),
          "Coefficient of determination with per-column means, columns pooled");
    m.def("nmae", &nmae, py::arg("y"), py::arg("yhat"),
          "Column-normalized maximum absolute error, averaged over columns");

    // ---- problems -----------------------------------------------------------
    py::class_<BenchmarkProblem>(m, "Problem")
        .def_readonly("name", &BenchmarkProblem::name)
        .def_readonly("design_dim", &BenchmarkProblem::design_dim)
        .def_readonly("response_dim", &BenchmarkProblem::response_dim)
        .def_readonly("dim_names", &BenchmarkProblem::dim_names)
        .def_property_readonly(
            "lower", [](const BenchmarkProblem& p) { return p.bounds.lower; })
        .def_property_readonly(
            "upper", [](const BenchmarkProblem& p) { return p.bounds.upper; })
        .def("evaluate",
             [](const BenchmarkProblem& p, const Vector& x) { return p.evaluate(x); },
             py::arg("x"))
        .def("evaluate_batch", &evaluate_rows, py::arg("x"))
        .def("__repr__", [](const BenchmarkProblem& p) {
            return "<Problem " + p.name + " R^" + std::to_string(p.design_dim) +
                   " -> R^" + std::to_string(p.response_dim) + ">";
        });
    m.def("get_problem", &get_problem, py::arg("name"));
    m.def("problem_names", &problem_names);

    m.def(
        "make_test_set",
        [](const BenchmarkProblem& prob, int n, std::uint64_t seed) {
            TestSet ts = make_test_set(prob, n, seed);
            return py::make_tuple(std::move(ts.tx), std::move(ts.ty));
        },
        py::arg("problem"), py::arg("n") = 1000, py::arg("seed") = 0,
        "Uniform test designs with their responses as (Tx, Ty)");

    // ---- sbr solver -----------------------------------------------------------
    m.def("solve_sbr", &sbr_solve, py::arg("bc_top"), py::arg("dt") = kSbrDefaultDt,
          "Cell-centered diffusion field at t=0.1 for 20 top-boundary values");
    m.def("measure_sbr", &sbr_measure, py::arg("field"),
          "Interpolate the field at the 30 fixed measurement points");
    m.def("sbr_measurement_points", &sbr_measurement_points);

    // ---- samplers ---------------------------------------------------------------
    m.def(
        "sample",
        [](const std::string& method, const BenchmarkProblem& prob, int n,
           std::uint64_t seed) { return dispatch_sampler(method, prob.bounds, n, seed).points; },
        py::arg("method"), py::arg("problem"), py::arg("n"), py::arg("seed") = 0,
        "Draw n design points inside the problem's bounds");
    m.def(
        "sample_bounds",
        [](const std::string& method, const Vector& lower, const Vector& upper,
           int n, std::uint64_t seed) {
            return dispatch_sampler(method, BoundsBox(lower, upper), n, seed).points;
        },
        py::arg("method"), py::arg("lower"), py::arg("upper"), py::arg("n"),
        py::arg("seed") = 0);

    // ---- active learning ----------------------------------------------------------
    m.def(
        "active_learn",
        [](const BenchmarkProblem& prob, int n_max, const std::string& model,
           int n0, int k, std::uint64_t seed, int de_epochs, int de_members,
           int forest_trees, int pso_max_evals) {
            ALConfig cfg;
            cfg.n0 = n0;
            cfg.k = k;
            cfg.n_max = n_max;
            cfg.model_kind = model == "forest" ? ModelKind::forest
                                               : ModelKind::deep_ensemble;
            cfg.de_epochs = de_epochs;
            cfg.de_members = de_members;
            cfg.forest_trees = forest_trees;
            cfg.pso.max_evals = pso_max_evals;
            ActiveLearnResult r = active_learn(prob.evaluate, prob.bounds, cfg, seed);
            return py::make_tuple(std::move(r.data.x), std::move(r.data.y));
        },
        py::arg("problem"), py::arg("n_max"), py::arg("model") = "forest",
        py::arg("n0") = 20, py::arg("k") = 5, py::arg("seed") = 0,
        py::arg("de_epochs") = 200, py::arg("de_members") = 10,
        py::arg("forest_trees") = 150, py::arg("pso_max_evals") = 100,
        "Acquire an (X, Y) dataset by uncertainty-driven batch active learning");

    // ---- tandem model -----------------------------------------------------------
    py::class_<TandemModel>(m, "TandemModel")
        .def_static(
            "fit",
            [](const Matrix& x, const Matrix& y, std::uint64_t seed,
               std::vector<int> hidden, int epochs, int batch_size,
               double learning_rate, double val_fraction, int patience, double l2) {
                LabeledDataset d{x, y};
                const MlpSpec spec = spec_from_kwargs(
                    static_cast<int>(x.cols()), static_cast<int>(y.cols()),
                    std::move(hidden), epochs, batch_size, learning_rate,
                    val_fraction, patience, l2);
                return tandem_fit(d, spec, seed);
            },
            py::arg("x"), py::arg("y"), py::arg("seed") = 0,
            py::arg("hidden") = std::vector<int>{64, 128, 256, 128, 64},
            py::arg("epochs") = 2000, py::arg("batch_size") = 32,
            py::arg("learning_rate") = 1e-3, py::arg("val_fraction") = 0.1,
            py::arg("patience") = 10, py::arg("l2") = 0.0,
            "Train the forward net, then the inverse net against it")
        .def("predict_design",
             [](const TandemModel& t, const Vector& y) {
                 return tandem_predict_design(t, y);
             },
             py::arg("y"))
        .def("predict_design_batch",
             [](const TandemModel& t, const Matrix& y) {
                 return tandem_predict_design(t, y);
             },
             py::arg("y"))
        .def_property_readonly("design_dim", &TandemModel::design_dim)
        .def_property_readonly("response_dim", &TandemModel::response_dim)
        .def("save", &save_tandem, py::arg("path"))
        .def_static("load", &load_tandem, py::arg("path"))
        .def("__repr__", [](const TandemModel& t) {
            return "<TandemModel d=" + std::to_string(t.design_dim()) +
                   " p=" + std::to_string(t.response_dim()) + ">";
        });

    m.def(
        "validate_inverse",
        [](const TandemModel& t, const BenchmarkProblem& prob, const Matrix& tx,
           const Matrix& ty) {
            TestSet ts{tx, ty};
            long clamped = 0;
            const MetricsReport r = validate_inverse(t, prob, ts, &clamped);
            py::dict out;
            out["rmse"] = r.rmse;
            out["r2"] = r.r2;
            out["nmae"] = r.nmae;
            out["clamped_values"] = clamped;
            return out;
        },
        py::arg("model"), py::arg("problem"), py::arg("tx"), py::arg("ty"),
        "Score designs predicted from Ty by reconstructing responses through H");

    // ---- experiment driver ----------------------------------------------------------
    m.def(
        "run_experiment",
        [](const std::string& config_json, const std::filesystem::path& out_dir) {
            ExperimentConfig cfg;
            merge_config_json(cfg, config_json);
            cfg.apply_benchmark_defaults();
            const auto records = run_experiment(cfg, out_dir);
            int failed = 0;
            for (const auto& r : records) failed += r.ok ? 0 : 1;
            py::dict out;
            out["records"] = static_cast<int>(records.size());
            out["failed"] = failed;
            out["out_dir"] = out_dir.string();
            return out;
        },
        py::arg("config_json"), py::arg("out_dir"),
        "Run the sampler-comparison experiment described by a JSON config");
}
