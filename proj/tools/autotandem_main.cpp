// autotandem: inverse-design experiment driver.
//
//   autotandem run       compare sampling methods on a benchmark
//   autotandem sample    draw a design batch and write it as CSV
//   autotandem solve-sbr solve the diffusion problem for a boundary file
//   autotandem validate  score a saved tandem model on a fresh test set
//   autotandem summarize recompute summary.csv from records.jsonl

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "autotandem/experiment.hpp"
#include "autotandem/model_io.hpp"
#include "autotandem/rng.hpp"
#include "autotandem/samplers.hpp"

namespace fs = std::filesystem;
using namespace autotandem;

namespace {

std::vector<Method> parse_methods(const std::string& csv) {
    std::vector<Method> methods;
    std::stringstream ss(csv);
    std::string token;
    while (std::getline(ss, token, ','))
        if (!token.empty()) methods.push_back(method_from_name(token));
    if (methods.empty()) throw CLI::ValidationError("--methods", "no methods given");
    return methods;
}

void write_points_csv(const fs::path& path, const std::vector<std::string>& names,
                      const Matrix& points) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t j = 0; j < names.size(); ++j)
        out << (j ? "," : "") << names[j];
    out << '\n';
    char buf[40];
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        for (Eigen::Index j = 0; j < points.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", points(i, j));
            out << (j ? "," : "") << buf;
        }
        out << '\n';
    }
}

/// Numbers separated by commas and/or whitespace.
Vector read_values_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    std::replace(text.begin(), text.end(), ',', ' ');
    std::stringstream ss(text);
    std::vector<double> values;
    double v;
    while (ss >> v) values.push_back(v);
    Vector out(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
        out[static_cast<Eigen::Index>(i)] = values[i];
    return out;
}

void print_metrics(const char* label, const MetricsReport& m) {
    std::printf("%s  rmse=%.6g  r2=%.6g  nmae=%.6g\n", label, m.rmse, m.r2, m.nmae);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AutoTandemML-style inverse design toolkit"};
    app.require_subcommand(1);

    // --- run -----------------------------------------------------------------
    auto* run = app.add_subcommand("run", "Run a sampler-comparison experiment");
    std::string run_benchmark = "sbr";
    std::string run_methods = "al,random,lhs,bc,gfp";
    std::string run_config;
    std::string run_model;
    std::string run_out = "out";
    int run_n_max = 0;
    int run_reps = -1;
    std::uint64_t run_seed = 0;
    bool run_seed_set = false;
    int run_test_size = -1;
    int run_tandem_epochs = -1;
    int run_de_epochs = -1;
    unsigned run_threads = 0;
    run->add_option("--benchmark", run_benchmark, "sbr, aidlike or psidlike");
    run->add_option("--methods", run_methods, "comma list of al,random,lhs,bc,gfp");
    run->add_option("--n-max", run_n_max, "HF evaluation budget per run (0 = benchmark default)");
    run->add_option("--reps", run_reps, "repetitions per method (default 30)");
    run->add_option("--seed", run_seed, "base seed")->each([&](const std::string&) {
        run_seed_set = true;
    });
    run->add_option("--out", run_out, "output directory");
    run->add_option("--model", run_model, "forest or deep_ensemble (default per benchmark)");
    run->add_option("--test-size", run_test_size, "test set size (default 1000)");
    run->add_option("--tandem-epochs", run_tandem_epochs, "override tandem training epochs");
    run->add_option("--de-epochs", run_de_epochs, "override deep-ensemble member epochs");
    run->add_option("--threads", run_threads, "worker threads (0 = hardware)");
    run->add_option("--config", run_config, "JSON config file (flags override it)");

    // --- sample ----------------------------------------------------------------
    auto* sample = app.add_subcommand("sample", "Write a design batch as CSV");
    std::string sample_sampler = "lhs";
    std::string sample_benchmark = "sbr";
    std::string sample_out = "samples.csv";
    int sample_n = 100;
    std::uint64_t sample_seed = 1;
    sample->add_option("--sampler", sample_sampler, "random, lhs, gfp or bc");
    sample->add_option("--benchmark", sample_benchmark, "benchmark supplying bounds");
    sample->add_option("--n", sample_n, "number of points");
    sample->add_option("--seed", sample_seed, "seed");
    sample->add_option("--out", sample_out, "output CSV path");

    // --- solve-sbr ---------------------------------------------------------------
    auto* solve = app.add_subcommand("solve-sbr", "Solve the diffusion problem for one boundary");
    std::string solve_bc;
    std::string solve_out;
    std::string solve_field_out;
    double solve_dt = kSbrDefaultDt;
    solve->add_option("--bc", solve_bc, "file with 20 boundary values")->required();
    solve->add_option("--out", solve_out, "write the 30 measurements as CSV");
    solve->add_option("--field-out", solve_field_out, "write the 20x20 field as CSV");
    solve->add_option("--dt", solve_dt, "time step (default 2e-4)");

    // --- validate ----------------------------------------------------------------
    auto* validate = app.add_subcommand("validate", "Score a saved tandem model");
    std::string val_model;
    std::string val_benchmark = "sbr";
    int val_test_size = 1000;
    std::uint64_t val_seed = 7;
    validate->add_option("--model", val_model, "tandem model JSON")->required();
    validate->add_option("--benchmark", val_benchmark, "benchmark to validate against");
    validate->add_option("--test-size", val_test_size, "test set size");
    validate->add_option("--seed", val_seed, "test set seed");

    // --- summarize -----------------------------------------------------------------
    auto* summarize_cmd = app.add_subcommand("summarize", "Summarize records.jsonl in DIR");
    std::string summarize_dir;
    summarize_cmd->add_option("dir", summarize_dir, "experiment output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            ExperimentConfig cfg;
            if (!run_config.empty()) cfg = config_from_json_file(run_config);
            if (run->count("--benchmark") || run_config.empty())
                cfg.benchmark = run_benchmark;
            if (run->count("--methods") || run_config.empty())
                cfg.methods = parse_methods(run_methods);
            if (run->count("--n-max")) cfg.n_max = run_n_max;
            if (run_reps >= 1) cfg.repetitions = run_reps;
            if (run_seed_set) cfg.base_seed = run_seed;
            if (!run_model.empty())
                cfg.model_kind = run_model == "forest" ? ModelKind::forest
                                                       : ModelKind::deep_ensemble;
            if (run_test_size >= 1) cfg.test_size = run_test_size;
            if (run_tandem_epochs >= 1) cfg.tandem.epochs = run_tandem_epochs;
            if (run_de_epochs >= 1) cfg.de_epochs = run_de_epochs;
            if (run->count("--threads")) cfg.threads = run_threads;
            cfg.apply_benchmark_defaults();

            const auto records = run_experiment(cfg, run_out);
            int failed = 0;
            for (const auto& r : records) failed += r.ok ? 0 : 1;
            std::printf("wrote %zu records to %s (%d failed)\n", records.size(),
                        run_out.c_str(), failed);
            for (const auto& row : summarize_experiment(records)) {
                if (!row.available) {
                    std::printf("%-7s %-5s unavailable (all runs failed)\n",
                                method_name(row.method).c_str(), row.metric.c_str());
                    continue;
                }
                std::printf("%-7s %-5s mean=%.5g std=%.5g max=%.5g min=%.5g%s\n",
                            method_name(row.method).c_str(), row.metric.c_str(),
                            row.stats.mean, row.stats.std, row.stats.max,
                            row.stats.min, row.best ? "  <best>" : "");
            }
            return failed == static_cast<int>(records.size()) ? 1 : 0;
        }

        if (*sample) {
            const BenchmarkProblem prob = get_problem(sample_benchmark);
            SampleBatch batch;
            if (sample_sampler == "random")
                batch = random_sample(prob.bounds, sample_n, sample_seed);
            else if (sample_sampler == "lhs")
                batch = lhs_sample(prob.bounds, sample_n, sample_seed);
            else if (sample_sampler == "gfp")
                batch = greedyfp_sample(prob.bounds, sample_n, sample_seed);
            else if (sample_sampler == "bc")
                batch = bestcandidate_sample(prob.bounds, sample_n, sample_seed);
            else
                throw std::invalid_argument("unknown sampler '" + sample_sampler + "'");
            write_points_csv(sample_out, prob.dim_names, batch.points);
            std::printf("wrote %d points to %s\n", sample_n, sample_out.c_str());
            return 0;
        }

        if (*solve) {
            const Vector bc = read_values_file(solve_bc);
            const Matrix field = sbr_solve(bc, solve_dt);
            const Vector measurements = sbr_measure(field);
            if (!solve_out.empty()) {
                std::vector<std::string> names;
                for (int i = 1; i <= 30; ++i) names.push_back("c_" + std::to_string(i));
                write_points_csv(solve_out, names, measurements.transpose());
            } else {
                for (Eigen::Index i = 0; i < measurements.size(); ++i)
                    std::printf("%s%.17g", i ? "," : "", measurements[i]);
                std::printf("\n");
            }
            if (!solve_field_out.empty()) {
                std::ofstream out(solve_field_out);
                char buf[40];
                // rows ordered top to bottom so the file reads like the domain
                for (int iy = kSbrCells - 1; iy >= 0; --iy) {
                    for (int ix = 0; ix < kSbrCells; ++ix) {
                        std::snprintf(buf, sizeof(buf), "%.17g", field(ix, iy));
                        out << (ix ? "," : "") << buf;
                    }
                    out << '\n';
                }
            }
            return 0;
        }

        if (*validate) {
            const TandemModel model = load_tandem(val_model);
            const BenchmarkProblem prob = get_problem(val_benchmark);
            if (model.design_dim() != prob.design_dim ||
                model.response_dim() != prob.response_dim)
                throw std::invalid_argument("model dims do not match benchmark '" +
                                            val_benchmark + "'");
            const TestSet ts = make_test_set(prob, val_test_size,
                                             Rng(val_seed).derive("testset").stream_id());
            long clamped = 0;
            const MetricsReport m = validate_inverse(model, prob, ts, &clamped);
            print_metrics("inverse", m);
            std::printf("clamped design entries: %ld\n", clamped);
            return 0;
        }

        if (*summarize_cmd) {
            const fs::path dir = summarize_dir;
            const auto records = read_records_jsonl(dir / "records.jsonl");
            const auto rows = summarize_experiment(records);
            write_summary_csv(rows, dir / "summary.csv");
            for (const auto& row : rows) {
                if (!row.available) continue;
                std::printf("%-7s %-5s mean=%.5g std=%.5g max=%.5g min=%.5g%s\n",
                            method_name(row.method).c_str(), row.metric.c_str(),
                            row.stats.mean, row.stats.std, row.stats.max,
                            row.stats.min, row.best ? "  <best>" : "");
            }
            std::printf("rewrote %s\n", (dir / "summary.csv").c_str());
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
