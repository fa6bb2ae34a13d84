#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "autotandem/active_learning.hpp"
#include "autotandem/benchmarks.hpp"
#include "autotandem/metrics.hpp"
#include "autotandem/tandem.hpp"

namespace autotandem {

enum class Method { al, random, lhs, bc, gfp };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct PhaseTimes {
    double sampling = 0.0;
    double training = 0.0;
    double validation = 0.0;
};

/// One (method, repetition) run. Failed runs keep their reason and are
/// reported, never resampled.
struct ExperimentRecord {
    Method method = Method::lhs;
    int repetition = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string fail_reason;
    MetricsReport inverse;
    std::optional<MetricsReport> forward;  // only for active learning
    std::string dataset_hash;
    long clamped_values = 0;  // design entries clamped before HF evaluation
    PhaseTimes wall;
};

struct ExperimentConfig {
    std::string benchmark = "sbr";
    std::vector<Method> methods{Method::al, Method::random, Method::lhs,
                                Method::bc, Method::gfp};
    int n_max = 0;        // 0 → benchmark default (aidlike 150, psidlike 300, sbr 400)
    int repetitions = 30;
    std::uint64_t base_seed = 7;
    std::optional<ModelKind> model_kind;  // default: forest, deep ensemble for sbr
    int test_size = 1000;
    MlpSpec tandem = default_tandem_spec();
    int al_n0 = 20;
    int al_k = 5;
    PsoConfig pso;
    int de_members = 10;
    int de_epochs = 200;
    int forest_trees = 150;
    unsigned threads = 0;  // 0 → hardware count

    /// Network settings used for both tandem nets (dims filled per problem).
    static MlpSpec default_tandem_spec();

    /// Fill n_max / model_kind from the benchmark when left unset.
    void apply_benchmark_defaults();
    int resolved_n_max() const;
    ModelKind resolved_model_kind() const;
};

/// Seed of one (method, repetition) run; a pure function of its arguments.
std::uint64_t record_seed(std::uint64_t base_seed, Method method, int repetition);

/// Inverse validation: predict designs for every test response, clamp them
/// into the design box (counting clamped entries), push them back through
/// the problem, and score the reconstructed responses against the test
/// responses.
MetricsReport validate_inverse(const TandemModel& t, const BenchmarkProblem& prob,
                               const TestSet& ts, long* clamped_values = nullptr);

/// Forward-model score: mean prediction against the test responses.
MetricsReport validate_forward(const UncertaintyModel& m, const TestSet& ts);

struct MethodRun {
    ExperimentRecord record;
    std::vector<AcquisitionRound> rounds;  // active learning only
};

MethodRun run_method(Method method, const BenchmarkProblem& prob,
                     const ExperimentConfig& cfg, const TestSet& ts,
                     int repetition);

/// Per-method, per-metric statistics over the successful repetitions, with
/// the best method flagged per metric (lowest mean RMSE/NMAE, highest mean
/// R²; ties go to the lexicographically first method name).
struct SummaryRow {
    Method method;
    std::string metric;  // "rmse", "r2", "nmae"
    SummaryStats stats;
    int runs = 0;         // successful repetitions
    bool available = false;
    bool best = false;
};

std::vector<SummaryRow> summarize_experiment(const std::vector<ExperimentRecord>& records);

/// Run every (method, repetition) pair and write records.jsonl, summary.csv,
/// boxplot_data.csv, timings.csv, manifest.json and per-repetition
/// acquisition traces under out_dir. Records are ordered by (method name,
/// repetition) and derived purely from the base seed, so record and summary
/// files reproduce byte-for-byte; wall times live only in timings.csv.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg,
                                             const std::filesystem::path& out_dir);

// File writers (exposed for the CLI's summarize subcommand and tests).
void write_records_jsonl(const std::vector<ExperimentRecord>& records,
                         const std::filesystem::path& path);
std::vector<ExperimentRecord> read_records_jsonl(const std::filesystem::path& path);
void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::filesystem::path& path);
void write_boxplot_csv(const std::vector<ExperimentRecord>& records,
                       const std::filesystem::path& path);

/// Config JSON mirroring ExperimentConfig (all keys optional).
ExperimentConfig config_from_json_file(const std::filesystem::path& path);
void merge_config_json(ExperimentConfig& cfg, const std::string& json_text);

}  // namespace autotandem
