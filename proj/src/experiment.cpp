#include "autotandem/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "autotandem/dataset.hpp"
#include "autotandem/parallel.hpp"
#include "autotandem/rng.hpp"
#include "autotandem/samplers.hpp"
#include "autotandem/sha256.hpp"

namespace autotandem {

using nlohmann::json;

std::string method_name(Method m) {
    switch (m) {
        case Method::al: return "al";
        case Method::random: return "random";
        case Method::lhs: return "lhs";
        case Method::bc: return "bc";
        case Method::gfp: return "gfp";
    }
    throw std::logic_error("method_name: bad enum");
}

Method method_from_name(const std::string& name) {
    if (name == "al") return Method::al;
    if (name == "random" || name == "r") return Method::random;
    if (name == "lhs") return Method::lhs;
    if (name == "bc") return Method::bc;
    if (name == "gfp") return Method::gfp;
    throw std::invalid_argument("unknown method '" + name +
                                "' (expected al, random, lhs, bc or gfp)");
}

MlpSpec ExperimentConfig::default_tandem_spec() {
    MlpSpec spec;
    spec.input_dim = 1;   // replaced per problem
    spec.output_dim = 1;  // replaced per problem
    spec.hidden = {64, 128, 256, 128, 64};
    spec.learning_rate = 1e-3;
    spec.epochs = 2000;
    spec.batch_size = 32;
    spec.val_fraction = 0.1;
    spec.patience = 10;
    spec.l2 = 0.0;
    return spec;
}

void ExperimentConfig::apply_benchmark_defaults() {
    n_max = resolved_n_max();
    model_kind = resolved_model_kind();
}

int ExperimentConfig::resolved_n_max() const {
    if (n_max > 0) return n_max;
    if (benchmark == "aidlike") return 150;
    if (benchmark == "psidlike") return 300;
    if (benchmark == "sbr") return 400;
    throw std::invalid_argument("no default n_max for benchmark '" + benchmark + "'");
}

ModelKind ExperimentConfig::resolved_model_kind() const {
    if (model_kind) return *model_kind;
    return benchmark == "sbr" ? ModelKind::deep_ensemble : ModelKind::forest;
}

std::uint64_t record_seed(std::uint64_t base_seed, Method method, int repetition) {
    return Rng(base_seed)
        .derive("record")
        .derive(method_name(method))
        .derive(static_cast<std::uint64_t>(repetition))
        .stream_id();
}

MetricsReport validate_inverse(const TandemModel& t, const BenchmarkProblem& prob,
                               const TestSet& ts, long* clamped_values) {
    Matrix designs = tandem_predict_design(t, ts.ty);
    long clamped = 0;
    for (Eigen::Index i = 0; i < designs.rows(); ++i)
        for (Eigen::Index j = 0; j < designs.cols(); ++j) {
            const double lo = prob.bounds.lower[j];
            const double hi = prob.bounds.upper[j];
            if (designs(i, j) < lo) {
                designs(i, j) = lo;
                ++clamped;
            } else if (designs(i, j) > hi) {
                designs(i, j) = hi;
                ++clamped;
            }
        }
    if (clamped_values) *clamped_values = clamped;
    const Matrix reconstructed = evaluate_rows(prob, designs);
    return compute_metrics(ts.ty, reconstructed);
}

MetricsReport validate_forward(const UncertaintyModel& m, const TestSet& ts) {
    return compute_metrics(ts.ty, predict_mean_rows(m, ts.tx));
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

LabeledDataset sample_dataset(Method method, const BenchmarkProblem& prob,
                              int n_max, const Rng& rng) {
    const std::uint64_t seed = rng.derive("sample").stream_id();
    SampleBatch batch;
    switch (method) {
        case Method::random: batch = random_sample(prob.bounds, n_max, seed); break;
        case Method::lhs: batch = lhs_sample(prob.bounds, n_max, seed); break;
        case Method::gfp: batch = greedyfp_sample(prob.bounds, n_max, seed); break;
        case Method::bc: batch = bestcandidate_sample(prob.bounds, n_max, seed); break;
        case Method::al: throw std::logic_error("sample_dataset: al handled separately");
    }
    LabeledDataset d;
    d.append(batch.points, evaluate_rows(prob, batch.points));
    return d;
}

}  // namespace

MethodRun run_method(Method method, const BenchmarkProblem& prob,
                     const ExperimentConfig& cfg, const TestSet& ts,
                     int repetition) {
    MethodRun run;
    ExperimentRecord& rec = run.record;
    rec.method = method;
    rec.repetition = repetition;
    rec.seed = record_seed(cfg.base_seed, method, repetition);
    const Rng rng(rec.seed);
    const int n_max = cfg.resolved_n_max();

    auto t0 = std::chrono::steady_clock::now();
    try {
        LabeledDataset data;
        std::optional<UncertaintyModel> forward_model;
        if (method == Method::al) {
            ALConfig alc;
            alc.n0 = cfg.al_n0;
            alc.k = cfg.al_k;
            alc.n_max = n_max;
            alc.pso = cfg.pso;
            alc.model_kind = cfg.resolved_model_kind();
            alc.de_members = cfg.de_members;
            alc.de_epochs = cfg.de_epochs;
            alc.forest_trees = cfg.forest_trees;
            ActiveLearnResult al = active_learn(prob.evaluate, prob.bounds, alc,
                                                rng.derive("al").stream_id());
            data = std::move(al.data);
            forward_model = std::move(al.model);
            run.rounds = std::move(al.rounds);
        } else {
            data = sample_dataset(method, prob, n_max, rng);
        }
        rec.dataset_hash = dataset_hash(data);
        rec.wall.sampling = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        const TandemModel tandem =
            tandem_fit(data, cfg.tandem, rng.derive("tandem").stream_id());
        rec.wall.training = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        rec.inverse = validate_inverse(tandem, prob, ts, &rec.clamped_values);
        if (forward_model) rec.forward = validate_forward(*forward_model, ts);
        rec.wall.validation = seconds_since(t0);
        rec.ok = true;
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.fail_reason = e.what();
    }
    return run;
}

std::vector<SummaryRow> summarize_experiment(const std::vector<ExperimentRecord>& records) {
    std::map<std::string, std::vector<const ExperimentRecord*>> by_method;
    for (const auto& r : records) by_method[method_name(r.method)].push_back(&r);

    static const char* metric_names[] = {"rmse", "r2", "nmae"};
    std::vector<SummaryRow> rows;
    for (const char* metric : metric_names) {
        double best_value = 0.0;
        std::size_t best_index = SIZE_MAX;
        for (const auto& [name, recs] : by_method) {
            SummaryRow row;
            row.method = method_from_name(name);
            row.metric = metric;
            std::vector<double> values;
            for (const ExperimentRecord* r : recs) {
                if (!r->ok) continue;
                if (std::string_view(metric) == "rmse") values.push_back(r->inverse.rmse);
                else if (std::string_view(metric) == "r2") values.push_back(r->inverse.r2);
                else values.push_back(r->inverse.nmae);
            }
            row.runs = static_cast<int>(values.size());
            row.available = !values.empty();
            if (row.available) row.stats = summarize(values);
            rows.push_back(row);

            if (row.available) {
                const bool higher_is_better = std::string_view(metric) == "r2";
                const double v = row.stats.mean;
                // Ties keep the earlier method; map order is name order.
                const bool better = best_index == SIZE_MAX ||
                                    (higher_is_better ? v > best_value : v < best_value);
                if (better) {
                    best_value = v;
                    best_index = rows.size() - 1;
                }
            }
        }
        if (best_index != SIZE_MAX) rows[best_index].best = true;
    }
    return rows;
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json metrics_to_json(const MetricsReport& m) {
    return json{{"rmse", m.rmse}, {"r2", m.r2}, {"nmae", m.nmae}};
}

json record_to_json(const ExperimentRecord& r) {
    json j{{"method", method_name(r.method)},
           {"repetition", r.repetition},
           {"seed", r.seed},
           {"status", r.ok ? "ok" : "failed"}};
    if (r.ok) {
        j["inverse"] = metrics_to_json(r.inverse);
        j["forward"] = r.forward ? metrics_to_json(*r.forward) : json(nullptr);
        j["dataset_hash"] = r.dataset_hash;
        j["clamped_values"] = r.clamped_values;
    } else {
        j["reason"] = r.fail_reason;
    }
    return j;
}

}  // namespace

void write_records_jsonl(const std::vector<ExperimentRecord>& records,
                         const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& r : records) out << record_to_json(r).dump() << '\n';
}

std::vector<ExperimentRecord> read_records_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<ExperimentRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        ExperimentRecord r;
        r.method = method_from_name(j.at("method").get<std::string>());
        r.repetition = j.at("repetition").get<int>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.ok = j.at("status").get<std::string>() == "ok";
        if (r.ok) {
            const json& inv = j.at("inverse");
            r.inverse = MetricsReport{inv.at("rmse"), inv.at("r2"), inv.at("nmae")};
            if (j.contains("forward") && !j["forward"].is_null()) {
                const json& fwd = j["forward"];
                r.forward = MetricsReport{fwd.at("rmse"), fwd.at("r2"), fwd.at("nmae")};
            }
            r.dataset_hash = j.value("dataset_hash", "");
            r.clamped_values = j.value("clamped_values", 0L);
        } else {
            r.fail_reason = j.value("reason", "");
        }
        records.push_back(std::move(r));
    }
    return records;
}

void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "method,metric,mean,std,max,min,best,runs\n";
    for (const auto& row : rows) {
        out << method_name(row.method) << ',' << row.metric << ',';
        if (row.available)
            out << fmt_double(row.stats.mean) << ',' << fmt_double(row.stats.std) << ','
                << fmt_double(row.stats.max) << ',' << fmt_double(row.stats.min);
        else
            out << ",,,";
        out << ',' << (row.best ? 1 : 0) << ',' << row.runs << '\n';
    }
}

void write_boxplot_csv(const std::vector<ExperimentRecord>& records,
                       const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "method,repetition,seed,status,inverse_rmse,inverse_r2,inverse_nmae,"
           "forward_rmse,forward_r2,forward_nmae\n";
    for (const auto& r : records) {
        out << method_name(r.method) << ',' << r.repetition << ',' << r.seed << ','
            << (r.ok ? "ok" : "failed") << ',';
        if (r.ok)
            out << fmt_double(r.inverse.rmse) << ',' << fmt_double(r.inverse.r2)
                << ',' << fmt_double(r.inverse.nmae);
        else
            out << ",,";
        out << ',';
        if (r.forward)
            out << fmt_double(r.forward->rmse) << ',' << fmt_double(r.forward->r2)
                << ',' << fmt_double(r.forward->nmae);
        else
            out << ",,";
        out << '\n';
    }
}

namespace {

void write_timings_csv(const std::vector<ExperimentRecord>& records,
                       const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "method,repetition,sampling_s,training_s,validation_s\n";
    char buf[64];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof(buf), "%.3f,%.3f,%.3f", r.wall.sampling,
                      r.wall.training, r.wall.validation);
        out << method_name(r.method) << ',' << r.repetition << ',' << buf << '\n';
    }
}

void write_trace_jsonl(const std::vector<AcquisitionRound>& rounds,
                       const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& round : rounds) {
        json points = json::array();
        for (Eigen::Index i = 0; i < round.points.rows(); ++i) {
            json pt = json::array();
            for (Eigen::Index j = 0; j < round.points.cols(); ++j)
                pt.push_back(round.points(i, j));
            points.push_back(std::move(pt));
        }
        out << json{{"round", round.round},
                    {"points", std::move(points)},
                    {"uncertainty", round.uncertainty},
                    {"stream_ids", round.pso_stream_ids}}
                   .dump()
            << '\n';
    }
}

std::string file_sha256(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    Sha256 h;
    char buf[8192];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
        h.update(buf, static_cast<std::size_t>(in.gcount()));
    return h.hex_digest();
}

void write_matrix_csv(const Matrix& m, const std::vector<std::string>& names,
                      const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
    out << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out << (j ? "," : "") << fmt_double(m(i, j));
        out << '\n';
    }
}

json config_to_json(const ExperimentConfig& cfg) {
    json methods = json::array();
    for (Method m : cfg.methods) methods.push_back(method_name(m));
    return json{
        {"benchmark", cfg.benchmark},
        {"methods", std::move(methods)},
        {"n_max", cfg.resolved_n_max()},
        {"repetitions", cfg.repetitions},
        {"seed", cfg.base_seed},
        {"model_kind", cfg.resolved_model_kind() == ModelKind::forest
                           ? "forest"
                           : "deep_ensemble"},
        {"test_size", cfg.test_size},
        {"tandem",
         json{{"hidden", cfg.tandem.hidden},
              {"learning_rate", cfg.tandem.learning_rate},
              {"epochs", cfg.tandem.epochs},
              {"batch_size", cfg.tandem.batch_size},
              {"val_fraction", cfg.tandem.val_fraction},
              {"patience", cfg.tandem.patience},
              {"l2", cfg.tandem.l2}}},
        {"al", json{{"n0", cfg.al_n0},
                    {"k", cfg.al_k},
                    {"de_members", cfg.de_members},
                    {"de_epochs", cfg.de_epochs},
                    {"forest_trees", cfg.forest_trees},
                    {"pso", json{{"swarm_size", cfg.pso.swarm_size},
                                 {"inertia", cfg.pso.inertia},
                                 {"cognitive", cfg.pso.cognitive},
                                 {"social", cfg.pso.social},
                                 {"max_evals", cfg.pso.max_evals}}}}}};
}

}  // namespace

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg,
                                             const std::filesystem::path& out_dir) {
    if (cfg.repetitions < 1)
        throw std::invalid_argument("run_experiment: repetitions must be >= 1");
    if (cfg.methods.empty())
        throw std::invalid_argument("run_experiment: no methods selected");

    const BenchmarkProblem prob = get_problem(cfg.benchmark);
    std::filesystem::create_directories(out_dir);

    // One shared test set, unseen by every training stream.
    const TestSet ts = make_test_set(
        prob, cfg.test_size, Rng(cfg.base_seed).derive("testset").stream_id());

    // Stable run order: methods by name, then repetition index.
    std::vector<Method> methods = cfg.methods;
    std::sort(methods.begin(), methods.end(), [](Method a, Method b) {
        return method_name(a) < method_name(b);
    });
    methods.erase(std::unique(methods.begin(), methods.end()), methods.end());

    struct Task {
        Method method;
        int repetition;
    };
    std::vector<Task> tasks;
    for (Method m : methods)
        for (int rep = 0; rep < cfg.repetitions; ++rep) tasks.push_back({m, rep});

    std::vector<MethodRun> runs(tasks.size());
    parallel_for(static_cast<int>(tasks.size()), cfg.threads, [&](int i) {
        runs[static_cast<std::size_t>(i)] =
            run_method(tasks[static_cast<std::size_t>(i)].method, prob, cfg, ts,
                       tasks[static_cast<std::size_t>(i)].repetition);
    });

    std::vector<ExperimentRecord> records;
    records.reserve(runs.size());
    for (auto& run : runs) records.push_back(std::move(run.record));

    write_records_jsonl(records, out_dir / "records.jsonl");
    write_summary_csv(summarize_experiment(records), out_dir / "summary.csv");
    write_boxplot_csv(records, out_dir / "boxplot_data.csv");
    write_timings_csv(records, out_dir / "timings.csv");

    std::vector<std::string> y_names;
    for (int j = 1; j <= prob.response_dim; ++j)
        y_names.push_back("y_" + std::to_string(j));
    write_matrix_csv(ts.tx, prob.dim_names, out_dir / "Tx.csv");
    write_matrix_csv(ts.ty, y_names, out_dir / "Ty.csv");

    bool any_traces = false;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (runs[i].rounds.empty()) continue;
        if (!any_traces) {
            std::filesystem::create_directories(out_dir / "traces");
            any_traces = true;
        }
        write_trace_jsonl(runs[i].rounds,
                          out_dir / "traces" /
                              ("al_rep" + std::to_string(tasks[i].repetition) +
                               ".jsonl"));
    }

    json manifest = json{
        {"format", "autotandem-manifest"},
        {"version", 1},
        {"tool_version", "0.1.0"},
        {"config", config_to_json(cfg)},
        {"test_set",
         json{{"size", cfg.test_size},
              {"tx_csv_sha256", file_sha256(out_dir / "Tx.csv")},
              {"ty_csv_sha256", file_sha256(out_dir / "Ty.csv")},
              {"tx_sha256", sha256_hex(std::span<const double>(
                                ts.tx.data(), static_cast<std::size_t>(ts.tx.size())))},
              {"ty_sha256", sha256_hex(std::span<const double>(
                                ts.ty.data(), static_cast<std::size_t>(ts.ty.size())))}}},
        {"record_seeds", json::array()},
        {"records_sha256", file_sha256(out_dir / "records.jsonl")}};
    for (const auto& r : records)
        manifest["record_seeds"].push_back(
            json{{"method", method_name(r.method)},
                 {"repetition", r.repetition},
                 {"seed", r.seed}});
    std::ofstream mf(out_dir / "manifest.json");
    if (!mf) throw std::runtime_error("cannot write manifest.json");
    mf << manifest.dump(2) << '\n';

    return records;
}

void merge_config_json(ExperimentConfig& cfg, const std::string& json_text) {
    const json j = json::parse(json_text);
    if (j.contains("benchmark")) cfg.benchmark = j["benchmark"].get<std::string>();
    if (j.contains("methods")) {
        cfg.methods.clear();
        for (const auto& m : j["methods"])
            cfg.methods.push_back(method_from_name(m.get<std::string>()));
    }
    if (j.contains("n_max")) cfg.n_max = j["n_max"].get<int>();
    if (j.contains("repetitions")) cfg.repetitions = j["repetitions"].get<int>();
    if (j.contains("seed")) cfg.base_seed = j["seed"].get<std::uint64_t>();
    if (j.contains("model_kind")) {
        const std::string kind = j["model_kind"].get<std::string>();
        if (kind == "forest") cfg.model_kind = ModelKind::forest;
        else if (kind == "deep_ensemble") cfg.model_kind = ModelKind::deep_ensemble;
        else throw std::invalid_argument("config: unknown model_kind '" + kind + "'");
    }
    if (j.contains("test_size")) cfg.test_size = j["test_size"].get<int>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<unsigned>();
    if (j.contains("tandem")) {
        const json& t = j["tandem"];
        if (t.contains("hidden")) cfg.tandem.hidden = t["hidden"].get<std::vector<int>>();
        if (t.contains("learning_rate")) cfg.tandem.learning_rate = t["learning_rate"];
        if (t.contains("epochs")) cfg.tandem.epochs = t["epochs"];
        if (t.contains("batch_size")) cfg.tandem.batch_size = t["batch_size"];
        if (t.contains("val_fraction")) cfg.tandem.val_fraction = t["val_fraction"];
        if (t.contains("patience")) cfg.tandem.patience = t["patience"];
        if (t.contains("l2")) cfg.tandem.l2 = t["l2"];
    }
    if (j.contains("al")) {
        const json& a = j["al"];
        if (a.contains("n0")) cfg.al_n0 = a["n0"];
        if (a.contains("k")) cfg.al_k = a["k"];
        if (a.contains("de_members")) cfg.de_members = a["de_members"];
        if (a.contains("de_epochs")) cfg.de_epochs = a["de_epochs"];
        if (a.contains("forest_trees")) cfg.forest_trees = a["forest_trees"];
        if (a.contains("pso")) {
            const json& p = a["pso"];
            if (p.contains("swarm_size")) cfg.pso.swarm_size = p["swarm_size"];
            if (p.contains("inertia")) cfg.pso.inertia = p["inertia"];
            if (p.contains("cognitive")) cfg.pso.cognitive = p["cognitive"];
            if (p.contains("social")) cfg.pso.social = p["social"];
            if (p.contains("max_evals")) cfg.pso.max_evals = p["max_evals"];
        }
    }
}

ExperimentConfig config_from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    ExperimentConfig cfg;
    merge_config_json(cfg, text);
    return cfg;
}

}  // namespace autotandem
