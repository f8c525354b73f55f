#include <cstdint>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shapk/bench.hpp"
#include "shapk/errors.hpp"
#include "shapk/estimators.hpp"
#include "shapk/model.hpp"
#include "shapk/oracle.hpp"
#include "shapk/topk.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitBudget = 3;

struct ExplainArgs {
    std::string model, x, baseline, out;
    int k = 4;
    double eps = 0.005;
    double delta = 1e-6;
    std::string method = "sampling";
    std::string strategy = "greedy";
    int tmin = 10;
    std::uint64_t seed = 0;
    std::uint64_t max_evals = 10'000'000;
    int kernel_m = 0;
};

shapk::ExplanationInstance load_instance(const std::string& model_path, const std::string& x_path,
                                         const std::string& baseline_path) {
    auto model = std::make_shared<const shapk::ModelSpec>(shapk::load_model(model_path));
    return {model, shapk::load_vector_csv(x_path), shapk::load_vector_csv(baseline_path)};
}

json estimates_json(const shapk::EstimateSet& es) {
    std::vector<double> mean, lower, upper;
    std::vector<long> count;
    for (int i = 0; i < es.dim(); ++i) {
        mean.push_back(es.mean(i));
        lower.push_back(es.lower(i));
        upper.push_back(es.upper(i));
        count.push_back(es.count(i));
    }
    return {{"mean", mean}, {"lower", lower}, {"upper", upper}, {"count", count}};
}

int run_explain(const ExplainArgs& args) {
    const auto inst = load_instance(args.model, args.x, args.baseline);

    shapk::TopKConfig cfg;
    cfg.k = args.k;
    cfg.eps = args.eps;
    cfg.delta = args.delta;
    cfg.t_min = args.tmin;
    cfg.seed = args.seed;
    cfg.max_evals = args.max_evals;
    cfg.kernel.coalitions_per_replicate = args.kernel_m;
    if (args.method == "sampling") {
        cfg.estimator = shapk::EstimatorKind::sampling;
    } else if (args.method == "kernel") {
        cfg.estimator = shapk::EstimatorKind::kernel;
    } else {
        throw shapk::ConfigError("--method must be sampling|kernel");
    }
    if (args.strategy == "naive") {
        cfg.strategy = shapk::Strategy::naive;
    } else if (args.strategy == "overlap") {
        cfg.strategy = shapk::Strategy::overlap_uniform;
    } else if (args.strategy == "greedy") {
        cfg.strategy = shapk::Strategy::overlap_greedy;
    } else {
        throw shapk::ConfigError("--strategy must be naive|overlap|greedy");
    }

    const shapk::TopKResult res = shapk::run_topk(inst, cfg);

    json j;
    j["schema_version"] = 1;
    j["k"] = cfg.k;
    j["eps"] = cfg.eps;
    j["delta"] = cfg.delta;
    j["t_min"] = cfg.t_min;
    j["seed"] = cfg.seed;
    j["max_evals"] = cfg.max_evals;
    j["method"] = args.method;
    j["strategy"] = args.strategy;
    if (cfg.estimator == shapk::EstimatorKind::kernel) {
        j["kernel_m"] = cfg.kernel.resolved_m(inst.d);
    }
    j["selected"] = res.selected;
    j["stop_reason"] = res.stop_reason == shapk::StopReason::converged ? "converged" : "budget_exhausted";
    j["evals"] = res.evals;
    j["per_feature_evals"] = res.per_feature_evals;
    j["per_feature_replicates"] = res.per_feature_replicates;
    j["rounds"] = res.rounds;
    j["iterations"] = res.iterations;
    j["wall_time_s"] = res.wall_time_s;
    j["estimates"] = estimates_json(res.final_estimates);
    shapk::write_text_file(args.out, j.dump(2) + "\n");

    return res.stop_reason == shapk::StopReason::converged ? kExitOk : kExitBudget;
}

int run_exact(const std::string& model_path, const std::string& x_path,
              const std::string& baseline_path, const std::string& out) {
    const auto inst = load_instance(model_path, x_path, baseline_path);
    const shapk::ExactShap exact = shapk::exact_shap(inst);

    json j;
    j["schema_version"] = 1;
    j["phi"] = std::vector<double>(exact.phi.data(), exact.phi.data() + exact.phi.size());
    j["efficiency_gap"] = exact.efficiency_gap;
    j["f_x"] = shapk::evaluate(*inst.model, inst.x);
    j["f_baseline"] = shapk::evaluate(*inst.model, inst.baseline);
    shapk::write_text_file(out, j.dump(2) + "\n");
    return kExitOk;
}

std::string swap_extension(const std::string& path, const std::string& old_ext,
                           const std::string& new_ext) {
    if (path.size() >= old_ext.size() &&
        path.compare(path.size() - old_ext.size(), old_ext.size(), old_ext) == 0) {
        return path.substr(0, path.size() - old_ext.size()) + new_ext;
    }
    return path + new_ext;
}

int run_bench(const std::string& suite_path, const std::string& out, int threads) {
    const shapk::SuiteConfig suite = shapk::load_suite(suite_path);
    const shapk::ExperimentReport report = shapk::run_benchmark(suite, threads);
    shapk::write_text_file(out, report.to_json_text() + "\n");
    shapk::write_text_file(swap_extension(out, ".json", ".cells.csv"), report.cells_csv());
    shapk::write_text_file(swap_extension(out, ".json", ".methods.csv"), report.methods_csv());
    return kExitOk;
}

int run_sweep(const std::string& suite_path, const std::vector<double>& eps_grid,
              const std::string& out, int threads) {
    const shapk::SuiteConfig suite = shapk::load_suite(suite_path);
    const shapk::ExperimentReport report = shapk::run_sensitivity(suite, eps_grid, threads);
    shapk::write_text_file(out, report.sweep_csv());
    shapk::write_text_file(swap_extension(out, ".csv", ".json"), report.to_json_text() + "\n");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shapk: Top-k SHAP feature identification with PAC guarantees"};
    app.require_subcommand(1);

    ExplainArgs ex;
    auto* explain = app.add_subcommand("explain", "identify the Top-k features of one prediction");
    explain->add_option("--model", ex.model, "model JSON file")->required();
    explain->add_option("--x", ex.x, "input row CSV (header + one row)")->required();
    explain->add_option("--baseline", ex.baseline, "baseline row CSV (header + one row)")->required();
    explain->add_option("--k", ex.k, "number of features to identify")->required();
    explain->add_option("--eps", ex.eps, "accuracy parameter epsilon");
    explain->add_option("--delta", ex.delta, "failure probability delta");
    explain->add_option("--method", ex.method, "estimator: sampling|kernel");
    explain->add_option("--strategy", ex.strategy, "stopping/sampling scheme: naive|overlap|greedy");
    explain->add_option("--tmin", ex.tmin, "minimum replicates per feature before stopping checks");
    explain->add_option("--seed", ex.seed, "RNG master seed");
    explain->add_option("--max-evals", ex.max_evals, "budget cap on function evaluations");
    explain->add_option("--kernel-m", ex.kernel_m, "coalitions per kernel replicate (0 = max(2d,128))");
    explain->add_option("--out", ex.out, "result JSON path")->required();

    std::string exact_model, exact_x, exact_baseline, exact_out;
    auto* exact = app.add_subcommand("exact", "exact SHAP values by full enumeration (d <= 20)");
    exact->add_option("--model", exact_model, "model JSON file")->required();
    exact->add_option("--x", exact_x, "input row CSV")->required();
    exact->add_option("--baseline", exact_baseline, "baseline row CSV")->required();
    exact->add_option("--out", exact_out, "phi JSON path")->required();

    std::string bench_suite, bench_out;
    int threads = 0;
    auto* bench = app.add_subcommand("bench", "run a benchmark suite and write a report");
    bench->add_option("--suite", bench_suite, "suite JSON file")->required();
    bench->add_option("--out", bench_out, "report JSON path (writes .cells.csv/.methods.csv too)")->required();
    bench->add_option("--threads", threads, "worker threads (default SHAPK_THREADS or hardware)");

    std::string sweep_suite, sweep_out;
    std::vector<double> eps_grid;
    int sweep_threads = 0;
    auto* sweep = app.add_subcommand("sweep", "epsilon sensitivity sweep, plot-ready CSV");
    sweep->add_option("--suite", sweep_suite, "suite JSON file")->required();
    sweep->add_option("--eps", eps_grid, "ascending epsilon grid, comma separated")
        ->required()
        ->delimiter(',');
    sweep->add_option("--out", sweep_out, "sweep CSV path (writes .json alongside)")->required();
    sweep->add_option("--threads", sweep_threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (explain->parsed()) return run_explain(ex);
        if (exact->parsed()) return run_exact(exact_model, exact_x, exact_baseline, exact_out);
        if (bench->parsed()) return run_bench(bench_suite, bench_out, threads);
        if (sweep->parsed()) return run_sweep(sweep_suite, eps_grid, sweep_out, sweep_threads);
    } catch (const shapk::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const shapk::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
