#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shapk/model.hpp"
#include "shapk/topk.hpp"

namespace shapk {

struct Dataset {
    std::string name;
    std::vector<std::string> features;
    std::vector<Eigen::VectorXd> rows;
    Eigen::VectorXd baseline_row;

    int dim() const { return static_cast<int>(features.size()); }
};

// Loads a header+numeric CSV plus a one-row baseline CSV of the same width.
Dataset load_dataset(const std::string& csv_path, const std::string& baseline_path);

// Single-row CSV (header + exactly one numeric row), for --x / --baseline.
Eigen::VectorXd load_vector_csv(const std::string& path);

enum class GapProfile { separated, clustered, adversarial };

GapProfile gap_profile_from_string(const std::string& s);
const char* gap_profile_to_string(GapProfile p);

struct SyntheticInstance {
    ExplanationInstance instance;
    Eigen::VectorXd analytic_phi;  // exact attributions of the generated model
    std::string name;
};

// Desk-scale stand-ins for trained models: linear main effects with known
// gap structure around the k-th boundary, plus small pairwise interactions
// so replicates carry variance. x = ones, baseline = zeros.
SyntheticInstance gen_synthetic(int d, GapProfile profile, std::uint64_t seed, int k = 4);

enum class Method {
    sampling_naive,    // SamplingSHAP, naive stopping
    sampling_at_k,     // SamplingSHAP@k: greedy + overlap stopping
    sampling_overlap,  // SamplingSHAP with overlap stopping, uniform sampling
    kernel_naive,      // KernelSHAP, naive stopping
    kernel_at_k,       // KernelSHAP@k: overlap stopping
};

const char* method_id(Method m);
Method method_from_id(const std::string& id);
TopKConfig method_config(Method m, const struct SuiteConfig& suite, std::uint64_t seed);

struct SuiteConfig {
    std::string name = "suite";

    // Synthetic source (used when count > 0).
    GapProfile profile = GapProfile::separated;
    int d = 20;
    int count = 0;

    // File source (used when model_path non-empty).
    std::string model_path;
    std::string data_path;
    std::string baseline_path;
    bool negative_only = false;
    std::optional<double> negative_threshold;  // default 0.5 for prob output, 0.0 for logit
    int max_instances = 0;                     // 0 = all

    int k = 4;
    double eps = 0.005;
    double delta = 1e-6;
    int t_min = 10;
    int kernel_m = 0;  // 0 = max(2d, 128)
    std::uint64_t max_evals = 10'000'000;
    std::uint64_t seed = 0;
    std::vector<Method> methods = {Method::sampling_naive, Method::sampling_at_k,
                                   Method::kernel_naive, Method::kernel_at_k};
};

SuiteConfig load_suite(const std::string& path);
SuiteConfig suite_from_json_text(const std::string& text);

struct BenchCell {
    int instance = 0;
    std::string instance_name;
    Method method = Method::sampling_naive;
    double eps = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t evals = 0;
    double runtime_s = 0.0;
    std::vector<int> selected;
    bool converged = false;
    std::string error;  // non-empty when the driver failed
};

struct MethodAggregate {
    Method method = Method::sampling_naive;
    double mean_evals = 0.0;
    double mean_runtime_s = 0.0;
    int n_converged = 0;
    int n_cells = 0;
    bool all_failed = false;
};

struct SpeedupEntry {
    Method baseline = Method::sampling_naive;
    Method variant = Method::sampling_at_k;
    double eval_ratio = 0.0;
    double runtime_ratio = 0.0;
    int n_pairs = 0;
};

struct SweepPoint {
    double eps = 0.0;
    Method method = Method::sampling_naive;
    double mean_evals = 0.0;
    double mean_runtime_s = 0.0;
    int n_converged = 0;
};

struct ExperimentReport {
    SuiteConfig suite;
    std::vector<double> eps_grid;  // sensitivity runs only
    std::vector<BenchCell> cells;
    std::vector<MethodAggregate> aggregates;
    std::vector<SpeedupEntry> speedups;
    std::vector<SweepPoint> sweep;

    std::string to_json_text(bool include_runtime = true) const;
    std::string cells_csv() const;
    std::string methods_csv() const;
    std::string sweep_csv() const;
};

// Explanation instances for a suite. Synthetic suites generate `count`
// instances; file suites explain each (optionally negative-predicted) row.
std::vector<ExplanationInstance> suite_instances(const SuiteConfig& suite,
                                                 std::vector<std::string>* names = nullptr);

// Runs every instance x method cell with paired per-instance seeds.
ExperimentReport run_benchmark(const SuiteConfig& suite, int n_threads = 0);

// Re-runs the suite across an ascending eps grid, same instances and seeds.
ExperimentReport run_sensitivity(const SuiteConfig& suite, const std::vector<double>& eps_grid,
                                 int n_threads = 0);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace shapk
