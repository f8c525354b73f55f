#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "shapk/estimators.hpp"
#include "shapk/model.hpp"

namespace shapk {

enum class EstimatorKind { sampling, kernel };
enum class Strategy { naive, overlap_uniform, overlap_greedy };
enum class StopReason { converged, budget_exhausted };

struct TopKConfig {
    int k = 1;
    double eps = 0.005;
    double delta = 1e-6;
    int t_min = 10;
    EstimatorKind estimator = EstimatorKind::sampling;
    Strategy strategy = Strategy::overlap_greedy;
    std::uint64_t max_evals = 10'000'000;
    std::uint64_t seed = 0;
    KernelBatchConfig kernel;

    // Throws ConfigError on out-of-range parameters or the unsupported
    // greedy+kernel combination (kernel estimates all features jointly).
    void validate(int d) const;
};

// Current partition into the k best-by-mean features and the rest, plus the
// two boundary features: h = weakest-looking member of High (lowest alpha),
// l = strongest challenger in Low (highest beta).
struct HighLowSplit {
    std::vector<int> high;  // ascending
    std::vector<int> low;   // ascending
    int h = -1;
    int l = -1;
};

struct TopKResult {
    std::vector<int> selected;  // ascending
    std::uint64_t evals = 0;
    std::vector<std::uint64_t> per_feature_evals;  // sampling: 2*T_i; kernel: empty
    std::vector<long> per_feature_replicates;
    double wall_time_s = 0.0;
    StopReason stop_reason = StopReason::budget_exhausted;
    std::uint64_t rounds = 0;      // full passes (seeding + uniform rounds)
    std::uint64_t iterations = 0;  // greedy phase-2 iterations
    EstimateSet final_estimates;
};

// Eq.-7 style check: every CI width <= eps (inclusive).
bool naive_stop_check(const EstimateSet& es, double eps);

// Overlap check: beta_l - alpha_h <= eps, with High/Low split by mean
// (ties by ascending index). Returns the split it evaluated.
std::pair<bool, HighLowSplit> overlap_stop_check(const EstimateSet& es, int k, double eps);

// Round-robin sampling (or joint kernel replicates) until every CI width
// is <= eps.
TopKResult run_naive(const ExplanationInstance& inst, const TopKConfig& cfg);

// Uniform sampling with the overlap stopping condition. KernelSHAP@k when
// estimator == kernel.
TopKResult run_overlap_uniform(const ExplanationInstance& inst, const TopKConfig& cfg);

// SamplingSHAP@k: T_min seeding then one replicate each for (h, l) per
// iteration until beta_l - alpha_h <= eps. Sampling estimator only.
TopKResult run_greedy(const ExplanationInstance& inst, const TopKConfig& cfg);

// Dispatch on cfg.strategy.
TopKResult run_topk(const ExplanationInstance& inst, const TopKConfig& cfg);

// Runs the configured driver `trials` times with independent derived seeds
// and scores selections against the exact oracle; returns the empirical
// failure fraction of the eps-approximate predicate.
double pac_trial_harness(const ExplanationInstance& inst, const TopKConfig& cfg, int trials,
                         int n_threads = 0);

}  // namespace shapk
