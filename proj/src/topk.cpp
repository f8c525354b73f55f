#include "shapk/topk.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>

#include "shapk/errors.hpp"
#include "shapk/oracle.hpp"
#include "shapk/parallel.hpp"

namespace shapk {

void TopKConfig::validate(int d) const {
    if (k < 1 || k >= d) {
        throw ConfigError("topk: k=" + std::to_string(k) + " must satisfy 1 <= k < d=" + std::to_string(d));
    }
    if (!(eps > 0.0)) throw ConfigError("topk: eps must be > 0");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("topk: delta must lie in (0,1)");
    if (t_min < 2) throw ConfigError("topk: t_min must be >= 2");
    if (max_evals < 1) throw ConfigError("topk: max_evals must be >= 1");
    if (strategy == Strategy::overlap_greedy && estimator != EstimatorKind::sampling) {
        throw ConfigError("greedy sampling requires a per-feature estimator; kernel estimates all features jointly");
    }
    if (estimator == EstimatorKind::kernel) kernel.validate(d);
}

bool naive_stop_check(const EstimateSet& es, double eps) {
    for (int i = 0; i < es.dim(); ++i) {
        if (!(es.width(i) <= eps)) return false;
    }
    return true;
}

namespace {

// Indices ordered by estimate mean, descending; ties by ascending index.
std::vector<int> order_by_mean(const EstimateSet& es) {
    std::vector<int> order(static_cast<std::size_t>(es.dim()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (es.mean(a) != es.mean(b)) return es.mean(a) > es.mean(b);
        return a < b;
    });
    return order;
}

}  // namespace

std::pair<bool, HighLowSplit> overlap_stop_check(const EstimateSet& es, int k, double eps) {
    const int d = es.dim();
    if (k < 1 || k >= d) throw ConfigError("overlap_stop_check: k out of range");
    const auto order = order_by_mean(es);

    HighLowSplit split;
    split.high.assign(order.begin(), order.begin() + k);
    split.low.assign(order.begin() + k, order.end());
    std::sort(split.high.begin(), split.high.end());
    std::sort(split.low.begin(), split.low.end());

    split.h = split.high.front();
    for (int i : split.high) {
        if (es.lower(i) < es.lower(split.h)) split.h = i;
    }
    split.l = split.low.front();
    for (int i : split.low) {
        if (es.upper(i) > es.upper(split.l)) split.l = i;
    }
    const bool stop = es.upper(split.l) - es.lower(split.h) <= eps;
    return {stop, split};
}

namespace {

// Shared driver state: the estimate set plus replicate plumbing with
// per-(feature, replicate-index) RNG streams, so every strategy sees the
// same replicate j of feature i under the same master seed.
class Driver {
public:
    Driver(const ExplanationInstance& inst, const TopKConfig& cfg)
        : inst_(inst),
          cfg_(cfg),
          streams_(cfg.seed),
          es_(inst.d, cfg.delta),
          sampler_(inst),
          start_evals_(inst.eval_count()) {
        if (cfg_.estimator == EstimatorKind::kernel) {
            kernel_.emplace(inst, cfg_.kernel);
        }
    }

    std::uint64_t used() const { return inst_.eval_count() - start_evals_; }

    void add_sampling_replicate(int i) {
        const std::uint64_t t = static_cast<std::uint64_t>(es_.count(i));
        Rng rng = streams_.stream(stream_tag::sampling, static_cast<std::uint64_t>(i), t);
        es_.add_replicate(i, sampler_.draw(i, rng));
    }

    void add_round() {
        if (cfg_.estimator == EstimatorKind::sampling) {
            for (int i = 0; i < inst_.d; ++i) add_sampling_replicate(i);
        } else {
            Rng rng = streams_.stream(stream_tag::kernel, 0, kernel_rounds_++);
            const Eigen::VectorXd joint = kernel_->draw(rng);
            for (int i = 0; i < inst_.d; ++i) es_.add_replicate(i, joint[i]);
        }
    }

    std::vector<int> top_k_by_mean() const {
        auto order = order_by_mean(es_);
        std::vector<int> out(order.begin(), order.begin() + cfg_.k);
        std::sort(out.begin(), out.end());
        return out;
    }

    TopKResult finish(std::vector<int> selected, StopReason reason,
                      std::uint64_t rounds, std::uint64_t iterations,
                      std::chrono::steady_clock::time_point t0) {
        TopKResult res{.selected = std::move(selected),
                       .evals = used(),
                       .per_feature_evals = {},
                       .per_feature_replicates = {},
                       .wall_time_s = 0.0,
                       .stop_reason = reason,
                       .rounds = rounds,
                       .iterations = iterations,
                       .final_estimates = es_};
        res.per_feature_replicates.resize(static_cast<std::size_t>(inst_.d));
        for (int i = 0; i < inst_.d; ++i) {
            res.per_feature_replicates[static_cast<std::size_t>(i)] = es_.count(i);
        }
        if (cfg_.estimator == EstimatorKind::sampling) {
            res.per_feature_evals.resize(static_cast<std::size_t>(inst_.d));
            for (int i = 0; i < inst_.d; ++i) {
                res.per_feature_evals[static_cast<std::size_t>(i)] =
                    2 * static_cast<std::uint64_t>(es_.count(i));
            }
        }
        res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return res;
    }

    const ExplanationInstance& inst_;
    const TopKConfig& cfg_;
    StreamFactory streams_;
    EstimateSet es_;
    SamplingReplicator sampler_;
    std::optional<KernelReplicator> kernel_;
    std::uint64_t kernel_rounds_ = 0;
    std::uint64_t start_evals_ = 0;
};

// Uniform round-robin loop shared by the naive and overlap drivers. The
// stopping predicate is evaluated before each round on fresh state; the
// first round always runs so a selection is defined even under tiny budgets.
template <typename StopFn, typename SelectFn>
TopKResult run_uniform(const ExplanationInstance& inst, const TopKConfig& cfg,
                       StopFn&& stop, SelectFn&& select) {
    cfg.validate(inst.d);
    const auto t0 = std::chrono::steady_clock::now();
    Driver drv(inst, cfg);

    std::uint64_t rounds = 0;
    StopReason reason = StopReason::budget_exhausted;
    for (;;) {
        if (rounds >= static_cast<std::uint64_t>(cfg.t_min) && stop(drv.es_)) {
            reason = StopReason::converged;
            break;
        }
        if (rounds > 0 && drv.used() >= cfg.max_evals) {
            reason = StopReason::budget_exhausted;
            break;
        }
        drv.add_round();
        ++rounds;
    }
    return drv.finish(select(drv), reason, rounds, 0, t0);
}

}  // namespace

TopKResult run_naive(const ExplanationInstance& inst, const TopKConfig& cfg) {
    if (cfg.strategy != Strategy::naive) throw ConfigError("run_naive requires strategy = naive");
    return run_uniform(
        inst, cfg,
        [&](const EstimateSet& es) { return naive_stop_check(es, cfg.eps); },
        [&](const Driver& drv) { return drv.top_k_by_mean(); });
}

TopKResult run_overlap_uniform(const ExplanationInstance& inst, const TopKConfig& cfg) {
    if (cfg.strategy != Strategy::overlap_uniform) {
        throw ConfigError("run_overlap_uniform requires strategy = overlap_uniform");
    }
    return run_uniform(
        inst, cfg,
        [&](const EstimateSet& es) { return overlap_stop_check(es, cfg.k, cfg.eps).first; },
        [&](const Driver& drv) {
            return overlap_stop_check(drv.es_, cfg.k, cfg.eps).second.high;
        });
}

TopKResult run_greedy(const ExplanationInstance& inst, const TopKConfig& cfg) {
    if (cfg.strategy != Strategy::overlap_greedy) {
        throw ConfigError("run_greedy requires strategy = overlap_greedy");
    }
    cfg.validate(inst.d);
    const auto t0 = std::chrono::steady_clock::now();
    Driver drv(inst, cfg);

    // Phase 1: T_min replicates per feature.
    std::uint64_t rounds = 0;
    bool seeded = true;
    for (int r = 0; r < cfg.t_min; ++r) {
        if (r > 0 && drv.used() >= cfg.max_evals) {
            seeded = false;
            break;
        }
        drv.add_round();
        ++rounds;
    }

    // Phase 2: sample the boundary pair until the overlap closes.
    std::uint64_t iterations = 0;
    StopReason reason = StopReason::budget_exhausted;
    if (seeded) {
        for (;;) {
            const auto [stop, split] = overlap_stop_check(drv.es_, cfg.k, cfg.eps);
            if (stop) {
                reason = StopReason::converged;
                break;
            }
            if (drv.used() >= cfg.max_evals) {
                reason = StopReason::budget_exhausted;
                break;
            }
            drv.add_sampling_replicate(split.h);
            drv.add_sampling_replicate(split.l);
            ++iterations;
        }
    }
    const auto split = overlap_stop_check(drv.es_, cfg.k, cfg.eps).second;
    return drv.finish(split.high, reason, rounds, iterations, t0);
}

TopKResult run_topk(const ExplanationInstance& inst, const TopKConfig& cfg) {
    switch (cfg.strategy) {
        case Strategy::naive: return run_naive(inst, cfg);
        case Strategy::overlap_uniform: return run_overlap_uniform(inst, cfg);
        case Strategy::overlap_greedy: return run_greedy(inst, cfg);
    }
    throw ConfigError("unknown strategy");
}

double pac_trial_harness(const ExplanationInstance& inst, const TopKConfig& cfg, int trials,
                         int n_threads) {
    if (trials < 1) throw ConfigError("pac_trial_harness: trials must be >= 1");
    cfg.validate(inst.d);
    const ExactShap exact = exact_shap(inst);

    const StreamFactory streams(cfg.seed);
    std::vector<char> failed(static_cast<std::size_t>(trials), 0);
    parallel_for(static_cast<std::size_t>(trials), n_threads, [&](std::size_t t) {
        ExplanationInstance clone = inst.with_fresh_state();
        TopKConfig trial_cfg = cfg;
        trial_cfg.seed = streams.derive(stream_tag::trial, static_cast<std::uint64_t>(t));
        const TopKResult res = run_topk(clone, trial_cfg);
        failed[t] = is_eps_approximate(res.selected, exact, cfg.k, cfg.eps) ? 0 : 1;
    });
    const long n_failed = std::count(failed.begin(), failed.end(), char{1});
    return static_cast<double>(n_failed) / static_cast<double>(trials);
}

}  // namespace shapk
