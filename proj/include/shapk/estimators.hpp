#pragma once

#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "shapk/model.hpp"
#include "shapk/rng.hpp"

namespace shapk {

// Two-sided standard-normal critical value: Z such that +-Z covers
// probability 1 - conf_param, i.e. Phi^-1(1 - conf_param/2).
double z_critical(double conf_param);

struct KernelBatchConfig {
    int coalitions_per_replicate = 0;  // M; 0 resolves to max(2d, 128)
    bool include_paired = false;       // draw coalition/complement pairs
    bool exhaustive = false;           // all 2^d - 2 proper coalitions, exact kernel weights

    int resolved_m(int d) const;
    void validate(int d) const;  // requires M >= d + 2 in sampled mode
};

// Per-feature replicate sets {phi_hat_i^j} with running means, Bessel
// standard deviations and CLT confidence intervals at confidence delta/d.
class EstimateSet {
public:
    EstimateSet(int d, double delta);

    // Appends one replicate and refreshes mean/std/CI for that feature.
    // Throws EstimatorError on non-finite values.
    void add_replicate(int i, double value);

    int dim() const { return d_; }
    double delta() const { return delta_; }
    double z() const { return z_; }

    long count(int i) const { return static_cast<long>(arms_[check(i)].values.size()); }
    double mean(int i) const { return arms_[check(i)].mean; }
    double stddev(int i) const;
    double lower(int i) const { return arms_[check(i)].lower; }
    double upper(int i) const { return arms_[check(i)].upper; }
    double width(int i) const { return upper(i) - lower(i); }
    const std::vector<double>& replicates(int i) const { return arms_[check(i)].values; }

    long long total_replicates() const;

private:
    struct Arm {
        std::vector<double> values;
        double mean = 0.0;
        double m2 = 0.0;  // Welford sum of squared deviations
        double lower = -std::numeric_limits<double>::infinity();
        double upper = std::numeric_limits<double>::infinity();
    };

    std::size_t check(int i) const;

    int d_ = 0;
    double delta_ = 0.0;
    double z_ = 0.0;
    std::vector<Arm> arms_;
};

// One unbiased SamplingSHAP draw for feature i: sample a uniform random
// permutation, take S = features preceding i, return v(S u {i}) - v(S).
// Exactly 2 function evaluations. Owns reusable buffers; not thread-safe.
class SamplingReplicator {
public:
    explicit SamplingReplicator(const ExplanationInstance& inst);
    double draw(int i, Rng& rng);

private:
    const ExplanationInstance* inst_;
    std::vector<int> perm_;
    Eigen::VectorXd z_;
};

double sampling_shap_replicate(const ExplanationInstance& inst, int i, Rng& rng);

// One joint KernelSHAP replicate: M sampled coalitions (or every proper
// coalition in exhaustive mode), weighted least squares with the efficiency
// constraint eliminated into the last feature. M (+2 on first use of the
// anchors) function evaluations. Not thread-safe.
class KernelReplicator {
public:
    KernelReplicator(const ExplanationInstance& inst, const KernelBatchConfig& cfg);
    Eigen::VectorXd draw(Rng& rng);
    int m() const { return m_; }

private:
    void build_sampled(Rng& rng);
    void build_exhaustive();
    bool solve(Eigen::VectorXd& phi_out, double total) const;

    const ExplanationInstance* inst_;
    KernelBatchConfig cfg_;
    int m_ = 0;
    std::vector<double> size_cdf_;  // P(|S| <= s), s = 1..d-1
    std::vector<int> pool_;
    Eigen::VectorXd z_;
    Eigen::MatrixXd onehot_;   // m x d coalition indicators
    Eigen::VectorXd targets_;  // v(S) - v(empty)
    Eigen::VectorXd weights_;
};

Eigen::VectorXd kernel_shap_replicate(const ExplanationInstance& inst,
                                      const KernelBatchConfig& cfg,
                                      Rng& rng);

// Shapley kernel weight (d-1) / (C(d,s) * s * (d-s)) for proper coalitions.
double shapley_kernel_weight(int d, int s);

}  // namespace shapk
