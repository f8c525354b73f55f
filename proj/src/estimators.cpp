#include "shapk/estimators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "shapk/errors.hpp"

namespace shapk {

double z_critical(double conf_param) {
    if (!(conf_param > 0.0 && conf_param < 1.0)) {
        throw ConfigError("z_critical: confidence parameter must lie in (0,1)");
    }
    static const boost::math::normal_distribution<double> unit_normal;
    return boost::math::quantile(unit_normal, 1.0 - conf_param / 2.0);
}

int KernelBatchConfig::resolved_m(int d) const {
    if (coalitions_per_replicate > 0) return coalitions_per_replicate;
    return std::max(2 * d, 128);
}

void KernelBatchConfig::validate(int d) const {
    if (exhaustive) return;
    const int m = resolved_m(d);
    if (m < d + 2) {
        throw ConfigError("kernel config: M=" + std::to_string(m) + " must be >= d+2=" + std::to_string(d + 2));
    }
}

EstimateSet::EstimateSet(int d, double delta) : d_(d), delta_(delta) {
    if (d < 1) throw ConfigError("EstimateSet needs d >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("EstimateSet needs delta in (0,1)");
    z_ = z_critical(delta / d);
    arms_.resize(static_cast<std::size_t>(d));
}

std::size_t EstimateSet::check(int i) const {
    if (i < 0 || i >= d_) throw ConfigError("EstimateSet: feature index out of range");
    return static_cast<std::size_t>(i);
}

void EstimateSet::add_replicate(int i, double value) {
    if (!std::isfinite(value)) {
        throw EstimatorError("non-finite replicate for feature " + std::to_string(i));
    }
    Arm& arm = arms_[check(i)];
    arm.values.push_back(value);
    const double n = static_cast<double>(arm.values.size());
    const double delta1 = value - arm.mean;
    arm.mean += delta1 / n;
    arm.m2 += delta1 * (value - arm.mean);
    if (arm.values.size() >= 2) {
        const double sd = std::sqrt(std::max(arm.m2, 0.0) / (n - 1.0));
        const double half = z_ * sd / std::sqrt(n);
        arm.lower = arm.mean - half;
        arm.upper = arm.mean + half;
    }
}

double EstimateSet::stddev(int i) const {
    const Arm& arm = arms_[check(i)];
    if (arm.values.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(std::max(arm.m2, 0.0) / (static_cast<double>(arm.values.size()) - 1.0));
}

long long EstimateSet::total_replicates() const {
    long long n = 0;
    for (const auto& arm : arms_) n += static_cast<long long>(arm.values.size());
    return n;
}

SamplingReplicator::SamplingReplicator(const ExplanationInstance& inst)
    : inst_(&inst), perm_(static_cast<std::size_t>(inst.d)), z_(inst.d) {}

double SamplingReplicator::draw(int i, Rng& rng) {
    const auto& inst = *inst_;
    const int d = inst.d;
    if (i < 0 || i >= d) throw ConfigError("sampling replicate: feature index out of range");

    std::iota(perm_.begin(), perm_.end(), 0);
    rng.shuffle(perm_);

    z_ = inst.baseline;
    for (int idx : perm_) {
        if (idx == i) break;
        z_[idx] = inst.x[idx];
    }
    const double v_s = counted_eval(inst, z_);
    z_[i] = inst.x[i];
    const double v_si = counted_eval(inst, z_);
    return v_si - v_s;
}

double sampling_shap_replicate(const ExplanationInstance& inst, int i, Rng& rng) {
    SamplingReplicator rep(inst);
    return rep.draw(i, rng);
}

double shapley_kernel_weight(int d, int s) {
    if (s <= 0 || s >= d) throw ConfigError("shapley kernel weight undefined for |S|=0 or |S|=d");
    double choose = 1.0;  // C(d, s)
    for (int i = 1; i <= s; ++i) {
        choose *= static_cast<double>(d - i + 1) / static_cast<double>(i);
    }
    return static_cast<double>(d - 1) / (choose * static_cast<double>(s) * static_cast<double>(d - s));
}

KernelReplicator::KernelReplicator(const ExplanationInstance& inst, const KernelBatchConfig& cfg)
    : inst_(&inst), cfg_(cfg), z_(inst.d) {
    const int d = inst.d;
    cfg_.validate(d);
    if (cfg_.exhaustive) {
        if (d > 20) throw ConfigError("exhaustive kernel mode enumerates 2^d coalitions and refuses d > 20");
        m_ = d >= 2 ? (1 << d) - 2 : 0;
    } else {
        m_ = cfg_.resolved_m(d);
        if (cfg_.include_paired && m_ % 2 != 0) m_ += 1;  // complements come in pairs
        // Coalition sizes drawn with probability proportional to
        // 1/(s(d-s)); the kernel weight is absorbed by importance sampling.
        size_cdf_.resize(static_cast<std::size_t>(std::max(d - 1, 0)));
        double acc = 0.0;
        for (int s = 1; s < d; ++s) {
            acc += 1.0 / (static_cast<double>(s) * static_cast<double>(d - s));
            size_cdf_[static_cast<std::size_t>(s - 1)] = acc;
        }
        for (auto& c : size_cdf_) c /= acc;
    }
    pool_.resize(static_cast<std::size_t>(d));
    if (m_ > 0) {
        onehot_.resize(m_, d);
        targets_.resize(m_);
        weights_.resize(m_);
    }
}

void KernelReplicator::build_sampled(Rng& rng) {
    const auto& inst = *inst_;
    const int d = inst.d;
    const auto [v_empty, v_full] = anchor_values(inst);
    (void)v_full;
    const int draws = cfg_.include_paired ? m_ / 2 : m_;
    int row = 0;
    for (int r = 0; r < draws; ++r) {
        const double u = rng.uniform();
        const int s = 1 + static_cast<int>(std::lower_bound(size_cdf_.begin(), size_cdf_.end(), u) -
                                           size_cdf_.begin());
        std::iota(pool_.begin(), pool_.end(), 0);
        for (int j = 0; j < s; ++j) {
            const std::uint64_t pick = rng.bounded(static_cast<std::uint64_t>(d - j));
            std::swap(pool_[static_cast<std::size_t>(j)], pool_[static_cast<std::size_t>(j) + pick]);
        }
        z_ = inst.baseline;
        onehot_.row(row).setZero();
        for (int j = 0; j < s; ++j) {
            const int idx = pool_[static_cast<std::size_t>(j)];
            z_[idx] = inst.x[idx];
            onehot_(row, idx) = 1.0;
        }
        targets_[row] = counted_eval(inst, z_) - v_empty;
        weights_[row] = 1.0;
        ++row;
        if (cfg_.include_paired) {
            // Complement coalition: same size weight by symmetry.
            z_ = inst.x;
            onehot_.row(row).setOnes();
            for (int j = 0; j < s; ++j) {
                const int idx = pool_[static_cast<std::size_t>(j)];
                z_[idx] = inst.baseline[idx];
                onehot_(row, idx) = 0.0;
            }
            targets_[row] = counted_eval(inst, z_) - v_empty;
            weights_[row] = 1.0;
            ++row;
        }
    }
}

void KernelReplicator::build_exhaustive() {
    const auto& inst = *inst_;
    const int d = inst.d;
    const auto [v_empty, v_full] = anchor_values(inst);
    (void)v_full;
    int row = 0;
    const std::uint32_t n_masks = std::uint32_t{1} << d;
    for (std::uint32_t mask = 1; mask + 1 < n_masks; ++mask) {
        const int s = std::popcount(mask);
        onehot_.row(row).setZero();
        for (int i = 0; i < d; ++i) {
            z_[i] = (mask >> i) & 1 ? inst.x[i] : inst.baseline[i];
            if ((mask >> i) & 1) onehot_(row, i) = 1.0;
        }
        targets_[row] = counted_eval(inst, z_) - v_empty;
        weights_[row] = shapley_kernel_weight(d, s);
        ++row;
    }
}

bool KernelReplicator::solve(Eigen::VectorXd& phi_out, double total) const {
    const int d = inst_->d;
    const int n = d - 1;  // unknowns after eliminating the efficiency constraint

    // Reduced design: A(r,i) = z_i - z_{d-1}, target t = y - z_{d-1} * total.
    Eigen::MatrixXd a = onehot_.leftCols(n).colwise() - onehot_.col(n);
    Eigen::VectorXd t = targets_ - total * onehot_.col(n);

    Eigen::MatrixXd gram = a.transpose() * (weights_.asDiagonal() * a);
    Eigen::VectorXd rhs = a.transpose() * (weights_.asDiagonal() * t);

    auto attempt = [&](const Eigen::MatrixXd& g) -> bool {
        Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
        if (ldlt.info() != Eigen::Success) return false;
        const Eigen::VectorXd dv = ldlt.vectorD().cwiseAbs();
        const double dmax = dv.maxCoeff();
        if (!(dmax > 0.0) || dv.minCoeff() < 1e-12 * dmax) return false;
        Eigen::VectorXd sol = ldlt.solve(rhs);
        if (!sol.allFinite()) return false;
        phi_out.resize(d);
        phi_out.head(n) = sol;
        phi_out[n] = total - sol.sum();
        return true;
    };

    if (attempt(gram)) return true;
    // One jittered retry before declaring the draw degenerate.
    Eigen::MatrixXd jittered = gram;
    jittered.diagonal().array() += 1e-10 * gram.trace() / static_cast<double>(n);
    return attempt(jittered);
}

Eigen::VectorXd KernelReplicator::draw(Rng& rng) {
    const auto& inst = *inst_;
    const int d = inst.d;
    const auto [v_empty, v_full] = anchor_values(inst);
    const double total = v_full - v_empty;

    if (d == 1) {
        Eigen::VectorXd phi(1);
        phi[0] = total;
        return phi;
    }

    for (int tries = 0; tries < 2; ++tries) {
        if (cfg_.exhaustive) {
            build_exhaustive();
        } else {
            build_sampled(rng);
        }
        Eigen::VectorXd phi;
        if (solve(phi, total)) return phi;
        if (cfg_.exhaustive) break;  // deterministic system, retry cannot help
    }
    throw EstimatorError("degenerate kernel sample: regression system singular after retry");
}

Eigen::VectorXd kernel_shap_replicate(const ExplanationInstance& inst,
                                      const KernelBatchConfig& cfg,
                                      Rng& rng) {
    KernelReplicator rep(inst, cfg);
    return rep.draw(rng);
}

}  // namespace shapk
