#include "shapk/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "shapk/errors.hpp"

namespace shapk {

namespace {

// Shapley weight for |S| = s out of d features, written as the exact
// rational s!(d-s-1)!/d! = 1 / (d * C(d-1, s)). The binomials fit a double
// exactly for d <= 20, so no factorial overflow.
std::vector<double> subset_weights(int d) {
    std::vector<double> choose(static_cast<std::size_t>(d), 1.0);  // C(d-1, s)
    for (int s = 1; s < d; ++s) {
        choose[static_cast<std::size_t>(s)] =
            choose[static_cast<std::size_t>(s - 1)] * static_cast<double>(d - s) / static_cast<double>(s);
    }
    std::vector<double> w(static_cast<std::size_t>(d));
    for (int s = 0; s < d; ++s) {
        w[static_cast<std::size_t>(s)] = 1.0 / (static_cast<double>(d) * choose[static_cast<std::size_t>(s)]);
    }
    return w;
}

}  // namespace

ExactShap exact_shap(const ExplanationInstance& inst) {
    const int d = inst.d;
    if (d > kOracleMaxDim) {
        throw ConfigError("exact_shap enumerates 2^d coalitions and refuses d=" + std::to_string(d) +
                          " > " + std::to_string(kOracleMaxDim));
    }
    const auto weights = subset_weights(d);

    // Each coalition value v(T) contributes +w[|T|-1] to every i in T and
    // -w[|T|] to every i not in T; one model eval per coalition.
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd z(d);
    const std::uint32_t n_masks = std::uint32_t{1} << d;
    double v_empty = 0.0;
    double v_full = 0.0;
    for (std::uint32_t mask = 0; mask < n_masks; ++mask) {
        for (int i = 0; i < d; ++i) {
            z[i] = (mask >> i) & 1 ? inst.x[i] : inst.baseline[i];
        }
        const double v = counted_eval(inst, z);
        if (mask == 0) v_empty = v;
        if (mask == n_masks - 1) v_full = v;
        const int size = std::popcount(mask);
        for (int i = 0; i < d; ++i) {
            if ((mask >> i) & 1) {
                phi[i] += weights[static_cast<std::size_t>(size - 1)] * v;
            } else {
                phi[i] -= weights[static_cast<std::size_t>(size)] * v;
            }
        }
    }

    ExactShap out;
    out.phi = std::move(phi);
    out.efficiency_gap = std::abs(out.phi.sum() - (v_full - v_empty));
    return out;
}

ExactTopK exact_topk(const ExactShap& es, int k, double eps) {
    const int d = static_cast<int>(es.phi.size());
    if (k < 1 || k > d) {
        throw ConfigError("exact_topk: k=" + std::to_string(k) + " out of range for d=" + std::to_string(d));
    }
    if (eps < 0.0) throw ConfigError("exact_topk: eps must be >= 0");

    std::vector<int> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (es.phi[a] != es.phi[b]) return es.phi[a] > es.phi[b];
        return a < b;
    });

    ExactTopK out;
    out.topk.assign(order.begin(), order.begin() + k);
    std::sort(out.topk.begin(), out.topk.end());
    out.kth_value = es.phi[order[static_cast<std::size_t>(k - 1)]];
    out.eps = eps;
    for (int i = 0; i < d; ++i) {
        if (es.phi[i] >= out.kth_value - eps) out.eps_margin.push_back(i);
    }
    return out;
}

bool is_eps_approximate(const std::vector<int>& candidate, const ExactShap& es, int k, double eps) {
    if (static_cast<int>(candidate.size()) != k) {
        throw ConfigError("is_eps_approximate: candidate has " + std::to_string(candidate.size()) +
                          " features, expected k=" + std::to_string(k));
    }
    const auto exact = exact_topk(es, k, eps);
    const int d = static_cast<int>(es.phi.size());
    for (int i : candidate) {
        if (i < 0 || i >= d) throw ConfigError("is_eps_approximate: feature index out of range");
        if (!(es.phi[i] >= exact.kth_value - eps)) return false;
    }
    return true;
}

}  // namespace shapk
