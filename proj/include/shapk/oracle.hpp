#pragma once

#include <vector>

#include <Eigen/Dense>

#include "shapk/model.hpp"

namespace shapk {

// Ground-truth attributions from full coalition enumeration.
struct ExactShap {
    Eigen::VectorXd phi;
    double efficiency_gap = 0.0;  // |sum(phi) - (f(x) - f(baseline))|
};

struct ExactTopK {
    std::vector<int> topk;        // k largest, ties by ascending index; sorted ascending
    double kth_value = 0.0;       // k-th largest phi
    double eps = 0.0;
    std::vector<int> eps_margin;  // {i : phi_i >= kth_value - eps}
};

// Exact interventional SHAP by enumerating all 2^d coalitions. Cost is
// Theta(2^d); refuses d > 20.
ExactShap exact_shap(const ExplanationInstance& inst);

ExactTopK exact_topk(const ExactShap& es, int k, double eps);

// True iff every candidate feature satisfies phi_i >= phi_k - eps.
// Requires |candidate| == k.
bool is_eps_approximate(const std::vector<int>& candidate, const ExactShap& es, int k, double eps);

inline constexpr int kOracleMaxDim = 20;

}  // namespace shapk
