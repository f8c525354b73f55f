#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace shapk {

enum class ModelKind { linear, mlp, synthetic };
enum class Activation { relu, tanh, none };
enum class OutputKind { logit, prob };

struct MlpLayer {
    Eigen::MatrixXd w;  // out x in
    Eigen::VectorXd b;  // out
    Activation act = Activation::none;
};

// One monomial: coeff * prod_{i in indices} z_i. Degree-1 terms are plain
// linear effects; higher degrees add feature interactions.
struct SyntheticTerm {
    double coeff = 0.0;
    std::vector<int> indices;  // sorted, unique
};

// Immutable description of the black-box f: R^d -> scalar. Safe to share
// across threads after validate().
struct ModelSpec {
    ModelKind kind = ModelKind::linear;
    int input_dim = 0;

    // linear: f(z) = coeff . z + bias
    Eigen::VectorXd coeff;
    double bias = 0.0;

    // mlp
    std::vector<MlpLayer> layers;
    OutputKind output = OutputKind::logit;

    // synthetic
    std::vector<SyntheticTerm> terms;

    // Throws ConfigError on dimension-chain violations.
    void validate() const;

    static ModelSpec make_linear(Eigen::VectorXd w, double bias = 0.0);
    static ModelSpec make_mlp(std::vector<MlpLayer> layers, OutputKind output = OutputKind::logit);
    static ModelSpec make_synthetic(int input_dim, std::vector<SyntheticTerm> terms);
};

// Deterministic forward pass; pure function of (model, input).
double evaluate(const ModelSpec& model, const Eigen::VectorXd& input);

ModelSpec load_model(const std::string& path);
void save_model(const ModelSpec& model, const std::string& path);
ModelSpec model_from_json_text(const std::string& text);
std::string model_to_json_text(const ModelSpec& model);

// Subset of feature indices in {0..d-1}, stored as a dynamic bitmask.
class Coalition {
public:
    explicit Coalition(int d);
    static Coalition empty(int d) { return Coalition(d); }
    static Coalition full(int d);
    // Throws ConfigError on out-of-range or duplicate indices.
    static Coalition from_indices(int d, const std::vector<int>& indices);

    void add(int i);
    void remove(int i);
    bool contains(int i) const;
    void clear();
    int count() const;
    int dim() const { return d_; }
    std::vector<int> members() const;

    bool operator==(const Coalition& other) const = default;

private:
    void check_index(int i) const;

    int d_ = 0;
    std::vector<std::uint64_t> bits_;
};

// Mutable per-instance bookkeeping: the function-evaluation counter plus the
// cached v(empty)/v(full) anchors used by KernelSHAP.
struct InstanceState {
    std::atomic<std::uint64_t> evals{0};
    std::mutex mu;
    std::optional<double> v_empty;
    std::optional<double> v_full;
};

// The unit being explained: a model handle, the input x, and the baseline
// that supplies values for masked-out features.
struct ExplanationInstance {
    ExplanationInstance(std::shared_ptr<const ModelSpec> model,
                        Eigen::VectorXd x,
                        Eigen::VectorXd baseline);

    std::shared_ptr<const ModelSpec> model;
    Eigen::VectorXd x;
    Eigen::VectorXd baseline;
    int d = 0;
    std::shared_ptr<InstanceState> state;

    std::uint64_t eval_count() const { return state->evals.load(std::memory_order_relaxed); }

    // Same data, zeroed counter and empty anchor cache. Used to give each
    // trial / benchmark cell its own accounting.
    ExplanationInstance with_fresh_state() const;
};

// Evaluates the model on a composed input and charges the instance's
// eval counter. Every coalition evaluation in the library funnels through
// here so the counter audits exactly.
double counted_eval(const ExplanationInstance& inst, const Eigen::VectorXd& z);

// v(S) = f(z) with z_j = x_j if j in S else baseline_j. One counted eval.
double value_of_coalition(const ExplanationInstance& inst, const Coalition& s);

// (v(empty), v(full)); each computed at most once per instance state, each
// charged as one eval on first use.
std::pair<double, double> anchor_values(const ExplanationInstance& inst);

}  // namespace shapk
