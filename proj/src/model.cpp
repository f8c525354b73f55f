#include "shapk/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "shapk/errors.hpp"

namespace shapk {

using nlohmann::json;

namespace {

double apply_activation(double v, Activation act) {
    switch (act) {
        case Activation::relu: return v > 0.0 ? v : 0.0;
        case Activation::tanh: return std::tanh(v);
        case Activation::none: return v;
    }
    return v;
}

Activation activation_from_string(const std::string& s) {
    if (s == "relu") return Activation::relu;
    if (s == "tanh") return Activation::tanh;
    if (s == "none") return Activation::none;
    throw DataError("unknown activation '" + s + "' (expected relu|tanh|none)");
}

const char* activation_to_string(Activation a) {
    switch (a) {
        case Activation::relu: return "relu";
        case Activation::tanh: return "tanh";
        case Activation::none: return "none";
    }
    return "none";
}

}  // namespace

void ModelSpec::validate() const {
    if (input_dim < 1) throw ConfigError("model input_dim must be >= 1");
    switch (kind) {
        case ModelKind::linear:
            if (coeff.size() != input_dim) {
                throw ConfigError("linear model needs exactly input_dim coefficients, got " +
                                  std::to_string(coeff.size()) + " for d=" + std::to_string(input_dim));
            }
            break;
        case ModelKind::mlp: {
            if (layers.empty()) throw ConfigError("mlp model needs at least one layer");
            int in = input_dim;
            for (std::size_t l = 0; l < layers.size(); ++l) {
                const auto& layer = layers[l];
                if (layer.w.cols() != in) {
                    throw ConfigError("mlp layer " + std::to_string(l) + " expects input of size " +
                                      std::to_string(layer.w.cols()) + " but gets " + std::to_string(in));
                }
                if (layer.b.size() != layer.w.rows()) {
                    throw ConfigError("mlp layer " + std::to_string(l) + " bias size " +
                                      std::to_string(layer.b.size()) + " does not match " +
                                      std::to_string(layer.w.rows()) + " outputs");
                }
                in = static_cast<int>(layer.w.rows());
            }
            if (in != 1) {
                throw ConfigError("mlp final layer must emit one scalar, emits " + std::to_string(in));
            }
            break;
        }
        case ModelKind::synthetic:
            for (const auto& term : terms) {
                int prev = -1;
                for (int idx : term.indices) {
                    if (idx < 0 || idx >= input_dim) {
                        throw ConfigError("synthetic term index " + std::to_string(idx) +
                                          " out of range for d=" + std::to_string(input_dim));
                    }
                    if (idx <= prev) throw ConfigError("synthetic term indices must be sorted and unique");
                    prev = idx;
                }
            }
            break;
    }
}

ModelSpec ModelSpec::make_linear(Eigen::VectorXd w, double bias) {
    ModelSpec m;
    m.kind = ModelKind::linear;
    m.input_dim = static_cast<int>(w.size());
    m.coeff = std::move(w);
    m.bias = bias;
    m.validate();
    return m;
}

ModelSpec ModelSpec::make_mlp(std::vector<MlpLayer> layers, OutputKind output) {
    ModelSpec m;
    m.kind = ModelKind::mlp;
    m.input_dim = layers.empty() ? 0 : static_cast<int>(layers.front().w.cols());
    m.layers = std::move(layers);
    m.output = output;
    m.validate();
    return m;
}

ModelSpec ModelSpec::make_synthetic(int input_dim, std::vector<SyntheticTerm> terms) {
    ModelSpec m;
    m.kind = ModelKind::synthetic;
    m.input_dim = input_dim;
    m.terms = std::move(terms);
    for (auto& term : m.terms) std::sort(term.indices.begin(), term.indices.end());
    m.validate();
    return m;
}

double evaluate(const ModelSpec& model, const Eigen::VectorXd& input) {
    if (input.size() != model.input_dim) {
        throw ConfigError("model expects input of size " + std::to_string(model.input_dim) +
                          ", got " + std::to_string(input.size()));
    }
    switch (model.kind) {
        case ModelKind::linear:
            return model.coeff.dot(input) + model.bias;
        case ModelKind::mlp: {
            Eigen::VectorXd h = input;
            for (const auto& layer : model.layers) {
                Eigen::VectorXd next = layer.w * h + layer.b;
                for (Eigen::Index i = 0; i < next.size(); ++i) {
                    next[i] = apply_activation(next[i], layer.act);
                }
                h = std::move(next);
            }
            const double logit = h[0];
            return model.output == OutputKind::prob ? 1.0 / (1.0 + std::exp(-logit)) : logit;
        }
        case ModelKind::synthetic: {
            double sum = 0.0;
            for (const auto& term : model.terms) {
                double prod = term.coeff;
                for (int idx : term.indices) prod *= input[idx];
                sum += prod;
            }
            return sum;
        }
    }
    return 0.0;
}

namespace {

ModelSpec model_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw DataError("model file: missing \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    try {
        if (kind == "linear") {
            const auto wv = j.at("w").get<std::vector<double>>();
            Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(wv.data(), static_cast<Eigen::Index>(wv.size()));
            const double bias = j.value("b", 0.0);
            if (j.contains("input_dim") && j.at("input_dim").get<int>() != static_cast<int>(wv.size())) {
                throw DataError("linear model: input_dim does not match coefficient count");
            }
            return ModelSpec::make_linear(std::move(w), bias);
        }
        if (kind == "mlp") {
            std::vector<MlpLayer> layers;
            for (const auto& lj : j.at("layers")) {
                MlpLayer layer;
                const auto rows = lj.at("w").get<std::vector<std::vector<double>>>();
                if (rows.empty()) throw DataError("mlp layer has empty weight matrix");
                const std::size_t cols = rows.front().size();
                layer.w.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
                for (std::size_t r = 0; r < rows.size(); ++r) {
                    if (rows[r].size() != cols) throw DataError("mlp layer weight matrix is ragged");
                    for (std::size_t c = 0; c < cols; ++c) layer.w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
                }
                const auto bv = lj.at("b").get<std::vector<double>>();
                layer.b = Eigen::Map<const Eigen::VectorXd>(bv.data(), static_cast<Eigen::Index>(bv.size()));
                layer.act = activation_from_string(lj.value("act", "none"));
                layers.push_back(std::move(layer));
            }
            const std::string out = j.value("output", "logit");
            if (out != "logit" && out != "prob") throw DataError("model output must be \"logit\" or \"prob\"");
            auto m = ModelSpec::make_mlp(std::move(layers), out == "prob" ? OutputKind::prob : OutputKind::logit);
            if (j.contains("input_dim") && j.at("input_dim").get<int>() != m.input_dim) {
                throw DataError("mlp model: input_dim does not match first layer width");
            }
            return m;
        }
        if (kind == "synthetic") {
            const int d = j.at("input_dim").get<int>();
            std::vector<SyntheticTerm> terms;
            for (const auto& tj : j.at("terms")) {
                SyntheticTerm t;
                t.coeff = tj.at("c").get<double>();
                t.indices = tj.at("idx").get<std::vector<int>>();
                terms.push_back(std::move(t));
            }
            return ModelSpec::make_synthetic(d, std::move(terms));
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("model file: ") + e.what());
    } catch (const ConfigError& e) {
        // Schema violations found while loading are load errors.
        throw DataError(std::string("model file: ") + e.what());
    }
    throw DataError("unknown model kind '" + kind + "' (expected linear|mlp|synthetic)");
}

json model_to_json(const ModelSpec& m) {
    json j;
    switch (m.kind) {
        case ModelKind::linear: {
            j["kind"] = "linear";
            j["w"] = std::vector<double>(m.coeff.data(), m.coeff.data() + m.coeff.size());
            j["b"] = m.bias;
            break;
        }
        case ModelKind::mlp: {
            j["kind"] = "mlp";
            j["input_dim"] = m.input_dim;
            j["output"] = m.output == OutputKind::prob ? "prob" : "logit";
            json layers = json::array();
            for (const auto& layer : m.layers) {
                json lj;
                std::vector<std::vector<double>> rows(static_cast<std::size_t>(layer.w.rows()));
                for (Eigen::Index r = 0; r < layer.w.rows(); ++r) {
                    rows[static_cast<std::size_t>(r)].assign(layer.w.row(r).begin(), layer.w.row(r).end());
                }
                lj["w"] = rows;
                lj["b"] = std::vector<double>(layer.b.data(), layer.b.data() + layer.b.size());
                lj["act"] = activation_to_string(layer.act);
                layers.push_back(std::move(lj));
            }
            j["layers"] = std::move(layers);
            break;
        }
        case ModelKind::synthetic: {
            j["kind"] = "synthetic";
            j["input_dim"] = m.input_dim;
            json terms = json::array();
            for (const auto& t : m.terms) {
                terms.push_back({{"c", t.coeff}, {"idx", t.indices}});
            }
            j["terms"] = std::move(terms);
            break;
        }
    }
    return j;
}

}  // namespace

ModelSpec model_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string("model file: JSON parse failure: ") + e.what());
    }
    return model_from_json(j);
}

std::string model_to_json_text(const ModelSpec& model) {
    return model_to_json(model).dump(2);
}

ModelSpec load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return model_from_json_text(ss.str());
}

void save_model(const ModelSpec& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file: " + path);
    out << model_to_json_text(model) << "\n";
}

Coalition::Coalition(int d) : d_(d) {
    if (d < 1) throw ConfigError("coalition dimension must be >= 1");
    bits_.assign(static_cast<std::size_t>((d + 63) / 64), 0);
}

Coalition Coalition::full(int d) {
    Coalition s(d);
    for (int i = 0; i < d; ++i) s.add(i);
    return s;
}

Coalition Coalition::from_indices(int d, const std::vector<int>& indices) {
    Coalition s(d);
    for (int i : indices) {
        if (s.contains(i)) throw ConfigError("duplicate coalition index " + std::to_string(i));
        s.add(i);
    }
    return s;
}

void Coalition::check_index(int i) const {
    if (i < 0 || i >= d_) {
        throw ConfigError("coalition index " + std::to_string(i) + " out of range for d=" + std::to_string(d_));
    }
}

void Coalition::add(int i) {
    check_index(i);
    bits_[static_cast<std::size_t>(i) / 64] |= (std::uint64_t{1} << (i % 64));
}

void Coalition::remove(int i) {
    check_index(i);
    bits_[static_cast<std::size_t>(i) / 64] &= ~(std::uint64_t{1} << (i % 64));
}

bool Coalition::contains(int i) const {
    check_index(i);
    return (bits_[static_cast<std::size_t>(i) / 64] >> (i % 64)) & 1;
}

void Coalition::clear() {
    std::fill(bits_.begin(), bits_.end(), 0);
}

int Coalition::count() const {
    int n = 0;
    for (std::uint64_t w : bits_) n += std::popcount(w);
    return n;
}

std::vector<int> Coalition::members() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count()));
    for (int i = 0; i < d_; ++i) {
        if (contains(i)) out.push_back(i);
    }
    return out;
}

ExplanationInstance::ExplanationInstance(std::shared_ptr<const ModelSpec> model_in,
                                         Eigen::VectorXd x_in,
                                         Eigen::VectorXd baseline_in)
    : model(std::move(model_in)),
      x(std::move(x_in)),
      baseline(std::move(baseline_in)),
      state(std::make_shared<InstanceState>()) {
    if (!model) throw ConfigError("explanation instance needs a model");
    model->validate();
    d = model->input_dim;
    if (x.size() != d || baseline.size() != d) {
        throw ConfigError("instance x/baseline must both have length d=" + std::to_string(d));
    }
}

ExplanationInstance ExplanationInstance::with_fresh_state() const {
    ExplanationInstance copy = *this;
    copy.state = std::make_shared<InstanceState>();
    return copy;
}

double counted_eval(const ExplanationInstance& inst, const Eigen::VectorXd& z) {
    inst.state->evals.fetch_add(1, std::memory_order_relaxed);
    return evaluate(*inst.model, z);
}

double value_of_coalition(const ExplanationInstance& inst, const Coalition& s) {
    if (s.dim() != inst.d) {
        throw ConfigError("coalition dimension " + std::to_string(s.dim()) +
                          " does not match instance d=" + std::to_string(inst.d));
    }
    Eigen::VectorXd z = inst.baseline;
    for (int i = 0; i < inst.d; ++i) {
        if (s.contains(i)) z[i] = inst.x[i];
    }
    return counted_eval(inst, z);
}

std::pair<double, double> anchor_values(const ExplanationInstance& inst) {
    auto& st = *inst.state;
    std::lock_guard<std::mutex> lock(st.mu);
    if (!st.v_empty) {
        st.v_empty = counted_eval(inst, inst.baseline);
        st.v_full = counted_eval(inst, inst.x);
    }
    return {*st.v_empty, *st.v_full};
}

}  // namespace shapk
