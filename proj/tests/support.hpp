#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "shapk/bench.hpp"
#include "shapk/model.hpp"
#include "shapk/rng.hpp"

namespace testsupport {

inline shapk::ExplanationInstance make_linear_instance(std::vector<double> w,
                                                       std::vector<double> x,
                                                       std::vector<double> b,
                                                       double bias = 0.0) {
    const auto n = static_cast<Eigen::Index>(w.size());
    auto model = std::make_shared<const shapk::ModelSpec>(
        shapk::ModelSpec::make_linear(Eigen::Map<const Eigen::VectorXd>(w.data(), n), bias));
    return {model, Eigen::Map<const Eigen::VectorXd>(x.data(), n),
            Eigen::Map<const Eigen::VectorXd>(b.data(), n)};
}

// f(z) = z0 * z1 with x = (1,1), baseline = (0,0).
inline shapk::ExplanationInstance make_product_instance() {
    auto model = std::make_shared<const shapk::ModelSpec>(
        shapk::ModelSpec::make_synthetic(2, {{1.0, {0, 1}}}));
    return {model, Eigen::VectorXd::Ones(2), Eigen::VectorXd::Zero(2)};
}

// Random model of the given kind: 0 = linear, 1 = mlp, 2 = synthetic.
// When dummy_idx is set, that feature is made invisible to the model.
inline shapk::ModelSpec random_model(shapk::Rng& rng, int d, int kind_sel, int dummy_idx = -1) {
    using namespace shapk;
    if (kind_sel == 0) {
        Eigen::VectorXd w(d);
        for (int i = 0; i < d; ++i) w[i] = rng.uniform(-1.0, 1.0);
        if (dummy_idx >= 0) w[dummy_idx] = 0.0;
        return ModelSpec::make_linear(std::move(w), rng.uniform(-0.5, 0.5));
    }
    if (kind_sel == 1) {
        const int h = 4 + static_cast<int>(rng.bounded(3));
        std::vector<int> dims = {d, h, h, 1};
        std::vector<MlpLayer> layers;
        for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
            MlpLayer layer;
            layer.w.resize(dims[l + 1], dims[l]);
            const double scale = 1.0 / std::sqrt(static_cast<double>(dims[l]));
            for (Eigen::Index r = 0; r < layer.w.rows(); ++r) {
                for (Eigen::Index c = 0; c < layer.w.cols(); ++c) {
                    layer.w(r, c) = rng.uniform(-1.0, 1.0) * scale;
                }
            }
            layer.b.resize(dims[l + 1]);
            for (Eigen::Index r = 0; r < layer.b.size(); ++r) layer.b[r] = rng.uniform(-0.2, 0.2);
            layer.act = l + 2 == dims.size() ? Activation::none
                                             : (l % 2 == 0 ? Activation::relu : Activation::tanh);
            layers.push_back(std::move(layer));
        }
        if (dummy_idx >= 0) layers.front().w.col(dummy_idx).setZero();
        return ModelSpec::make_mlp(std::move(layers), OutputKind::logit);
    }
    std::vector<SyntheticTerm> terms;
    for (int i = 0; i < d; ++i) {
        if (i == dummy_idx) continue;
        terms.push_back({rng.uniform(-1.0, 1.0), {i}});
    }
    for (int t = 0; t < d / 2 + 1; ++t) {
        int a = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(d)));
        int b = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(d)));
        if (a == b || a == dummy_idx || b == dummy_idx) continue;
        if (a > b) std::swap(a, b);
        terms.push_back({rng.uniform(-0.5, 0.5), {a, b}});
    }
    return shapk::ModelSpec::make_synthetic(d, std::move(terms));
}

inline shapk::ExplanationInstance random_instance(shapk::Rng& rng, int d, int kind_sel,
                                                  int dummy_idx = -1) {
    auto model = std::make_shared<const shapk::ModelSpec>(random_model(rng, d, kind_sel, dummy_idx));
    Eigen::VectorXd x(d), b(d);
    for (int i = 0; i < d; ++i) {
        x[i] = rng.uniform(-1.0, 1.0);
        b[i] = rng.uniform(-1.0, 1.0);
    }
    return {model, std::move(x), std::move(b)};
}

// Scratch directory cleaned up at scope exit.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("shapk-test-" + tag + "-" + std::to_string(::getpid()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return s;
}

}  // namespace testsupport
