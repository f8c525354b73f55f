#include <doctest.h>

#include <cstring>

#include "shapk/errors.hpp"
#include "shapk/model.hpp"
#include "support.hpp"

using namespace shapk;
using testsupport::make_linear_instance;

TEST_CASE("evaluate: linear dot product") {
    Eigen::VectorXd w(3);
    w << 1, 2, 3;
    const auto m = ModelSpec::make_linear(w);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(3);
    CHECK(evaluate(m, ones) == doctest::Approx(6.0));
    CHECK(evaluate(m, Eigen::VectorXd::Zero(3)) == doctest::Approx(0.0));
}

TEST_CASE("evaluate: one-hidden-layer relu mlp, hand traced") {
    MlpLayer l1;
    l1.w.resize(1, 2);
    l1.w << 1, -1;
    l1.b.resize(1);
    l1.b << 0;
    l1.act = Activation::relu;
    MlpLayer l2;
    l2.w.resize(1, 1);
    l2.w << 2;
    l2.b.resize(1);
    l2.b << 0;
    l2.act = Activation::none;
    const auto m = ModelSpec::make_mlp({l1, l2});
    Eigen::VectorXd in(2);
    in << 3, 1;
    CHECK(evaluate(m, in) == doctest::Approx(4.0));  // relu(3-1)*2
}

TEST_CASE("evaluate: prob output applies the sigmoid") {
    MlpLayer l;
    l.w.resize(1, 1);
    l.w << 1;
    l.b.resize(1);
    l.b << 0;
    const auto m = ModelSpec::make_mlp({l}, OutputKind::prob);
    Eigen::VectorXd zero(1);
    zero << 0;
    CHECK(evaluate(m, zero) == doctest::Approx(0.5));
}

TEST_CASE("evaluate: dimension mismatch is a configuration error") {
    Eigen::VectorXd w(2);
    w << 1, 1;
    const auto m = ModelSpec::make_linear(w);
    CHECK_THROWS_AS(evaluate(m, Eigen::VectorXd::Zero(3)), ConfigError);
}

TEST_CASE("evaluate is pure: repeated calls are bit-identical") {
    Rng rng(42);
    for (int kind = 0; kind < 3; ++kind) {
        const auto m = testsupport::random_model(rng, 6, kind);
        Eigen::VectorXd in(6);
        for (int i = 0; i < 6; ++i) in[i] = rng.uniform(-2.0, 2.0);
        const double a = evaluate(m, in);
        const double b = evaluate(m, in);
        CHECK(std::memcmp(&a, &b, sizeof(double)) == 0);
    }
}

TEST_CASE("model validate: broken dimension chains") {
    Eigen::VectorXd w(2);
    w << 1, 1;
    ModelSpec linear = ModelSpec::make_linear(w);
    linear.input_dim = 3;
    CHECK_THROWS_AS(linear.validate(), ConfigError);

    MlpLayer l1;
    l1.w = Eigen::MatrixXd::Ones(2, 3);
    l1.b = Eigen::VectorXd::Zero(2);
    MlpLayer l2;
    l2.w = Eigen::MatrixXd::Ones(1, 4);  // expects 4, gets 2
    l2.b = Eigen::VectorXd::Zero(1);
    CHECK_THROWS_AS(ModelSpec::make_mlp({l1, l2}), ConfigError);

    CHECK_THROWS_AS(ModelSpec::make_synthetic(2, {{1.0, {0, 5}}}), ConfigError);
}

TEST_CASE("value_of_coalition: masking against the baseline") {
    auto inst = make_linear_instance({1, 2}, {1, 1}, {0, 0});
    CHECK(value_of_coalition(inst, Coalition::full(2)) == doctest::Approx(3.0));   // f(x)
    CHECK(value_of_coalition(inst, Coalition::empty(2)) == doctest::Approx(0.0));  // f(baseline)
    CHECK(value_of_coalition(inst, Coalition::from_indices(2, {1})) == doctest::Approx(2.0));
}

TEST_CASE("value_of_coalition matches evaluate at the extremes on random instances") {
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
        const int d = 2 + static_cast<int>(rng.bounded(6));
        auto inst = testsupport::random_instance(rng, d, static_cast<int>(rng.bounded(3)));
        CHECK(value_of_coalition(inst, Coalition::full(d)) == evaluate(*inst.model, inst.x));
        CHECK(value_of_coalition(inst, Coalition::empty(d)) == evaluate(*inst.model, inst.baseline));
    }
}

TEST_CASE("eval counter counts exactly the coalition evaluations") {
    auto inst = make_linear_instance({1, 2, 3}, {1, 1, 1}, {0, 0, 0});
    CHECK(inst.eval_count() == 0);
    value_of_coalition(inst, Coalition::empty(3));
    value_of_coalition(inst, Coalition::full(3));
    value_of_coalition(inst, Coalition::from_indices(3, {0, 2}));
    CHECK(inst.eval_count() == 3);

    auto fresh = inst.with_fresh_state();
    CHECK(fresh.eval_count() == 0);
    CHECK(inst.eval_count() == 3);
}

TEST_CASE("anchor values are cached per instance state") {
    auto inst = make_linear_instance({1, 2}, {1, 1}, {0, 0});
    const auto [v0, v1] = anchor_values(inst);
    CHECK(v0 == doctest::Approx(0.0));
    CHECK(v1 == doctest::Approx(3.0));
    CHECK(inst.eval_count() == 2);
    anchor_values(inst);
    CHECK(inst.eval_count() == 2);  // cached, no extra evals

    auto fresh = inst.with_fresh_state();
    anchor_values(fresh);
    CHECK(fresh.eval_count() == 2);
}

TEST_CASE("coalition: index hygiene") {
    Coalition s(5);
    s.add(3);
    CHECK(s.contains(3));
    CHECK(s.count() == 1);
    s.remove(3);
    CHECK(s.count() == 0);
    CHECK_THROWS_AS(s.add(5), ConfigError);
    CHECK_THROWS_AS(Coalition::from_indices(5, {1, 1}), ConfigError);
    CHECK(Coalition::from_indices(5, {4, 0, 2}).members() == std::vector<int>{0, 2, 4});
    CHECK(Coalition::full(70).count() == 70);  // multi-word mask
}

TEST_CASE("instance: x/baseline length must match d") {
    Eigen::VectorXd w(2);
    w << 1, 1;
    auto model = std::make_shared<const ModelSpec>(ModelSpec::make_linear(w));
    CHECK_THROWS_AS(ExplanationInstance(model, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(2)),
                    ConfigError);
}

TEST_CASE("load_model: well-formed linear JSON") {
    testsupport::TempDir dir("model-linear");
    testsupport::write_file(dir.file("m.json"), R"({"kind":"linear","w":[1,2,3],"b":0.5})");
    const auto m = load_model(dir.file("m.json"));
    CHECK(m.kind == ModelKind::linear);
    CHECK(m.input_dim == 3);
    CHECK(m.bias == doctest::Approx(0.5));
}

TEST_CASE("load_model: mismatched layer dims fail with a load error") {
    testsupport::TempDir dir("model-bad");
    testsupport::write_file(dir.file("bad.json"),
                            R"({"kind":"mlp","input_dim":2,
                                "layers":[{"w":[[1,-1]],"b":[0],"act":"relu"},
                                          {"w":[[2,2]],"b":[0],"act":"none"}],
                                "output":"logit"})");
    CHECK_THROWS_AS(load_model(dir.file("bad.json")), DataError);
    testsupport::write_file(dir.file("garbage.json"), "{not json");
    CHECK_THROWS_AS(load_model(dir.file("garbage.json")), DataError);
    CHECK_THROWS_AS(load_model(dir.file("missing.json")), DataError);
}

TEST_CASE("load_model: five-layer mlp survives a save/load round trip") {
    Rng rng(11);
    std::vector<MlpLayer> layers;
    std::vector<int> dims = {4, 6, 5, 4, 3, 1};
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        MlpLayer layer;
        layer.w.resize(dims[l + 1], dims[l]);
        for (Eigen::Index r = 0; r < layer.w.rows(); ++r) {
            for (Eigen::Index c = 0; c < layer.w.cols(); ++c) layer.w(r, c) = rng.uniform(-1, 1);
        }
        layer.b = Eigen::VectorXd::Zero(dims[l + 1]);
        layer.act = l + 2 == dims.size() ? Activation::none : Activation::relu;
        layers.push_back(std::move(layer));
    }
    const auto m = ModelSpec::make_mlp(std::move(layers), OutputKind::prob);

    testsupport::TempDir dir("model-roundtrip");
    save_model(m, dir.file("mlp.json"));
    const auto loaded = load_model(dir.file("mlp.json"));
    CHECK(loaded.kind == ModelKind::mlp);
    CHECK(loaded.layers.size() == 5);
    CHECK(loaded.output == OutputKind::prob);
    Eigen::VectorXd probe(4);
    probe << 0.3, -0.7, 1.1, 0.0;
    CHECK(evaluate(loaded, probe) == evaluate(m, probe));
}

TEST_CASE("load_model: synthetic kind round trip") {
    const auto m = ModelSpec::make_synthetic(3, {{0.5, {0}}, {1.5, {1, 2}}});
    const auto loaded = model_from_json_text(model_to_json_text(m));
    Eigen::VectorXd probe(3);
    probe << 1, 2, 3;
    CHECK(evaluate(loaded, probe) == evaluate(m, probe));
}
