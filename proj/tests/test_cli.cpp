#include <doctest.h>

#include <cstdlib>
#include <string>
#include <vector>

#include <json.hpp>

#include "support.hpp"

namespace {

using nlohmann::json;

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SHAPK_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

struct Fixture {
    testsupport::TempDir dir{"cli"};

    Fixture() {
        testsupport::write_file(dir.file("linear.json"), R"({"kind":"linear","w":[1,2,3],"b":0})");
        testsupport::write_file(dir.file("x.csv"), "f0,f1,f2\n1,1,1\n");
        testsupport::write_file(dir.file("b.csv"), "f0,f1,f2\n0,0,0\n");
        testsupport::write_file(dir.file("product.json"),
                                R"({"kind":"synthetic","input_dim":2,"terms":[{"c":1.0,"idx":[0,1]}]})");
        testsupport::write_file(dir.file("x2.csv"), "f0,f1\n1,1\n");
        testsupport::write_file(dir.file("b2.csv"), "f0,f1\n0,0\n");
    }

    std::string instance_args(const std::string& model) const {
        return "--model " + dir.file(model) + " --x " + dir.file("x.csv") + " --baseline " +
               dir.file("b.csv");
    }
};

}  // namespace

TEST_CASE("cli explain: converged run writes a result document") {
    Fixture fx;
    const std::string out = fx.dir.file("result.json");
    const int rc = run_cli("explain " + fx.instance_args("linear.json") +
                           " --k 2 --eps 0.01 --delta 0.1 --method sampling --strategy greedy"
                           " --tmin 10 --seed 7 --out " + out);
    CHECK(rc == 0);
    const json j = json::parse(testsupport::read_file(out));
    CHECK(j.at("schema_version") == 1);
    CHECK(j.at("selected") == json::array({1, 2}));
    CHECK(j.at("stop_reason") == "converged");
    CHECK(j.at("evals").get<std::uint64_t>() > 0);
    CHECK(j.at("estimates").at("count").size() == 3);
}

TEST_CASE("cli explain: kernel estimator with overlap strategy") {
    Fixture fx;
    const std::string out = fx.dir.file("kernel.json");
    const int rc = run_cli("explain " + fx.instance_args("linear.json") +
                           " --k 1 --eps 0.05 --delta 0.1 --method kernel --strategy overlap"
                           " --kernel-m 16 --seed 3 --out " + out);
    CHECK(rc == 0);
    const json j = json::parse(testsupport::read_file(out));
    CHECK(j.at("selected") == json::array({2}));
    CHECK(j.at("kernel_m") == 16);
}

TEST_CASE("cli explain: budget exhaustion exits 3 but still reports") {
    Fixture fx;
    const std::string out = fx.dir.file("budget.json");
    const int rc = run_cli("explain --model " + fx.dir.file("product.json") + " --x " +
                           fx.dir.file("x2.csv") + " --baseline " + fx.dir.file("b2.csv") +
                           " --k 1 --eps 1e-9 --delta 0.1 --method sampling --strategy naive"
                           " --max-evals 500 --seed 1 --out " + out);
    CHECK(rc == 3);
    const json j = json::parse(testsupport::read_file(out));
    CHECK(j.at("stop_reason") == "budget_exhausted");
}

TEST_CASE("cli explain: greedy with the kernel estimator is a usage error") {
    Fixture fx;
    const int rc = run_cli("explain " + fx.instance_args("linear.json") +
                           " --k 1 --method kernel --strategy greedy --out " + fx.dir.file("no.json"));
    CHECK(rc == 1);
}

TEST_CASE("cli exact: linear closed form") {
    Fixture fx;
    const std::string out = fx.dir.file("phi.json");
    const int rc = run_cli("exact " + fx.instance_args("linear.json") + " --out " + out);
    CHECK(rc == 0);
    const json j = json::parse(testsupport::read_file(out));
    const auto phi = j.at("phi").get<std::vector<double>>();
    REQUIRE(phi.size() == 3);
    CHECK(phi[0] == doctest::Approx(1.0));
    CHECK(phi[1] == doctest::Approx(2.0));
    CHECK(phi[2] == doctest::Approx(3.0));
    CHECK(j.at("efficiency_gap").get<double>() <= 1e-9);
}

TEST_CASE("cli exact: refuses d > 20") {
    Fixture fx;
    std::string w = "[1";
    std::string row = "c0", vals = "0";
    for (int i = 1; i < 25; ++i) {
        w += ",1";
        row += ",c" + std::to_string(i);
        vals += ",0";
    }
    w += "]";
    testsupport::write_file(fx.dir.file("wide.json"), R"({"kind":"linear","w":)" + w + "}");
    testsupport::write_file(fx.dir.file("widex.csv"), row + "\n" + vals + "\n");
    const int rc = run_cli("exact --model " + fx.dir.file("wide.json") + " --x " +
                           fx.dir.file("widex.csv") + " --baseline " + fx.dir.file("widex.csv") +
                           " --out " + fx.dir.file("widephi.json"));
    CHECK(rc == 1);
}

TEST_CASE("cli: missing files exit 2, bad usage exits 1") {
    Fixture fx;
    CHECK(run_cli("explain --model /nonexistent.json --x " + fx.dir.file("x.csv") + " --baseline " +
                  fx.dir.file("b.csv") + " --k 1 --out " + fx.dir.file("o.json")) == 2);
    CHECK(run_cli("explain --k 1") == 1);   // missing required flags
    CHECK(run_cli("frobnicate") == 1);      // unknown subcommand
    CHECK(run_cli("--help") == 0);
}

TEST_CASE("cli bench: report JSON plus cells/methods CSVs") {
    Fixture fx;
    testsupport::write_file(fx.dir.file("suite.json"), R"({
        "name": "cli-suite",
        "synthetic": {"profile": "separated", "d": 8, "count": 2},
        "k": 3, "eps": 0.02, "delta": 0.1, "t_min": 10, "seed": 5,
        "methods": ["sampling", "sampling_at_k"]
    })");
    const std::string out = fx.dir.file("report.json");
    const int rc = run_cli("bench --suite " + fx.dir.file("suite.json") + " --out " + out);
    CHECK(rc == 0);
    const json j = json::parse(testsupport::read_file(out));
    CHECK(j.at("cells").size() == 4);
    CHECK(j.at("speedups").size() == 1);
    CHECK(j.at("speedups")[0].at("eval_ratio").get<double>() > 1.0);
    CHECK(testsupport::read_file(fx.dir.file("report.cells.csv")).find("instance,") == 0);
    CHECK(testsupport::read_file(fx.dir.file("report.methods.csv")).find("method,") == 0);
}

TEST_CASE("cli bench: SHAPK_THREADS does not change results") {
    Fixture fx;
    testsupport::write_file(fx.dir.file("suite.json"), R"({
        "name": "cli-threads",
        "synthetic": {"profile": "separated", "d": 8, "count": 2},
        "k": 3, "eps": 0.02, "delta": 0.1, "t_min": 10, "seed": 5,
        "methods": ["sampling", "sampling_at_k"]
    })");
    const std::string out1 = fx.dir.file("r1.json");
    const std::string out2 = fx.dir.file("r2.json");
    const std::string base = std::string(SHAPK_CLI_PATH) + " bench --suite " + fx.dir.file("suite.json");
    CHECK(WEXITSTATUS(std::system(
              ("SHAPK_THREADS=1 " + base + " --out " + out1 + " >/dev/null 2>&1").c_str())) == 0);
    CHECK(WEXITSTATUS(std::system(
              ("SHAPK_THREADS=4 " + base + " --out " + out2 + " >/dev/null 2>&1").c_str())) == 0);
    const json a = json::parse(testsupport::read_file(out1));
    const json b = json::parse(testsupport::read_file(out2));
    for (std::size_t i = 0; i < a.at("cells").size(); ++i) {
        CHECK(a.at("cells")[i].at("evals") == b.at("cells")[i].at("evals"));
        CHECK(a.at("cells")[i].at("selected") == b.at("cells")[i].at("selected"));
    }
}

TEST_CASE("cli sweep: plot-ready CSV with one row per (eps, method)") {
    Fixture fx;
    testsupport::write_file(fx.dir.file("suite.json"), R"({
        "name": "cli-sweep",
        "synthetic": {"profile": "separated", "d": 8, "count": 2},
        "k": 3, "eps": 0.02, "delta": 0.1, "t_min": 10, "seed": 5,
        "methods": ["sampling", "sampling_at_k"]
    })");
    const std::string out = fx.dir.file("sweep.csv");
    const int rc = run_cli("sweep --suite " + fx.dir.file("suite.json") +
                           " --eps 0.01,0.02,0.04 --out " + out);
    CHECK(rc == 0);
    const std::string csv = testsupport::read_file(out);
    int lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines == 1 + 3 * 2);  // header + |grid| x |methods|
    const json j = json::parse(testsupport::read_file(fx.dir.file("sweep.json")));
    CHECK(j.at("sweep").size() == 6);

    CHECK(run_cli("sweep --suite " + fx.dir.file("suite.json") + " --eps 0.04,0.01 --out " + out) == 1);
}
