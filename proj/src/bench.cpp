#include "shapk/bench.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "shapk/errors.hpp"
#include "shapk/parallel.hpp"
#include "shapk/rng.hpp"

namespace shapk {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

double parse_cell(const std::string& cell, const std::string& path, int line_no, std::size_t col) {
    if (cell.empty()) {
        throw DataError(path + " line " + std::to_string(line_no) + " column " + std::to_string(col + 1) +
                        ": empty cell");
    }
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size()) {
        throw DataError(path + " line " + std::to_string(line_no) + " column " + std::to_string(col + 1) +
                        ": non-numeric cell '" + cell + "'");
    }
    return v;
}

struct RawCsv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

RawCsv read_numeric_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open CSV file: " + path);
    RawCsv csv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (csv.header.empty()) {
            csv.header = std::move(cells);
            continue;
        }
        if (cells.size() != csv.header.size()) {
            throw DataError(path + " line " + std::to_string(line_no) + ": ragged row (" +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(csv.header.size()) + ")");
        }
        std::vector<double> row(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            row[c] = parse_cell(cells[c], path, line_no, c);
        }
        csv.rows.push_back(std::move(row));
    }
    if (csv.header.empty()) throw DataError(path + ": missing header row");
    return csv;
}

Eigen::VectorXd to_vector(const std::vector<double>& row) {
    return Eigen::Map<const Eigen::VectorXd>(row.data(), static_cast<Eigen::Index>(row.size()));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string join_indices(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out.push_back(';');
        out += std::to_string(v[i]);
    }
    return out;
}

}  // namespace

Dataset load_dataset(const std::string& csv_path, const std::string& baseline_path) {
    RawCsv data = read_numeric_csv(csv_path);
    RawCsv base = read_numeric_csv(baseline_path);
    if (base.rows.size() != 1) {
        throw DataError(baseline_path + ": baseline CSV must contain exactly one data row, has " +
                        std::to_string(base.rows.size()));
    }
    if (base.rows.front().size() != data.header.size()) {
        throw DataError(baseline_path + ": baseline row width " + std::to_string(base.rows.front().size()) +
                        " does not match dataset width " + std::to_string(data.header.size()));
    }
    Dataset out;
    out.name = csv_path;
    out.features = std::move(data.header);
    out.rows.reserve(data.rows.size());
    for (const auto& row : data.rows) out.rows.push_back(to_vector(row));
    out.baseline_row = to_vector(base.rows.front());
    return out;
}

Eigen::VectorXd load_vector_csv(const std::string& path) {
    RawCsv csv = read_numeric_csv(path);
    if (csv.rows.size() != 1) {
        throw DataError(path + ": expected exactly one data row, found " + std::to_string(csv.rows.size()));
    }
    return to_vector(csv.rows.front());
}

GapProfile gap_profile_from_string(const std::string& s) {
    if (s == "separated") return GapProfile::separated;
    if (s == "clustered") return GapProfile::clustered;
    if (s == "adversarial") return GapProfile::adversarial;
    throw DataError("unknown gap profile '" + s + "' (expected separated|clustered|adversarial)");
}

const char* gap_profile_to_string(GapProfile p) {
    switch (p) {
        case GapProfile::separated: return "separated";
        case GapProfile::clustered: return "clustered";
        case GapProfile::adversarial: return "adversarial";
    }
    return "separated";
}

SyntheticInstance gen_synthetic(int d, GapProfile profile, std::uint64_t seed, int k) {
    if (d < 2 || d > 64) throw ConfigError("gen_synthetic supports 2 <= d <= 64");
    k = std::clamp(k, 1, d - 1);
    const StreamFactory streams(seed);
    Rng gap_rng = streams.stream(stream_tag::synth_gaps);

    // Descending attribution targets per rank. The clustered window hugs the
    // k-th boundary; adversarial pins an exact tie across it.
    const int win_lo = std::max(0, k - 3);
    const int win_hi = std::min(d - 1, k + 2);
    std::vector<double> target(static_cast<std::size_t>(d));
    target[0] = 1.0;
    for (int r = 1; r < d; ++r) {
        double gap;
        switch (profile) {
            case GapProfile::clustered:
                gap = (r - 1 >= win_lo && r <= win_hi) ? gap_rng.uniform(0.001, 0.0018)
                                                       : gap_rng.uniform(0.105, 0.15);
                break;
            case GapProfile::adversarial:
                gap = (r == k) ? 0.0 : gap_rng.uniform(0.105, 0.15);
                break;
            case GapProfile::separated:
            default:
                gap = gap_rng.uniform(0.105, 0.15);
                break;
        }
        target[static_cast<std::size_t>(r)] = target[static_cast<std::size_t>(r - 1)] - gap;
    }

    // Which feature index holds each rank.
    std::vector<int> feature_of_rank(static_cast<std::size_t>(d));
    std::iota(feature_of_rank.begin(), feature_of_rank.end(), 0);
    Rng perm_rng = streams.stream(stream_tag::synth_perm);
    perm_rng.shuffle(feature_of_rank);

    // Interaction groups over ranks. Every feature belongs to one group so
    // every replicate carries variance; the adversarial tie pair shares a
    // group so both members keep bit-identical attributions.
    std::vector<std::vector<int>> groups;
    std::vector<int> remaining;
    if (profile == GapProfile::adversarial) {
        groups.push_back({k - 1, k});
        for (int r = 0; r < d; ++r) {
            if (r != k - 1 && r != k) remaining.push_back(r);
        }
    } else {
        for (int r = 0; r < d; ++r) remaining.push_back(r);
    }
    for (std::size_t i = 0; i + 1 < remaining.size(); i += 2) {
        groups.push_back({remaining[i], remaining[i + 1]});
    }
    if (remaining.size() % 2 == 1) {
        if (groups.empty()) groups.push_back({});
        groups.front().push_back(remaining.back());
    }

    const double interaction_coeff = 0.125;
    std::vector<double> interaction_share(static_cast<std::size_t>(d), 0.0);
    for (const auto& g : groups) {
        for (int r : g) {
            interaction_share[static_cast<std::size_t>(r)] +=
                interaction_coeff / static_cast<double>(g.size());
        }
    }

    std::vector<SyntheticTerm> terms;
    Eigen::VectorXd phi(d);
    for (int r = 0; r < d; ++r) {
        const int feat = feature_of_rank[static_cast<std::size_t>(r)];
        const double w = target[static_cast<std::size_t>(r)] - interaction_share[static_cast<std::size_t>(r)];
        terms.push_back({w, {feat}});
        // With x = ones and baseline = zeros, a degree-m monomial c*prod(z)
        // attributes exactly c/m to each member.
        phi[feat] = w + interaction_share[static_cast<std::size_t>(r)];
    }
    for (const auto& g : groups) {
        std::vector<int> feats;
        for (int r : g) feats.push_back(feature_of_rank[static_cast<std::size_t>(r)]);
        std::sort(feats.begin(), feats.end());
        terms.push_back({interaction_coeff, std::move(feats)});
    }

    auto model = std::make_shared<const ModelSpec>(ModelSpec::make_synthetic(d, std::move(terms)));
    SyntheticInstance out{
        ExplanationInstance(model, Eigen::VectorXd::Ones(d), Eigen::VectorXd::Zero(d)),
        std::move(phi),
        std::string(gap_profile_to_string(profile)) + "-d" + std::to_string(d) + "-s" + std::to_string(seed)};
    return out;
}

const char* method_id(Method m) {
    switch (m) {
        case Method::sampling_naive: return "sampling";
        case Method::sampling_at_k: return "sampling_at_k";
        case Method::sampling_overlap: return "sampling_overlap";
        case Method::kernel_naive: return "kernel";
        case Method::kernel_at_k: return "kernel_at_k";
    }
    return "sampling";
}

Method method_from_id(const std::string& id) {
    if (id == "sampling") return Method::sampling_naive;
    if (id == "sampling_at_k") return Method::sampling_at_k;
    if (id == "sampling_overlap") return Method::sampling_overlap;
    if (id == "kernel") return Method::kernel_naive;
    if (id == "kernel_at_k") return Method::kernel_at_k;
    throw DataError("unknown method id '" + id +
                    "' (expected sampling|sampling_at_k|sampling_overlap|kernel|kernel_at_k)");
}

TopKConfig method_config(Method m, const SuiteConfig& suite, std::uint64_t seed) {
    TopKConfig cfg;
    cfg.k = suite.k;
    cfg.eps = suite.eps;
    cfg.delta = suite.delta;
    cfg.t_min = suite.t_min;
    cfg.max_evals = suite.max_evals;
    cfg.seed = seed;
    cfg.kernel.coalitions_per_replicate = suite.kernel_m;
    switch (m) {
        case Method::sampling_naive:
            cfg.estimator = EstimatorKind::sampling;
            cfg.strategy = Strategy::naive;
            break;
        case Method::sampling_at_k:
            cfg.estimator = EstimatorKind::sampling;
            cfg.strategy = Strategy::overlap_greedy;
            break;
        case Method::sampling_overlap:
            cfg.estimator = EstimatorKind::sampling;
            cfg.strategy = Strategy::overlap_uniform;
            break;
        case Method::kernel_naive:
            cfg.estimator = EstimatorKind::kernel;
            cfg.strategy = Strategy::naive;
            break;
        case Method::kernel_at_k:
            cfg.estimator = EstimatorKind::kernel;
            cfg.strategy = Strategy::overlap_uniform;
            break;
    }
    return cfg;
}

SuiteConfig suite_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string("suite file: JSON parse failure: ") + e.what());
    }
    SuiteConfig s;
    try {
        s.name = j.value("name", s.name);
        if (j.contains("synthetic")) {
            const auto& sj = j.at("synthetic");
            s.profile = gap_profile_from_string(sj.value("profile", "separated"));
            s.d = sj.value("d", s.d);
            s.count = sj.value("count", 0);
        }
        if (j.contains("instances")) {
            const auto& ij = j.at("instances");
            s.model_path = ij.value("model", "");
            s.data_path = ij.value("data", "");
            s.baseline_path = ij.value("baseline", "");
            s.negative_only = ij.value("negative_only", false);
            if (ij.contains("threshold")) s.negative_threshold = ij.at("threshold").get<double>();
            s.max_instances = ij.value("max_instances", 0);
        }
        s.k = j.value("k", s.k);
        s.eps = j.value("eps", s.eps);
        s.delta = j.value("delta", s.delta);
        s.t_min = j.value("t_min", s.t_min);
        s.kernel_m = j.value("kernel_m", s.kernel_m);
        s.max_evals = j.value("max_evals", s.max_evals);
        s.seed = j.value("seed", s.seed);
        if (j.contains("methods")) {
            s.methods.clear();
            for (const auto& mj : j.at("methods")) {
                s.methods.push_back(method_from_id(mj.get<std::string>()));
            }
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("suite file: ") + e.what());
    }
    if (s.count <= 0 && s.model_path.empty()) {
        throw DataError("suite file: needs either a synthetic block with count > 0 or an instances block");
    }
    if (s.methods.empty()) throw DataError("suite file: methods list is empty");
    return s;
}

SuiteConfig load_suite(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open suite file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return suite_from_json_text(ss.str());
}

std::vector<ExplanationInstance> suite_instances(const SuiteConfig& suite,
                                                 std::vector<std::string>* names) {
    std::vector<ExplanationInstance> out;
    const StreamFactory streams(suite.seed);
    if (suite.count > 0) {
        for (int i = 0; i < suite.count; ++i) {
            auto synth = gen_synthetic(suite.d, suite.profile,
                                       streams.derive(stream_tag::instance, static_cast<std::uint64_t>(i)),
                                       suite.k);
            if (names) names->push_back(suite.name + "/" + std::to_string(i));
            out.push_back(std::move(synth.instance));
        }
        return out;
    }
    auto model = std::make_shared<const ModelSpec>(load_model(suite.model_path));
    Dataset ds = load_dataset(suite.data_path, suite.baseline_path);
    if (ds.dim() != model->input_dim) {
        throw DataError("dataset width " + std::to_string(ds.dim()) + " does not match model input_dim " +
                        std::to_string(model->input_dim));
    }
    const double threshold = suite.negative_threshold.value_or(
        model->kind == ModelKind::mlp && model->output == OutputKind::prob ? 0.5 : 0.0);
    for (std::size_t r = 0; r < ds.rows.size(); ++r) {
        if (suite.negative_only && !(evaluate(*model, ds.rows[r]) < threshold)) continue;
        out.emplace_back(model, ds.rows[r], ds.baseline_row);
        if (names) names->push_back("row-" + std::to_string(r));
        if (suite.max_instances > 0 && static_cast<int>(out.size()) >= suite.max_instances) break;
    }
    if (out.empty()) throw DataError("suite selects no instances (check negative_only/threshold)");
    return out;
}

namespace {

std::vector<BenchCell> run_cells(const std::vector<ExplanationInstance>& instances,
                                 const std::vector<std::string>& names,
                                 const SuiteConfig& suite, double eps, int n_threads) {
    const StreamFactory streams(suite.seed);
    const std::size_t n_methods = suite.methods.size();
    std::vector<BenchCell> cells(instances.size() * n_methods);
    parallel_for(cells.size(), n_threads, [&](std::size_t idx) {
        const std::size_t inst_idx = idx / n_methods;
        const Method method = suite.methods[idx % n_methods];
        // One master seed per instance, shared by every method.
        const std::uint64_t seed = streams.derive(stream_tag::cell, inst_idx);
        SuiteConfig local = suite;
        local.eps = eps;
        BenchCell& cell = cells[idx];
        cell.instance = static_cast<int>(inst_idx);
        cell.instance_name = names[inst_idx];
        cell.method = method;
        cell.eps = eps;
        cell.seed = seed;
        try {
            const TopKConfig cfg = method_config(method, local, seed);
            ExplanationInstance clone = instances[inst_idx].with_fresh_state();
            const TopKResult res = run_topk(clone, cfg);
            cell.evals = res.evals;
            cell.runtime_s = res.wall_time_s;
            cell.selected = res.selected;
            cell.converged = res.stop_reason == StopReason::converged;
        } catch (const Error& e) {
            cell.error = e.what();
        }
    });
    return cells;
}

std::vector<MethodAggregate> aggregate_cells(const std::vector<BenchCell>& cells,
                                             const std::vector<Method>& methods) {
    std::vector<MethodAggregate> out;
    for (Method m : methods) {
        MethodAggregate agg;
        agg.method = m;
        double evals = 0.0;
        double runtime = 0.0;
        int n_failed = 0;
        for (const auto& cell : cells) {
            if (cell.method != m) continue;
            ++agg.n_cells;
            if (!cell.error.empty()) {
                ++n_failed;
                continue;
            }
            if (!cell.converged) continue;
            ++agg.n_converged;
            evals += static_cast<double>(cell.evals);
            runtime += cell.runtime_s;
        }
        if (agg.n_converged > 0) {
            agg.mean_evals = evals / agg.n_converged;
            agg.mean_runtime_s = runtime / agg.n_converged;
        }
        agg.all_failed = agg.n_cells > 0 && n_failed == agg.n_cells;
        out.push_back(agg);
    }
    return out;
}

std::vector<SpeedupEntry> compute_speedups(const std::vector<BenchCell>& cells,
                                           const std::vector<Method>& methods) {
    static constexpr std::pair<Method, Method> kPairs[] = {
        {Method::sampling_naive, Method::sampling_at_k},
        {Method::kernel_naive, Method::kernel_at_k},
        {Method::sampling_naive, Method::sampling_overlap},
    };
    auto has = [&](Method m) { return std::find(methods.begin(), methods.end(), m) != methods.end(); };
    auto find_cell = [&](int instance, Method m) -> const BenchCell* {
        for (const auto& cell : cells) {
            if (cell.instance == instance && cell.method == m) return &cell;
        }
        return nullptr;
    };
    int max_instance = -1;
    for (const auto& cell : cells) max_instance = std::max(max_instance, cell.instance);

    std::vector<SpeedupEntry> out;
    for (const auto& [base, variant] : kPairs) {
        if (!has(base) || !has(variant)) continue;
        SpeedupEntry entry;
        entry.baseline = base;
        entry.variant = variant;
        double base_evals = 0.0, var_evals = 0.0, base_rt = 0.0, var_rt = 0.0;
        // Paired means over instances where both cells converged.
        for (int i = 0; i <= max_instance; ++i) {
            const BenchCell* b = find_cell(i, base);
            const BenchCell* v = find_cell(i, variant);
            if (!b || !v || !b->converged || !v->converged || !b->error.empty() || !v->error.empty()) continue;
            ++entry.n_pairs;
            base_evals += static_cast<double>(b->evals);
            var_evals += static_cast<double>(v->evals);
            base_rt += b->runtime_s;
            var_rt += v->runtime_s;
        }
        if (entry.n_pairs > 0 && var_evals > 0.0) {
            entry.eval_ratio = base_evals / var_evals;
            entry.runtime_ratio = var_rt > 0.0 ? base_rt / var_rt : 0.0;
        }
        out.push_back(entry);
    }
    return out;
}

}  // namespace

ExperimentReport run_benchmark(const SuiteConfig& suite, int n_threads) {
    std::vector<std::string> names;
    const auto instances = suite_instances(suite, &names);
    ExperimentReport report;
    report.suite = suite;
    report.cells = run_cells(instances, names, suite, suite.eps, n_threads);
    report.aggregates = aggregate_cells(report.cells, suite.methods);
    report.speedups = compute_speedups(report.cells, suite.methods);
    return report;
}

ExperimentReport run_sensitivity(const SuiteConfig& suite, const std::vector<double>& eps_grid,
                                 int n_threads) {
    if (eps_grid.empty()) throw ConfigError("sensitivity sweep needs a non-empty eps grid");
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] > 0.0)) throw ConfigError("sensitivity eps values must be > 0");
        if (i > 0 && !(eps_grid[i] > eps_grid[i - 1])) {
            throw ConfigError("sensitivity eps grid must be sorted ascending");
        }
    }
    std::vector<std::string> names;
    const auto instances = suite_instances(suite, &names);
    ExperimentReport report;
    report.suite = suite;
    report.eps_grid = eps_grid;
    for (double eps : eps_grid) {
        auto cells = run_cells(instances, names, suite, eps, n_threads);
        const auto aggs = aggregate_cells(cells, suite.methods);
        for (const auto& agg : aggs) {
            report.sweep.push_back({eps, agg.method, agg.mean_evals, agg.mean_runtime_s, agg.n_converged});
        }
        report.cells.insert(report.cells.end(), cells.begin(), cells.end());
    }
    return report;
}

std::string ExperimentReport::to_json_text(bool include_runtime) const {
    json j;
    j["schema_version"] = 1;
    j["suite"] = {{"name", suite.name},
                  {"k", suite.k},
                  {"eps", suite.eps},
                  {"delta", suite.delta},
                  {"t_min", suite.t_min},
                  {"kernel_m", suite.kernel_m},
                  {"max_evals", suite.max_evals},
                  {"seed", suite.seed}};
    json methods = json::array();
    for (Method m : suite.methods) methods.push_back(method_id(m));
    j["suite"]["methods"] = std::move(methods);
    if (!eps_grid.empty()) j["eps_grid"] = eps_grid;

    json cells_json = json::array();
    for (const auto& cell : cells) {
        json cj = {{"instance", cell.instance},
                   {"instance_name", cell.instance_name},
                   {"method", method_id(cell.method)},
                   {"eps", cell.eps},
                   {"seed", cell.seed},
                   {"evals", cell.evals},
                   {"selected", cell.selected},
                   {"converged", cell.converged}};
        if (include_runtime) cj["runtime_s"] = cell.runtime_s;
        if (!cell.error.empty()) cj["error"] = cell.error;
        cells_json.push_back(std::move(cj));
    }
    j["cells"] = std::move(cells_json);

    json aggs_json = json::array();
    for (const auto& agg : aggregates) {
        json aj = {{"method", method_id(agg.method)},
                   {"mean_evals", agg.mean_evals},
                   {"n_converged", agg.n_converged},
                   {"n_cells", agg.n_cells},
                   {"all_failed", agg.all_failed}};
        if (include_runtime) aj["mean_runtime_s"] = agg.mean_runtime_s;
        aggs_json.push_back(std::move(aj));
    }
    j["aggregates"] = std::move(aggs_json);

    json spd_json = json::array();
    for (const auto& s : speedups) {
        json sj = {{"baseline", method_id(s.baseline)},
                   {"variant", method_id(s.variant)},
                   {"eval_ratio", s.eval_ratio},
                   {"n_pairs", s.n_pairs}};
        if (include_runtime) sj["runtime_ratio"] = s.runtime_ratio;
        spd_json.push_back(std::move(sj));
    }
    j["speedups"] = std::move(spd_json);

    json sweep_json = json::array();
    for (const auto& p : sweep) {
        json pj = {{"eps", p.eps},
                   {"method", method_id(p.method)},
                   {"mean_evals", p.mean_evals},
                   {"n_converged", p.n_converged}};
        if (include_runtime) pj["mean_runtime_s"] = p.mean_runtime_s;
        sweep_json.push_back(std::move(pj));
    }
    j["sweep"] = std::move(sweep_json);
    return j.dump(2);
}

std::string ExperimentReport::cells_csv() const {
    std::string out = "instance,instance_name,method,eps,seed,evals,runtime_s,converged,selected,error\n";
    for (const auto& cell : cells) {
        out += std::to_string(cell.instance) + "," + cell.instance_name + "," + method_id(cell.method) +
               "," + format_double(cell.eps) + "," + std::to_string(cell.seed) + "," +
               std::to_string(cell.evals) + "," + format_double(cell.runtime_s) + "," +
               (cell.converged ? "true" : "false") + "," + join_indices(cell.selected) + "," + cell.error +
               "\n";
    }
    return out;
}

std::string ExperimentReport::methods_csv() const {
    std::string out = "method,mean_evals,mean_runtime_s,n_converged,n_cells,all_failed\n";
    for (const auto& agg : aggregates) {
        out += std::string(method_id(agg.method)) + "," + format_double(agg.mean_evals) + "," +
               format_double(agg.mean_runtime_s) + "," + std::to_string(agg.n_converged) + "," +
               std::to_string(agg.n_cells) + "," + (agg.all_failed ? "true" : "false") + "\n";
    }
    return out;
}

std::string ExperimentReport::sweep_csv() const {
    std::string out = "eps,method,mean_evals,mean_runtime_s,n_converged\n";
    for (const auto& p : sweep) {
        out += format_double(p.eps) + "," + method_id(p.method) + "," + format_double(p.mean_evals) + "," +
               format_double(p.mean_runtime_s) + "," + std::to_string(p.n_converged) + "\n";
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << content;
}

}  // namespace shapk
