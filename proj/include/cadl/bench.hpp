#pragma once

#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "cadl/anytime.hpp"
#include "cadl/metrics.hpp"

namespace cadl {

// Flat key-value plan document: `key = v1, v2, ...` per line, `#` comments.
struct BenchPlan {
    std::vector<std::string> datasets;
    std::vector<std::string> algos;      // dl85 | cadl85 | greedy | topk
    std::vector<std::string> rules;      // for cadl85
    std::vector<std::string> schedules;  // for cadl85
    std::vector<int> depths;
    Count minsup = 1;
    std::vector<double> time_limits_s;
    std::vector<double> grid_s;          // cumulative-solved time points
    std::string out_dir = ".";
    int jobs = 1;
    int topk_k = 3;
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

} // namespace detail

inline BenchPlan parse_plan(std::istream& in) {
    BenchPlan plan;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw FormatError("plan: missing '=' at line " + std::to_string(lineno));
        std::string key = detail::trim(line.substr(0, eq));
        auto vals = detail::split_list(line.substr(eq + 1));
        if (key == "datasets") plan.datasets = vals;
        else if (key == "algos") plan.algos = vals;
        else if (key == "rules") plan.rules = vals;
        else if (key == "schedules") plan.schedules = vals;
        else if (key == "depths") { for (auto& v : vals) plan.depths.push_back(std::stoi(v)); }
        else if (key == "minsup") plan.minsup = std::stoll(vals.at(0));
        else if (key == "time_limits") { for (auto& v : vals) plan.time_limits_s.push_back(std::stod(v)); }
        else if (key == "grid") { for (auto& v : vals) plan.grid_s.push_back(std::stod(v)); }
        else if (key == "out_dir") plan.out_dir = vals.at(0);
        else if (key == "jobs") plan.jobs = std::stoi(vals.at(0));
        else if (key == "k") plan.topk_k = std::stoi(vals.at(0));
        else throw FormatError("plan: unknown key '" + key + "' at line " + std::to_string(lineno));
    }
    return plan;
}

inline RuleKind rule_kind_from_name(const std::string& name) {
    if (name == "none") return RuleKind::None;
    if (name == "purity") return RuleKind::Purity;
    if (name == "gain") return RuleKind::Gain;
    if (name == "discrepancy") return RuleKind::Discrepancy;
    if (name == "topk") return RuleKind::TopK;
    if (name == "topk-star") return RuleKind::TopKStar;
    throw std::domain_error("unknown rule '" + name + "'");
}

inline RelaxKind relax_kind_from_name(const std::string& name) {
    if (name == "monotonic") return RelaxKind::Monotonic;
    if (name == "exponential") return RelaxKind::Exponential;
    if (name == "luby") return RelaxKind::Luby;
    throw std::domain_error("unknown schedule '" + name + "'");
}

struct BenchRow {
    std::string dataset, algo, rule, schedule;
    int depth = 0;
    Count minsup = 1;
    double time_limit_s = 0;
    bool failed = false;
    std::string error_message;
    RunResult result;
};

namespace detail {

struct RunSpec {
    std::size_t dataset_idx;
    std::string algo, rule, schedule;
    int depth;
    double time_limit_s;
};

inline RunResult execute_run(const BinaryDataset& ds, const RunSpec& spec, const BenchPlan& plan,
                             const std::string& dataset_name) {
    SearchParams params;
    params.minsup = plan.minsup;
    params.maxdepth = spec.depth;
    WallStopwatch sw;
    TraceMeta meta{dataset_name, spec.algo, spec.rule, spec.schedule, spec.depth, plan.minsup,
                   spec.time_limit_s};
    if (spec.algo == "dl85") return dl85_anytime(ds, params, spec.time_limit_s, sw, meta);
    if (spec.algo == "greedy") return greedy_run(ds, params, sw, meta);
    if (spec.algo == "topk") return topk_fixed(ds, plan.topk_k, params, spec.time_limit_s, sw, meta);
    if (spec.algo == "cadl85") {
        RelaxSchedule sched;
        sched.kind = relax_kind_from_name(spec.schedule);
        RuleConfig rule = RuleConfig::make(rule_kind_from_name(spec.rule), ds, spec.depth, sched);
        return cadl85(ds, rule, params, spec.time_limit_s, sw, meta);
    }
    throw std::domain_error("unknown algo '" + spec.algo + "'");
}

} // namespace detail

// Runs the full matrix, optionally in parallel across runs. Crashing runs
// become failed rows, never a bench abort.
inline std::vector<BenchRow> run_bench(const BenchPlan& plan) {
    std::vector<BinaryDataset> datasets;
    datasets.reserve(plan.datasets.size());
    for (const auto& path : plan.datasets) {
        std::ifstream in(path);
        if (!in) throw FormatError("plan: cannot open dataset " + path);
        datasets.push_back(load_dataset(in));
    }

    std::vector<detail::RunSpec> specs;
    for (std::size_t d = 0; d < plan.datasets.size(); ++d)
        for (const auto& algo : plan.algos)
            for (int depth : plan.depths)
                for (double tl : plan.time_limits_s) {
                    if (algo == "cadl85") {
                        for (const auto& rule : plan.rules) {
                            if (rule == "purity") {
                                specs.push_back({d, algo, rule, "monotonic", depth, tl});
                                continue;
                            }
                            for (const auto& sched : plan.schedules)
                                specs.push_back({d, algo, rule, sched, depth, tl});
                        }
                    } else {
                        specs.push_back({d, algo, algo == "topk" ? "topk" : "none", "-", depth, tl});
                    }
                }

    std::vector<BenchRow> rows(specs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= specs.size()) return;
            const auto& spec = specs[i];
            BenchRow& row = rows[i];
            row.dataset = plan.datasets[spec.dataset_idx];
            row.algo = spec.algo;
            row.rule = spec.rule;
            row.schedule = spec.schedule;
            row.depth = spec.depth;
            row.minsup = plan.minsup;
            row.time_limit_s = spec.time_limit_s;
            try {
                row.result = detail::execute_run(datasets[spec.dataset_idx], spec, plan, row.dataset);
            } catch (const std::exception& e) {
                row.failed = true;
                row.error_message = e.what();
            }
        }
    };
    int jobs = std::max(1, plan.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return rows;
}

inline void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
    out << "dataset,algo,rule,schedule,depth,minsup,time_limit_s,best_error,proved,"
           "proof_time_s,primal_integral_raw_s,primal_integral_pct\n";

    // Best-known error per instance (dataset, depth, minsup).
    std::map<std::tuple<std::string, int, Count>, std::vector<IncumbentTrace>> per_instance;
    for (const auto& r : rows)
        if (!r.failed)
            per_instance[{r.dataset, r.depth, r.minsup}].push_back(r.result.trace);

    for (const auto& r : rows) {
        out << r.dataset << ',' << r.algo << ',' << r.rule << ',' << r.schedule << ',' << r.depth
            << ',' << r.minsup << ',' << r.time_limit_s << ',';
        if (r.failed) {
            out << ",false,,,\n";
            continue;
        }
        auto proof = r.result.trace.proof_time_s();
        out << r.result.best_error << ',' << (r.result.proved_optimal ? "true" : "false") << ',';
        if (proof) out << *proof;
        try {
            Count opt = best_known(per_instance.at({r.dataset, r.depth, r.minsup}));
            double p = primal_integral(r.result.trace, opt, r.time_limit_s);
            double pct = r.time_limit_s > 0 ? 100.0 * p / r.time_limit_s : 0.0;
            out << ',' << p << ',' << pct << '\n';
        } catch (const std::exception&) {
            // no run on this instance produced a solution
            out << ",,\n";
        }
    }
}

inline void write_cumulative_csv(const std::vector<BenchRow>& rows, std::vector<double> grid_s,
                                 std::ostream& out) {
    if (grid_s.empty()) {
        double max_tl = 0;
        for (const auto& r : rows) max_tl = std::max(max_tl, r.time_limit_s);
        for (int i = 1; i <= 10; ++i) grid_s.push_back(max_tl * i / 10.0);
    }
    out << "algo,rule,schedule,t_s,solved\n";
    std::map<std::tuple<std::string, std::string, std::string>, std::vector<RunResult>> groups;
    for (const auto& r : rows)
        if (!r.failed) groups[{r.algo, r.rule, r.schedule}].push_back(r.result);
    for (const auto& [key, runs] : groups) {
        auto counts = cumulative_solved(runs, grid_s);
        for (std::size_t i = 0; i < grid_s.size(); ++i)
            out << std::get<0>(key) << ',' << std::get<1>(key) << ',' << std::get<2>(key) << ','
                << grid_s[i] << ',' << counts[i] << '\n';
    }
}

} // namespace cadl
