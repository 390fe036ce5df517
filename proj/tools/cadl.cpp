// cadl: optimal and anytime decision-tree learning on binary datasets.
//
// Subcommands:
//   fit     solve one instance (dl85 | cadl85 | greedy | topk)
//   bench   run a benchmark plan and emit CSV metrics
//   oracle  brute-force optimal error (small instances only)

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "cadl/anytime.hpp"
#include "cadl/bench.hpp"
#include "cadl/metrics.hpp"
#include "cadl/oracle.hpp"
#include "cadl/search.hpp"

namespace {

cadl::BinaryDataset load_or_die(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cadl::FormatError("cannot open dataset file: " + path);
    return cadl::load_dataset(in);
}

struct FitOptions {
    std::string data, algo = "dl85", rule = "none", relax = "monotonic";
    std::string trace_path, out_path, heuristic = "gain";
    int depth = 3;
    long long minsup = 1;
    double time_limit = 0.0;
    double delta = 1.0, factor = 2.0;
    long long luby_unit = 1;
    double init_threshold = -1.0; // rule-dependent default when negative
    int k = 3;
    bool rank_before_filter = false;
    bool fake_clock = false;
    std::size_t cache_cap = 0;
};

cadl::RuleConfig build_rule(const FitOptions& opt, const cadl::BinaryDataset& ds) {
    cadl::RelaxSchedule sched;
    sched.kind = cadl::relax_kind_from_name(opt.relax);
    sched.step = opt.delta;
    sched.factor = opt.factor;
    sched.luby_unit = opt.luby_unit;
    auto kind = cadl::rule_kind_from_name(opt.rule);
    if (kind == cadl::RuleKind::Purity) sched.kind = cadl::RelaxKind::Monotonic;
    auto rule = cadl::RuleConfig::make(kind, ds, opt.depth, sched);
    rule.purity_delta = opt.delta == 1.0 ? 0.1 : opt.delta;
    if (opt.init_threshold >= 0) {
        switch (kind) {
        case cadl::RuleKind::Purity: rule.min_purity = opt.init_threshold; break;
        case cadl::RuleKind::Gain: rule.max_gap = opt.init_threshold; break;
        case cadl::RuleKind::Discrepancy:
            rule.max_discr = static_cast<cadl::Count>(opt.init_threshold);
            break;
        case cadl::RuleKind::TopK:
        case cadl::RuleKind::TopKStar: rule.k = static_cast<int>(opt.init_threshold); break;
        case cadl::RuleKind::None: break;
        }
    }
    return rule;
}

int cmd_fit(const FitOptions& opt) {
    cadl::BinaryDataset ds = load_or_die(opt.data);

    cadl::SearchParams params;
    params.minsup = opt.minsup;
    params.maxdepth = opt.depth;
    params.heuristic = opt.heuristic == "input" ? cadl::Heuristic::InputOrder
                                                : cadl::Heuristic::GainDesc;
    params.rank_before_filter = opt.rank_before_filter;
    params.cache_node_cap = opt.cache_cap;

    std::unique_ptr<cadl::Stopwatch> sw;
    if (opt.fake_clock) sw = std::make_unique<cadl::FakeStopwatch>();
    else sw = std::make_unique<cadl::WallStopwatch>();

    cadl::TraceMeta meta{opt.data, opt.algo, opt.rule, opt.relax, opt.depth, opt.minsup,
                         opt.time_limit};

    std::ofstream trace_out;
    cadl::TraceSink sink = nullptr;
    if (!opt.trace_path.empty()) {
        trace_out.open(opt.trace_path);
        if (!trace_out) throw cadl::FormatError("cannot open trace file: " + opt.trace_path);
        sink = [&trace_out](const cadl::TraceEvent& e) {
            trace_out << cadl::event_to_jsonl(e) << "\n";
        };
    }

    cadl::RunResult result;
    if (opt.algo == "dl85") {
        result = cadl::dl85_anytime(ds, params, opt.time_limit, *sw, meta, sink);
    } else if (opt.algo == "cadl85") {
        result = cadl::cadl85(ds, build_rule(opt, ds), params, opt.time_limit, *sw, meta, sink);
    } else if (opt.algo == "greedy") {
        result = cadl::greedy_run(ds, params, *sw, meta, sink);
    } else if (opt.algo == "topk") {
        result = cadl::topk_fixed(ds, opt.k, params, opt.time_limit, *sw, meta, sink);
    } else {
        throw CLI::ValidationError("--algo", "unknown algorithm: " + opt.algo);
    }

    if (!opt.out_path.empty()) {
        std::ofstream out(opt.out_path);
        if (!out) throw cadl::FormatError("cannot open output file: " + opt.out_path);
        cadl::serialize_tree(result.best_tree, out);
        out << "\n";
    }
    std::cout << "{\"error\":" << result.best_error << ",\"proved\":"
              << (result.proved_optimal ? "true" : "false")
              << ",\"iterations\":" << result.iterations << "}\n";
    return 0;
}

int cmd_bench(const std::string& plan_path) {
    std::ifstream in(plan_path);
    if (!in) throw cadl::FormatError("cannot open plan file: " + plan_path);
    cadl::BenchPlan plan = cadl::parse_plan(in);
    auto rows = cadl::run_bench(plan);
    for (const auto& r : rows)
        if (r.failed)
            std::cerr << "run failed: " << r.dataset << " " << r.algo << " depth " << r.depth
                      << ": " << r.error_message << "\n";

    std::ofstream bench_out(plan.out_dir + "/bench.csv");
    if (!bench_out) throw cadl::FormatError("cannot write to out_dir: " + plan.out_dir);
    cadl::write_bench_csv(rows, bench_out);
    std::ofstream cum_out(plan.out_dir + "/cumulative_solved.csv");
    cadl::write_cumulative_csv(rows, plan.grid_s, cum_out);
    std::cout << "rows: " << rows.size() << "\n";
    return 0;
}

int cmd_oracle(const std::string& data, int depth, long long minsup) {
    cadl::BinaryDataset ds = load_or_die(data);
    auto result = cadl::brute_force_optimal(ds, depth, minsup);
    std::cout << result.optimal_error << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"optimal and anytime decision trees on binary data"};
    app.require_subcommand(1);

    FitOptions fit;
    auto* fit_cmd = app.add_subcommand("fit", "learn a depth-limited optimal tree");
    fit_cmd->add_option("--data", fit.data, "dataset file (class-first whitespace integers)")
        ->required();
    fit_cmd->add_option("--depth", fit.depth, "maximum tree depth");
    fit_cmd->add_option("--minsup", fit.minsup, "minimum leaf support");
    fit_cmd->add_option("--algo", fit.algo, "dl85 | cadl85 | greedy | topk")
        ->check(CLI::IsMember({"dl85", "cadl85", "greedy", "topk"}));
    fit_cmd->add_option("--rule", fit.rule, "pruning rule for cadl85")
        ->check(CLI::IsMember({"none", "purity", "gain", "discrepancy", "topk", "topk-star"}));
    fit_cmd->add_option("--relax", fit.relax, "relaxation schedule")
        ->check(CLI::IsMember({"monotonic", "exponential", "luby"}));
    fit_cmd->add_option("--delta", fit.delta, "monotonic increment");
    fit_cmd->add_option("--factor", fit.factor, "exponential factor");
    fit_cmd->add_option("--luby-unit", fit.luby_unit, "luby increment unit");
    fit_cmd->add_option("--init-threshold", fit.init_threshold, "initial rule threshold");
    fit_cmd->add_option("--k", fit.k, "k for --algo topk");
    fit_cmd->add_option("--heuristic", fit.heuristic, "gain | input")
        ->check(CLI::IsMember({"gain", "input"}));
    fit_cmd->add_flag("--rank-before-filter", fit.rank_before_filter,
                      "assign candidate ranks before the minsup filter");
    fit_cmd->add_option("--time-limit", fit.time_limit, "time limit in seconds (0 = none)");
    fit_cmd->add_option("--trace", fit.trace_path, "write JSONL incumbent trace here");
    fit_cmd->add_option("--out", fit.out_path, "write the learned tree (JSON) here");
    fit_cmd->add_flag("--fake-clock", fit.fake_clock, "deterministic virtual clock");
    fit_cmd->add_option("--cache-cap", fit.cache_cap, "abort if the cache exceeds this many nodes");

    std::string plan_path;
    auto* bench_cmd = app.add_subcommand("bench", "run a benchmark plan");
    bench_cmd->add_option("plan", plan_path, "plan file")->required();

    std::string oracle_data;
    int oracle_depth = 2;
    long long oracle_minsup = 1;
    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force optimal error");
    oracle_cmd->add_option("--data", oracle_data, "dataset file")->required();
    oracle_cmd->add_option("--depth", oracle_depth, "maximum tree depth");
    oracle_cmd->add_option("--minsup", oracle_minsup, "minimum leaf support");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (fit_cmd->parsed()) return cmd_fit(fit);
        if (bench_cmd->parsed()) return cmd_bench(plan_path);
        if (oracle_cmd->parsed()) return cmd_oracle(oracle_data, oracle_depth, oracle_minsup);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
