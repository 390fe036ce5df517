#include <doctest.h>

#include <sstream>

#include "cadl/bench.hpp"
#include "testutil.hpp"

using namespace cadl;

TEST_CASE("plan parsing") {
    std::istringstream in(
        "# comment line\n"
        "datasets = a.txt, b.txt\n"
        "algos = dl85, cadl85   # trailing comment\n"
        "rules = discrepancy, purity\n"
        "schedules = monotonic, luby\n"
        "depths = 2, 3\n"
        "minsup = 5\n"
        "time_limits = 0.5, 1\n"
        "grid = 0.1, 0.5, 1\n"
        "out_dir = /tmp/bench\n"
        "jobs = 4\n"
        "k = 2\n");
    BenchPlan plan = parse_plan(in);
    CHECK(plan.datasets == std::vector<std::string>{"a.txt", "b.txt"});
    CHECK(plan.algos == std::vector<std::string>{"dl85", "cadl85"});
    CHECK(plan.rules == std::vector<std::string>{"discrepancy", "purity"});
    CHECK(plan.schedules == std::vector<std::string>{"monotonic", "luby"});
    CHECK(plan.depths == std::vector<int>{2, 3});
    CHECK(plan.minsup == 5);
    CHECK(plan.time_limits_s == std::vector<double>{0.5, 1.0});
    CHECK(plan.grid_s == std::vector<double>{0.1, 0.5, 1.0});
    CHECK(plan.out_dir == "/tmp/bench");
    CHECK(plan.jobs == 4);
    CHECK(plan.topk_k == 2);
}

TEST_CASE("plan parse errors carry the line number") {
    std::istringstream bad_key("depths = 2\nbogus = 1\n");
    try {
        parse_plan(bad_key);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    std::istringstream no_eq("datasets a.txt\n");
    CHECK_THROWS_AS(parse_plan(no_eq), FormatError);
}

TEST_CASE("rule and schedule names") {
    CHECK(rule_kind_from_name("discrepancy") == RuleKind::Discrepancy);
    CHECK(rule_kind_from_name("topk-star") == RuleKind::TopKStar);
    CHECK_THROWS_AS(rule_kind_from_name("nope"), std::domain_error);
    CHECK(relax_kind_from_name("luby") == RelaxKind::Luby);
    CHECK_THROWS_AS(relax_kind_from_name("nope"), std::domain_error);
}

namespace {
BenchPlan tiny_plan(const std::string& dir) {
    // write the two toy datasets to disk
    std::string d1_path = dir + "/d1.txt";
    std::string xor_path = dir + "/xor.txt";
    {
        std::ofstream d1(d1_path);
        d1 << "0 0 1\n0 0 1\n1 1 1\n1 1 0\n";
        std::ofstream dx(xor_path);
        dx << "0 0 0\n1 0 1\n1 1 0\n0 1 1\n";
    }
    BenchPlan plan;
    plan.datasets = {d1_path, xor_path};
    plan.algos = {"dl85", "cadl85", "greedy", "topk"};
    plan.rules = {"purity", "discrepancy"};
    plan.schedules = {"monotonic", "luby"};
    plan.depths = {2};
    plan.minsup = 1;
    plan.time_limits_s = {5.0};
    plan.topk_k = 1;
    return plan;
}
} // namespace

TEST_CASE("bench matrix expansion and execution") {
    BenchPlan plan = tiny_plan("/tmp");
    auto rows = run_bench(plan);
    // per dataset: dl85, greedy, topk, cadl85 x (purity:1 + discrepancy:2) = 6
    CHECK(rows.size() == 12);
    int purity_rows = 0;
    for (const auto& r : rows) {
        CHECK_FALSE(r.failed);
        if (r.rule == "purity") {
            ++purity_rows;
            CHECK(r.schedule == "monotonic"); // purity only relaxes monotonically
        }
        if (r.algo == "dl85" || r.algo == "cadl85") {
            CHECK(r.result.proved_optimal);
            CHECK(r.result.best_error == 0); // both toys are separable at depth 2
        }
    }
    CHECK(purity_rows == 2);
}

TEST_CASE("parallel bench matches serial") {
    BenchPlan plan = tiny_plan("/tmp");
    auto serial = run_bench(plan);
    plan.jobs = 4;
    auto parallel = run_bench(plan);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].algo == parallel[i].algo);
        CHECK(serial[i].result.best_error == parallel[i].result.best_error);
    }
}

TEST_CASE("missing dataset aborts the bench") {
    BenchPlan plan;
    plan.datasets = {"/nonexistent/file.txt"};
    plan.algos = {"dl85"};
    plan.depths = {1};
    plan.time_limits_s = {1.0};
    CHECK_THROWS_AS(run_bench(plan), FormatError);
}

TEST_CASE("a broken run becomes a failed row") {
    BenchPlan plan = tiny_plan("/tmp");
    plan.algos = {"dl85"};
    plan.topk_k = 0; // irrelevant for dl85
    plan.rules.clear();
    plan.datasets = {plan.datasets[0]};
    auto ok = run_bench(plan);
    REQUIRE(ok.size() == 1);
    CHECK_FALSE(ok[0].failed);

    plan.algos = {"topk"}; // k = 0 throws inside the run
    auto rows = run_bench(plan);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].failed);
    CHECK_FALSE(rows[0].error_message.empty());
}

TEST_CASE("csv outputs") {
    BenchPlan plan = tiny_plan("/tmp");
    plan.algos = {"dl85", "greedy"};
    auto rows = run_bench(plan);

    std::ostringstream bench_csv;
    write_bench_csv(rows, bench_csv);
    std::istringstream lines(bench_csv.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header == "dataset,algo,rule,schedule,depth,minsup,time_limit_s,best_error,proved,"
                    "proof_time_s,primal_integral_raw_s,primal_integral_pct");
    int n = 0;
    std::string line;
    while (std::getline(lines, line)) ++n;
    CHECK(n == (int)rows.size());

    std::ostringstream cum_csv;
    write_cumulative_csv(rows, {}, cum_csv);
    std::istringstream cum_lines(cum_csv.str());
    std::getline(cum_lines, header);
    CHECK(header == "algo,rule,schedule,t_s,solved");
    n = 0;
    while (std::getline(cum_lines, line)) ++n;
    CHECK(n == 2 * 10); // two algo groups x default 10 grid points
}
