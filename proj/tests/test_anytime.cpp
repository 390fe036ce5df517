#include <doctest.h>

#include <random>
#include <vector>

#include "cadl/anytime.hpp"
#include "cadl/oracle.hpp"
#include "testutil.hpp"

using namespace cadl;

namespace {
SearchParams basic_params(int maxdepth, Count minsup = 1) {
    SearchParams p;
    p.maxdepth = maxdepth;
    p.minsup = minsup;
    return p;
}

void check_trace_shape(const IncumbentTrace& trace) {
    // strictly improving incumbents, monotone timestamps
    Count prev_err = kInfiniteBound;
    double prev_t = -1.0;
    for (const auto& e : trace.events) {
        CHECK(e.t_s >= prev_t);
        prev_t = e.t_s;
        if (e.kind == EventKind::Incumbent) {
            CHECK(e.error < prev_err);
            prev_err = e.error;
        }
    }
}
} // namespace

TEST_CASE("dl85_anytime proves optimality and traces the run") {
    BinaryDataset ds = testutil::d2_xor();
    FakeStopwatch sw;
    RunResult r = dl85_anytime(ds, basic_params(2), 0.0, sw);
    CHECK(r.best_error == 0);
    CHECK(r.proved_optimal);
    CHECK(r.iterations == 1);
    CHECK(r.trace.proved());
    CHECK(r.trace.final_error() == 0);
    check_trace_shape(r.trace);
    // last event is the optimality proof
    REQUIRE_FALSE(r.trace.events.empty());
    CHECK(r.trace.events.back().kind == EventKind::ProvedOptimal);
}

TEST_CASE("cadl85 reaches the optimum for every rule and schedule") {
    std::mt19937 rng(4040);
    std::vector<std::pair<RuleKind, RelaxKind>> combos = {
        {RuleKind::Purity, RelaxKind::Monotonic},
        {RuleKind::Gain, RelaxKind::Monotonic},
        {RuleKind::Gain, RelaxKind::Exponential},
        {RuleKind::Gain, RelaxKind::Luby},
        {RuleKind::Discrepancy, RelaxKind::Monotonic},
        {RuleKind::Discrepancy, RelaxKind::Exponential},
        {RuleKind::Discrepancy, RelaxKind::Luby},
        {RuleKind::TopK, RelaxKind::Monotonic},
        {RuleKind::TopK, RelaxKind::Exponential},
        {RuleKind::TopK, RelaxKind::Luby},
        {RuleKind::TopKStar, RelaxKind::Monotonic},
        {RuleKind::TopKStar, RelaxKind::Exponential},
        {RuleKind::TopKStar, RelaxKind::Luby},
    };
    for (int trial = 0; trial < 8; ++trial) {
        auto inst = testutil::random_instance(rng);
        Count opt = brute_force_optimal(inst.ds, inst.maxdepth, inst.minsup).optimal_error;
        for (auto [kind, sched_kind] : combos) {
            RelaxSchedule sched;
            sched.kind = sched_kind;
            RuleConfig rule = RuleConfig::make(kind, inst.ds, inst.maxdepth, sched);
            FakeStopwatch sw;
            RunResult r = cadl85(inst.ds, rule, basic_params(inst.maxdepth, inst.minsup), 0.0, sw);
            INFO("rule=", rule_name(kind), " sched=", relax_name(sched_kind), " trial=", trial);
            CHECK(r.best_error == opt);
            CHECK(r.proved_optimal);
            CHECK(tree_error(r.best_tree, inst.ds) == opt);
            check_trace_shape(r.trace);
        }
    }
}

TEST_CASE("first discrepancy incumbent equals the greedy tree error") {
    std::mt19937 rng(555);
    for (int trial = 0; trial < 25; ++trial) {
        auto inst = testutil::random_instance(rng);
        SearchParams p = basic_params(inst.maxdepth, inst.minsup);
        Count greedy_err = tree_error(greedy_tree(inst.ds, p), inst.ds);

        RuleConfig rule = RuleConfig::make(RuleKind::Discrepancy, inst.ds, inst.maxdepth);
        FakeStopwatch sw;
        RunResult r = cadl85(inst.ds, rule, p, 0.0, sw);
        auto incs = r.trace.incumbents();
        Count first = incs.empty() ? r.best_error : incs.front().error;
        CHECK(first == greedy_err);
    }
}

TEST_CASE("a hit deadline is reported as a timeout") {
    BinaryDataset ds = testutil::d2_xor();
    FakeStopwatch sw;
    RunResult r = dl85_anytime(ds, basic_params(2), 1e-9, sw);
    CHECK_FALSE(r.proved_optimal);
    REQUIRE_FALSE(r.trace.events.empty());
    CHECK(r.trace.events.back().kind == EventKind::Timeout);
    // never empty-handed: falls back to the root majority leaf
    CHECK_FALSE(r.best_tree.is_empty());
    CHECK(r.best_error == 2);
}

TEST_CASE("topk_fixed: full beam proves, k=1 only terminates") {
    std::mt19937 rng(808);
    for (int trial = 0; trial < 15; ++trial) {
        auto inst = testutil::random_instance(rng);
        SearchParams p = basic_params(inst.maxdepth, inst.minsup);
        Count opt = brute_force_optimal(inst.ds, inst.maxdepth, inst.minsup).optimal_error;

        FakeStopwatch sw1;
        RunResult full = topk_fixed(inst.ds, static_cast<int>(inst.ds.n_features()), p, 0.0, sw1);
        CHECK(full.best_error == opt);
        CHECK(full.proved_optimal);

        FakeStopwatch sw2;
        RunResult narrow = topk_fixed(inst.ds, 1, p, 0.0, sw2);
        CHECK(narrow.best_error >= opt);
        CHECK(narrow.iterations == 1);
    }
    CHECK_THROWS_AS(topk_fixed(testutil::d1(), 0, basic_params(1), 0.0, FakeStopwatch{}),
                    std::domain_error);
}

TEST_CASE("greedy_run traces exactly one incumbent") {
    BinaryDataset ds = testutil::d1();
    FakeStopwatch sw;
    RunResult r = greedy_run(ds, basic_params(2), sw);
    CHECK(r.best_error == 0);
    CHECK_FALSE(r.proved_optimal);
    CHECK(r.trace.incumbents().size() == 1);
}

TEST_CASE("trace sink mirrors the stored events") {
    BinaryDataset ds = testutil::d2_xor();
    FakeStopwatch sw;
    std::vector<TraceEvent> seen;
    RunResult r = dl85_anytime(ds, basic_params(2), 0.0, sw, {},
                               [&](const TraceEvent& e) { seen.push_back(e); });
    REQUIRE(seen.size() == r.trace.events.size());
    for (std::size_t i = 0; i < seen.size(); ++i) {
        CHECK(seen[i].error == r.trace.events[i].error);
        CHECK(seen[i].kind == r.trace.events[i].kind);
    }
}

TEST_CASE("jsonl line format is stable") {
    TraceEvent e{0.0123456, 7, EventKind::Incumbent, 2};
    CHECK(event_to_jsonl(e) == "{\"t_ms\":12.346,\"error\":7,\"kind\":\"incumbent\",\"iteration\":2}");
}
