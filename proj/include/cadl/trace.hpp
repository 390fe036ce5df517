#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cadl {

// Monotonic elapsed-time source. The fake variant advances a virtual clock
// by a fixed tick per query, for reproducible traces.
class Stopwatch {
public:
    virtual ~Stopwatch() = default;
    virtual double elapsed_s() const = 0;
};

class WallStopwatch final : public Stopwatch {
public:
    WallStopwatch() : start_(std::chrono::steady_clock::now()) {}
    double elapsed_s() const override {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

class FakeStopwatch final : public Stopwatch {
public:
    explicit FakeStopwatch(double tick_s = 1e-4) : tick_(tick_s) {}
    double elapsed_s() const override { return t_ += tick_; }

private:
    mutable double t_ = 0.0;
    double tick_;
};

enum class EventKind { Incumbent, IterationEnd, ProvedOptimal, Timeout };

inline std::string event_kind_name(EventKind k) {
    switch (k) {
    case EventKind::Incumbent: return "incumbent";
    case EventKind::IterationEnd: return "iteration_end";
    case EventKind::ProvedOptimal: return "proved_optimal";
    case EventKind::Timeout: return "timeout";
    }
    return "?";
}

struct TraceEvent {
    double t_s = 0.0;
    long long error = 0;
    EventKind kind = EventKind::Incumbent;
    int iteration = 0;
};

struct TraceMeta {
    std::string dataset, algo, rule, schedule;
    int depth = 0;
    long long minsup = 1;
    double time_limit_s = 0.0;
};

// Timestamped sequence of run events. Incumbent errors are strictly
// decreasing; a proved_optimal event, if present, is last.
struct IncumbentTrace {
    TraceMeta meta;
    std::vector<TraceEvent> events;

    std::vector<TraceEvent> incumbents() const {
        std::vector<TraceEvent> out;
        for (const auto& e : events)
            if (e.kind == EventKind::Incumbent) out.push_back(e);
        return out;
    }

    std::optional<long long> final_error() const {
        std::optional<long long> err;
        for (const auto& e : events)
            if (e.kind == EventKind::Incumbent) err = e.error;
        return err;
    }

    bool proved() const {
        for (const auto& e : events)
            if (e.kind == EventKind::ProvedOptimal) return true;
        return false;
    }

    std::optional<double> proof_time_s() const {
        for (const auto& e : events)
            if (e.kind == EventKind::ProvedOptimal) return e.t_s;
        return std::nullopt;
    }
};

using TraceSink = std::function<void(const TraceEvent&)>;

// One JSON object per event; key order fixed for golden tests.
inline std::string event_to_jsonl(const TraceEvent& e) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "{\"t_ms\":%.3f,\"error\":%lld,\"kind\":\"%s\",\"iteration\":%d}",
                  e.t_s * 1000.0, e.error, event_kind_name(e.kind).c_str(), e.iteration);
    return buf;
}

inline void write_trace_jsonl(const IncumbentTrace& trace, std::ostream& out) {
    for (const auto& e : trace.events) out << event_to_jsonl(e) << "\n";
}

} // namespace cadl
