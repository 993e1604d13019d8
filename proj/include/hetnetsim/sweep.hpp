#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "hetnetsim/engine.hpp"
#include "hetnetsim/scenario.hpp"

namespace hetnetsim::sim {

enum class SweepMode {
  ClosedLoop,  // independent run per value, seeded seed + index
  Replay,      // one recorded baseline run, hysteresis re-evaluated per value
};

struct SweepOptions {
  SweepMode mode = SweepMode::ClosedLoop;
  unsigned threads = 0;  // 0: HETNETSIM_THREADS, else hardware concurrency
  bool keep_logs = false;
};

struct SweepPoint {
  double value = 0.0;
  KpiReport report;
  EventLog log;  // closed-loop with keep_logs only
};

inline unsigned sweep_threads_from_env() {
  if (const char* env = std::getenv("HETNETSIM_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Replay can only vary what the recorded trace does not depend on.
inline bool replayable_axis(const std::string& axis) {
  return axis.rfind("handover.", 0) == 0 || axis.rfind("signalling.", 0) == 0;
}

// Runs task(i) for i in [0, n) on up to `threads` workers. The first failure
// by index is rethrown after all workers stop.
template <typename Task>
void parallel_for(std::size_t n, unsigned threads, Task task) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i; !failed && (i = next++) < n;) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
      }
    }
  };
  const auto count = std::min<std::size_t>(std::max(1u, threads), n);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline std::vector<SweepPoint> sweep(const Scenario& scenario, const std::string& axis,
                                     const std::vector<double>& values, const SweepOptions& options = {}) {
  get_parameter(scenario, axis);
  if (options.mode == SweepMode::Replay && !replayable_axis(axis)) {
    throw UnknownParameterError(axis, "replay mode only varies handover.* and signalling.* fields");
  }
  std::vector<Scenario> variants;
  variants.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto v = set_parameter(scenario, axis, values[i]);
    auto violations = validate_scenario(v);
    if (!violations.empty()) throw ScenarioError(std::move(violations));
    if (options.mode == SweepMode::ClosedLoop) v.seed = scenario.seed + i;
    variants.push_back(std::move(v));
  }
  std::vector<SweepPoint> out(values.size());
  if (values.empty()) return out;
  const unsigned threads = options.threads ? options.threads : sweep_threads_from_env();

  if (options.mode == SweepMode::Replay) {
    RunOptions ro;
    ro.record_log = false;
    ro.record_trace = true;
    const auto recorded = run(scenario, ro);
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = {values[i], replay(recorded, variants[i]), {}};
    return out;
  }

  parallel_for(values.size(), threads, [&](std::size_t i) {
    RunOptions ro;
    ro.record_log = options.keep_logs;
    auto res = run(variants[i], ro);
    out[i] = {values[i], std::move(res.report), std::move(res.log)};
  });
  return out;
}

}  // namespace hetnetsim::sim
