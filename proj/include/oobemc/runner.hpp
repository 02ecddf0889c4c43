#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "oobemc/aggregation.hpp"
#include "oobemc/deployment.hpp"
#include "oobemc/scenario.hpp"

// Run orchestration. Trials are independent pure functions of
// (scenario, trial_index), so workers claim indices from a shared counter and
// write into a preallocated slot vector; the reduction afterwards walks slots
// in index order. Results are identical for any thread count.

namespace oobemc {

inline constexpr const char* kArtifactName = "oobemc";
inline constexpr const char* kArtifactVersion = "0.1.0";

struct RunManifest {
  std::string artifact_name = kArtifactName;
  std::string artifact_version = kArtifactVersion;
  std::string rng_algorithm = kRngAlgorithm;
  Scenario scenario;  // fully resolved, defaults expanded
  std::string started_utc;
  std::string finished_utc;
  RunStatistics statistics;
};

inline int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Evaluates all trials of the scenario; results come back ordered by trial
// index. threads = 0 picks the hardware concurrency.
inline std::vector<TrialResult> run_trials(const Scenario& s, int threads = 0) {
  s.validate();
  const int n = s.trials;
  std::vector<TrialResult> results(static_cast<std::size_t>(n));
  const int workers = std::min(resolve_thread_count(threads), n);

  if (workers <= 1) {
    for (int i = 0; i < n; ++i) {
      results[static_cast<std::size_t>(i)] = aggregate_trial(generate_trial(s, i), s);
    }
    return results;
  }

  std::atomic<int> next{0};
  auto work = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      results[static_cast<std::size_t>(i)] = aggregate_trial(generate_trial(s, i), s);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace oobemc
