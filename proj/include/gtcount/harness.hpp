#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gtcount/algorithms.hpp"

namespace gtcount {

enum class Algorithm {
  find_d,
  estimate_only,
  find_defectives_bounded,
  find_defectives_unbounded,
};

const char* algorithm_name(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct TrialConfig {
  item_id n = 0;
  std::uint64_t d = 0;                // ignored when `defectives` is non-empty
  std::vector<item_id> defectives;    // explicit instance; empty means draw per trial
  double delta = 0.1;
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 0;
  Algorithm algorithm = Algorithm::find_d;

  // defectives.size() when explicit, else d.
  std::uint64_t effective_d() const {
    return defectives.empty() ? d : defectives.size();
  }
};

void validate(const TrialConfig& config);

struct TrialRecord {
  std::uint64_t trial_index = 0;
  std::uint64_t d_true = 0;
  std::uint64_t D = 0;          // estimate-stage output (hint used, for splitters)
  std::uint64_t delta_hat = 0;  // the algorithm's count output
  bool correct = false;         // delta_hat == d_true
  std::uint64_t queries_estimate = 0;
  std::uint64_t queries_find = 0;
  std::uint64_t queries_total = 0;
};

struct Aggregate {
  TrialConfig config;
  double failure_rate = 0.0;
  double mean_queries = 0.0;
  std::uint64_t min_queries = 0;
  std::uint64_t max_queries = 0;
  double stddev_queries = 0.0;  // population form
  // ub_theorem5, ub_cheng, lb_theorem1, lb_theorem2 at (n, d, delta); raw
  // values, empty when d = 0.
  std::map<std::string, double> bound_curve_values;

  bool operator==(const Aggregate& other) const;
};

// One seeded trial. Stream layout under master_seed: trial i draws its
// defective set on stream 2i and runs its algorithm on stream 2i+1, so the
// two are independent and a trial is reproducible in isolation. Hard query
// and correctness invariants are checked on every record; a violation
// throws std::logic_error.
TrialRecord run_trial(const TrialConfig& config, std::uint64_t trial_index);

struct ExperimentResult {
  Aggregate aggregate;
  std::vector<TrialRecord> records;  // in trial order
};

// Runs config.trials trials. Records and aggregate are identical for every
// thread count, including 1.
ExperimentResult run_experiment(const TrialConfig& config, unsigned threads = 1);

struct SweepGrid {
  std::vector<item_id> n_values;
  std::vector<std::uint64_t> d_values;
  std::vector<double> delta_values;
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 0;
  Algorithm algorithm = Algorithm::find_d;
};

// One aggregate per grid point, ordered lexicographically by (n, d, delta)
// ascending regardless of the order the value lists were given in.
std::vector<Aggregate> sweep(const SweepGrid& grid, unsigned threads = 1);

struct VerifyReport {
  std::uint32_t n_small = 0;
  std::uint64_t sets_checked = 0;         // 2^n_small
  std::uint64_t variants = 2;             // bounded family, unbounded
  std::uint64_t runs = 0;                 // individual algorithm executions
  std::uint64_t max_queries_bounded = 0;
  std::uint64_t max_queries_unbounded = 0;
  bool passed = false;
  std::string failure;                  // first failing case, empty when passed
};

// Enumerates every defective set over {1..n_small} (n_small <= 12) and runs
// both splitting variants against a fresh counting oracle: the bounded one
// at every hint D in {1, 2, 4} with D <= n_small, the unbounded one once.
// Checks exact recovery, the per-variant query bounds, and query accounting.
VerifyReport exhaustive_verify(std::uint32_t n_small);

namespace detail {

// ceil(log2(x)) for x >= 1.
std::uint32_t ceil_log2(std::uint64_t x);

// Uniform size-d subset of {1..n} via a seeded partial shuffle, returned
// sorted. O(d) per draw after a one-time per-thread identity fill.
std::vector<item_id> sample_defectives(item_id n, std::uint64_t d, RandomKey key);

}  // namespace detail

}  // namespace gtcount
