#include "gtcount/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "gtcount/bounds.hpp"
#include "gtcount/splitting.hpp"

namespace gtcount {

const char* algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::find_d: return "find_d";
    case Algorithm::estimate_only: return "estimate_only";
    case Algorithm::find_defectives_bounded: return "find_defectives_bounded";
    case Algorithm::find_defectives_unbounded: return "find_defectives_unbounded";
  }
  throw std::logic_error("unknown algorithm");
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::find_d, Algorithm::estimate_only,
                      Algorithm::find_defectives_bounded,
                      Algorithm::find_defectives_unbounded})
    if (name == algorithm_name(a)) return a;
  return std::nullopt;
}

void validate(const TrialConfig& config) {
  if (config.n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(config.delta > 0.0 && config.delta < 1.0))
    throw std::invalid_argument("delta must lie strictly inside (0, 1)");
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (config.defectives.empty()) {
    if (config.d > config.n) throw std::invalid_argument("d must be <= n");
  } else {
    std::vector<item_id> sorted = config.defectives;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] < 1 || sorted[i] > config.n)
        throw std::invalid_argument("explicit defective id outside [1, n]");
      if (i > 0 && sorted[i] == sorted[i - 1])
        throw std::invalid_argument("duplicate explicit defective id");
    }
  }
}

bool Aggregate::operator==(const Aggregate& other) const {
  return config.n == other.config.n && config.d == other.config.d &&
         config.defectives == other.config.defectives &&
         config.delta == other.config.delta && config.trials == other.config.trials &&
         config.master_seed == other.config.master_seed &&
         config.algorithm == other.config.algorithm &&
         failure_rate == other.failure_rate && mean_queries == other.mean_queries &&
         min_queries == other.min_queries && max_queries == other.max_queries &&
         stddev_queries == other.stddev_queries &&
         bound_curve_values == other.bound_curve_values;
}

namespace detail {

std::uint32_t ceil_log2(std::uint64_t x) {
  return x <= 1 ? 0 : static_cast<std::uint32_t>(64 - std::countl_zero(x - 1));
}

namespace {

// Per-thread identity array; partial shuffles are undone after every draw,
// so the prefix stays the identity between calls.
thread_local std::vector<item_id> tl_identity;

void ensure_identity(item_id n) {
  const auto old_size = static_cast<item_id>(tl_identity.size());
  if (old_size >= n) return;
  tl_identity.resize(n);
  for (item_id i = old_size; i < n; ++i) tl_identity[i] = i + 1;
}

}  // namespace

std::vector<item_id> sample_defectives(item_id n, std::uint64_t d, RandomKey key) {
  if (d > n) throw std::invalid_argument("d must be <= n");
  ensure_identity(n);
  SplitMix64 rng(key);
  std::vector<std::uint64_t> swapped_with(d);
  for (std::uint64_t j = 0; j < d; ++j) {
    const std::uint64_t r = j + rng.below(n - j);
    std::swap(tl_identity[j], tl_identity[r]);
    swapped_with[j] = r;
  }
  std::vector<item_id> sample(tl_identity.begin(),
                              tl_identity.begin() + static_cast<std::ptrdiff_t>(d));
  for (std::uint64_t j = d; j-- > 0;)
    std::swap(tl_identity[j], tl_identity[swapped_with[j]]);
  std::sort(sample.begin(), sample.end());
  return sample;
}

}  // namespace detail

namespace {

void require(bool condition, const char* what) {
  if (!condition) throw std::logic_error(std::string("harness invariant violated: ") + what);
}

// Worst-case estimator spend at failure budget `delta` and true count d >= 1:
// sum over i = 1..ceil(log2(8d)) of (2*log2(1/delta) + 2 + 2^i).
double estimate_query_budget(std::uint64_t d_true, double delta) {
  const std::uint32_t levels = detail::ceil_log2(8 * d_true);
  const double per_level = 2.0 * std::log2(1.0 / delta) + 2.0;
  return per_level * levels + static_cast<double>((1ull << (levels + 1)) - 2);
}

// Composed worst case for the two-stage counter (its estimator runs at
// delta/2): ub_theorem5 + 15d + (2*log2(2/delta) + 2)*ceil(log2(8d)) +
// 2^(ceil(log2(8d)) + 1) + 1.
double find_d_query_budget(std::uint64_t d_true, double delta) {
  const std::uint32_t levels = detail::ceil_log2(8 * d_true);
  return bounds::ub_theorem5(d_true, delta) + 15.0 * static_cast<double>(d_true) +
         (2.0 * std::log2(2.0 / delta) + 2.0) * levels +
         static_cast<double>(1ull << (levels + 1)) + 1.0;
}

void check_record(const TrialConfig& config, const TrialRecord& record) {
  const std::uint64_t d = record.d_true;
  require(record.queries_total == record.queries_estimate + record.queries_find,
          "query split must sum to the total");
  switch (config.algorithm) {
    case Algorithm::find_d:
      if (d == 0) {
        require(record.queries_total == 1 && record.delta_hat == 0 && record.D == 0,
                "clean universe must resolve in one query");
      } else {
        require(record.D >= 1 && record.D <= 8 * d, "estimate must stay within 8d");
        require(static_cast<double>(record.queries_total) <=
                    find_d_query_budget(d, config.delta),
                "composed query budget exceeded");
      }
      break;
    case Algorithm::estimate_only:
      if (d == 0) {
        require(record.queries_total == 1 && record.D == 0,
                "clean universe must resolve in one query");
      } else {
        require(record.D >= 1 && record.D <= 8 * d, "estimate must stay within 8d");
        require((record.D & (record.D - 1)) == 0, "estimate must be a power of two");
        if (d == 1) require(record.D == 8, "a single defective must estimate to 8");
        require(static_cast<double>(record.queries_total) <=
                    estimate_query_budget(d, config.delta),
                "estimator query budget exceeded");
      }
      break;
    case Algorithm::find_defectives_bounded: {
      const std::uint64_t hint = record.D;
      const std::uint64_t group = (config.n + hint - 1) / hint;
      require(record.correct, "bounded splitter must recover the defective set");
      require(static_cast<double>(record.queries_total) <=
                  static_cast<double>(hint) +
                      static_cast<double>(d) * (1.0 + detail::ceil_log2(group)),
              "bounded splitter query budget exceeded");
      break;
    }
    case Algorithm::find_defectives_unbounded:
      require(record.correct, "unbounded splitter must recover the defective set");
      if (d == 0)
        require(record.queries_total == 1, "clean universe must resolve in one query");
      else
        require(record.queries_total <= 2 * d * detail::ceil_log2(config.n) + 1,
                "unbounded splitter query budget exceeded");
      break;
  }
}

}  // namespace

TrialRecord run_trial(const TrialConfig& config, std::uint64_t trial_index) {
  validate(config);

  const Seed draw_seed{config.master_seed, 2 * trial_index};
  const Seed algo_seed{config.master_seed, 2 * trial_index + 1};

  std::vector<item_id> defectives =
      config.defectives.empty()
          ? detail::sample_defectives(config.n, config.d, key_of(draw_seed).child(0))
          : config.defectives;
  DefectiveOracle oracle(config.n, std::move(defectives));

  TrialRecord record;
  record.trial_index = trial_index;
  record.d_true = oracle.defective_count();

  switch (config.algorithm) {
    case Algorithm::find_d: {
      const FindDReport report = find_d(oracle, config.n, config.delta, algo_seed);
      record.D = report.estimate;
      record.delta_hat = report.defective_count;
      record.queries_estimate = report.queries_estimate;
      record.queries_find = report.queries_find;
      record.queries_total = report.queries_total;
      require(record.queries_total == oracle.query_count(),
              "reported queries must match the oracle counter");
      break;
    }
    case Algorithm::estimate_only: {
      const EstimateResult result = estimate(oracle, config.n, config.delta, algo_seed);
      record.D = result.estimate;
      record.delta_hat = result.estimate;
      record.queries_estimate = result.queries_used;
      record.queries_total = result.queries_used;
      require(record.queries_total == oracle.query_count(),
              "reported queries must match the oracle counter");
      break;
    }
    case Algorithm::find_defectives_bounded:
    case Algorithm::find_defectives_unbounded: {
      DirectTester tester(oracle);
      const std::uint64_t hint = std::max<std::uint64_t>(record.d_true, 1);
      const SplitResult result =
          config.algorithm == Algorithm::find_defectives_bounded
              ? find_defectives_bounded(tester, config.n, static_cast<block_id>(hint))
              : find_defectives_unbounded(tester, config.n);
      record.D = config.algorithm == Algorithm::find_defectives_bounded ? hint : 0;
      record.delta_hat = result.found.size();
      record.queries_find = result.queries;
      record.queries_total = result.queries;
      require(record.queries_total == oracle.query_count(),
              "reported queries must match the oracle counter");
      require(std::equal(result.found.begin(), result.found.end(),
                         oracle.defective_items().begin(), oracle.defective_items().end()),
              "splitter must recover the defective set exactly");
      break;
    }
  }

  record.correct = record.delta_hat == record.d_true;
  check_record(config, record);
  return record;
}

namespace {

Aggregate aggregate_records(const TrialConfig& config,
                            const std::vector<TrialRecord>& records) {
  Aggregate agg;
  agg.config = config;
  std::uint64_t failures = 0;
  std::uint64_t total_min = records.front().queries_total;
  std::uint64_t total_max = records.front().queries_total;
  double sum = 0.0;
  for (const TrialRecord& r : records) {
    if (!r.correct) ++failures;
    total_min = std::min(total_min, r.queries_total);
    total_max = std::max(total_max, r.queries_total);
    sum += static_cast<double>(r.queries_total);
  }
  const auto trials = static_cast<double>(records.size());
  agg.failure_rate = static_cast<double>(failures) / trials;
  agg.mean_queries = sum / trials;
  agg.min_queries = total_min;
  agg.max_queries = total_max;
  double sq = 0.0;
  for (const TrialRecord& r : records) {
    const double dev = static_cast<double>(r.queries_total) - agg.mean_queries;
    sq += dev * dev;
  }
  agg.stddev_queries = std::sqrt(sq / trials);

  const std::uint64_t d = config.effective_d();
  if (d >= 1) {
    agg.bound_curve_values = {
        {"ub_theorem5", bounds::ub_theorem5(d, config.delta)},
        {"ub_cheng", bounds::ub_cheng(d, config.delta)},
        {"lb_theorem1", bounds::lb_theorem1(d, config.delta)},
        {"lb_theorem2", bounds::lb_theorem2(config.n, d, config.delta)},
    };
  }
  return agg;
}

}  // namespace

ExperimentResult run_experiment(const TrialConfig& config, unsigned threads) {
  validate(config);
  ExperimentResult result;
  result.records.resize(config.trials);

  if (threads <= 1 || config.trials == 1) {
    for (std::uint64_t i = 0; i < config.trials; ++i)
      result.records[i] = run_trial(config, i);
  } else {
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(threads, config.trials));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::uint64_t i = w; i < config.trials; i += workers)
            result.records[i] = run_trial(config, i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  result.aggregate = aggregate_records(config, result.records);

  // The count guarantee: with >= 1000 trials a failure rate past
  // delta + 3*sqrt(delta(1-delta)/trials) indicates a bug, not bad luck.
  if (config.algorithm == Algorithm::find_d && config.trials >= 1000) {
    const double slack =
        3.0 * std::sqrt(config.delta * (1.0 - config.delta) /
                        static_cast<double>(config.trials));
    require(result.aggregate.failure_rate <= config.delta + slack,
            "failure rate exceeds the guarantee margin");
  }
  return result;
}

std::vector<Aggregate> sweep(const SweepGrid& grid, unsigned threads) {
  if (grid.n_values.empty() || grid.d_values.empty() || grid.delta_values.empty())
    throw std::invalid_argument("sweep grid must be non-empty in every dimension");
  std::vector<item_id> ns = grid.n_values;
  std::vector<std::uint64_t> ds = grid.d_values;
  std::vector<double> deltas = grid.delta_values;
  std::sort(ns.begin(), ns.end());
  std::sort(ds.begin(), ds.end());
  std::sort(deltas.begin(), deltas.end());

  std::vector<Aggregate> rows;
  rows.reserve(ns.size() * ds.size() * deltas.size());
  for (item_id n : ns)
    for (std::uint64_t d : ds)
      for (double delta : deltas) {
        TrialConfig config;
        config.n = n;
        config.d = d;
        config.delta = delta;
        config.trials = grid.trials;
        config.master_seed = grid.master_seed;
        config.algorithm = grid.algorithm;
        rows.push_back(run_experiment(config, threads).aggregate);
      }
  return rows;
}

VerifyReport exhaustive_verify(std::uint32_t n_small) {
  if (n_small < 1 || n_small > 12)
    throw std::invalid_argument("n_small must lie in [1, 12]");

  VerifyReport report;
  report.n_small = n_small;
  report.sets_checked = 1ull << n_small;
  report.passed = true;

  const auto fail = [&](const std::string& what) {
    if (report.passed) {
      report.passed = false;
      report.failure = what;
    }
  };

  for (std::uint64_t mask = 0; mask < report.sets_checked; ++mask) {
    std::vector<item_id> defectives;
    for (std::uint32_t bit = 0; bit < n_small; ++bit)
      if (mask & (1ull << bit)) defectives.push_back(bit + 1);
    const std::uint64_t d = defectives.size();

    for (block_id hint : {1u, 2u, 4u}) {
      if (hint > n_small) continue;
      DefectiveOracle oracle(n_small, defectives);
      DirectTester tester(oracle);
      const SplitResult r = find_defectives_bounded(tester, n_small, hint);
      ++report.runs;
      report.max_queries_bounded = std::max(report.max_queries_bounded, r.queries);
      const std::uint64_t group = (n_small + hint - 1) / hint;
      const std::uint64_t budget =
          hint + d * (1 + detail::ceil_log2(group));
      if (r.found != defectives)
        fail("bounded recovery mismatch at mask " + std::to_string(mask) + " D " +
             std::to_string(hint));
      else if (r.queries > budget)
        fail("bounded budget exceeded at mask " + std::to_string(mask) + " D " +
             std::to_string(hint) + ": " + std::to_string(r.queries) + " > " +
             std::to_string(budget));
      else if (r.queries != oracle.query_count())
        fail("bounded query accounting mismatch at mask " + std::to_string(mask));
    }

    DefectiveOracle oracle(n_small, defectives);
    DirectTester tester(oracle);
    const SplitResult r = find_defectives_unbounded(tester, n_small);
    ++report.runs;
    report.max_queries_unbounded = std::max(report.max_queries_unbounded, r.queries);
    const std::uint64_t budget =
        d == 0 ? 1 : 2 * d * detail::ceil_log2(n_small) + 1;
    if (r.found != defectives)
      fail("unbounded recovery mismatch at mask " + std::to_string(mask));
    else if (r.queries > budget)
      fail("unbounded budget exceeded at mask " + std::to_string(mask) + ": " +
           std::to_string(r.queries) + " > " + std::to_string(budget));
    else if (r.queries != oracle.query_count())
      fail("unbounded query accounting mismatch at mask " + std::to_string(mask));
  }
  return report;
}

}  // namespace gtcount
