#include "gtcount/algorithms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gtcount/splitting.hpp"

namespace gtcount {

namespace {

void check_common(const DefectiveOracle& oracle, item_id n, double delta) {
  if (n < 1) throw std::invalid_argument("universe size must be >= 1");
  if (oracle.universe_size() != n)
    throw std::invalid_argument("oracle universe does not match n");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must lie strictly inside (0, 1)");
}

constexpr std::uint64_t max_cells = std::numeric_limits<block_id>::max();

}  // namespace

namespace detail {

EstimateResult estimate_with_key(DefectiveOracle& oracle, item_id n, double delta,
                                 RandomKey round_root) {
  check_common(oracle, n, delta);
  EstimateResult result;
  const std::uint64_t before = oracle.query_count();

  if (!oracle.answer_range(1, n)) {
    result.queries_used = oracle.query_count() - before;
    return result;  // estimate = 0
  }

  const double round_budget = 2.0 * std::log2(1.0 / delta);
  std::uint64_t round_counter = 0;
  for (std::uint64_t cells = 2;; cells *= 2) {
    if (cells > max_cells)
      throw std::domain_error("cell count exceeds the supported range");
    const auto rounds =
        static_cast<std::uint64_t>(std::ceil(round_budget / static_cast<double>(cells)));
    bool advanced = false;
    for (std::uint64_t m = 1; m <= rounds; ++m) {
      const BlockPartition scatter(n, static_cast<block_id>(cells),
                                   round_root.child(round_counter++));
      std::uint64_t positive = 0;
      for (block_id j = 1; j <= cells; ++j)
        if (oracle.answer_lifted_range(scatter, j, j)) ++positive;
      result.rounds.push_back({cells, static_cast<std::uint32_t>(m), positive});
      if (4 * positive >= cells) {
        advanced = true;
        break;
      }
    }
    if (!advanced) {
      result.estimate = cells;
      break;
    }
  }
  result.queries_used = oracle.query_count() - before;
  return result;
}

BlockPartition find_d_partition(item_id n, block_id block_count, Seed seed) {
  return BlockPartition(n, block_count, key_of(seed).child(1));
}

}  // namespace detail

EstimateResult estimate(DefectiveOracle& oracle, item_id n, double delta, Seed seed) {
  return detail::estimate_with_key(oracle, n, delta, key_of(seed).child(0));
}

FindDReport find_d(DefectiveOracle& oracle, item_id n, double delta, Seed seed) {
  check_common(oracle, n, delta);
  const RandomKey root = key_of(seed);
  const std::uint64_t before = oracle.query_count();

  FindDReport report;
  report.seed = seed;

  EstimateResult first = detail::estimate_with_key(oracle, n, delta / 2.0, root.child(0));
  report.estimate = first.estimate;
  report.queries_estimate = first.queries_used;
  if (first.estimate == 0) {
    report.queries_total = oracle.query_count() - before;
    return report;
  }

  const double blocks_needed =
      std::ceil(static_cast<double>(first.estimate) * static_cast<double>(first.estimate) /
                delta);
  if (!(blocks_needed <= static_cast<double>(max_cells)))
    throw std::domain_error("block count exceeds the supported range");
  const auto block_count = static_cast<block_id>(blocks_needed);
  report.block_count = block_count;

  const BlockPartition blocks(n, block_count, root.child(1));
  LiftedTester tester(oracle, blocks);
  const SplitResult found =
      find_defectives_bounded(tester, block_count, static_cast<block_id>(first.estimate));
  report.defective_count = found.found.size();
  report.queries_find = found.queries;
  report.queries_total = oracle.query_count() - before;
  return report;
}

}  // namespace gtcount
