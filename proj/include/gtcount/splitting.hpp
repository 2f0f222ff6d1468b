#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gtcount/oracle.hpp"

namespace gtcount {

// One pooled test over super-items {1..N}. Implementations forward to a
// counting oracle; each call costs exactly one query. Pools are passed
// either as a contiguous id range or as a sorted id list; the two forms are
// interchangeable encodings of the same query.
class BlockTester {
 public:
  virtual ~BlockTester() = default;
  virtual bool test_range(block_id lo, block_id hi) = 0;
  virtual bool test_ids(std::span<const block_id> sorted_ids) = 0;
};

// Super-items are the oracle's items themselves (N = n).
class DirectTester final : public BlockTester {
 public:
  explicit DirectTester(DefectiveOracle& oracle) : oracle_(oracle) {}
  bool test_range(block_id lo, block_id hi) override { return oracle_.answer_range(lo, hi); }
  bool test_ids(std::span<const block_id> sorted_ids) override {
    return oracle_.answer_members(sorted_ids);
  }

 private:
  DefectiveOracle& oracle_;
};

// Super-items are partition blocks; pools are lifted through the partition.
class LiftedTester final : public BlockTester {
 public:
  LiftedTester(DefectiveOracle& oracle, const BlockPartition& partition)
      : oracle_(oracle), partition_(partition) {}
  bool test_range(block_id lo, block_id hi) override {
    return oracle_.answer_lifted_range(partition_, lo, hi);
  }
  bool test_ids(std::span<const block_id> sorted_ids) override {
    return oracle_.answer_lifted(partition_, sorted_ids);
  }

 private:
  DefectiveOracle& oracle_;
  const BlockPartition& partition_;
};

struct SplitResult {
  std::vector<block_id> found;  // sorted ascending
  std::uint64_t queries = 0;
};

// Group splitting under a positive-count hint. Partitions {1..N} into
// group_count contiguous groups of size ceil(N/D) or floor(N/D); a positive
// group yields one defective per halving pass (the untested half of a
// positive pool is inferred positive when the tested half is clean), then is
// retested with the finds removed. With d true defectives the query count is
// at most group_count + d * (1 + ceil(log2(ceil(N/D)))).
SplitResult find_defectives_bounded(BlockTester& tester, block_id item_count,
                                    block_id group_count);

// Bisection with the same inference and no hint. Query count is at most
// 2 * d * ceil(log2(N)) + 1 when d >= 1, and exactly 1 when d = 0.
SplitResult find_defectives_unbounded(BlockTester& tester, block_id item_count);

}  // namespace gtcount
