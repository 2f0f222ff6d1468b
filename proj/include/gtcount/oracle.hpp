#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gtcount/item_set.hpp"
#include "gtcount/partition.hpp"

namespace gtcount {

// Answers membership queries against a hidden defective set: a query pool
// answers 1 iff it contains at least one defective item. Every answer given
// increments query_count by exactly one.
//
// The answer_* overloads are alternative encodings of the same single-query
// contract; which encoding a caller picks never changes the answer or the
// accounting. In particular a lifted query (a set of partition blocks) is
// answered without materializing the union of blocks, using the fact that
// the union contains a defective iff some named block does.
class DefectiveOracle {
 public:
  DefectiveOracle(item_id universe_size, const ItemSet& defectives);
  DefectiveOracle(item_id universe_size, std::vector<item_id> defectives);

  item_id universe_size() const { return universe_; }
  std::uint64_t query_count() const { return queries_; }
  std::uint64_t defective_count() const { return defectives_.size(); }
  std::span<const item_id> defective_items() const { return defectives_; }
  ItemSet defectives_set() const;

  bool answer(const ItemSet& query);
  bool answer_members(std::span<const item_id> sorted_members);
  bool answer_range(item_id lo, item_id hi);  // pool {lo, ..., hi}
  bool answer_lifted(const BlockPartition& partition,
                     std::span<const block_id> sorted_blocks);
  bool answer_lifted_range(const BlockPartition& partition, block_id lo, block_id hi);

  // Test instrumentation: when set, every query is materialized as an
  // ItemSet and reported together with its answer. O(n) per query.
  using Recorder = std::function<void(const ItemSet& query, bool answer)>;
  void set_recorder(Recorder recorder) { recorder_ = std::move(recorder); }

 private:
  // Sorted blocks of the defective items under `partition`, cached per
  // partition instance. May contain duplicates.
  const std::vector<block_id>& defective_blocks(const BlockPartition& partition) const;
  void check_partition(const BlockPartition& partition) const;
  bool record(const ItemSet& query, bool answer);

  item_id universe_;
  std::vector<item_id> defectives_;  // sorted, distinct
  std::uint64_t queries_ = 0;
  Recorder recorder_;

  mutable std::uint64_t cached_partition_ = 0;
  mutable std::vector<block_id> cached_blocks_;
};

}  // namespace gtcount
