#include "gtcount/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <string>

namespace gtcount {

DefectiveOracle::DefectiveOracle(item_id universe_size, const ItemSet& defectives)
    : DefectiveOracle(universe_size, defectives.members()) {
  if (defectives.universe_size() != universe_size)
    throw std::invalid_argument("defective set universe must equal the oracle universe");
}

DefectiveOracle::DefectiveOracle(item_id universe_size, std::vector<item_id> defectives)
    : universe_(universe_size), defectives_(std::move(defectives)) {
  if (universe_ < 1) throw std::invalid_argument("oracle universe must be >= 1");
  std::sort(defectives_.begin(), defectives_.end());
  for (std::size_t i = 0; i < defectives_.size(); ++i) {
    if (defectives_[i] < 1 || defectives_[i] > universe_)
      throw std::invalid_argument("defective id outside universe");
    if (i > 0 && defectives_[i] == defectives_[i - 1])
      throw std::invalid_argument("duplicate defective id");
  }
}

ItemSet DefectiveOracle::defectives_set() const {
  return ItemSet(universe_, defectives_);
}

bool DefectiveOracle::record(const ItemSet& query, bool answer) {
  ++queries_;
  if (recorder_) recorder_(query, answer);
  return answer;
}

bool DefectiveOracle::answer(const ItemSet& query) {
  if (query.universe_size() != universe_)
    throw std::invalid_argument("query universe must equal the oracle universe");
  bool hit = false;
  for (item_id x : defectives_) {
    if (query.contains(x)) {
      hit = true;
      break;
    }
  }
  if (recorder_) return record(query, hit);
  ++queries_;
  return hit;
}

bool DefectiveOracle::answer_members(std::span<const item_id> sorted_members) {
  assert(std::is_sorted(sorted_members.begin(), sorted_members.end()));
  bool hit = false;
  for (item_id x : defectives_) {
    if (x > universe_) break;
    if (std::binary_search(sorted_members.begin(), sorted_members.end(), x)) {
      hit = true;
      break;
    }
  }
  if (recorder_) return record(ItemSet(universe_, sorted_members), hit);
  ++queries_;
  return hit;
}

bool DefectiveOracle::answer_range(item_id lo, item_id hi) {
  if (lo < 1 || hi < lo || hi > universe_)
    throw std::invalid_argument("pool range must satisfy 1 <= lo <= hi <= n");
  const auto it = std::lower_bound(defectives_.begin(), defectives_.end(), lo);
  const bool hit = it != defectives_.end() && *it <= hi;
  if (recorder_) {
    ItemSet q(universe_);
    for (item_id x = lo; x <= hi; ++x) q.insert(x);
    return record(q, hit);
  }
  ++queries_;
  return hit;
}

void DefectiveOracle::check_partition(const BlockPartition& partition) const {
  if (partition.universe_size() != universe_)
    throw std::invalid_argument("partition universe must equal the oracle universe");
}

const std::vector<block_id>& DefectiveOracle::defective_blocks(
    const BlockPartition& partition) const {
  if (cached_partition_ != partition.instance_id()) {
    cached_blocks_.clear();
    cached_blocks_.reserve(defectives_.size());
    for (item_id x : defectives_) cached_blocks_.push_back(partition.block_of(x));
    std::sort(cached_blocks_.begin(), cached_blocks_.end());
    cached_partition_ = partition.instance_id();
  }
  return cached_blocks_;
}

bool DefectiveOracle::answer_lifted(const BlockPartition& partition,
                                    std::span<const block_id> sorted_blocks) {
  check_partition(partition);
  assert(std::is_sorted(sorted_blocks.begin(), sorted_blocks.end()));
  bool hit = false;
  for (block_id b : defective_blocks(partition)) {
    if (std::binary_search(sorted_blocks.begin(), sorted_blocks.end(), b)) {
      hit = true;
      break;
    }
  }
  if (recorder_) {
    ItemSet super(partition.block_count(), sorted_blocks);
    return record(lift_query(partition, super), hit);
  }
  ++queries_;
  return hit;
}

bool DefectiveOracle::answer_lifted_range(const BlockPartition& partition,
                                          block_id lo, block_id hi) {
  check_partition(partition);
  if (lo < 1 || hi < lo || hi > partition.block_count())
    throw std::invalid_argument("block range must satisfy 1 <= lo <= hi <= N");
  const auto& blocks = defective_blocks(partition);
  const auto it = std::lower_bound(blocks.begin(), blocks.end(), lo);
  const bool hit = it != blocks.end() && *it <= hi;
  if (recorder_) {
    ItemSet super(partition.block_count());
    for (block_id b = lo; b <= hi; ++b) super.insert(b);
    return record(lift_query(partition, super), hit);
  }
  ++queries_;
  return hit;
}

}  // namespace gtcount
