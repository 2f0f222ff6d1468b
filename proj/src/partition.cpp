#include "gtcount/partition.hpp"

#include <atomic>
#include <stdexcept>

namespace gtcount {

namespace {
std::atomic<std::uint64_t> next_instance_id{1};
}

BlockPartition::BlockPartition(item_id universe_size, block_id block_count, RandomKey key)
    : universe_(universe_size),
      blocks_(block_count),
      key_(key),
      instance_id_(next_instance_id.fetch_add(1, std::memory_order_relaxed)) {
  if (universe_size < 1) throw std::invalid_argument("partition universe must be >= 1");
  if (block_count < 1) throw std::invalid_argument("partition block count must be >= 1");
}

ItemSet BlockPartition::block_members(block_id block) const {
  if (block < 1 || block > blocks_)
    throw std::invalid_argument("block id outside [1, block_count]");
  ItemSet out(universe_);
  for (item_id x = 1; x <= universe_; ++x)
    if (block_of(x) == block) out.insert(x);
  return out;
}

std::vector<block_id> BlockPartition::assignment() const {
  std::vector<block_id> f(universe_);
  for (item_id x = 1; x <= universe_; ++x) f[x - 1] = block_of(x);
  return f;
}

BlockPartition random_partition(item_id universe_size, block_id block_count, Seed seed) {
  return BlockPartition(universe_size, block_count, key_of(seed));
}

ItemSet lift_query(const BlockPartition& partition, const ItemSet& super_query) {
  if (super_query.universe_size() != partition.block_count())
    throw std::invalid_argument("super query universe must equal the partition block count");
  ItemSet out(partition.universe_size());
  for (item_id x = 1; x <= partition.universe_size(); ++x)
    if (super_query.contains(partition.block_of(x))) out.insert(x);
  return out;
}

}  // namespace gtcount
