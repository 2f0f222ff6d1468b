#pragma once

#include <cstdint>
#include <vector>

#include "gtcount/item_set.hpp"
#include "gtcount/rng.hpp"

namespace gtcount {

// A function f : {1..n} -> {1..N} drawn uniformly at random; block j is the
// preimage f^{-1}(j). Each item's block is an independent uniform draw,
// evaluated on demand from the stored key, so a partition occupies O(1)
// space and block_of is a pure O(1) lookup. Blocks may be empty.
class BlockPartition {
 public:
  BlockPartition(item_id universe_size, block_id block_count, RandomKey key);

  item_id universe_size() const { return universe_; }
  block_id block_count() const { return blocks_; }

  block_id block_of(item_id item) const {
    return static_cast<block_id>(bounded(key_.bits(item), blocks_)) + 1;
  }

  ItemSet block_members(block_id block) const;   // O(n) scan
  std::vector<block_id> assignment() const;      // f materialized; index 0 holds f(1)

  // Process-unique identity; copies share it. Lets an oracle cache per-partition state.
  std::uint64_t instance_id() const { return instance_id_; }

 private:
  item_id universe_;
  block_id blocks_;
  RandomKey key_;
  std::uint64_t instance_id_;
};

BlockPartition random_partition(item_id universe_size, block_id block_count, Seed seed);

// Union of the named blocks: {x : f(x) is a member of super_query}.
// super_query lives in the block universe {1..N}.
ItemSet lift_query(const BlockPartition& partition, const ItemSet& super_query);

}  // namespace gtcount
