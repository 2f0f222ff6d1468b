#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gtcount {

// Item ids are 1-based; id 0 is never a member of any set.
using item_id = std::uint32_t;
// Super-item (block) ids, also 1-based.
using block_id = std::uint32_t;

// A subset of the universe {1, ..., n}, packed 64 items per word. The
// universe size is part of the value: operations across different universes
// are rejected, and equality requires equal universes.
class ItemSet {
 public:
  ItemSet() = default;
  explicit ItemSet(item_id universe_size);
  ItemSet(item_id universe_size, std::span<const item_id> members);
  static ItemSet full(item_id universe_size);

  item_id universe_size() const { return universe_; }
  std::uint64_t count() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool contains(item_id id) const;
  void insert(item_id id);
  void erase(item_id id);

  // True iff the sets share at least one member. Word scan with early exit.
  bool intersects(const ItemSet& other) const;
  ItemSet& operator|=(const ItemSet& other);

  // The k smallest members as a new set (the whole set if k >= count()).
  // Linear in words: popcount prefix plus a bit scan in the split word.
  ItemSet first_k(std::uint64_t k) const;

  std::vector<item_id> members() const;

  bool operator==(const ItemSet& other) const;

 private:
  void check_member_id(item_id id) const;

  item_id universe_ = 0;
  std::uint64_t count_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace gtcount
