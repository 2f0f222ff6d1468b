#include "gtcount/item_set.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace gtcount {

namespace {

std::size_t word_count(item_id universe) {
  return (static_cast<std::size_t>(universe) + 63) / 64;
}

}  // namespace

ItemSet::ItemSet(item_id universe_size)
    : universe_(universe_size), words_(word_count(universe_size), 0) {}

ItemSet::ItemSet(item_id universe_size, std::span<const item_id> members)
    : ItemSet(universe_size) {
  for (item_id id : members) insert(id);
}

ItemSet ItemSet::full(item_id universe_size) {
  ItemSet s(universe_size);
  if (universe_size == 0) return s;
  for (auto& w : s.words_) w = ~0ull;
  // clear the bits past the universe in the last word
  const unsigned used = universe_size % 64;
  if (used != 0) s.words_.back() &= (~0ull >> (64 - used));
  s.count_ = universe_size;
  return s;
}

void ItemSet::check_member_id(item_id id) const {
  if (id < 1 || id > universe_)
    throw std::invalid_argument("item id " + std::to_string(id) +
                                " outside universe [1, " + std::to_string(universe_) + "]");
}

bool ItemSet::contains(item_id id) const {
  if (id < 1 || id > universe_) return false;
  const item_id bit = id - 1;
  return (words_[bit / 64] >> (bit % 64)) & 1ull;
}

void ItemSet::insert(item_id id) {
  check_member_id(id);
  const item_id bit = id - 1;
  std::uint64_t& w = words_[bit / 64];
  const std::uint64_t mask = 1ull << (bit % 64);
  if (!(w & mask)) {
    w |= mask;
    ++count_;
  }
}

void ItemSet::erase(item_id id) {
  check_member_id(id);
  const item_id bit = id - 1;
  std::uint64_t& w = words_[bit / 64];
  const std::uint64_t mask = 1ull << (bit % 64);
  if (w & mask) {
    w &= ~mask;
    --count_;
  }
}

bool ItemSet::intersects(const ItemSet& other) const {
  if (other.universe_ != universe_)
    throw std::invalid_argument("universe size mismatch in ItemSet::intersects");
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & other.words_[i]) return true;
  return false;
}

ItemSet& ItemSet::operator|=(const ItemSet& other) {
  if (other.universe_ != universe_)
    throw std::invalid_argument("universe size mismatch in ItemSet::operator|=");
  count_ = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    words_[i] |= other.words_[i];
    count_ += std::popcount(words_[i]);
  }
  return *this;
}

ItemSet ItemSet::first_k(std::uint64_t k) const {
  ItemSet out(universe_);
  if (k >= count_) return *this;
  std::uint64_t remaining = k;
  for (std::size_t i = 0; i < words_.size() && remaining > 0; ++i) {
    const unsigned in_word = static_cast<unsigned>(std::popcount(words_[i]));
    if (in_word <= remaining) {
      out.words_[i] = words_[i];
      remaining -= in_word;
      continue;
    }
    // take the lowest `remaining` set bits of this word
    std::uint64_t w = words_[i];
    std::uint64_t taken = 0;
    while (remaining > 0) {
      const std::uint64_t low = w & (~w + 1);
      taken |= low;
      w ^= low;
      --remaining;
    }
    out.words_[i] = taken;
  }
  out.count_ = k;
  return out;
}

std::vector<item_id> ItemSet::members() const {
  std::vector<item_id> out;
  out.reserve(static_cast<std::size_t>(count_));
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::uint64_t w = words_[i];
    while (w != 0) {
      const unsigned bit = static_cast<unsigned>(std::countr_zero(w));
      out.push_back(static_cast<item_id>(i * 64 + bit + 1));
      w &= w - 1;
    }
  }
  return out;
}

bool ItemSet::operator==(const ItemSet& other) const {
  return universe_ == other.universe_ && count_ == other.count_ && words_ == other.words_;
}

}  // namespace gtcount
