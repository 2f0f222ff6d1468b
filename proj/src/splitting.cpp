#include "gtcount/splitting.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace gtcount {

namespace {

// Extracts one defective from candidates[first..last) by repeated halving.
// The window is known to contain a defective on entry. The left half takes
// the ceil(size/2) smallest ids; a clean left half proves the right half
// positive without a test. Returns the index of the found defective and adds
// the tests spent to `queries`.
std::size_t extract_one(BlockTester& tester, std::span<const block_id> candidates,
                        std::size_t first, std::size_t last, std::uint64_t& queries) {
  while (last - first > 1) {
    const std::size_t mid = first + (last - first + 1) / 2;
    ++queries;
    if (tester.test_ids(candidates.subspan(first, mid - first)))
      last = mid;
    else
      first = mid;
  }
  return first;
}

}  // namespace

SplitResult find_defectives_bounded(BlockTester& tester, block_id item_count,
                                    block_id group_count) {
  if (item_count < 1) throw std::invalid_argument("item count must be >= 1");
  if (group_count < 1 || group_count > item_count)
    throw std::invalid_argument("group count must satisfy 1 <= D <= N");

  SplitResult out;
  const block_id base = item_count / group_count;
  const block_id extra = item_count % group_count;
  std::vector<block_id> candidates;

  block_id lo = 1;
  for (block_id g = 0; g < group_count; ++g) {
    const block_id size = base + (g < extra ? 1 : 0);
    const block_id hi = lo + size - 1;
    ++out.queries;
    if (tester.test_range(lo, hi)) {
      candidates.resize(size);
      std::iota(candidates.begin(), candidates.end(), lo);
      while (true) {
        const std::size_t at =
            extract_one(tester, candidates, 0, candidates.size(), out.queries);
        out.found.push_back(candidates[at]);
        candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(at));
        if (candidates.empty()) break;
        ++out.queries;
        if (!tester.test_ids(candidates)) break;
      }
    }
    lo = hi + 1;
  }
  std::sort(out.found.begin(), out.found.end());
  return out;
}

SplitResult find_defectives_unbounded(BlockTester& tester, block_id item_count) {
  if (item_count < 1) throw std::invalid_argument("item count must be >= 1");
  SplitResult out;
  struct Range {
    block_id lo, hi;
    bool known_positive;
  };
  std::vector<Range> stack;
  stack.push_back({1, item_count, false});
  while (!stack.empty()) {
    Range r = stack.back();
    stack.pop_back();
    if (!r.known_positive) {
      ++out.queries;
      if (!tester.test_range(r.lo, r.hi)) continue;
    }
    while (r.hi > r.lo) {
      const block_id left_hi = r.lo + (r.hi - r.lo + 1) / 2 - 1;
      ++out.queries;
      if (tester.test_range(r.lo, left_hi)) {
        stack.push_back({left_hi + 1, r.hi, false});
        r.hi = left_hi;
      } else {
        r.lo = left_hi + 1;  // inferred positive; left half discarded untested
      }
    }
    out.found.push_back(r.lo);
  }
  std::sort(out.found.begin(), out.found.end());
  return out;
}

}  // namespace gtcount
