#pragma once

#include <cstdint>
#include <vector>

#include "gtcount/oracle.hpp"
#include "gtcount/rng.hpp"

namespace gtcount {

// One audited round of the estimator: the universe was scattered into
// `cells` uniform cells, all cells were tested, `positive_cells` answered 1.
struct EstimateRound {
  std::uint64_t cells = 0;          // k
  std::uint32_t round = 0;          // m, 1-based within this k
  std::uint64_t positive_cells = 0; // count
};

struct EstimateResult {
  // 0 when the universe tested clean, otherwise a power of two. With d >= 1
  // defectives the value is at most 8d on every seed and at least d with
  // probability 1 - delta.
  std::uint64_t estimate = 0;
  std::uint64_t queries_used = 0;
  std::vector<EstimateRound> rounds;
};

// Doubling estimator for the number of defectives. One whole-universe
// pre-test settles the empty case in a single query. Then, for
// k = 2, 4, 8, ..., runs t = ceil(2*log2(1/delta)/k) rounds; a round scatters
// the n items into k uniform cells, tests every cell, and advances to the
// next k as soon as one round has 4*count >= k (exact integer comparison).
// If all t rounds at some k stay below, k is the answer.
EstimateResult estimate(DefectiveOracle& oracle, item_id n, double delta, Seed seed);

struct FindDReport {
  std::uint64_t defective_count = 0;   // the output: |{blocks testing positive}|
  std::uint64_t estimate = 0;          // D from the first stage
  std::uint64_t block_count = 0;       // N = ceil(D^2/delta); 0 when D = 0
  std::uint64_t queries_estimate = 0;
  std::uint64_t queries_find = 0;
  std::uint64_t queries_total = 0;     // always queries_estimate + queries_find
  Seed seed;
};

// Exact defective count, correct with probability at least 1 - delta.
// Stage one estimates D (run at delta/2); a clean pre-test ends the run at
// one query total. Stage two scatters the items into N = ceil(D^2/delta)
// blocks so that defectives collide with probability at most delta/2, then
// locates every positive block with the bounded splitter, lifting each block
// pool through the partition.
FindDReport find_d(DefectiveOracle& oracle, item_id n, double delta, Seed seed);

namespace detail {

// Estimator core reusable under a caller-derived key (the tree node whose
// children seed the successive rounds).
EstimateResult estimate_with_key(DefectiveOracle& oracle, item_id n, double delta,
                                 RandomKey round_root);

// The exact block partition find_d(oracle, n, delta, seed) uses once its
// first stage returned D with N = ceil(D^2/delta). Exposed so tests can
// inspect collisions without touching the oracle.
BlockPartition find_d_partition(item_id n, block_id block_count, Seed seed);

}  // namespace detail

}  // namespace gtcount
