#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gtcount/algorithms.hpp"

using namespace gtcount;

namespace {

std::uint32_t ceil_log2_u(std::uint64_t x) {
  std::uint32_t bits = 0;
  while ((1ull << bits) < x) ++bits;
  return bits;
}

// Worst-case estimator spend for d >= 1: per level 2*log2(1/delta) + 2 round
// overhead plus the 2^i cell tests, summed over levels 1..ceil(log2(8d)),
// plus slack that covers the single pre-test.
double estimate_budget(std::uint64_t d, double delta) {
  const std::uint32_t levels = ceil_log2_u(8 * d);
  return (2.0 * std::log2(1.0 / delta) + 2.0) * levels +
         static_cast<double>((1ull << (levels + 1)) - 2);
}

// Structural audit of the round log: cells double starting at 2, rounds are
// numbered from 1 within each level, a level is left the moment a round has
// 4*count >= cells, the final level runs its full round budget without ever
// reaching that mark, and the query count is the pre-test plus one query per
// cell of every logged round.
void audit_rounds(const EstimateResult& result, double delta) {
  REQUIRE(result.estimate > 0);
  REQUIRE(!result.rounds.empty());
  const auto budget_rounds = [&](std::uint64_t cells) {
    return static_cast<std::uint64_t>(
        std::ceil(2.0 * std::log2(1.0 / delta) / static_cast<double>(cells)));
  };
  if (result.rounds.front().cells != 2) FAIL("the first level must use two cells");
  std::uint64_t queries = 1;  // the pre-test
  std::uint64_t cells = 2;
  std::uint32_t within = 0;
  for (std::size_t i = 0; i < result.rounds.size(); ++i) {
    const EstimateRound& r = result.rounds[i];
    if (r.cells != cells) {
      if (r.cells != cells * 2) FAIL("cells must double, got ", r.cells, " after ", cells);
      cells = r.cells;
      within = 0;
    }
    ++within;
    if (r.round != within) FAIL("round numbering broken at entry ", i);
    if (r.positive_cells > r.cells) FAIL("more positives than cells at entry ", i);
    if (within > budget_rounds(cells)) FAIL("level ", cells, " ran too many rounds");
    queries += r.cells;

    const bool advanced = 4 * r.positive_cells >= r.cells;
    const bool last_entry = i + 1 == result.rounds.size();
    const bool last_of_level = last_entry || result.rounds[i + 1].cells != r.cells;
    if (advanced && !last_of_level) FAIL("level ", cells, " continued past its advance");
    if (advanced && last_entry) FAIL("the final level must never reach the advance mark");
    if (!advanced && last_of_level && !last_entry)
      FAIL("level ", cells, " ended without advancing");
  }
  // the final level is the output and must have run out its full budget
  REQUIRE(cells == result.estimate);
  CHECK(result.rounds.back().round == budget_rounds(result.estimate));
  CHECK(queries == result.queries_used);
}

}  // namespace

TEST_CASE("a clean universe estimates to zero in one query") {
  DefectiveOracle oracle(1000, std::vector<item_id>{});
  const EstimateResult r = estimate(oracle, 1000, 0.1, Seed{1, 1});
  CHECK(r.estimate == 0);
  CHECK(r.queries_used == 1);
  CHECK(r.rounds.empty());
  CHECK(oracle.query_count() == 1);
}

TEST_CASE("a single defective forces the estimate to 8") {
  // With d=1 every round counts exactly one positive cell: 4*1 >= k passes
  // at k=2 and k=4 on the first round and never at k=8, so the output is 8
  // on every seed and the query count is 1 + 2 + 4 + 8*t where t is the
  // round budget at k=8.
  for (double delta : {0.1, 0.01}) {
    const auto t8 = static_cast<std::uint64_t>(std::ceil(2.0 * std::log2(1.0 / delta) / 8.0));
    for (std::uint64_t s = 0; s < 8; ++s) {
      DefectiveOracle oracle(1000, std::vector<item_id>{7});
      const EstimateResult r = estimate(oracle, 1000, delta, Seed{s, 0});
      CHECK(r.estimate == 8);
      CHECK(r.queries_used == 1 + 2 + 4 + 8 * t8);
      audit_rounds(r, delta);
    }
  }
}

TEST_CASE("the estimate never exceeds 8d and is a power of two") {
  const item_id n = 500;
  for (std::uint64_t d : {1ull, 2ull, 3ull, 5ull, 8ull, 16ull}) {
    std::vector<item_id> defectives;
    for (std::uint64_t i = 0; i < d; ++i)
      defectives.push_back(static_cast<item_id>(i * 31 + 5));
    for (double delta : {0.3, 0.05}) {
      for (std::uint64_t s = 0; s < 10; ++s) {
        DefectiveOracle oracle(n, defectives);
        const EstimateResult r = estimate(oracle, n, delta, Seed{s, 3});
        if (r.estimate < 8 || r.estimate > 8 * d)
          FAIL("estimate ", r.estimate, " outside [8, 8d] at d=", d, " seed=", s);
        if ((r.estimate & (r.estimate - 1)) != 0)
          FAIL("estimate ", r.estimate, " is not a power of two");
        if (static_cast<double>(r.queries_used) > estimate_budget(d, delta))
          FAIL("query budget broken at d=", d, " delta=", delta, " seed=", s);
        audit_rounds(r, delta);
      }
    }
  }
  CHECK(true);
}

TEST_CASE("estimation works on a one-item universe") {
  DefectiveOracle oracle(1, std::vector<item_id>{1});
  const EstimateResult r = estimate(oracle, 1, 0.1, Seed{4, 4});
  CHECK(r.estimate == 8);
  audit_rounds(r, 0.1);
}

TEST_CASE("estimate rejects bad arguments without querying") {
  DefectiveOracle oracle(10, std::vector<item_id>{1});
  CHECK_THROWS_AS(estimate(oracle, 10, 0.0, Seed{}), std::invalid_argument);
  CHECK_THROWS_AS(estimate(oracle, 10, 1.0, Seed{}), std::invalid_argument);
  CHECK_THROWS_AS(estimate(oracle, 10, -0.5, Seed{}), std::invalid_argument);
  CHECK_THROWS_AS(estimate(oracle, 10, std::nan(""), Seed{}), std::invalid_argument);
  CHECK_THROWS_AS(estimate(oracle, 20, 0.1, Seed{}), std::invalid_argument);
  CHECK_THROWS_AS(estimate(oracle, 0, 0.1, Seed{}), std::invalid_argument);
  CHECK(oracle.query_count() == 0);
}

TEST_CASE("identical seeds reproduce the estimate transcript") {
  const auto run = [] {
    DefectiveOracle oracle(2000, std::vector<item_id>{10, 20, 30});
    return estimate(oracle, 2000, 0.05, Seed{77, 2});
  };
  const EstimateResult a = run();
  const EstimateResult b = run();
  CHECK(a.estimate == b.estimate);
  CHECK(a.queries_used == b.queries_used);
  REQUIRE(a.rounds.size() == b.rounds.size());
  for (std::size_t i = 0; i < a.rounds.size(); ++i) {
    CHECK(a.rounds[i].cells == b.rounds[i].cells);
    CHECK(a.rounds[i].round == b.rounds[i].round);
    CHECK(a.rounds[i].positive_cells == b.rounds[i].positive_cells);
  }
}

TEST_CASE("an empty universe short-circuits the counter") {
  DefectiveOracle oracle(5000, std::vector<item_id>{});
  const FindDReport r = find_d(oracle, 5000, 0.2, Seed{6, 6});
  CHECK(r.defective_count == 0);
  CHECK(r.estimate == 0);
  CHECK(r.block_count == 0);
  CHECK(r.queries_estimate == 1);
  CHECK(r.queries_find == 0);
  CHECK(r.queries_total == 1);
}

TEST_CASE("the counter reproduces its frozen reference run") {
  // Frozen from a reference execution: n=10^4, I={5,42}, delta=0.1, seed
  // {7,0}. The estimate stage ends at D=16 after 31 queries (1+2+4+8+16),
  // N=ceil(256/0.1)=2560 blocks, and the splitter spends 33 more queries to
  // name both defective blocks. Any drift here is a behavioral break.
  const auto run = [] {
    DefectiveOracle oracle(10000, std::vector<item_id>{5, 42});
    return find_d(oracle, 10000, 0.1, Seed{7, 0});
  };
  const FindDReport r = run();
  CHECK(r.defective_count == 2);
  CHECK(r.estimate == 16);
  CHECK(r.block_count == 2560);
  CHECK(r.queries_estimate == 31);
  CHECK(r.queries_find == 33);
  CHECK(r.queries_total == 64);

  const FindDReport again = run();
  CHECK(again.defective_count == r.defective_count);
  CHECK(again.estimate == r.estimate);
  CHECK(again.block_count == r.block_count);
  CHECK(again.queries_total == r.queries_total);
}

TEST_CASE("replaying the counter's transcript validates every answer") {
  // The recorder materializes each pool; checking each answer against a
  // direct intersection with I is an independent audit of the whole run.
  DefectiveOracle oracle(10000, std::vector<item_id>{5, 42});
  const ItemSet truth = oracle.defectives_set();
  std::uint64_t recorded = 0;
  oracle.set_recorder([&](const ItemSet& query, bool answer) {
    ++recorded;
    if (answer != truth.intersects(query)) FAIL("transcript answer ", recorded, " wrong");
  });
  const FindDReport r = find_d(oracle, 10000, 0.1, Seed{7, 0});
  CHECK(r.queries_total == 64);  // the recorder must not change the run
  CHECK(recorded == r.queries_total);
}

TEST_CASE("the reported count equals the defective block count of the partition") {
  // find_d_partition exposes the exact partition the second stage used, so
  // the output can be checked white-box: delta_hat must equal the number of
  // distinct blocks holding defectives, and collisions are the only way to
  // undercount.
  const item_id n = 10000;
  const double delta = 0.1;
  const std::vector<item_id> defectives{101, 2002, 5555, 9090};
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Seed seed{s, 5};
    DefectiveOracle oracle(n, defectives);
    const FindDReport r = find_d(oracle, n, delta, seed);
    REQUIRE(r.block_count >= 1);
    const BlockPartition partition =
        detail::find_d_partition(n, static_cast<block_id>(r.block_count), seed);
    std::vector<block_id> blocks;
    for (item_id x : defectives) blocks.push_back(partition.block_of(x));
    std::sort(blocks.begin(), blocks.end());
    blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
    if (r.defective_count != blocks.size())
      FAIL("count ", r.defective_count, " but ", blocks.size(), " defective blocks, seed ", s);
    // N = ceil(D^2/delta) ties the two stages together
    const auto expected_blocks = static_cast<std::uint64_t>(
        std::ceil(static_cast<double>(r.estimate) * static_cast<double>(r.estimate) / delta));
    CHECK(r.block_count == expected_blocks);
    CHECK(r.queries_total == r.queries_estimate + r.queries_find);
  }
}

TEST_CASE("the first stage is the estimator run at half the budget") {
  const item_id n = 3000;
  const std::vector<item_id> defectives{17, 400, 2999};
  const Seed seed{13, 8};
  DefectiveOracle full(n, defectives);
  const FindDReport r = find_d(full, n, 0.2, seed);

  DefectiveOracle stage_only(n, defectives);
  const EstimateResult e =
      detail::estimate_with_key(stage_only, n, 0.1, key_of(seed).child(0));
  CHECK(r.estimate == e.estimate);
  CHECK(r.queries_estimate == e.queries_used);
}

TEST_CASE("the counter rejects bad arguments") {
  DefectiveOracle oracle(10, std::vector<item_id>{1});
  CHECK_THROWS_AS(find_d(oracle, 10, 0.0, Seed{}), std::invalid_argument);
  CHECK_THROWS_AS(find_d(oracle, 10, 1.0, Seed{}), std::invalid_argument);
  CHECK_THROWS_AS(find_d(oracle, 99, 0.1, Seed{}), std::invalid_argument);
  CHECK(oracle.query_count() == 0);
}
