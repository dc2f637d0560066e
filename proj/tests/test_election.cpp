#include <doctest.h>

#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "shortlist/election.hpp"
#include "shortlist/oracle.hpp"

using namespace shortlist;
using namespace fixtures;

TEST_SUITE("election") {

TEST_CASE("bloc scores of the running example") {
  const Election e = running_example();
  const ScoreVector sv = score(e, 2);
  CHECK(sv.scores == std::vector<Value>{4, 0, 4, 0, 3, 3});
}

TEST_CASE("sntv scores of the running example") {
  const Election e = running_example();
  const ScoreVector sv = score(e, 1);
  CHECK(sv.scores == std::vector<Value>{4, 0, 0, 0, 3, 0});
}

TEST_CASE("single ballot single point") {
  Election e;
  e.num_candidates = 3;
  e.candidate_names = {"a", "b", "c"};
  e.ballots = {{Ballot{{0, 1, 2}}, 1}};
  CHECK(score(e, 1).scores == std::vector<Value>{1, 0, 0});
}

TEST_CASE("score rejects out-of-range ell") {
  const Election e = running_example();
  CHECK_THROWS_AS(score(e, 0), std::invalid_argument);
  CHECK_THROWS_AS(score(e, 6), std::invalid_argument);
}

TEST_CASE("partition of the running example has no pending candidates") {
  const CandidatePartition part = partition(ScoreVector{{4, 4, 3, 3, 0, 0}}, 2);
  CHECK(part.confirmed == std::vector<CandidateId>{0, 1});
  CHECK(part.pending.empty());
  CHECK(part.rejected == std::vector<CandidateId>{2, 3, 4, 5});
}

TEST_CASE("partition with one contested slot") {
  const CandidatePartition part = partition(ScoreVector{{3, 2, 2, 1}}, 2);
  CHECK(part.confirmed == std::vector<CandidateId>{0});
  CHECK(part.pending == std::vector<CandidateId>{1, 2});
  CHECK(part.rejected == std::vector<CandidateId>{3});
}

TEST_CASE("partition with exactly k candidates at the threshold") {
  const CandidatePartition part = partition(ScoreVector{{2, 2, 1}}, 2);
  CHECK(part.confirmed == std::vector<CandidateId>{0, 1});
  CHECK(part.pending.empty());
}

TEST_CASE("partition rejects out-of-range k") {
  CHECK_THROWS_AS(partition(ScoreVector{{1, 2, 3}}, 0), std::invalid_argument);
  CHECK_THROWS_AS(partition(ScoreVector{{1, 2, 3}}, 3), std::invalid_argument);
}

TEST_CASE("winners of the running example") {
  const Election e = running_example();
  const TieRule lex = TieRule::lexicographic(LexOrder{{0, 1, 2, 3, 4, 5}});
  CHECK(winners(e, 2, 2, lex).members == std::vector<CandidateId>{B1, M1});
  CHECK(winners(e, 1, 2, lex).members == std::vector<CandidateId>{B1, O1});
}

TEST_CASE("winners after two manipulative ballots topping b1") {
  Election e = manip_example();
  e.ballots.push_back({Ballot{{B1, B2, M1, M2, O1, O2}}, 2});
  const TieRule lex = TieRule::lexicographic(LexOrder{{0, 1, 2, 3, 4, 5}});
  CHECK(winners(e, 1, 2, lex).members == std::vector<CandidateId>{B1, O1});
}

TEST_CASE("score total equals ell times the number of votes") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    RandomSpec spec;
    spec.m = 2 + static_cast<int>(rng() % 5);
    spec.n = 1 + static_cast<int>(rng() % 5);
    spec.r = 1;
    spec.ell = 1;
    spec.k = 1;
    spec.seed = rng();
    const auto [e, profile] = gen_random(spec);
    for (int ell = 1; ell < spec.m; ++ell) {
      const ScoreVector sv = score(e, ell);
      const Value total = std::accumulate(sv.scores.begin(), sv.scores.end(), Value{0});
      CHECK(total == static_cast<Value>(ell) * e.num_votes());
    }
  }
}

// Every maximum-total-score size-k subset consists of the k best scores,
// so membership in all/some of them is checkable by enumeration.
static void check_partition_against_enumeration(const ScoreVector& sv, int k) {
  const int m = static_cast<int>(sv.scores.size());
  std::vector<int> in_all(m, 1), in_some(m, 0);
  Value best = -1;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    Value total = 0;
    for (int c = 0; c < m; ++c)
      if (mask & (1u << c)) total += sv.scores[c];
    if (total > best) best = total;
  }
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    Value total = 0;
    for (int c = 0; c < m; ++c)
      if (mask & (1u << c)) total += sv.scores[c];
    if (total != best) continue;
    for (int c = 0; c < m; ++c) {
      if (mask & (1u << c)) in_some[c] = 1;
      else in_all[c] = 0;
    }
  }
  const CandidatePartition part = partition(sv, k);
  for (int c = 0; c < m; ++c) {
    const bool confirmed =
        std::binary_search(part.confirmed.begin(), part.confirmed.end(), c);
    const bool pending =
        std::binary_search(part.pending.begin(), part.pending.end(), c);
    CHECK(confirmed == (in_all[c] == 1));
    CHECK(pending == (in_some[c] == 1 && in_all[c] == 0));
  }
}

TEST_CASE("partition agrees with brute-force co-winner enumeration") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 5);
    ScoreVector sv;
    for (int c = 0; c < m; ++c) sv.scores.push_back(static_cast<Value>(rng() % 4));
    for (int k = 1; k < m; ++k) check_partition_against_enumeration(sv, k);
  }
}

TEST_CASE("partition invariants hold on random scores") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 6);
    ScoreVector sv;
    for (int c = 0; c < m; ++c) sv.scores.push_back(static_cast<Value>(rng() % 5));
    const int k = 1 + static_cast<int>(rng() % (m - 1));
    const CandidatePartition part = partition(sv, k);
    CHECK(part.confirmed.size() + part.pending.size() + part.rejected.size() ==
          static_cast<std::size_t>(m));
    CHECK(part.confirmed.size() <= static_cast<std::size_t>(k));
    CHECK(part.confirmed.size() + part.pending.size() >= static_cast<std::size_t>(k));
    if (!part.pending.empty()) {
      const Value pending_score = sv.scores[part.pending.front()];
      for (CandidateId c : part.pending) CHECK(sv.scores[c] == pending_score);
      for (CandidateId c : part.confirmed) CHECK(sv.scores[c] > pending_score);
    }
  }
}

TEST_CASE("forced approval demands") {
  const auto ballots = ballots_from_approvals({2, 2, 0}, 2, 2);
  REQUIRE(ballots.size() == 2);
  for (const Ballot& b : ballots) {
    CHECK(b.order[0] == 0);
    CHECK(b.order[1] == 1);
  }
}

TEST_CASE("staggered approval demands") {
  const auto ballots = ballots_from_approvals({2, 1, 1}, 2, 2);
  REQUIRE(ballots.size() == 2);
  std::vector<int> counts(3, 0);
  for (const Ballot& b : ballots)
    for (int i = 0; i < 2; ++i) ++counts[b.order[i]];
  CHECK(counts == std::vector<int>{2, 1, 1});
}

TEST_CASE("disjoint approval demands") {
  const auto ballots = ballots_from_approvals({1, 1, 1, 1}, 2, 2);
  REQUIRE(ballots.size() == 2);
  std::vector<int> counts(4, 0);
  for (const Ballot& b : ballots)
    for (int i = 0; i < 2; ++i) ++counts[b.order[i]];
  CHECK(counts == std::vector<int>{1, 1, 1, 1});
}

TEST_CASE("infeasible approval demands are rejected") {
  CHECK_THROWS_AS(ballots_from_approvals({3, 1}, 2, 1), InfeasibleDemandError);
  CHECK_THROWS_AS(ballots_from_approvals({1, 1, 1}, 2, 2), InfeasibleDemandError);
  CHECK_THROWS_AS(ballots_from_approvals({2, 2}, 2, 2), InfeasibleDemandError);
}

// Exhaustive feasibility: every demand vector within the preconditions
// is realized exactly.
static void enumerate_demands(std::vector<int>& demands, int index, int left,
                              int r, int ell, int& checked) {
  const int m = static_cast<int>(demands.size());
  if (index == m) {
    if (left != 0) return;
    const auto ballots = ballots_from_approvals(demands, r, ell);
    REQUIRE(ballots.size() == static_cast<std::size_t>(r));
    std::vector<int> counts(m, 0);
    for (const Ballot& b : ballots) {
      REQUIRE(b.order.size() == static_cast<std::size_t>(m));
      for (int i = 0; i < ell; ++i) ++counts[b.order[i]];
    }
    CHECK(counts == demands);
    ++checked;
    return;
  }
  for (int d = 0; d <= std::min(left, r); ++d) {
    demands[index] = d;
    enumerate_demands(demands, index + 1, left - d, r, ell, checked);
  }
  demands[index] = 0;
}

TEST_CASE("greedy approval construction is exhaustively feasible") {
  int checked = 0;
  for (int m = 2; m <= 5; ++m)
    for (int r = 1; r <= 3; ++r)
      for (int ell = 1; ell < m; ++ell) {
        std::vector<int> demands(m, 0);
        enumerate_demands(demands, 0, r * ell, r, ell, checked);
      }
  CHECK(checked > 100);
}

TEST_CASE("shifting a winner up in a ballot never unseats it") {
  std::mt19937_64 rng(23);
  int exercised = 0;
  for (int trial = 0; trial < 300; ++trial) {
    RandomSpec spec;
    spec.m = 3 + static_cast<int>(rng() % 4);
    spec.n = 2 + static_cast<int>(rng() % 4);
    spec.r = 1 + static_cast<int>(rng() % 2);
    spec.ell = 1 + static_cast<int>(rng() % (spec.m - 1));
    spec.k = 1 + static_cast<int>(rng() % (spec.m - 1));
    spec.max_utility = 3;
    spec.seed = rng();
    auto [e, profile] = gen_random(spec);

    LexOrder lex;
    lex.rank.resize(spec.m);
    std::iota(lex.rank.begin(), lex.rank.end(), 0);
    const TieRule rule = TieRule::lexicographic(lex);
    const Egroup before = winners(e, spec.ell, spec.k, rule, &profile);

    const std::size_t which = rng() % e.ballots.size();
    const Ballot original = e.ballots[which].ballot;
    // Pick a winning candidate below the approval line and swap it up.
    CandidateId target = -1;
    int at = -1;
    for (int i = spec.ell; i < spec.m; ++i) {
      if (std::binary_search(before.members.begin(), before.members.end(),
                             original.order[i])) {
        target = original.order[i];
        at = i;
        break;
      }
    }
    if (target < 0) continue;
    Ballot shifted = original;
    std::swap(shifted.order[at], shifted.order[spec.ell - 1]);
    if (e.ballots[which].count == 1) {
      e.ballots[which].ballot = shifted;
    } else {
      --e.ballots[which].count;
      e.ballots.push_back({shifted, 1});
    }
    const Egroup after = winners(e, spec.ell, spec.k, rule, &profile);
    CHECK(std::binary_search(after.members.begin(), after.members.end(), target));
    ++exercised;
  }
  CHECK(exercised > 50);
}

TEST_CASE("validate names the offending ballot") {
  Election e;
  e.num_candidates = 2;
  e.candidate_names = {"a", "b"};
  e.ballots = {{Ballot{{0, 1}}, 1}, {Ballot{{0, 0}}, 1}};
  try {
    e.validate();
    FAIL("expected a validation error");
  } catch (const std::invalid_argument& err) {
    CHECK(std::string(err.what()).find("1") != std::string::npos);
  }
}

}  // TEST_SUITE
