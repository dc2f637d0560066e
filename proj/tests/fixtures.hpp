#pragma once

#include "shortlist/election.hpp"
#include "shortlist/types.hpp"
#include "shortlist/utility.hpp"

namespace fixtures {

using namespace shortlist;

// Candidate indices used throughout: b1=0, b2=1, m1=2, m2=3, o1=4, o2=5.
inline constexpr CandidateId B1 = 0, B2 = 1, M1 = 2, M2 = 3, O1 = 4, O2 = 5;

inline Election six_candidates(std::vector<WeightedBallot> ballots) {
  Election e;
  e.num_candidates = 6;
  e.candidate_names = {"b1", "b2", "m1", "m2", "o1", "o2"};
  e.ballots = std::move(ballots);
  return e;
}

// The running example after the senior jury members manipulate: three
// votes topping the two newcomers, four votes topping one Beethoven and
// one Mozart piece.
inline Election running_example() {
  return six_candidates({
      {Ballot{{O1, O2, B1, B2, M1, M2}}, 3},
      {Ballot{{B1, M1, B2, M2, O1, O2}}, 4},
  });
}

// The election where sincere manipulator votes elect {o1, m2}.
inline Election manip_example() {
  return six_candidates({
      {Ballot{{O1, O2, M1, M2, B1, B2}}, 2},
      {Ballot{{M2, M1, B2, B1, O1, O2}}, 1},
  });
}

// The two-manipulator utility table used by both counterexamples.
inline UtilityProfile example_profile() {
  UtilityProfile p;
  p.rows = {
      {10, 5, 4, 0, 0, 0},
      {1, 2, 5, 7, 0, 0},
  };
  return p;
}

}  // namespace fixtures
