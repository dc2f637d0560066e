#pragma once

#include <cstdint>
#include <utility>

#include "shortlist/manipulation.hpp"
#include "shortlist/tiebreak.hpp"
#include "shortlist/types.hpp"

namespace shortlist {

struct RandomSpec {
  int m = 4;
  int n = 3;
  int r = 2;
  int ell = 1;
  int k = 2;
  Value max_utility = 3;
  std::uint64_t seed = 0;
};

struct SetCoverInstance {
  int universe_size = 0;
  std::vector<std::vector<int>> sets;  // 0-based element ids
  int budget = 1;
};

/// Tie perspective produced by the hardness reduction, plus the
/// evaluation threshold that makes it a decision instance.
struct TieReduction {
  TiePerspective perspective;
  Value threshold = 1;
};

/// Reference tie-breaking by full enumeration of the completions.
/// Guarded: refuses perspectives with more than a million completions.
TieBreakResult brute_tie(const TiePerspective& p, const TieRule& rule,
                         EvalVariant variant);

struct BruteCmResult {
  Value value = 0;
  std::vector<std::vector<CandidateId>> approvals;  // per manipulator, asc
};

/// Reference manipulation by enumerating every profile of top-ell
/// approval sets; only those sets matter under ell-Bloc. Guarded like
/// brute_tie.
BruteCmResult brute_cm(const CmInstance& inst);

/// Deterministic random election and utility profile.
std::pair<Election, UtilityProfile> gen_random(const RandomSpec& spec);

/// Worst-case instance family for optimistic egalitarian tie-breaking:
/// one pending candidate per set, one manipulator per universe element,
/// 0/1 utilities; a completion of value >= 1 is exactly a set cover of
/// size `budget`.
TieReduction reduce_setcover_to_tie(const SetCoverInstance& sc);

/// Exhaustive feasibility check used to validate the reduction.
bool setcover_feasible(const SetCoverInstance& sc);

/// Embeds a tie-breaking perspective into a manipulation instance whose
/// achievable egalitarian values coincide with the perspective's
/// completions: pending candidates score r+2, confirmed 2r+3, dummies
/// at most 1, and enough zero-score dummies absorb the extra approvals.
CmInstance reduce_tie_to_cm(const TiePerspective& p, int ell,
                            TieRule rule = TieRule::optimistic(EvalVariant::Egalitarian),
                            std::optional<Value> threshold = std::nullopt);

}  // namespace shortlist
