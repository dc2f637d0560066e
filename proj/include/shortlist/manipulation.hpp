#pragma once

#include <optional>

#include "shortlist/election.hpp"
#include "shortlist/tiebreak.hpp"
#include "shortlist/types.hpp"
#include "shortlist/utility.hpp"

namespace shortlist {

/// One coalitional-manipulation problem: the manipulators cast r extra
/// ballots and evaluate the resulting winning set with `variant`; ties
/// are resolved by `rule`. `threshold` turns the optimizer into the
/// decision problem (answer yes iff best value >= threshold).
struct CmInstance {
  Election election;
  int ell = 1;
  int k = 1;
  UtilityProfile profile;
  EvalVariant variant = EvalVariant::Utilitarian;
  TieRule rule;
  std::optional<Value> threshold;

  int num_manipulators() const { return profile.num_manipulators(); }
  void validate() const;
};

struct Manipulation {
  std::vector<Ballot> ballots;
  Egroup egroup;
  Value value = 0;
};

struct KnapsackItem {
  Value weight = 0;
  Value value = 0;
};

struct KnapsackPick {
  Value value = 0;
  std::vector<int> chosen;  // item indices, ascending
};

/// Maximum total value over subsets of exactly `count` items whose total
/// weight stays within `capacity`; empty when no such subset exists.
/// Among equally valued optima the lexicographically smallest index set
/// is returned.
std::optional<KnapsackPick> knapsack_exact_k(const std::vector<KnapsackItem>& items,
                                             int count, Value capacity);

/// Candidates ordered by descending non-manipulative score, ties by the
/// tie-breaking order. Stronger candidates need less help to win.
LexOrder strength_order(const Election& election, int ell, const LexOrder& order);

/// Optimal manipulation for the utilitarian / candidate-wise egalitarian
/// evaluations under any of the three rule families. Enumerates the
/// lowest winning score z and the least preferred member at that score,
/// reducing each state to an exact k-item knapsack.
std::optional<Manipulation> cm_general(const CmInstance& inst);

/// Optimal manipulation when all manipulators must cast the same vote
/// (utilitarian / candidate-wise egalitarian evaluations).
std::optional<Manipulation> cm_consistent(const CmInstance& inst);

/// Bloc (ell == k) manipulation; consistent voting is optimal here even
/// against unrestricted profiles.
std::optional<Manipulation> cm_bloc(const CmInstance& inst);

/// Egalitarian manipulation under optimistic/pessimistic egalitarian
/// tie-breaking, exact via per-state integer programs over candidate
/// types grouped by initial score.
std::optional<Manipulation> cm_egal(const CmInstance& inst);

/// Egalitarian manipulation under lexicographic tie-breaking, exact via
/// per-state integer programs.
std::optional<Manipulation> cm_egal_lex(const CmInstance& inst);

}  // namespace shortlist
