#pragma once

#include "shortlist/types.hpp"
#include "shortlist/utility.hpp"

namespace shortlist {

/// A fixed preference order of the tie-breaker; earlier means preferred.
struct LexOrder {
  std::vector<CandidateId> rank;
};

enum class TieBehavior { Optimistic, Pessimistic };

/// One of the three rule families: break ties by a fixed order, or
/// complete the winning set so that the chosen evaluation is maximized
/// (optimistic) or minimized (pessimistic).
struct TieRule {
  enum class Kind { Lexicographic, Optimistic, Pessimistic };

  Kind kind = Kind::Lexicographic;
  LexOrder order;                                    // Lexicographic only
  EvalVariant variant = EvalVariant::Utilitarian;    // Optimistic/Pessimistic only

  static TieRule lexicographic(LexOrder o) {
    return TieRule{Kind::Lexicographic, std::move(o), EvalVariant::Utilitarian};
  }
  static TieRule optimistic(EvalVariant v) {
    return TieRule{Kind::Optimistic, LexOrder{}, v};
  }
  static TieRule pessimistic(EvalVariant v) {
    return TieRule{Kind::Pessimistic, LexOrder{}, v};
  }
};

/// The situation a tie-breaking rule resolves: confirmed candidates are
/// in, the remaining k - |confirmed| slots are filled from pending.
struct TiePerspective {
  std::vector<CandidateId> confirmed;  // sorted ascending
  std::vector<CandidateId> pending;    // sorted ascending
  int k = 0;
  UtilityProfile profile;

  void validate() const;
};

struct TieBreakResult {
  Egroup egroup;
  Value value = 0;
};

/// Confirmed candidates plus the best-ranked pending candidates.
Egroup apply_lex(const TiePerspective& p, const LexOrder& order);

/// A lexicographic order that reproduces the optimistic or pessimistic
/// rule for the utilitarian / candidate-wise egalitarian evaluations:
/// candidates sorted by contracted utility, descending for optimistic,
/// ascending for pessimistic, ties toward the smaller index.
LexOrder simulate_lex(const UtilityProfile& profile, EvalVariant variant,
                      TieBehavior behavior);

/// Resolves the perspective under the rule. For optimistic/pessimistic
/// rules the value is the evaluation of the returned set; lexicographic
/// rules carry no evaluation and report 0.
TieBreakResult tie_break(const TiePerspective& p, const TieRule& rule);

/// Egalitarian pessimistic completion: for each manipulator take the
/// pending candidates cheapest for them, keep the worst of these sets.
TieBreakResult pess_egal(const TiePerspective& p);

/// Egalitarian optimistic completion, exact via an integer program over
/// candidate types (utility column vectors).
TieBreakResult opt_egal_exact(const TiePerspective& p);

}  // namespace shortlist
