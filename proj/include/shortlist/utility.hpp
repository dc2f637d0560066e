#pragma once

#include "shortlist/types.hpp"

namespace shortlist {

/// How a coalition of manipulators values a winning set:
///   Utilitarian              sum over manipulators of their summed utility,
///   Egalitarian              the least satisfied manipulator's summed utility,
///   CandidateWiseEgalitarian per-candidate minimum utility, summed.
enum class EvalVariant { Utilitarian, Egalitarian, CandidateWiseEgalitarian };

const char* to_string(EvalVariant v);

/// r manipulators' nonnegative utility rows over the m candidates.
struct UtilityProfile {
  std::vector<std::vector<Value>> rows;

  int num_manipulators() const { return static_cast<int>(rows.size()); }
  int num_candidates() const {
    return rows.empty() ? 0 : static_cast<int>(rows[0].size());
  }

  /// Throws std::invalid_argument on ragged rows, negative entries or
  /// an empty profile.
  void validate() const;
};

/// Value of `egroup` under the requested variant, exactly as defined.
Value evaluate(const UtilityProfile& profile, const Egroup& egroup,
               EvalVariant variant);

/// Collapses the profile to a single utility row whose sum over any set
/// equals the set's evaluation: column sums for Utilitarian, column
/// minima for CandidateWiseEgalitarian. The Egalitarian variant admits
/// no such row and raises UnsupportedVariantError.
std::vector<Value> contract(const UtilityProfile& profile, EvalVariant variant);

/// Number of distinct utility values over the whole matrix.
int distinct_utility_count(const UtilityProfile& profile);

}  // namespace shortlist
