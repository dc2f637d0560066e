#include "shortlist/utility.hpp"

#include <algorithm>
#include <set>

namespace shortlist {

const char* to_string(EvalVariant v) {
  switch (v) {
    case EvalVariant::Utilitarian: return "util";
    case EvalVariant::Egalitarian: return "egal";
    case EvalVariant::CandidateWiseEgalitarian: return "candegal";
  }
  return "?";
}

void UtilityProfile::validate() const {
  if (rows.empty()) throw std::invalid_argument("utility profile needs at least one manipulator");
  const std::size_t m = rows[0].size();
  if (m == 0) throw std::invalid_argument("utility profile needs at least one candidate");
  for (const auto& row : rows) {
    if (row.size() != m) throw std::invalid_argument("utility rows have unequal lengths");
    for (Value u : row)
      if (u < 0) throw std::invalid_argument("utilities must be nonnegative");
  }
}

static void check_members(const UtilityProfile& profile, const Egroup& egroup) {
  const int m = profile.num_candidates();
  for (CandidateId c : egroup.members)
    if (c < 0 || c >= m)
      throw std::invalid_argument("egroup member out of range of the utility profile");
}

Value evaluate(const UtilityProfile& profile, const Egroup& egroup,
               EvalVariant variant) {
  check_members(profile, egroup);
  switch (variant) {
    case EvalVariant::Utilitarian: {
      Value total = 0;
      for (const auto& row : profile.rows)
        for (CandidateId c : egroup.members) total += row[c];
      return total;
    }
    case EvalVariant::Egalitarian: {
      Value least = -1;
      for (const auto& row : profile.rows) {
        Value sum = 0;
        for (CandidateId c : egroup.members) sum += row[c];
        if (least < 0 || sum < least) least = sum;
      }
      return least < 0 ? 0 : least;
    }
    case EvalVariant::CandidateWiseEgalitarian: {
      Value total = 0;
      for (CandidateId c : egroup.members) {
        Value low = profile.rows[0][c];
        for (const auto& row : profile.rows) low = std::min(low, row[c]);
        total += low;
      }
      return total;
    }
  }
  throw std::invalid_argument("unknown evaluation variant");
}

std::vector<Value> contract(const UtilityProfile& profile, EvalVariant variant) {
  profile.validate();
  if (variant == EvalVariant::Egalitarian)
    throw UnsupportedVariantError("the egalitarian evaluation cannot be contracted to one row");
  const int m = profile.num_candidates();
  std::vector<Value> row(m, 0);
  for (int c = 0; c < m; ++c) {
    if (variant == EvalVariant::Utilitarian) {
      Value sum = 0;
      for (const auto& r : profile.rows) sum += r[c];
      row[c] = sum;
    } else {
      Value low = profile.rows[0][c];
      for (const auto& r : profile.rows) low = std::min(low, r[c]);
      row[c] = low;
    }
  }
  return row;
}

int distinct_utility_count(const UtilityProfile& profile) {
  std::set<Value> seen;
  for (const auto& row : profile.rows) seen.insert(row.begin(), row.end());
  return static_cast<int>(seen.size());
}

}  // namespace shortlist
