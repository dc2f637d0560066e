#pragma once

#include "shortlist/tiebreak.hpp"
#include "shortlist/types.hpp"
#include "shortlist/utility.hpp"

namespace shortlist {

/// Candidate scores under the ell-Bloc rule: every vote awards one point
/// to each of its top ell candidates.
ScoreVector score(const Election& election, int ell);

/// Splits the candidates into confirmed / pending / rejected with
/// respect to the co-winning size-k sets of maximum total score.
CandidatePartition partition(const ScoreVector& scores, int k);

/// Full winner determination: score, partition, and tie-break if needed.
/// `profile` is required for optimistic/pessimistic rules only.
Egroup winners(const Election& election, int ell, int k, const TieRule& rule,
               const UtilityProfile* profile = nullptr);

/// Builds r full ballots so that candidate c sits in the top ell of
/// exactly demands[c] of them. Requires sum(demands) == r*ell,
/// max demand <= r and more candidates than ell; under these
/// conditions the greedy construction always succeeds.
std::vector<Ballot> ballots_from_approvals(const std::vector<int>& demands,
                                           int r, int ell);

/// Copy of the election with the given ballots appended, count 1 each.
Election add_ballots(const Election& election, const std::vector<Ballot>& extra);

}  // namespace shortlist
