#include "shortlist/election.hpp"

#include <algorithm>
#include <numeric>

namespace shortlist {

void Election::validate() const {
  if (num_candidates <= 0) throw std::invalid_argument("election needs at least one candidate");
  if (candidate_names.size() != static_cast<std::size_t>(num_candidates))
    throw std::invalid_argument("candidate name list does not match the candidate count");
  std::vector<char> seen(num_candidates, 0);
  for (std::size_t b = 0; b < ballots.size(); ++b) {
    const auto& wb = ballots[b];
    if (wb.count < 1)
      throw std::invalid_argument("ballot " + std::to_string(b) + " has a nonpositive count");
    if (wb.ballot.order.size() != static_cast<std::size_t>(num_candidates))
      throw std::invalid_argument("ballot " + std::to_string(b) + " does not rank every candidate");
    std::fill(seen.begin(), seen.end(), 0);
    for (CandidateId c : wb.ballot.order) {
      if (c < 0 || c >= num_candidates || seen[c])
        throw std::invalid_argument("ballot " + std::to_string(b) + " is not a permutation of the candidates");
      seen[c] = 1;
    }
  }
}

ScoreVector score(const Election& election, int ell) {
  const int m = election.num_candidates;
  if (ell < 1 || ell >= m)
    throw std::invalid_argument("ell must satisfy 1 <= ell < number of candidates");
  ScoreVector out;
  out.scores.assign(m, 0);
  for (const auto& wb : election.ballots)
    for (int i = 0; i < ell; ++i) out.scores[wb.ballot.order[i]] += wb.count;
  return out;
}

CandidatePartition partition(const ScoreVector& scores, int k) {
  const int m = static_cast<int>(scores.scores.size());
  if (k < 1 || k >= m)
    throw std::invalid_argument("k must satisfy 1 <= k < number of candidates");

  std::vector<Value> sorted(scores.scores);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const Value threshold = sorted[k - 1];

  int above = 0, at = 0;
  for (Value s : scores.scores) {
    if (s > threshold) ++above;
    else if (s == threshold) ++at;
  }

  CandidatePartition part;
  if (above + at == k) {
    // No effective tie: the k top-scored candidates are all confirmed.
    for (CandidateId c = 0; c < m; ++c) {
      if (scores.scores[c] >= threshold) part.confirmed.push_back(c);
      else part.rejected.push_back(c);
    }
  } else {
    for (CandidateId c = 0; c < m; ++c) {
      if (scores.scores[c] > threshold) part.confirmed.push_back(c);
      else if (scores.scores[c] == threshold) part.pending.push_back(c);
      else part.rejected.push_back(c);
    }
  }
  return part;
}

Egroup winners(const Election& election, int ell, int k, const TieRule& rule,
               const UtilityProfile* profile) {
  election.validate();
  const ScoreVector sv = score(election, ell);
  CandidatePartition part = partition(sv, k);
  if (part.pending.empty()) return Egroup{std::move(part.confirmed)};

  TiePerspective p;
  p.confirmed = std::move(part.confirmed);
  p.pending = std::move(part.pending);
  p.k = k;
  if (profile) {
    p.profile = *profile;
  } else {
    if (rule.kind != TieRule::Kind::Lexicographic)
      throw std::invalid_argument("optimistic/pessimistic tie-breaking needs a utility profile");
    p.profile.rows.assign(1, std::vector<Value>(election.num_candidates, 0));
  }
  return tie_break(p, rule).egroup;
}

std::vector<Ballot> ballots_from_approvals(const std::vector<int>& demands,
                                           int r, int ell) {
  const int m = static_cast<int>(demands.size());
  if (r < 1) throw std::invalid_argument("need at least one ballot");
  if (ell < 1 || ell >= m)
    throw InfeasibleDemandError("ell must satisfy 1 <= ell < number of candidates");
  long long total = 0;
  for (int d : demands) {
    if (d < 0) throw InfeasibleDemandError("approval demands must be nonnegative");
    if (d > r) throw InfeasibleDemandError("a candidate cannot be approved more often than there are ballots");
    total += d;
  }
  if (total != static_cast<long long>(r) * ell)
    throw InfeasibleDemandError("approval demands must sum to r*ell");

  // Always approving the ell candidates with the largest remaining demand
  // keeps the maximum demand within the remaining ballot count, so the
  // construction never gets stuck.
  std::vector<int> remaining(demands);
  std::vector<CandidateId> ids(m);
  std::iota(ids.begin(), ids.end(), 0);

  std::vector<Ballot> out;
  out.reserve(r);
  for (int b = 0; b < r; ++b) {
    std::stable_sort(ids.begin(), ids.end(), [&](CandidateId a, CandidateId c) {
      if (remaining[a] != remaining[c]) return remaining[a] > remaining[c];
      return a < c;
    });
    std::vector<CandidateId> approved(ids.begin(), ids.begin() + ell);
    for (CandidateId c : approved) --remaining[c];
    std::sort(approved.begin(), approved.end());

    Ballot ballot;
    ballot.order = approved;
    std::vector<char> in(m, 0);
    for (CandidateId c : approved) in[c] = 1;
    for (CandidateId c = 0; c < m; ++c)
      if (!in[c]) ballot.order.push_back(c);
    out.push_back(std::move(ballot));
  }
  for (int d : remaining)
    if (d != 0) throw InternalConsistencyError("greedy approval assignment left unmet demand");
  return out;
}

Election add_ballots(const Election& election, const std::vector<Ballot>& extra) {
  Election out = election;
  for (const Ballot& b : extra) out.ballots.push_back(WeightedBallot{b, 1});
  return out;
}

}  // namespace shortlist
