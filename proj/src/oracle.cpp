#include "shortlist/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "shortlist/election.hpp"

namespace shortlist {

namespace {

constexpr long long kEnumerationGuard = 1'000'000;

long long combinations(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > kEnumerationGuard) return kEnumerationGuard + 1;
  }
  return result;
}

// Enumerates size-`need` subsets of `pending` in lexicographic order and
// hands each completed member set to the sink.
template <typename Sink>
void for_each_completion(const std::vector<CandidateId>& confirmed,
                         const std::vector<CandidateId>& pending, int need,
                         Sink&& sink) {
  std::vector<int> idx(need);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<CandidateId> members;
  const int p = static_cast<int>(pending.size());
  while (true) {
    members.assign(confirmed.begin(), confirmed.end());
    for (int i : idx) members.push_back(pending[i]);
    std::sort(members.begin(), members.end());
    sink(members);

    int pos = need - 1;
    while (pos >= 0 && idx[pos] == p - need + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < need; ++i) idx[i] = idx[i - 1] + 1;
  }
}

Value completion_extremum(const std::vector<CandidateId>& confirmed,
                          const std::vector<CandidateId>& pending, int k,
                          const UtilityProfile& profile, EvalVariant variant,
                          bool maximize) {
  const int need = k - static_cast<int>(confirmed.size());
  bool have = false;
  Value extremum = 0;
  for_each_completion(confirmed, pending, need,
                      [&](const std::vector<CandidateId>& members) {
                        const Value v = evaluate(profile, Egroup{members}, variant);
                        if (!have || (maximize ? v > extremum : v < extremum)) {
                          have = true;
                          extremum = v;
                        }
                      });
  return extremum;
}

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (~std::uint64_t{0} / n) * n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= threshold);
  return x % n;
}

}  // namespace

TieBreakResult brute_tie(const TiePerspective& p, const TieRule& rule,
                         EvalVariant variant) {
  p.validate();
  const int need = p.k - static_cast<int>(p.confirmed.size());
  if (combinations(static_cast<int>(p.pending.size()), need) > kEnumerationGuard)
    throw TooLargeError("too many completions to enumerate");

  if (rule.kind == TieRule::Kind::Lexicographic) {
    Egroup egroup = apply_lex(p, rule.order);
    const Value value = evaluate(p.profile, egroup, variant);
    return TieBreakResult{std::move(egroup), value};
  }

  const bool maximize = rule.kind == TieRule::Kind::Optimistic;
  bool have = false;
  TieBreakResult best;
  for_each_completion(
      p.confirmed, p.pending, need, [&](const std::vector<CandidateId>& members) {
        const Value v = evaluate(p.profile, Egroup{members}, rule.variant);
        if (!have || (maximize ? v > best.value : v < best.value)) {
          have = true;
          best = TieBreakResult{Egroup{members}, v};
        }
      });
  best.value = evaluate(p.profile, best.egroup, variant);
  return best;
}

BruteCmResult brute_cm(const CmInstance& inst) {
  inst.validate();
  const int m = inst.election.num_candidates;
  const int r = inst.num_manipulators();

  const long long set_count = combinations(m, inst.ell);
  double space = 1;
  for (int i = 0; i < r; ++i) space *= static_cast<double>(set_count);
  if (space > static_cast<double>(kEnumerationGuard))
    throw TooLargeError("too many manipulation profiles to enumerate");

  std::vector<std::vector<CandidateId>> approval_sets;
  {
    std::vector<int> idx(inst.ell);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      approval_sets.emplace_back(idx.begin(), idx.end());
      int pos = inst.ell - 1;
      while (pos >= 0 && idx[pos] == m - inst.ell + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < inst.ell; ++i) idx[i] = idx[i - 1] + 1;
    }
  }

  const ScoreVector base = score(inst.election, inst.ell);
  const bool lex = inst.rule.kind == TieRule::Kind::Lexicographic;
  std::vector<int> lexpos;
  if (lex) {
    lexpos.assign(m, 0);
    if (static_cast<int>(inst.rule.order.rank.size()) != m)
      throw std::invalid_argument("lexicographic order must rank every candidate");
    for (int i = 0; i < m; ++i) lexpos[inst.rule.order.rank[i]] = i;
  }

  BruteCmResult best;
  bool have = false;
  std::vector<int> pick(r, 0);
  ScoreVector current;
  current.scores.resize(m);
  while (true) {
    current.scores = base.scores;
    for (int i = 0; i < r; ++i)
      for (CandidateId c : approval_sets[pick[i]]) ++current.scores[c];

    CandidatePartition part = partition(current, inst.k);
    Value value;
    if (part.pending.empty()) {
      value = evaluate(inst.profile, Egroup{part.confirmed}, inst.variant);
    } else if (lex) {
      std::vector<CandidateId> pending(part.pending);
      std::sort(pending.begin(), pending.end(),
                [&](CandidateId a, CandidateId b) { return lexpos[a] < lexpos[b]; });
      std::vector<CandidateId> members(part.confirmed);
      const int need = inst.k - static_cast<int>(members.size());
      members.insert(members.end(), pending.begin(), pending.begin() + need);
      std::sort(members.begin(), members.end());
      value = evaluate(inst.profile, Egroup{std::move(members)}, inst.variant);
    } else {
      value = completion_extremum(part.confirmed, part.pending, inst.k,
                                  inst.profile, inst.rule.variant,
                                  inst.rule.kind == TieRule::Kind::Optimistic);
    }

    if (!have || value > best.value) {
      have = true;
      best.value = value;
      best.approvals.clear();
      for (int i = 0; i < r; ++i) best.approvals.push_back(approval_sets[pick[i]]);
    }

    int pos = r - 1;
    while (pos >= 0 && pick[pos] == static_cast<int>(approval_sets.size()) - 1) {
      pick[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++pick[pos];
  }
  return best;
}

std::pair<Election, UtilityProfile> gen_random(const RandomSpec& spec) {
  if (spec.m < 2 || spec.n < 1 || spec.r < 1)
    throw std::invalid_argument("random spec needs m >= 2, n >= 1, r >= 1");
  if (spec.ell < 1 || spec.ell >= spec.m || spec.k < 1 || spec.k >= spec.m)
    throw std::invalid_argument("random spec needs 1 <= ell,k < m");
  if (spec.max_utility < 0)
    throw std::invalid_argument("maximum utility must be nonnegative");

  std::mt19937_64 rng(spec.seed);
  Election election;
  election.num_candidates = spec.m;
  for (int c = 0; c < spec.m; ++c)
    election.candidate_names.push_back("c" + std::to_string(c));
  for (int v = 0; v < spec.n; ++v) {
    Ballot ballot;
    ballot.order.resize(spec.m);
    std::iota(ballot.order.begin(), ballot.order.end(), 0);
    for (int i = spec.m - 1; i > 0; --i) {
      const int j = static_cast<int>(bounded(rng, i + 1));
      std::swap(ballot.order[i], ballot.order[j]);
    }
    election.ballots.push_back(WeightedBallot{std::move(ballot), 1});
  }

  UtilityProfile profile;
  profile.rows.assign(spec.r, std::vector<Value>(spec.m, 0));
  for (int i = 0; i < spec.r; ++i)
    for (int c = 0; c < spec.m; ++c)
      profile.rows[i][c] =
          static_cast<Value>(bounded(rng, static_cast<std::uint64_t>(spec.max_utility) + 1));
  return {std::move(election), std::move(profile)};
}

TieReduction reduce_setcover_to_tie(const SetCoverInstance& sc) {
  if (sc.universe_size < 1)
    throw std::invalid_argument("the universe must be nonempty");
  if (sc.budget < 1 || sc.budget > static_cast<int>(sc.sets.size()))
    throw std::invalid_argument("the budget must be between 1 and the number of sets");
  for (const auto& set : sc.sets)
    for (int e : set)
      if (e < 0 || e >= sc.universe_size)
        throw std::invalid_argument("set element outside the universe");

  const int m = static_cast<int>(sc.sets.size());
  TieReduction out;
  out.perspective.k = sc.budget;
  out.perspective.pending.resize(m);
  std::iota(out.perspective.pending.begin(), out.perspective.pending.end(), 0);
  out.perspective.profile.rows.assign(sc.universe_size, std::vector<Value>(m, 0));
  for (int j = 0; j < m; ++j)
    for (int e : sc.sets[j]) out.perspective.profile.rows[e][j] = 1;
  out.threshold = 1;
  return out;
}

bool setcover_feasible(const SetCoverInstance& sc) {
  const int m = static_cast<int>(sc.sets.size());
  if (m > 20) throw TooLargeError("too many sets to enumerate");
  const std::uint32_t full = (sc.universe_size >= 32)
                                 ? ~std::uint32_t{0}
                                 : ((std::uint32_t{1} << sc.universe_size) - 1);
  std::vector<std::uint32_t> masks(m, 0);
  for (int j = 0; j < m; ++j)
    for (int e : sc.sets[j]) masks[j] |= std::uint32_t{1} << e;
  for (std::uint32_t pick = 0; pick < (std::uint32_t{1} << m); ++pick) {
    if (__builtin_popcount(pick) > sc.budget) continue;
    std::uint32_t covered = 0;
    for (int j = 0; j < m; ++j)
      if (pick & (std::uint32_t{1} << j)) covered |= masks[j];
    if (covered == full) return true;
  }
  return false;
}

CmInstance reduce_tie_to_cm(const TiePerspective& p, int ell, TieRule rule,
                            std::optional<Value> threshold) {
  p.validate();
  if (ell < 1) throw std::invalid_argument("ell must be positive");

  std::vector<CandidateId> kept;
  std::merge(p.confirmed.begin(), p.confirmed.end(), p.pending.begin(),
             p.pending.end(), std::back_inserter(kept));
  const int kept_count = static_cast<int>(kept.size());
  const int need = p.k - static_cast<int>(p.confirmed.size());

  int r = p.profile.num_manipulators();
  int pumped = 0;
  while (static_cast<long long>(ell) * r < need) {
    ++r;
    ++pumped;
  }

  // A pumped manipulator values everything highly enough that it can
  // never be the least satisfied one, so optimal values are preserved.
  Value pumped_utility = 1;
  for (const auto& row : p.profile.rows) {
    Value sum = 0;
    for (CandidateId c : kept) sum += row[c];
    pumped_utility = std::max(pumped_utility, sum);
  }

  // Voters approve blocks of the highest remaining demands; any short
  // block is padded with fresh one-shot filler candidates.
  std::vector<int> demand(kept_count, 0);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const bool confirmed =
        std::binary_search(p.confirmed.begin(), p.confirmed.end(), kept[i]);
    demand[i] = confirmed ? 2 * r + 3 : r + 2;
  }
  std::vector<std::pair<std::vector<int>, int>> raw_ballots;  // kept ids + fillers
  int filler_count = 0;
  while (true) {
    std::vector<int> order(kept_count);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return demand[a] > demand[b]; });
    std::vector<int> block;
    for (int i = 0; i < kept_count && static_cast<int>(block.size()) < ell; ++i)
      if (demand[order[i]] > 0) block.push_back(order[i]);
    if (block.empty()) break;
    for (int c : block) --demand[c];
    const int fillers = ell - static_cast<int>(block.size());
    filler_count += fillers;
    raw_ballots.emplace_back(std::move(block), fillers);
  }

  const int absorbers = ell * r - need;
  int total = kept_count + filler_count + absorbers;
  // The manipulation instance needs ell < m and k < m; dummies are free.
  total += std::max({0, ell + 1 - total, p.k + 1 - total});

  CmInstance inst;
  inst.election.num_candidates = total;
  for (int i = 0; i < kept_count; ++i)
    inst.election.candidate_names.push_back("c" + std::to_string(kept[i]));
  for (int i = kept_count; i < total; ++i)
    inst.election.candidate_names.push_back("d" + std::to_string(i - kept_count));

  int next_filler = kept_count;
  for (auto& [block, fillers] : raw_ballots) {
    Ballot ballot;
    std::sort(block.begin(), block.end());
    ballot.order.assign(block.begin(), block.end());
    for (int i = 0; i < fillers; ++i) ballot.order.push_back(next_filler++);
    std::vector<char> in(total, 0);
    for (CandidateId c : ballot.order) in[c] = 1;
    for (CandidateId c = 0; c < total; ++c)
      if (!in[c]) ballot.order.push_back(c);
    inst.election.ballots.push_back(WeightedBallot{std::move(ballot), 1});
  }

  inst.ell = ell;
  inst.k = p.k;
  inst.variant = EvalVariant::Egalitarian;
  inst.rule = std::move(rule);
  inst.threshold = threshold;
  inst.profile.rows.assign(r, std::vector<Value>(total, 0));
  for (int q = 0; q < r - pumped; ++q)
    for (int i = 0; i < kept_count; ++i)
      inst.profile.rows[q][i] = p.profile.rows[q][kept[i]];
  for (int q = r - pumped; q < r; ++q)
    inst.profile.rows[q].assign(total, pumped_utility);

  inst.election.validate();
  const ScoreVector sv = score(inst.election, ell);
  for (int i = 0; i < kept_count; ++i) {
    const bool confirmed =
        std::binary_search(p.confirmed.begin(), p.confirmed.end(), kept[i]);
    if (sv.scores[i] != (confirmed ? 2 * r + 3 : r + 2))
      throw InternalConsistencyError("reduction scaffolding missed a target score");
  }
  for (int c = kept_count; c < total; ++c)
    if (sv.scores[c] > 1)
      throw InternalConsistencyError("a dummy candidate scored above one");
  return inst;
}

}  // namespace shortlist
