#include "shortlist/tiebreak.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "shortlist/intprog.hpp"

namespace shortlist {

namespace {

bool sorted_unique(const std::vector<CandidateId>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i - 1] >= v[i]) return false;
  return true;
}

Egroup make_egroup(std::vector<CandidateId> members) {
  std::sort(members.begin(), members.end());
  return Egroup{std::move(members)};
}

}  // namespace

void TiePerspective::validate() const {
  profile.validate();
  const int m = profile.num_candidates();
  if (!sorted_unique(confirmed) || !sorted_unique(pending))
    throw std::invalid_argument("confirmed/pending sets must be sorted and duplicate-free");
  for (CandidateId c : confirmed)
    if (c < 0 || c >= m) throw std::invalid_argument("confirmed candidate out of range");
  for (CandidateId c : pending)
    if (c < 0 || c >= m) throw std::invalid_argument("pending candidate out of range");
  std::vector<CandidateId> both;
  std::set_intersection(confirmed.begin(), confirmed.end(), pending.begin(),
                        pending.end(), std::back_inserter(both));
  if (!both.empty())
    throw std::invalid_argument("confirmed and pending sets overlap");
  if (static_cast<int>(confirmed.size()) >= k)
    throw std::invalid_argument("a tie needs fewer confirmed candidates than k");
  if (static_cast<int>(confirmed.size() + pending.size()) < k)
    throw std::invalid_argument("not enough candidates to fill the winning set");
}

Egroup apply_lex(const TiePerspective& p, const LexOrder& order) {
  p.validate();
  const int m = p.profile.num_candidates();
  if (static_cast<int>(order.rank.size()) != m)
    throw std::invalid_argument("lexicographic order must rank every candidate");
  std::vector<int> pos(m, -1);
  for (int i = 0; i < m; ++i) {
    CandidateId c = order.rank[i];
    if (c < 0 || c >= m || pos[c] != -1)
      throw std::invalid_argument("lexicographic order is not a permutation");
    pos[c] = i;
  }

  std::vector<CandidateId> pending(p.pending);
  std::sort(pending.begin(), pending.end(),
            [&](CandidateId a, CandidateId b) { return pos[a] < pos[b]; });
  const int need = p.k - static_cast<int>(p.confirmed.size());
  std::vector<CandidateId> members(p.confirmed);
  members.insert(members.end(), pending.begin(), pending.begin() + need);
  return make_egroup(std::move(members));
}

LexOrder simulate_lex(const UtilityProfile& profile, EvalVariant variant,
                      TieBehavior behavior) {
  const std::vector<Value> row = contract(profile, variant);
  const int m = static_cast<int>(row.size());
  LexOrder order;
  order.rank.resize(m);
  std::iota(order.rank.begin(), order.rank.end(), 0);
  std::sort(order.rank.begin(), order.rank.end(),
            [&](CandidateId a, CandidateId b) {
              if (row[a] != row[b])
                return behavior == TieBehavior::Optimistic ? row[a] > row[b]
                                                           : row[a] < row[b];
              return a < b;
            });
  return order;
}

TieBreakResult pess_egal(const TiePerspective& p) {
  p.validate();
  const int need = p.k - static_cast<int>(p.confirmed.size());
  const int r = p.profile.num_manipulators();

  bool have = false;
  TieBreakResult best;
  for (int i = 0; i < r; ++i) {
    // The least happy manipulator ends up with its cheapest completion,
    // so trying each manipulator's cheapest set covers the minimum.
    std::vector<CandidateId> pending(p.pending);
    std::stable_sort(pending.begin(), pending.end(),
                     [&](CandidateId a, CandidateId b) {
                       if (p.profile.rows[i][a] != p.profile.rows[i][b])
                         return p.profile.rows[i][a] < p.profile.rows[i][b];
                       return a < b;
                     });
    std::vector<CandidateId> members(p.confirmed);
    members.insert(members.end(), pending.begin(), pending.begin() + need);
    Egroup candidate = make_egroup(std::move(members));
    const Value v = evaluate(p.profile, candidate, EvalVariant::Egalitarian);
    if (!have || v < best.value ||
        (v == best.value && candidate.members < best.egroup.members)) {
      have = true;
      best = TieBreakResult{std::move(candidate), v};
    }
  }
  return best;
}

TieBreakResult opt_egal_exact(const TiePerspective& p) {
  p.validate();
  const int r = p.profile.num_manipulators();
  const int need = p.k - static_cast<int>(p.confirmed.size());

  // Group pending candidates by type: their utility column vector.
  // Confirmed candidates contribute fixed base utilities instead.
  std::map<std::vector<Value>, std::vector<CandidateId>> types;
  for (CandidateId c : p.pending) {
    std::vector<Value> column(r);
    for (int i = 0; i < r; ++i) column[i] = p.profile.rows[i][c];
    types[column].push_back(c);
  }
  std::vector<Value> base(r, 0);
  for (int i = 0; i < r; ++i)
    for (CandidateId c : p.confirmed) base[i] += p.profile.rows[i][c];

  IntegerProgram prog;
  std::vector<int> type_var;
  std::vector<const std::vector<Value>*> type_key;
  std::vector<const std::vector<CandidateId>*> type_members;
  for (const auto& [column, members] : types) {
    type_var.push_back(prog.add_variable(
        "x" + std::to_string(type_var.size()), 0, (Value)members.size()));
    type_key.push_back(&column);
    type_members.push_back(&members);
  }
  Value s_upper = 0;
  for (int i = 0; i < r; ++i) {
    Value total = base[i];
    for (CandidateId c : p.pending) total += p.profile.rows[i][c];
    s_upper = i == 0 ? total : std::min(s_upper, total);
  }
  const int s = prog.add_variable("s", 0, s_upper);

  std::vector<LinearTerm> size_terms;
  for (int v : type_var) size_terms.push_back({v, 1});
  prog.add_constraint(size_terms, Relation::Equal, need);
  for (int i = 0; i < r; ++i) {
    std::vector<LinearTerm> terms;
    for (std::size_t t = 0; t < type_var.size(); ++t)
      terms.push_back({type_var[t], (*type_key[t])[i]});
    terms.push_back({s, -1});
    prog.add_constraint(std::move(terms), Relation::GreaterEq, -base[i]);
  }
  prog.objective = {{s, 1}};

  const IpSolution sol = solve(prog);
  if (sol.status != IpStatus::Optimal)
    throw InternalConsistencyError("tie completion program must be feasible");

  std::vector<CandidateId> members(p.confirmed);
  for (std::size_t t = 0; t < type_var.size(); ++t) {
    const Value take = sol.assignment[type_var[t]];
    members.insert(members.end(), type_members[t]->begin(),
                   type_members[t]->begin() + take);
  }
  Egroup egroup = make_egroup(std::move(members));
  return TieBreakResult{std::move(egroup), sol.objective_value};
}

TieBreakResult tie_break(const TiePerspective& p, const TieRule& rule) {
  switch (rule.kind) {
    case TieRule::Kind::Lexicographic:
      return TieBreakResult{apply_lex(p, rule.order), 0};
    case TieRule::Kind::Optimistic:
      if (rule.variant == EvalVariant::Egalitarian) return opt_egal_exact(p);
      break;
    case TieRule::Kind::Pessimistic:
      if (rule.variant == EvalVariant::Egalitarian) return pess_egal(p);
      break;
  }
  const TieBehavior behavior = rule.kind == TieRule::Kind::Optimistic
                                   ? TieBehavior::Optimistic
                                   : TieBehavior::Pessimistic;
  const LexOrder order = simulate_lex(p.profile, rule.variant, behavior);
  Egroup egroup = apply_lex(p, order);
  const Value value = evaluate(p.profile, egroup, rule.variant);
  return TieBreakResult{std::move(egroup), value};
}

}  // namespace shortlist
