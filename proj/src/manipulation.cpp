#include "shortlist/manipulation.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "shortlist/intprog.hpp"

namespace shortlist {

void CmInstance::validate() const {
  election.validate();
  profile.validate();
  const int m = election.num_candidates;
  if (profile.num_candidates() != m)
    throw std::invalid_argument("utility profile width does not match the election");
  if (ell < 1 || ell >= m)
    throw std::invalid_argument("ell must satisfy 1 <= ell < number of candidates");
  if (k < 1 || k >= m)
    throw std::invalid_argument("k must satisfy 1 <= k < number of candidates");
  if (threshold && *threshold < 0)
    throw std::invalid_argument("the evaluation threshold must be nonnegative");
  if (rule.kind == TieRule::Kind::Lexicographic) {
    if (static_cast<int>(rule.order.rank.size()) != m)
      throw std::invalid_argument("lexicographic order must rank every candidate");
  } else if (rule.variant != variant) {
    // Tie-breaking that optimizes a different function than the coalition
    // is outside the model.
    throw std::invalid_argument("tie-breaking evaluation must match the coalition's evaluation");
  }
}

namespace {

std::vector<int> positions_of(const LexOrder& order, int m) {
  if (static_cast<int>(order.rank.size()) != m)
    throw std::invalid_argument("lexicographic order must rank every candidate");
  std::vector<int> pos(m, -1);
  for (int i = 0; i < m; ++i) {
    CandidateId c = order.rank[i];
    if (c < 0 || c >= m || pos[c] != -1)
      throw std::invalid_argument("lexicographic order is not a permutation");
    pos[c] = i;
  }
  return pos;
}

// The lexicographic order the solver works with: the rule's own order, or
// the simulator order that reproduces optimistic/pessimistic behavior for
// the contractible evaluations.
LexOrder working_order(const CmInstance& inst) {
  if (inst.rule.kind == TieRule::Kind::Lexicographic) return inst.rule.order;
  const TieBehavior behavior = inst.rule.kind == TieRule::Kind::Optimistic
                                   ? TieBehavior::Optimistic
                                   : TieBehavior::Pessimistic;
  return simulate_lex(inst.profile, inst.variant, behavior);
}

Manipulation realize(const CmInstance& inst, const std::vector<int>& demands) {
  Manipulation man;
  man.ballots = ballots_from_approvals(demands, inst.num_manipulators(), inst.ell);
  const Election full = add_ballots(inst.election, man.ballots);
  man.egroup = winners(full, inst.ell, inst.k, inst.rule, &inst.profile);
  man.value = evaluate(inst.profile, man.egroup, inst.variant);
  return man;
}

void keep_better(std::optional<Manipulation>& best, Manipulation candidate) {
  if (!best || candidate.value > best->value) best = std::move(candidate);
}

// Accumulates coefficients per variable so constraints stay free of
// duplicate terms.
class LinearExpr {
 public:
  void add(int var, Value coef) {
    if (coef != 0) coef_[var] += coef;
  }
  std::vector<LinearTerm> terms() const {
    std::vector<LinearTerm> out;
    for (const auto& [var, coef] : coef_)
      if (coef != 0) out.push_back({var, coef});
    return out;
  }

 private:
  std::map<int, Value> coef_;
};

struct TypeTable {
  std::vector<std::vector<Value>> columns;          // type -> utility column
  std::vector<int> type_of;                         // candidate -> type
  std::vector<std::vector<CandidateId>> members;    // type -> candidates asc
};

TypeTable build_types(const UtilityProfile& profile) {
  const int m = profile.num_candidates();
  const int r = profile.num_manipulators();
  TypeTable table;
  table.type_of.assign(m, -1);
  std::map<std::vector<Value>, int> index;
  for (CandidateId c = 0; c < m; ++c) {
    std::vector<Value> column(r);
    for (int i = 0; i < r; ++i) column[i] = profile.rows[i][c];
    auto [it, fresh] = index.try_emplace(column, static_cast<int>(table.columns.size()));
    if (fresh) {
      table.columns.push_back(column);
      table.members.emplace_back();
    }
    table.type_of[c] = it->second;
    table.members[it->second].push_back(c);
  }
  return table;
}

Value egal_value_ceiling(const UtilityProfile& profile) {
  Value ceiling = -1;
  for (const auto& row : profile.rows) {
    Value total = 0;
    for (Value u : row) total += u;
    ceiling = ceiling < 0 ? total : std::min(ceiling, total);
  }
  return ceiling;
}

}  // namespace

std::optional<KnapsackPick> knapsack_exact_k(const std::vector<KnapsackItem>& items,
                                             int count, Value capacity) {
  if (count < 0) throw std::invalid_argument("item count must be nonnegative");
  if (capacity < 0) throw std::invalid_argument("capacity must be nonnegative");
  const int n = static_cast<int>(items.size());
  Value weight_sum = 0;
  for (const auto& item : items) {
    if (item.weight < 0 || item.value < 0)
      throw std::invalid_argument("item weights and values must be nonnegative");
    weight_sum += item.weight;
  }
  if (count > n) return std::nullopt;

  const Value cap = std::min(capacity, weight_sum);
  const int W = static_cast<int>(cap);

  // dp[i][j][w]: best value over suffix i with exactly j items of total
  // weight at most w; -1 when no such selection exists.
  const std::size_t stride_j = static_cast<std::size_t>(W) + 1;
  const std::size_t stride_i = static_cast<std::size_t>(count + 1) * stride_j;
  std::vector<Value> dp(static_cast<std::size_t>(n + 1) * stride_i, -1);
  auto at = [&](int i, int j, int w) -> Value& {
    return dp[static_cast<std::size_t>(i) * stride_i +
              static_cast<std::size_t>(j) * stride_j + static_cast<std::size_t>(w)];
  };
  for (int w = 0; w <= W; ++w) at(n, 0, w) = 0;
  for (int i = n - 1; i >= 0; --i) {
    for (int j = 0; j <= count; ++j) {
      for (int w = 0; w <= W; ++w) {
        Value best = at(i + 1, j, w);
        if (j > 0 && items[i].weight <= w) {
          const Value with = at(i + 1, j - 1, w - static_cast<int>(items[i].weight));
          if (with >= 0) best = std::max(best, with + items[i].value);
        }
        at(i, j, w) = best;
      }
    }
  }
  if (at(0, count, W) < 0) return std::nullopt;

  // Walking from the front and taking whenever the optimum allows yields
  // the lexicographically smallest index set.
  KnapsackPick pick;
  pick.value = at(0, count, W);
  int j = count, w = W;
  for (int i = 0; i < n && j > 0; ++i) {
    if (items[i].weight <= w) {
      const Value with = at(i + 1, j - 1, w - static_cast<int>(items[i].weight));
      if (with >= 0 && with + items[i].value == at(i, j, w)) {
        pick.chosen.push_back(i);
        --j;
        w -= static_cast<int>(items[i].weight);
      }
    }
  }
  if (j != 0) throw InternalConsistencyError("knapsack reconstruction failed");
  return pick;
}

LexOrder strength_order(const Election& election, int ell, const LexOrder& order) {
  const int m = election.num_candidates;
  const std::vector<int> pos = positions_of(order, m);
  const ScoreVector sv = score(election, ell);
  LexOrder out;
  out.rank.resize(m);
  std::iota(out.rank.begin(), out.rank.end(), 0);
  std::sort(out.rank.begin(), out.rank.end(), [&](CandidateId a, CandidateId b) {
    if (sv.scores[a] != sv.scores[b]) return sv.scores[a] > sv.scores[b];
    return pos[a] < pos[b];
  });
  return out;
}

std::optional<Manipulation> cm_general(const CmInstance& inst) {
  inst.validate();
  if (inst.variant == EvalVariant::Egalitarian)
    throw UnsupportedVariantError("cm_general handles the contractible evaluations only");

  const int m = inst.election.num_candidates;
  const int r = inst.num_manipulators();
  const int n = inst.election.num_votes();
  const int k = inst.k;
  const int ell = inst.ell;
  const LexOrder order = working_order(inst);
  const std::vector<int> pos = positions_of(order, m);
  const std::vector<Value> val = contract(inst.profile, inst.variant);
  const ScoreVector sv = score(inst.election, inst.ell);

  std::optional<Manipulation> best;
  for (Value z = 0; z <= n + r; ++z) {
    for (CandidateId chat = 0; chat < m; ++chat) {
      const Value sc = sv.scores[chat];
      if (sc > z || sc + r < z) continue;

      // Members forced by the state: more initial approvals than z, or
      // exactly z but ranked before the least preferred member.
      std::vector<CandidateId> forced;
      for (CandidateId c = 0; c < m; ++c) {
        if (c == chat) continue;
        if (sv.scores[c] >= z + 1 ||
            (sv.scores[c] == z && pos[c] < pos[chat]))
          forced.push_back(c);
      }
      const int kstar = k - static_cast<int>(forced.size()) - 1;
      if (kstar < 0) continue;

      const Value shat = z - sc;
      const Value sstar = static_cast<Value>(r) * ell - shat;

      // Candidates that extra approvals could still push into the
      // winning set, and how many approvals each would need.
      std::vector<char> is_forced(m, 0);
      for (CandidateId c : forced) is_forced[c] = 1;
      std::vector<CandidateId> eligible;
      std::vector<Value> weight(m, 0);
      for (CandidateId c = 0; c < m; ++c) {
        if (c == chat || is_forced[c]) continue;
        if (pos[c] < pos[chat]) {
          if (sv.scores[c] >= z - r && sv.scores[c] <= z - 1) {
            eligible.push_back(c);
            weight[c] = z - sv.scores[c];
          }
        } else if (sv.scores[c] >= z - r + 1 && sv.scores[c] <= z) {
          eligible.push_back(c);
          weight[c] = z + 1 - sv.scores[c];
        }
      }
      if (static_cast<int>(eligible.size()) < kstar) continue;

      std::vector<int> demands(m, 0);
      demands[chat] = static_cast<int>(shat);
      std::vector<CandidateId> chosen;
      std::vector<char> is_chosen(m, 0);

      if (sstar <= static_cast<Value>(r) * kstar) {
        // Approvals are scarce: pick the best set that fits the budget.
        std::vector<KnapsackItem> items;
        items.reserve(eligible.size());
        for (CandidateId c : eligible) items.push_back({weight[c], val[c]});
        const auto pick = knapsack_exact_k(items, kstar, sstar);
        if (!pick) continue;
        Value leftover = sstar;
        for (int idx : pick->chosen) {
          const CandidateId c = eligible[idx];
          chosen.push_back(c);
          is_chosen[c] = 1;
          demands[c] = static_cast<int>(weight[c]);
          leftover -= weight[c];
        }
        for (CandidateId c : chosen) {
          const Value extra = std::min<Value>(leftover, r - demands[c]);
          demands[c] += static_cast<int>(extra);
          leftover -= extra;
        }
        if (leftover != 0)
          throw InternalConsistencyError("scarce-approval state could not spend its budget");
      } else {
        // Approvals are plentiful: every non-pivot candidate can absorb
        // some surplus (r when harmless, one less than its deficit when
        // it must stay out), and choosing a candidate withdraws its
        // allowance from that pool while its own slack is covered by the
        // r * kstar term. Picking the best members whose withdrawn
        // allowances still leave room for the surplus is again an exact
        // k-item knapsack.
        std::vector<char> is_eligible(m, 0);
        for (CandidateId c : eligible) is_eligible[c] = 1;
        Value pool = 0;
        for (CandidateId c = 0; c < m; ++c) {
          if (c == chat) continue;
          pool += is_eligible[c] ? weight[c] - 1 : r;
        }
        const Value allowance_cap = pool + static_cast<Value>(r) * kstar - sstar;
        if (allowance_cap < 0) continue;
        std::vector<KnapsackItem> items;
        items.reserve(eligible.size());
        for (CandidateId c : eligible) items.push_back({weight[c] - 1, val[c]});
        const auto pick = knapsack_exact_k(items, kstar, allowance_cap);
        if (!pick) continue;
        for (int idx : pick->chosen) {
          const CandidateId c = eligible[idx];
          chosen.push_back(c);
          is_chosen[c] = 1;
          demands[c] = r;
        }
        Value leftover = sstar - static_cast<Value>(r) * kstar;
        for (CandidateId c = 0; c < m && leftover > 0; ++c) {
          if (c == chat || is_chosen[c]) continue;
          const Value cap = is_eligible[c] ? weight[c] - 1 : r;
          const Value extra = std::min(leftover, cap);
          demands[c] += static_cast<int>(extra);
          leftover -= extra;
        }
        if (leftover != 0)
          throw InternalConsistencyError("plentiful-approval state could not spend its budget");
      }

      Manipulation man = realize(inst, demands);
      std::vector<CandidateId> expected(forced);
      expected.push_back(chat);
      expected.insert(expected.end(), chosen.begin(), chosen.end());
      std::sort(expected.begin(), expected.end());
      if (man.egroup.members != expected)
        throw InternalConsistencyError("realized winners deviate from the enumerated state");
      keep_better(best, std::move(man));
    }
  }
  return best;
}

std::optional<Manipulation> cm_consistent(const CmInstance& inst) {
  inst.validate();
  if (inst.variant == EvalVariant::Egalitarian)
    throw UnsupportedVariantError("cm_consistent handles the contractible evaluations only");

  const int m = inst.election.num_candidates;
  const int r = inst.num_manipulators();
  const int k = inst.k;
  const int ell = inst.ell;
  const LexOrder order = working_order(inst);
  const std::vector<int> pos = positions_of(order, m);
  const std::vector<Value> val = contract(inst.profile, inst.variant);
  const ScoreVector sv = score(inst.election, inst.ell);
  const std::vector<CandidateId> strength = strength_order(inst.election, inst.ell, order).rank;
  std::vector<int> spos(m);
  for (int i = 0; i < m; ++i) spos[strength[i]] = i;

  std::optional<Manipulation> best;
  for (int t = std::max(0, k - ell); t <= k; ++t) {
    const CandidateId dropped = strength[t];

    // Distinguished candidates overtake the dropped one when supported by
    // the whole coalition.
    std::vector<CandidateId> distinguished;
    for (int i = t + 1; i < m; ++i) {
      const CandidateId c = strength[i];
      if (sv.scores[c] + r > sv.scores[dropped] ||
          (sv.scores[c] + r == sv.scores[dropped] && pos[c] < pos[dropped]))
        distinguished.push_back(c);
    }
    if (static_cast<int>(distinguished.size()) < k - t) continue;

    std::vector<CandidateId> by_value(distinguished);
    std::sort(by_value.begin(), by_value.end(), [&](CandidateId a, CandidateId b) {
      if (val[a] != val[b]) return val[a] > val[b];
      return spos[a] < spos[b];
    });

    std::vector<CandidateId> supported(by_value.begin(), by_value.begin() + (k - t));
    std::vector<char> in(m, 0);
    for (CandidateId c : supported) in[c] = 1;
    const int pad = std::min(t, ell - static_cast<int>(supported.size()));
    for (int i = 0; i < pad; ++i) {
      supported.push_back(strength[i]);
      in[strength[i]] = 1;
    }

    if (static_cast<int>(supported.size()) < ell) {
      // All approvals must be spent. Simulate supporting the weakest
      // outsiders to find the minimum number of members that get
      // displaced anyway, then choose the replacements by value.
      auto weakest_outside = [&](int want) {
        std::vector<CandidateId> out;
        for (int i = m - 1; i >= 0 && static_cast<int>(out.size()) < want; --i)
          if (!in[strength[i]]) out.push_back(strength[i]);
        return out;
      };
      const std::vector<CandidateId> fillers =
          weakest_outside(ell - static_cast<int>(supported.size()));
      std::vector<CandidateId> pool(supported);
      pool.insert(pool.end(), fillers.begin(), fillers.end());
      std::sort(pool.begin(), pool.end(),
                [&](CandidateId a, CandidateId b) { return spos[a] < spos[b]; });
      int displaced = 0;
      for (int i = 0; i < k; ++i)
        if (!in[pool[i]]) ++displaced;

      const std::vector<CandidateId> harmless =
          weakest_outside(ell - static_cast<int>(supported.size()) - displaced);
      for (CandidateId c : harmless) {
        supported.push_back(c);
        in[c] = 1;
      }
      int wanted = displaced;
      for (CandidateId c : by_value) {
        if (wanted == 0) break;
        if (!in[c]) {
          supported.push_back(c);
          in[c] = 1;
          --wanted;
        }
      }
      if (wanted != 0)
        throw InternalConsistencyError("ran out of distinguished replacements");
    }
    if (static_cast<int>(supported.size()) != ell || in[dropped])
      throw InternalConsistencyError("supported set construction went wrong");

    std::vector<int> demands(m, 0);
    for (CandidateId c : supported) demands[c] = r;
    keep_better(best, realize(inst, demands));
  }
  return best;
}

std::optional<Manipulation> cm_bloc(const CmInstance& inst) {
  if (inst.ell != inst.k)
    throw std::invalid_argument("Bloc manipulation requires ell == k");
  return cm_consistent(inst);
}

namespace {

// Candidates within manipulator reach of a target score z, grouped by
// utility type and by how far below z they start.
struct ScoreGroups {
  std::vector<CandidateId> above;                      // initial score > z
  std::vector<CandidateId> out_of_reach;               // initial score < z - r
  // group[key]: candidates of one (type, deficit) cell, ascending.
  std::map<std::pair<int, int>, std::vector<CandidateId>> cells;
};

ScoreGroups split_by_reach(const ScoreVector& sv, const TypeTable& types,
                           Value z, int r) {
  ScoreGroups g;
  const int m = static_cast<int>(sv.scores.size());
  for (CandidateId c = 0; c < m; ++c) {
    if (sv.scores[c] > z) {
      g.above.push_back(c);
    } else if (sv.scores[c] < z - r) {
      g.out_of_reach.push_back(c);
    } else {
      const int j = static_cast<int>(z - sv.scores[c]);
      g.cells[{types.type_of[c], j}].push_back(c);
    }
  }
  return g;
}

}  // namespace

std::optional<Manipulation> cm_egal(const CmInstance& inst) {
  inst.validate();
  if (inst.variant != EvalVariant::Egalitarian)
    throw UnsupportedVariantError("cm_egal is the egalitarian solver");
  if (inst.rule.kind == TieRule::Kind::Lexicographic)
    throw std::invalid_argument("cm_egal expects optimistic or pessimistic egalitarian tie-breaking");
  const bool optimistic = inst.rule.kind == TieRule::Kind::Optimistic;

  const int m = inst.election.num_candidates;
  const int r = inst.num_manipulators();
  const int n = inst.election.num_votes();
  const int k = inst.k;
  const Value approvals = static_cast<Value>(r) * inst.ell;
  const TypeTable types = build_types(inst.profile);
  const ScoreVector sv = score(inst.election, inst.ell);
  const Value value_ceiling = egal_value_ceiling(inst.profile);

  std::optional<Manipulation> best;
  for (Value z = 0; z <= n + r; ++z) {
    const ScoreGroups groups = split_by_reach(sv, types, z, r);
    const int above = static_cast<int>(groups.above.size());
    if (above >= k) continue;
    const int fill = k - above;  // promoted picks plus selected border members
    int reachable = 0, promotable = 0;
    for (const auto& [key, members] : groups.cells) {
      reachable += static_cast<int>(members.size());
      if (key.second < r) promotable += static_cast<int>(members.size());
    }

    std::vector<Value> base(r, 0);
    for (int q = 0; q < r; ++q)
      for (CandidateId c : groups.above) base[q] += inst.profile.rows[q][c];

    for (int promoted = 0; promoted <= fill - 1 && promoted <= promotable; ++promoted) {
      for (int border = fill - promoted; border <= reachable; ++border) {
        IntegerProgram prog;
        struct CellVars {
          int type, deficit, size;
          int border_var, promoted_var;
          const std::vector<CandidateId>* members;
        };
        std::vector<CellVars> cells;
        for (const auto& [key, members] : groups.cells) {
          CellVars cv;
          cv.type = key.first;
          cv.deficit = key.second;
          cv.size = static_cast<int>(members.size());
          cv.members = &members;
          cv.border_var = prog.add_variable(
              "b" + std::to_string(cv.type) + "_" + std::to_string(cv.deficit),
              0, cv.size);
          cv.promoted_var = prog.add_variable(
              "p" + std::to_string(cv.type) + "_" + std::to_string(cv.deficit),
              0, cv.deficit == r ? 0 : cv.size);
          cells.push_back(cv);
        }

        for (const auto& cv : cells) {
          prog.add_constraint({{cv.border_var, 1}, {cv.promoted_var, 1}},
                              Relation::LessEq, cv.size);
          // Candidates already at score z cannot leave the border.
          if (cv.deficit == 0)
            prog.add_constraint({{cv.border_var, 1}, {cv.promoted_var, 1}},
                                Relation::Equal, cv.size);
        }
        {
          LinearExpr sum;
          for (const auto& cv : cells) sum.add(cv.promoted_var, 1);
          prog.add_constraint(sum.terms(), Relation::Equal, promoted);
        }
        {
          LinearExpr sum;
          for (const auto& cv : cells) sum.add(cv.border_var, 1);
          prog.add_constraint(sum.terms(), Relation::Equal, border);
        }

        const int used_var = prog.add_variable("used", 0, approvals);
        const int spare_var = prog.add_variable("spare", 0, approvals);
        {
          LinearExpr expr;
          expr.add(used_var, 1);
          for (const auto& cv : cells) {
            expr.add(cv.border_var, -cv.deficit);
            expr.add(cv.promoted_var, -(cv.deficit + 1));
          }
          prog.add_constraint(expr.terms(), Relation::Equal, 0);
        }
        {
          // Room for approvals that leave the outcome untouched: safe
          // candidates absorb r each, unchosen in-reach candidates stay
          // below z, promoted members may soak up to r approvals total.
          LinearExpr expr;
          expr.add(spare_var, 1);
          Value room = static_cast<Value>(r) *
                       (groups.above.size() + groups.out_of_reach.size());
          for (const auto& cv : cells) {
            if (cv.deficit >= 1) {
              room += static_cast<Value>(cv.deficit - 1) * cv.size;
              expr.add(cv.border_var, cv.deficit - 1);
              expr.add(cv.promoted_var, cv.deficit - 1);
            }
            if (cv.deficit <= r - 1)
              expr.add(cv.promoted_var, -(r - cv.deficit - 1));
          }
          prog.add_constraint(expr.terms(), Relation::LessEq, room);
        }
        prog.add_constraint({{used_var, 1}, {spare_var, 1}}, Relation::Equal,
                            approvals);

        const int winners_needed = fill - promoted;
        std::vector<int> select_vars;  // optimistic completion picks
        if (optimistic) {
          for (const auto& cv : cells)
            select_vars.push_back(prog.add_variable(
                "w" + std::to_string(cv.type) + "_" + std::to_string(cv.deficit),
                0, cv.size));
          LinearExpr sum;
          for (int v : select_vars) sum.add(v, 1);
          prog.add_constraint(sum.terms(), Relation::Equal, winners_needed);
          for (std::size_t i = 0; i < cells.size(); ++i)
            prog.add_constraint({{select_vars[i], 1}, {cells[i].border_var, -1}},
                                Relation::LessEq, 0);
        }

        std::vector<std::vector<int>> designated;  // pessimistic adversary picks
        if (!optimistic) {
          const int T = static_cast<int>(types.columns.size());
          std::vector<int> border_of_type(T, -1);
          for (int ty = 0; ty < T; ++ty) {
            LinearExpr expr;
            bool any = false;
            for (const auto& cv : cells)
              if (cv.type == ty) {
                expr.add(cv.border_var, 1);
                any = true;
              }
            if (!any) continue;
            border_of_type[ty] =
                prog.add_variable("bt" + std::to_string(ty), 0, m);
            expr.add(border_of_type[ty], -1);
            prog.add_constraint(expr.terms(), Relation::Equal, 0);
          }

          designated.assign(T, std::vector<int>(r, -1));
          std::vector<std::vector<int>> used(T, std::vector<int>(r, -1));
          std::vector<std::vector<int>> full(T, std::vector<int>(r, -1));
          for (int ty = 0; ty < T; ++ty) {
            if (border_of_type[ty] < 0) continue;
            for (int q = 0; q < r; ++q) {
              designated[ty][q] = prog.add_variable(
                  "d" + std::to_string(ty) + "_" + std::to_string(q), 0, m);
              used[ty][q] = prog.add_variable(
                  "u" + std::to_string(ty) + "_" + std::to_string(q), 0, 1);
              full[ty][q] = prog.add_variable(
                  "f" + std::to_string(ty) + "_" + std::to_string(q), 0, 1);
              prog.add_constraint(
                  {{designated[ty][q], 1}, {border_of_type[ty], -1}},
                  Relation::LessEq, 0);
              // used = 1 iff any candidate of the type is designated.
              prog.add_constraint({{used[ty][q], 1}, {designated[ty][q], -1}},
                                  Relation::LessEq, 0);
              prog.add_constraint(
                  {{designated[ty][q], 1}, {used[ty][q], -(Value)m}},
                  Relation::LessEq, 0);
              // full = 1 iff every border candidate of the type is designated.
              prog.add_constraint({{full[ty][q], 1},
                                   {border_of_type[ty], 1},
                                   {designated[ty][q], -1}},
                                  Relation::GreaterEq, 1);
              prog.add_constraint({{border_of_type[ty], 1},
                                   {designated[ty][q], -1},
                                   {full[ty][q], (Value)m}},
                                  Relation::LessEq, m);
            }
          }
          for (int q = 0; q < r; ++q) {
            LinearExpr sum;
            for (int ty = 0; ty < T; ++ty)
              if (designated[ty][q] >= 0) sum.add(designated[ty][q], 1);
            prog.add_constraint(sum.terms(), Relation::Equal, winners_needed);
          }
          // The adversary fills the winning set with the candidates it
          // values least: a dearer type may be touched only once every
          // cheaper type is exhausted.
          for (int q = 0; q < r; ++q)
            for (int a = 0; a < T; ++a)
              for (int b = 0; b < T; ++b) {
                if (designated[a][q] < 0 || designated[b][q] < 0) continue;
                if (types.columns[a][q] > types.columns[b][q])
                  prog.add_constraint({{used[a][q], 1}, {full[b][q], -1}},
                                      Relation::LessEq, 0);
              }
        }

        const int s_var = prog.add_variable("s", 0, std::max<Value>(value_ceiling, 0));
        for (int q = 0; q < r; ++q) {
          LinearExpr expr;
          for (std::size_t i = 0; i < cells.size(); ++i) {
            const Value u = types.columns[cells[i].type][q];
            expr.add(cells[i].promoted_var, u);
            if (optimistic) expr.add(select_vars[i], u);
          }
          if (!optimistic)
            for (std::size_t ty = 0; ty < designated.size(); ++ty)
              if (designated[ty][q] >= 0)
                expr.add(designated[ty][q], types.columns[ty][q]);
          expr.add(s_var, -1);
          prog.add_constraint(expr.terms(), Relation::GreaterEq, -base[q]);
        }
        prog.objective = {{s_var, 1}};

        const IpSolution sol = solve(prog);
        if (sol.status != IpStatus::Optimal) continue;
        if (best && sol.objective_value <= best->value) continue;

        // Materialize the manipulation: within a cell the lowest-index
        // candidates are promoted first, then the border picks.
        std::vector<int> demands(m, 0);
        Value spare = sol.assignment[spare_var];
        std::vector<std::pair<CandidateId, Value>> absorbers;
        for (CandidateId c : groups.above) absorbers.push_back({c, r});
        for (CandidateId c : groups.out_of_reach) absorbers.push_back({c, r});
        for (const auto& cv : cells) {
          const Value np = sol.assignment[cv.promoted_var];
          const Value nb = sol.assignment[cv.border_var];
          for (int i = 0; i < cv.size; ++i) {
            const CandidateId c = (*cv.members)[i];
            if (i < np) {
              demands[c] = cv.deficit + 1;
              if (cv.deficit <= r - 1 && r - cv.deficit - 1 > 0)
                absorbers.push_back({c, r - cv.deficit - 1});
            } else if (i < np + nb) {
              demands[c] = cv.deficit;
            } else if (cv.deficit >= 1) {
              absorbers.push_back({c, cv.deficit - 1});
            }
          }
        }
        for (auto& [c, cap] : absorbers) {
          if (spare <= 0) break;
          const Value take = std::min(spare, cap);
          demands[c] += static_cast<int>(take);
          spare -= take;
        }
        if (spare != 0)
          throw InternalConsistencyError("egalitarian state could not park its spare approvals");

        Manipulation man = realize(inst, demands);
        if (man.value != sol.objective_value)
          throw InternalConsistencyError("egalitarian program value disagrees with re-simulation");
        keep_better(best, std::move(man));
      }
    }
  }
  return best;
}

std::optional<Manipulation> cm_egal_lex(const CmInstance& inst) {
  inst.validate();
  if (inst.variant != EvalVariant::Egalitarian)
    throw UnsupportedVariantError("cm_egal_lex is the egalitarian solver");
  if (inst.rule.kind != TieRule::Kind::Lexicographic)
    throw std::invalid_argument("cm_egal_lex expects lexicographic tie-breaking");

  const int m = inst.election.num_candidates;
  const int r = inst.num_manipulators();
  const int n = inst.election.num_votes();
  const int k = inst.k;
  const Value approvals = static_cast<Value>(r) * inst.ell;
  const std::vector<int> pos = positions_of(inst.rule.order, m);
  const TypeTable types = build_types(inst.profile);
  const ScoreVector sv = score(inst.election, inst.ell);
  const Value value_ceiling = egal_value_ceiling(inst.profile);

  std::optional<Manipulation> best;
  for (Value z = 0; z <= n + r; ++z) {
    for (CandidateId chat = 0; chat < m; ++chat) {
      const Value sc = sv.scores[chat];
      if (sc > z || sc + r < z) continue;
      const Value shat = z - sc;

      std::vector<CandidateId> forced;
      for (CandidateId c = 0; c < m; ++c) {
        if (c == chat) continue;
        if (sv.scores[c] > z || (sv.scores[c] == z && pos[c] < pos[chat]))
          forced.push_back(c);
      }
      if (static_cast<int>(forced.size()) >= k) continue;
      const int slots = k - static_cast<int>(forced.size()) - 1;

      std::vector<char> is_forced(m, 0);
      for (CandidateId c : forced) is_forced[c] = 1;

      // In-reach candidates split by lex side: preferred to the pivot
      // needs to match score z, the rest must beat it by one.
      struct Cell {
        int type, deficit;
        bool preferred;
        std::vector<CandidateId> members;
      };
      std::map<std::tuple<int, int, bool>, std::vector<CandidateId>> cell_map;
      std::vector<CandidateId> rest;  // unreachable candidates
      for (CandidateId c = 0; c < m; ++c) {
        if (c == chat || is_forced[c]) continue;
        if (sv.scores[c] <= z && sv.scores[c] >= z - r) {
          const int j = static_cast<int>(z - sv.scores[c]);
          const bool preferred = pos[c] < pos[chat];
          if (j == 0 && preferred)
            throw InternalConsistencyError("score-z preferred candidates must be forced");
          cell_map[{types.type_of[c], j, preferred}].push_back(c);
        } else {
          rest.push_back(c);
        }
      }

      IntegerProgram prog;
      std::vector<Cell> cells;
      std::vector<int> cell_var;
      for (auto& [key, members] : cell_map) {
        Cell cell;
        cell.type = std::get<0>(key);
        cell.deficit = std::get<1>(key);
        cell.preferred = std::get<2>(key);
        cell.members = members;
        // A non-preferred candidate needs deficit+1 approvals; at
        // deficit r that exceeds the coalition budget per candidate.
        const bool can_join = cell.preferred || cell.deficit < r;
        cell_var.push_back(prog.add_variable(
            (cell.preferred ? "p" : "q") + std::to_string(cell.type) + "_" +
                std::to_string(cell.deficit),
            0, can_join ? static_cast<Value>(cell.members.size()) : 0));
        cells.push_back(std::move(cell));
      }
      const int waste_var = prog.add_variable("waste", 0, approvals);

      auto need_of = [&](const Cell& cell) -> Value {
        return cell.preferred ? cell.deficit : cell.deficit + 1;
      };

      {
        LinearExpr sum;
        for (std::size_t i = 0; i < cells.size(); ++i) sum.add(cell_var[i], 1);
        prog.add_constraint(sum.terms(), Relation::Equal, slots);
      }
      {
        LinearExpr expr;  // approvals spent on new members
        for (std::size_t i = 0; i < cells.size(); ++i)
          expr.add(cell_var[i], need_of(cells[i]));
        prog.add_constraint(expr.terms(), Relation::LessEq, approvals - shat);
      }
      {
        LinearExpr expr;  // spend exactly the whole budget
        expr.add(waste_var, 1);
        for (std::size_t i = 0; i < cells.size(); ++i)
          expr.add(cell_var[i], need_of(cells[i]));
        prog.add_constraint(expr.terms(), Relation::Equal, approvals - shat);
      }
      {
        // Waste room: an unchosen in-reach candidate may take one
        // approval less than would push it in, a chosen one may absorb
        // anything beyond its need, everyone else absorbs r.
        LinearExpr expr;
        expr.add(waste_var, 1);
        Value room = static_cast<Value>(r) * (forced.size() + rest.size());
        for (std::size_t i = 0; i < cells.size(); ++i) {
          const Value need = need_of(cells[i]);
          room += (need - 1) * static_cast<Value>(cells[i].members.size());
          expr.add(cell_var[i], 2 * need - r - 1);
        }
        prog.add_constraint(expr.terms(), Relation::LessEq, room);
      }
      const int s_var = prog.add_variable("s", 0, std::max<Value>(value_ceiling, 0));
      for (int q = 0; q < r; ++q) {
        LinearExpr expr;
        for (std::size_t i = 0; i < cells.size(); ++i)
          expr.add(cell_var[i], types.columns[cells[i].type][q]);
        expr.add(s_var, -1);
        Value base = inst.profile.rows[q][chat];
        for (CandidateId c : forced) base += inst.profile.rows[q][c];
        prog.add_constraint(expr.terms(), Relation::GreaterEq, -base);
      }
      prog.objective = {{s_var, 1}};

      const IpSolution sol = solve(prog);
      if (sol.status != IpStatus::Optimal) continue;
      if (best && sol.objective_value <= best->value) continue;

      std::vector<int> demands(m, 0);
      demands[chat] = static_cast<int>(shat);
      std::vector<CandidateId> picked;
      Value waste = sol.assignment[waste_var];
      std::vector<std::pair<CandidateId, Value>> absorbers;
      for (CandidateId c : forced) absorbers.push_back({c, r});
      for (CandidateId c : rest) absorbers.push_back({c, r});
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const Value take = sol.assignment[cell_var[i]];
        const Value need = need_of(cells[i]);
        for (std::size_t idx = 0; idx < cells[i].members.size(); ++idx) {
          const CandidateId c = cells[i].members[idx];
          if (static_cast<Value>(idx) < take) {
            demands[c] = static_cast<int>(need);
            picked.push_back(c);
            if (r - need > 0) absorbers.push_back({c, r - need});
          } else if (need - 1 > 0) {
            absorbers.push_back({c, need - 1});
          }
        }
      }
      for (auto& [c, cap] : absorbers) {
        if (waste <= 0) break;
        const Value take = std::min(waste, cap);
        demands[c] += static_cast<int>(take);
        waste -= take;
      }
      if (waste != 0)
        throw InternalConsistencyError("lex state could not park its spare approvals");

      Manipulation man = realize(inst, demands);
      std::vector<CandidateId> expected(forced);
      expected.push_back(chat);
      expected.insert(expected.end(), picked.begin(), picked.end());
      std::sort(expected.begin(), expected.end());
      if (man.egroup.members != expected)
        throw InternalConsistencyError("realized winners deviate from the enumerated state");
      if (man.value != sol.objective_value)
        throw InternalConsistencyError("lex program value disagrees with re-simulation");
      keep_better(best, std::move(man));
    }
  }
  return best;
}

}  // namespace shortlist
