#include "shortlist/intprog.hpp"

#include <algorithm>
#include <limits>

namespace shortlist {

int IntegerProgram::add_variable(std::string name, Value lower, Value upper) {
  variables.push_back(IpVariable{std::move(name), lower, upper});
  return static_cast<int>(variables.size()) - 1;
}

void IntegerProgram::add_constraint(std::vector<LinearTerm> terms,
                                    Relation relation, Value rhs) {
  constraints.push_back(IpConstraint{std::move(terms), relation, rhs});
}

namespace {

constexpr Value kMagnitudeLimit = Value(1) << 62;

Value div_floor(Value a, Value b) {
  Value q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

Value div_ceil(Value a, Value b) { return -div_floor(-a, b); }

struct Bounds {
  std::vector<Value> lo, hi;
};

class Search {
 public:
  explicit Search(const IntegerProgram& prog) : prog_(prog) {}

  IpSolution run() {
    validate();
    Bounds root;
    for (const auto& v : prog_.variables) {
      root.lo.push_back(v.lower);
      root.hi.push_back(v.upper);
    }
    descend(root);
    IpSolution out;
    if (has_incumbent_) {
      out.status = IpStatus::Optimal;
      out.assignment = best_assignment_;
      out.objective_value = best_value_;
    }
    return out;
  }

 private:
  void validate() const {
    __int128 weight = 0;
    for (const auto& v : prog_.variables) {
      if (v.lower > v.upper)
        throw InvalidProgramError("variable '" + v.name + "' has an empty domain");
      weight += std::max<__int128>(std::abs((__int128)v.lower), std::abs((__int128)v.upper));
    }
    for (const auto& c : prog_.constraints) {
      __int128 span = std::abs((__int128)c.rhs);
      for (const auto& t : c.terms) {
        if (t.var < 0 || t.var >= (int)prog_.variables.size())
          throw InvalidProgramError("constraint references an unknown variable");
        const auto& v = prog_.variables[t.var];
        span += std::abs((__int128)t.coef) *
                std::max<__int128>(std::abs((__int128)v.lower), std::abs((__int128)v.upper));
      }
      if (span > kMagnitudeLimit)
        throw InvalidProgramError("constraint magnitudes risk 64-bit overflow");
    }
    __int128 objspan = 0;
    for (const auto& t : prog_.objective) {
      if (t.var < 0 || t.var >= (int)prog_.variables.size())
        throw InvalidProgramError("objective references an unknown variable");
      const auto& v = prog_.variables[t.var];
      objspan += std::abs((__int128)t.coef) *
                 std::max<__int128>(std::abs((__int128)v.lower), std::abs((__int128)v.upper));
    }
    if (objspan > kMagnitudeLimit)
      throw InvalidProgramError("objective magnitudes risk 64-bit overflow");
    (void)weight;
  }

  // Interval propagation to a fixed point. Returns false when some
  // constraint cannot be met by any completion within the bounds.
  bool propagate(Bounds& b) const {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& c : prog_.constraints) {
        Value min_lhs = 0, max_lhs = 0;
        for (const auto& t : c.terms) {
          if (t.coef >= 0) {
            min_lhs += t.coef * b.lo[t.var];
            max_lhs += t.coef * b.hi[t.var];
          } else {
            min_lhs += t.coef * b.hi[t.var];
            max_lhs += t.coef * b.lo[t.var];
          }
        }
        if (c.relation != Relation::GreaterEq && min_lhs > c.rhs) return false;
        if (c.relation != Relation::LessEq && max_lhs < c.rhs) return false;

        for (const auto& t : c.terms) {
          if (t.coef == 0) continue;
          const Value vmin = t.coef >= 0 ? t.coef * b.lo[t.var] : t.coef * b.hi[t.var];
          const Value vmax = t.coef >= 0 ? t.coef * b.hi[t.var] : t.coef * b.lo[t.var];
          // Bound t.coef * x within [rhs - max(rest), rhs - min(rest)]
          // as far as the relation demands.
          if (c.relation != Relation::GreaterEq) {
            const Value rest_min = min_lhs - vmin;
            const Value cap = c.rhs - rest_min;  // t.coef * x <= cap
            if (t.coef > 0) {
              Value nb = div_floor(cap, t.coef);
              if (nb < b.hi[t.var]) { b.hi[t.var] = nb; changed = true; }
            } else {
              Value nb = div_ceil(cap, t.coef);
              if (nb > b.lo[t.var]) { b.lo[t.var] = nb; changed = true; }
            }
          }
          if (c.relation != Relation::LessEq) {
            const Value rest_max = max_lhs - vmax;
            const Value need = c.rhs - rest_max;  // t.coef * x >= need
            if (t.coef > 0) {
              Value nb = div_ceil(need, t.coef);
              if (nb > b.lo[t.var]) { b.lo[t.var] = nb; changed = true; }
            } else {
              Value nb = div_floor(need, t.coef);
              if (nb < b.hi[t.var]) { b.hi[t.var] = nb; changed = true; }
            }
          }
          if (b.lo[t.var] > b.hi[t.var]) return false;
        }
      }
    }
    return true;
  }

  Value objective_upper(const Bounds& b) const {
    Value ub = 0;
    for (const auto& t : prog_.objective)
      ub += t.coef >= 0 ? t.coef * b.hi[t.var] : t.coef * b.lo[t.var];
    return ub;
  }

  Value objective_of(const std::vector<Value>& assignment) const {
    Value v = 0;
    for (const auto& t : prog_.objective) v += t.coef * assignment[t.var];
    return v;
  }

  bool satisfied(const std::vector<Value>& assignment) const {
    for (const auto& c : prog_.constraints) {
      Value lhs = 0;
      for (const auto& t : c.terms) lhs += t.coef * assignment[t.var];
      switch (c.relation) {
        case Relation::LessEq: if (lhs > c.rhs) return false; break;
        case Relation::Equal: if (lhs != c.rhs) return false; break;
        case Relation::GreaterEq: if (lhs < c.rhs) return false; break;
      }
    }
    return true;
  }

  void offer(const std::vector<Value>& assignment) {
    const Value v = objective_of(assignment);
    if (!has_incumbent_ || v > best_value_) {
      has_incumbent_ = true;
      best_value_ = v;
      best_assignment_ = assignment;
    }
  }

  // Exact treatment of a single remaining free variable: every
  // constraint reduces to integer bounds (or a pinned point) on it.
  void finish_last(const Bounds& b, int var) {
    Value lo = b.lo[var], hi = b.hi[var];
    for (const auto& c : prog_.constraints) {
      Value rest = 0, coef = 0;
      for (const auto& t : c.terms) {
        if (t.var == var) coef += t.coef;
        else rest += t.coef * b.lo[t.var];
      }
      const Value room = c.rhs - rest;
      if (coef == 0) {
        bool ok = true;
        switch (c.relation) {
          case Relation::LessEq: ok = 0 <= room; break;
          case Relation::Equal: ok = room == 0; break;
          case Relation::GreaterEq: ok = 0 >= room; break;
        }
        if (!ok) return;
        continue;
      }
      switch (c.relation) {
        case Relation::LessEq:
          if (coef > 0) hi = std::min(hi, div_floor(room, coef));
          else lo = std::max(lo, div_ceil(room, coef));
          break;
        case Relation::GreaterEq:
          if (coef > 0) lo = std::max(lo, div_ceil(room, coef));
          else hi = std::min(hi, div_floor(room, coef));
          break;
        case Relation::Equal:
          if (room % coef != 0) return;
          lo = std::max(lo, room / coef);
          hi = std::min(hi, room / coef);
          break;
      }
      if (lo > hi) return;
    }

    Value coef = 0;
    for (const auto& t : prog_.objective)
      if (t.var == var) coef += t.coef;
    const Value pick = coef > 0 ? hi : lo;

    std::vector<Value> assignment(b.lo);
    assignment[var] = pick;
    if (satisfied(assignment)) offer(assignment);
  }

  void descend(Bounds b) {
    if (!propagate(b)) return;
    if (has_incumbent_ && objective_upper(b) <= best_value_) return;

    int free_var = -1, free_count = 0;
    for (std::size_t i = 0; i < b.lo.size(); ++i) {
      if (b.lo[i] != b.hi[i]) {
        if (free_var < 0) free_var = static_cast<int>(i);
        ++free_count;
      }
    }
    if (free_count == 0) {
      if (satisfied(b.lo)) offer(b.lo);
      return;
    }
    if (free_count == 1) {
      finish_last(b, free_var);
      return;
    }
    const Value lo = b.lo[free_var], hi = b.hi[free_var];
    for (Value v = lo; v <= hi; ++v) {
      Bounds child = b;
      child.lo[free_var] = child.hi[free_var] = v;
      descend(std::move(child));
    }
  }

  const IntegerProgram& prog_;
  bool has_incumbent_ = false;
  Value best_value_ = 0;
  std::vector<Value> best_assignment_;
};

}  // namespace

IpSolution solve(const IntegerProgram& prog) {
  return Search(prog).run();
}

}  // namespace shortlist
