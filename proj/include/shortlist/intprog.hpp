#pragma once

#include "shortlist/types.hpp"

namespace shortlist {

struct IpVariable {
  std::string name;
  Value lower = 0;
  Value upper = 0;
};

enum class Relation { LessEq, Equal, GreaterEq };

struct LinearTerm {
  int var = 0;
  Value coef = 0;
};

struct IpConstraint {
  std::vector<LinearTerm> terms;
  Relation relation = Relation::LessEq;
  Value rhs = 0;
};

/// A bounded integer linear program, objective maximized. Small by
/// design: the formulations it carries have few variables.
struct IntegerProgram {
  std::vector<IpVariable> variables;
  std::vector<IpConstraint> constraints;
  std::vector<LinearTerm> objective;

  int add_variable(std::string name, Value lower, Value upper);
  void add_constraint(std::vector<LinearTerm> terms, Relation relation, Value rhs);
};

enum class IpStatus { Optimal, Infeasible };

struct IpSolution {
  IpStatus status = IpStatus::Infeasible;
  std::vector<Value> assignment;  // one value per variable when Optimal
  Value objective_value = 0;
};

/// Exact optimum by depth-first branch and bound: variables in
/// declaration order, values ascending, interval-arithmetic pruning on
/// constraints and on the objective. Deterministic. Throws
/// InvalidProgramError on unbounded domains or overflow-prone programs.
IpSolution solve(const IntegerProgram& prog);

}  // namespace shortlist
