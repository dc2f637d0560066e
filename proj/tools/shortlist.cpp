// Command-line front end: winner determination, manipulation solving,
// instance generation, and solver-vs-oracle cross-validation.
//
// Exit codes: 0 success (threshold met when given), 1 threshold unmet,
// 2 input error, 3 cross-validation mismatch.

#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "shortlist/election.hpp"
#include "shortlist/json_io.hpp"
#include "shortlist/manipulation.hpp"
#include "shortlist/oracle.hpp"
#include "shortlist/parallel.hpp"

using nlohmann::json;
using namespace shortlist;

namespace {

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

EvalVariant parse_variant(const std::string& s) {
  if (s == "util") return EvalVariant::Utilitarian;
  if (s == "egal") return EvalVariant::Egalitarian;
  if (s == "candegal") return EvalVariant::CandidateWiseEgalitarian;
  throw CliError("unknown evaluation variant '" + s + "'");
}

LexOrder parse_lex_order(const std::string& csv, const Election& election) {
  std::map<std::string, CandidateId> index;
  for (CandidateId c = 0; c < election.num_candidates; ++c)
    index[election.candidate_names[c]] = c;
  LexOrder order;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) {
    const auto it = index.find(token);
    if (it == index.end()) throw CliError("unknown candidate '" + token + "' in --lex-order");
    order.rank.push_back(it->second);
  }
  if (order.rank.size() != static_cast<std::size_t>(election.num_candidates))
    throw CliError("--lex-order must list every candidate exactly once");
  std::vector<char> seen(election.num_candidates, 0);
  for (CandidateId c : order.rank) {
    if (seen[c]) throw CliError("--lex-order must list every candidate exactly once");
    seen[c] = 1;
  }
  return order;
}

LexOrder default_lex_order(const Election& election) {
  LexOrder order;
  order.rank.resize(election.num_candidates);
  for (CandidateId c = 0; c < election.num_candidates; ++c) order.rank[c] = c;
  return order;
}

TieRule build_rule(const std::string& tie, const std::string& eval,
                   const std::string& lex_csv, const Election& election,
                   bool have_utilities) {
  if (tie == "lex") {
    return TieRule::lexicographic(lex_csv.empty() ? default_lex_order(election)
                                                  : parse_lex_order(lex_csv, election));
  }
  if (eval.empty())
    throw CliError("--tie " + tie + " needs --eval");
  if (!have_utilities)
    throw CliError("--tie " + tie + " needs --utilities");
  if (tie == "opt") return TieRule::optimistic(parse_variant(eval));
  if (tie == "pess") return TieRule::pessimistic(parse_variant(eval));
  throw CliError("unknown tie-breaking rule '" + tie + "'");
}

json names_of(const Egroup& egroup, const Election& election) {
  json out = json::array();
  for (CandidateId c : egroup.members) out.push_back(election.candidate_names[c]);
  return out;
}

json names_of(const std::vector<CandidateId>& ids, const Election& election) {
  json out = json::array();
  for (CandidateId c : ids) out.push_back(election.candidate_names[c]);
  return out;
}

int cmd_winners(const std::string& election_file, int ell, int k,
                const std::string& tie, const std::string& eval,
                const std::string& lex_csv, const std::string& utilities_file) {
  const Election election = parse_election(load_json_file(election_file));
  std::optional<UtilityProfile> profile;
  if (!utilities_file.empty())
    profile = parse_utilities(load_json_file(utilities_file), election);

  const TieRule rule = build_rule(tie, eval, lex_csv, election, profile.has_value());
  const Egroup winning =
      winners(election, ell, k, rule, profile ? &*profile : nullptr);

  const ScoreVector sv = score(election, ell);
  const CandidatePartition part = partition(sv, k);

  json out;
  out["winners"] = names_of(winning, election);
  out["scores"] = json::object();
  for (CandidateId c = 0; c < election.num_candidates; ++c)
    out["scores"][election.candidate_names[c]] = sv.scores[c];
  out["partition"] = {{"confirmed", names_of(part.confirmed, election)},
                      {"pending", names_of(part.pending, election)},
                      {"rejected", names_of(part.rejected, election)}};
  if (profile && !eval.empty())
    out["value"] = evaluate(*profile, winning, parse_variant(eval));
  else
    out["value"] = nullptr;
  std::cout << out.dump(2) << "\n";
  return 0;
}

std::optional<Manipulation> run_fast_solver(const CmInstance& inst) {
  if (inst.variant == EvalVariant::Egalitarian) {
    if (inst.rule.kind == TieRule::Kind::Lexicographic) return cm_egal_lex(inst);
    return cm_egal(inst);
  }
  if (inst.ell == inst.k) return cm_bloc(inst);
  return cm_general(inst);
}

int cmd_manipulate(const std::string& election_file, const std::string& utilities_file,
                   int ell, int k, const std::string& eval, const std::string& tie,
                   const std::string& lex_csv, std::optional<Value> threshold,
                   const std::string& solver) {
  const Election election = parse_election(load_json_file(election_file));
  const UtilityProfile profile = parse_utilities(load_json_file(utilities_file), election);

  CmInstance inst;
  inst.election = election;
  inst.ell = ell;
  inst.k = k;
  inst.profile = profile;
  inst.variant = parse_variant(eval);
  inst.rule = build_rule(tie, eval, lex_csv, election, true);
  inst.threshold = threshold;
  inst.validate();

  std::optional<Manipulation> man;
  if (solver == "fast") {
    man = run_fast_solver(inst);
  } else if (solver == "oracle") {
    const BruteCmResult res = brute_cm(inst);
    std::vector<int> demands(election.num_candidates, 0);
    for (const auto& set : res.approvals)
      for (CandidateId c : set) ++demands[c];
    Manipulation m;
    m.ballots = ballots_from_approvals(demands, inst.num_manipulators(), ell);
    m.egroup = winners(add_ballots(election, m.ballots), ell, k, inst.rule, &profile);
    m.value = res.value;
    man = std::move(m);
  } else {
    throw CliError("unknown solver '" + solver + "'");
  }
  if (!man) throw CliError("no feasible manipulation state; this should be impossible");

  json out;
  out["value"] = man->value;
  out["ballots"] = json::array();
  for (const Ballot& b : man->ballots) {
    json order = json::array();
    for (CandidateId c : b.order) order.push_back(election.candidate_names[c]);
    out["ballots"].push_back(std::move(order));
  }
  out["winners"] = names_of(man->egroup, election);
  const bool meets = !threshold || man->value >= *threshold;
  out["meets_threshold"] = meets;
  std::cout << out.dump(2) << "\n";
  return meets ? 0 : 1;
}

struct TrialOutcome {
  bool mismatch = false;
  json detail;
};

json serialize_instance(const CmInstance& inst) {
  json out;
  out["election"] = serialize_election(inst.election);
  out["utilities"] = serialize_utilities(inst.profile, inst.election);
  out["ell"] = inst.ell;
  out["k"] = inst.k;
  return out;
}

TrialOutcome run_trial(std::uint64_t seed, int max_m, int max_n, int max_r,
                       Value max_util, bool inject_fault) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  RandomSpec spec;
  spec.m = pick(2, max_m);
  spec.n = pick(1, max_n);
  spec.r = pick(1, max_r);
  spec.ell = pick(1, std::min(3, spec.m - 1));
  spec.k = pick(1, std::min(4, spec.m - 1));
  spec.max_utility = max_util;
  spec.seed = rng();
  auto [election, profile] = gen_random(spec);

  CmInstance inst;
  inst.election = std::move(election);
  inst.ell = spec.ell;
  inst.k = spec.k;
  inst.profile = std::move(profile);

  auto mismatch = [&](const char* solver, const TieRule& rule, EvalVariant variant,
                      Value fast, Value oracle) {
    TrialOutcome out;
    out.mismatch = true;
    out.detail = serialize_instance(inst);
    out.detail["solver"] = solver;
    out.detail["variant"] = to_string(variant);
    out.detail["tie"] = rule.kind == TieRule::Kind::Lexicographic
                            ? "lex"
                            : (rule.kind == TieRule::Kind::Optimistic ? "opt" : "pess");
    out.detail["fast_value"] = fast;
    out.detail["oracle_value"] = oracle;
    return out;
  };

  // Tie-breaking against the enumeration oracle on this election's
  // actual pending set, when there is one.
  {
    const ScoreVector sv = score(inst.election, inst.ell);
    CandidatePartition part = partition(sv, inst.k);
    if (!part.pending.empty()) {
      TiePerspective p;
      p.confirmed = part.confirmed;
      p.pending = part.pending;
      p.k = inst.k;
      p.profile = inst.profile;
      for (EvalVariant variant :
           {EvalVariant::Utilitarian, EvalVariant::Egalitarian,
            EvalVariant::CandidateWiseEgalitarian}) {
        for (bool optimistic : {true, false}) {
          const TieRule rule = optimistic ? TieRule::optimistic(variant)
                                          : TieRule::pessimistic(variant);
          const Value fast = tie_break(p, rule).value;
          const Value oracle = brute_tie(p, rule, variant).value;
          if (fast != oracle)
            return mismatch("tie_break", rule, variant, fast, oracle);
        }
      }
    }
  }

  const LexOrder lex = default_lex_order(inst.election);
  std::vector<std::pair<EvalVariant, TieRule>> pairs;
  for (EvalVariant variant :
       {EvalVariant::Utilitarian, EvalVariant::CandidateWiseEgalitarian}) {
    pairs.emplace_back(variant, TieRule::lexicographic(lex));
    pairs.emplace_back(variant, TieRule::optimistic(variant));
    pairs.emplace_back(variant, TieRule::pessimistic(variant));
  }
  pairs.emplace_back(EvalVariant::Egalitarian, TieRule::lexicographic(lex));
  pairs.emplace_back(EvalVariant::Egalitarian, TieRule::optimistic(EvalVariant::Egalitarian));
  pairs.emplace_back(EvalVariant::Egalitarian, TieRule::pessimistic(EvalVariant::Egalitarian));

  for (const auto& [variant, rule] : pairs) {
    inst.variant = variant;
    inst.rule = rule;
    const Value oracle = brute_cm(inst).value;
    const char* name = nullptr;
    Value fast = 0;
    if (variant == EvalVariant::Egalitarian) {
      if (rule.kind == TieRule::Kind::Lexicographic) {
        name = "cm_egal_lex";
        fast = cm_egal_lex(inst)->value;
      } else {
        name = "cm_egal";
        fast = cm_egal(inst)->value;
      }
    } else if (inst.ell == inst.k) {
      name = "cm_bloc";
      fast = cm_bloc(inst)->value;
    } else {
      name = "cm_general";
      fast = cm_general(inst)->value;
    }
    if (inject_fault) fast += 1;
    if (fast != oracle) return mismatch(name, rule, variant, fast, oracle);
  }
  return TrialOutcome{};
}

int cmd_check(int trials, std::uint64_t seed, int max_m, int max_n, int max_r,
              Value max_util, bool inject_fault) {
  std::vector<TrialOutcome> outcomes(trials);
  parallel_for(trials, [&](std::size_t i) {
    outcomes[i] = run_trial(seed + i, max_m, max_n, max_r, max_util, inject_fault);
  });
  json out;
  out["trials"] = trials;
  int mismatches = 0;
  for (int i = 0; i < trials; ++i) {
    if (outcomes[i].mismatch) {
      ++mismatches;
      if (!out.contains("counterexample")) {
        out["counterexample"] = outcomes[i].detail;
        out["counterexample"]["trial"] = i;
      }
    }
  }
  out["mismatches"] = mismatches;
  std::cout << out.dump(2) << "\n";
  return mismatches == 0 ? 0 : 3;
}

int cmd_gen_random(int m, int n, int r, Value max_util, std::uint64_t seed) {
  RandomSpec spec;
  spec.m = m;
  spec.n = n;
  spec.r = r;
  spec.ell = 1;
  spec.k = 1;
  spec.max_utility = max_util;
  spec.seed = seed;
  auto [election, profile] = gen_random(spec);
  json out;
  out["election"] = serialize_election(election);
  out["utilities"] = serialize_utilities(profile, election);
  std::cout << out.dump(2) << "\n";
  return 0;
}

SetCoverInstance parse_sets(int universe, const std::string& spec, int budget) {
  SetCoverInstance sc;
  sc.universe_size = universe;
  sc.budget = budget;
  std::stringstream outer(spec);
  std::string set_token;
  while (std::getline(outer, set_token, ';')) {
    std::vector<int> set;
    std::stringstream inner(set_token);
    std::string elem;
    while (std::getline(inner, elem, ',')) {
      if (elem.empty()) continue;
      const int e = std::stoi(elem);
      if (e < 1 || e > universe)
        throw CliError("set element " + elem + " outside the 1-based universe");
      set.push_back(e - 1);
    }
    sc.sets.push_back(std::move(set));
  }
  if (sc.sets.empty()) throw CliError("--sets must describe at least one set");
  return sc;
}

int cmd_gen_setcover(int universe, const std::string& sets_spec, int budget, int ell) {
  const SetCoverInstance sc = parse_sets(universe, sets_spec, budget);
  const TieReduction reduction = reduce_setcover_to_tie(sc);
  const CmInstance cm =
      reduce_tie_to_cm(reduction.perspective, ell,
                       TieRule::optimistic(EvalVariant::Egalitarian),
                       reduction.threshold);

  json out;
  json perspective;
  perspective["confirmed"] = json::array();
  perspective["pending"] = json::array();
  for (CandidateId c : reduction.perspective.pending)
    perspective["pending"].push_back("s" + std::to_string(c + 1));
  perspective["k"] = reduction.perspective.k;
  perspective["threshold"] = reduction.threshold;
  perspective["manipulators"] = json::array();
  for (int i = 0; i < reduction.perspective.profile.num_manipulators(); ++i) {
    json manip;
    manip["id"] = "x" + std::to_string(i + 1);
    manip["utilities"] = json::object();
    for (int j = 0; j < reduction.perspective.profile.num_candidates(); ++j)
      manip["utilities"]["s" + std::to_string(j + 1)] =
          reduction.perspective.profile.rows[i][j];
    perspective["manipulators"].push_back(std::move(manip));
  }
  out["perspective"] = std::move(perspective);
  out["cm"] = {{"election", serialize_election(cm.election)},
               {"utilities", serialize_utilities(cm.profile, cm.election)},
               {"ell", cm.ell},
               {"k", cm.k},
               {"threshold", *cm.threshold}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Exact solvers for manipulating shortlisting elections"};
  app.require_subcommand(1);

  std::string election_file, utilities_file, tie = "lex", eval, lex_csv;
  int ell = 1, k = 1;

  auto* winners_cmd = app.add_subcommand("winners", "Determine the winning set");
  winners_cmd->add_option("--election", election_file)->required();
  winners_cmd->add_option("--ell", ell)->required();
  winners_cmd->add_option("--k", k)->required();
  winners_cmd->add_option("--tie", tie)->check(CLI::IsMember({"lex", "opt", "pess"}));
  winners_cmd->add_option("--eval", eval)->check(CLI::IsMember({"util", "egal", "candegal"}));
  winners_cmd->add_option("--lex-order", lex_csv);
  winners_cmd->add_option("--utilities", utilities_file);

  std::string solver = "fast";
  std::optional<Value> threshold;
  auto* manipulate_cmd = app.add_subcommand("manipulate", "Solve coalitional manipulation");
  manipulate_cmd->add_option("--election", election_file)->required();
  manipulate_cmd->add_option("--utilities", utilities_file)->required();
  manipulate_cmd->add_option("--ell", ell)->required();
  manipulate_cmd->add_option("--k", k)->required();
  manipulate_cmd->add_option("--eval", eval)->required()->check(CLI::IsMember({"util", "egal", "candegal"}));
  manipulate_cmd->add_option("--tie", tie)->check(CLI::IsMember({"lex", "opt", "pess"}));
  manipulate_cmd->add_option("--lex-order", lex_csv);
  manipulate_cmd->add_option("--threshold", threshold);
  manipulate_cmd->add_option("--solver", solver)->check(CLI::IsMember({"fast", "oracle"}));

  int trials = 100, max_m = 6, max_n = 5, max_r = 3;
  Value max_util = 3;
  std::uint64_t seed = 0;
  bool inject_fault = false;
  auto* check_cmd = app.add_subcommand("check", "Cross-validate solvers against oracles");
  check_cmd->add_option("--trials", trials)->check(CLI::PositiveNumber);
  check_cmd->add_option("--seed", seed);
  check_cmd->add_option("--max-m", max_m)->check(CLI::Range(2, 6));
  check_cmd->add_option("--max-n", max_n)->check(CLI::Range(1, 5));
  check_cmd->add_option("--max-r", max_r)->check(CLI::Range(1, 3));
  check_cmd->add_option("--max-util", max_util)->check(CLI::Range(0, 3));
  check_cmd->add_flag("--inject-fault", inject_fault)->group("");  // test wiring

  auto* gen_cmd = app.add_subcommand("gen", "Generate instances");
  gen_cmd->require_subcommand(1);
  int gm = 4, gn = 3, gr = 2;
  Value gmax_util = 3;
  std::uint64_t gseed = 0;
  auto* gen_random_cmd = gen_cmd->add_subcommand("random", "Random election and utilities");
  gen_random_cmd->add_option("--m", gm)->check(CLI::Range(2, 1000));
  gen_random_cmd->add_option("--n", gn)->check(CLI::PositiveNumber);
  gen_random_cmd->add_option("--r", gr)->check(CLI::PositiveNumber);
  gen_random_cmd->add_option("--max-util", gmax_util);
  gen_random_cmd->add_option("--seed", gseed);

  int universe = 1, budget = 1, sc_ell = 1;
  std::string sets_spec;
  auto* gen_setcover_cmd =
      gen_cmd->add_subcommand("setcover", "Tie-breaking instance from a set cover problem");
  gen_setcover_cmd->add_option("--universe", universe)->required()->check(CLI::PositiveNumber);
  gen_setcover_cmd->add_option("--sets", sets_spec)->required();
  gen_setcover_cmd->add_option("--budget", budget)->required()->check(CLI::PositiveNumber);
  gen_setcover_cmd->add_option("--ell", sc_ell)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::stringstream dump;
    const int code = app.exit(e, dump, dump);
    (void)code;
    std::cerr << dump.str();
    return 2;
  }

  try {
    if (winners_cmd->parsed())
      return cmd_winners(election_file, ell, k, tie, eval, lex_csv, utilities_file);
    if (manipulate_cmd->parsed())
      return cmd_manipulate(election_file, utilities_file, ell, k, eval, tie,
                            lex_csv, threshold, solver);
    if (check_cmd->parsed())
      return cmd_check(trials, seed, max_m, max_n, max_r, max_util, inject_fault);
    if (gen_random_cmd->parsed())
      return cmd_gen_random(gm, gn, gr, gmax_util, gseed);
    if (gen_setcover_cmd->parsed())
      return cmd_gen_setcover(universe, sets_spec, budget, sc_ell);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (...) {
    std::cerr << "error: unexpected failure\n";
    return 2;
  }
}
