#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "semiteam/atoms.hpp"
#include "semiteam/bundled.hpp"
#include "semiteam/cpoly.hpp"
#include "semiteam/io.hpp"
#include "semiteam/provenance.hpp"
#include "semiteam/random.hpp"
#include "semiteam/repairs.hpp"
#include "semiteam/teamcheck.hpp"

using nlohmann::json;
using namespace semiteam;

namespace {

// exit codes: 0 satisfied/success, 1 unsatisfied, 2 usage or input error,
// 3 strategy-bounded negative ("unknown-false")
constexpr int kOk = 0;
constexpr int kUnsat = 1;
constexpr int kError = 2;
constexpr int kIncomplete = 3;

struct Output {
  std::string path; // empty = stdout

  void emit(const json& j) const {
    if (path.empty()) {
      std::cout << j.dump(2) << "\n";
    } else {
      std::ofstream out(path);
      out << j.dump(2) << "\n";
    }
  }
  void emit_text(const std::string& t) const {
    if (path.empty()) {
      std::cout << t;
    } else {
      std::ofstream out(path);
      out << t;
    }
  }
};

json team_to_json(const KTeam& t) {
  json rows = json::array();
  for (const auto& [tuple, w] : t.weights()) {
    json assignment;
    for (std::size_t i = 0; i < t.domain().size(); ++i)
      assignment[t.domain()[i]] = t.universe()->elems[static_cast<std::size_t>(tuple[i])];
    rows.push_back({{"assignment", assignment}, {"weight", w.str()}});
  }
  return {{"domain", t.domain()}, {"universe", t.universe()->elems}, {"rows", rows}};
}

json trace_to_json(const TracePtr& t) {
  if (!t) return nullptr;
  json teams = json::array();
  for (const auto& team : t->teams) teams.push_back(team_to_json(team));
  json children = json::array();
  for (const auto& c : t->children) children.push_back(trace_to_json(c));
  return {{"rule", t->rule}, {"formula", t->formula}, {"teams", teams}, {"children", children}};
}

UniversePtr parse_universe(const std::string& csv) {
  std::vector<std::string> elems;
  std::string cur;
  for (char c : csv + ",") {
    if (c == ',') {
      if (!cur.empty()) elems.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  return Universe::of(elems);
}

std::vector<std::string> split_top_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s + ",") {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      std::size_t b = cur.find_first_not_of(" \t");
      std::size_t e = cur.find_last_not_of(" \t");
      if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

SplitStrategy parse_strategy(const std::string& s) {
  if (s == "exact") return SplitStrategy::exact();
  if (s == "export") {
    SplitStrategy st;
    st.mode = SplitStrategy::Mode::ExportOnly;
    return st;
  }
  if (s.rfind("denom:", 0) == 0) return SplitStrategy::denom(std::stoul(s.substr(6)));
  fail(Errc::InvalidInput, "strategy must be exact, denom:<d> or export");
}

Structure empty_structure(const UniversePtr& u) {
  Structure a;
  a.universe = u;
  return a;
}

// ---------------------------------------------------------------------------

struct CheckAtomArgs {
  std::string team_path, atom_text, structure_path, semiring = "boolean", universe, route = "direct";
};

int run_check_atom(const CheckAtomArgs& args, const Output& out) {
  SpecPtr spec = specs::parse(args.semiring);
  std::optional<Structure> structure;
  std::optional<UniversePtr> u;
  if (!args.structure_path.empty()) {
    structure = load_structure_file(args.structure_path);
    u = structure->universe;
  }
  if (!args.universe.empty()) u = parse_universe(args.universe);
  KTeam team = load_team_csv_file(args.team_path, spec, u);
  Vocabulary vocab = structure ? structure->vocab : Vocabulary{};
  DependencyAtom atom = parse_atom(args.atom_text, vocab);

  Value v = [&] {
    if (args.route == "sentence")
      return structure ? eval_atom_in_structure(*structure, team, atom) : eval_atom(team, atom);
    return structure ? eval_atom_direct_in_structure(*structure, team, atom)
                     : eval_atom_direct(team, atom);
  }();
  bool sat = !v.is_zero();

  json j{{"atom", atom.str()}, {"value", v.str()}, {"satisfied", sat}};
  if (atom.kind == DependencyAtom::Kind::Dep && !spec->positive()) {
    // in semirings with zero divisors the product form can vanish even when
    // the support satisfies the functional dependency
    std::set<Assignment> support = collapse_support(team);
    Structure shell = structure ? *structure : empty_structure(team.universe());
    bool classical = check_classical(shell, support, tf_atom(atom));
    j["zero_divisor_anomaly"] = (!sat && classical);
  }
  out.emit(j);
  return sat ? kOk : kUnsat;
}

struct EvalArgs {
  std::string interp_path, structure_path, formula, semiring = "boolean";
};

int run_eval(const EvalArgs& args, const Output& out) {
  SpecPtr spec = specs::parse(args.semiring);
  std::optional<KInterpretation> pi;
  if (!args.interp_path.empty()) {
    pi = load_interpretation_file(args.interp_path, spec);
  } else if (!args.structure_path.empty()) {
    pi = canonical_interpretation(load_structure_file(args.structure_path));
  } else {
    fail(Errc::InvalidInput, "eval needs --interp or --structure");
  }
  FoPtr f = parse_fo(args.formula, pi->vocab());
  if (!free_vars(f).empty()) fail(Errc::InvalidInput, "eval expects a sentence");
  Value v = eval(*pi, {}, f);
  out.emit(json{{"value", v.str()}});
  return kOk;
}

struct TeamcheckArgs {
  std::string structure_path, team_path, formula, semiring = "boolean", strategy = "exact",
      trace_path;
};

int run_teamcheck(const TeamcheckArgs& args, const Output& out) {
  SpecPtr spec = specs::parse(args.semiring);
  Structure a = load_structure_file(args.structure_path);
  KTeam team = load_team_csv_file(args.team_path, spec, a.universe);
  TfPtr f = parse_team(args.formula, a.vocab);
  SplitStrategy strat = parse_strategy(args.strategy);
  bool want_trace = !args.trace_path.empty();
  CheckResult r = check(a, team, f, strat, want_trace);
  json j{{"verdict", r.satisfied}, {"complete", r.complete}};
  if (want_trace) {
    json t = trace_to_json(r.trace);
    std::ofstream tf(args.trace_path);
    tf << t.dump(2) << "\n";
    j["trace_file"] = args.trace_path;
  }
  out.emit(j);
  if (r.satisfied) return kOk;
  return r.complete ? kUnsat : kIncomplete;
}

struct PolyArgs {
  std::string structure_path, team_path, formula, semiring = "nat", emit = "ir",
      strategy = "exact";
};

int run_poly(const PolyArgs& args, const Output& out) {
  SpecPtr spec = specs::parse(args.semiring);
  Structure a = load_structure_file(args.structure_path);
  KTeam team = load_team_csv_file(args.team_path, spec, a.universe);
  TfPtr f = parse_team(args.formula, a.vocab);
  CompiledPoly cp = compile(a, f, team.domain(), spec);
  if (args.emit == "ir") {
    out.emit_text(print_cpoly(cp) + "\n");
    return kOk;
  }
  if (args.emit == "smt2") {
    out.emit_text(export_existential(cp, team));
    return kOk;
  }
  if (args.emit == "count") {
    mpz_class n = count_witnesses(cp, team, parse_strategy(args.strategy));
    out.emit(json{{"count", n.get_str()}});
    return n > 0 ? kOk : kUnsat;
  }
  fail(Errc::InvalidInput, "--emit must be ir, smt2 or count");
}

struct ProvArgs {
  std::string structure_path, team_path, formula, semiring = "nat", emit = "poly", bind,
      target = "nat";
};

int run_provenance(const ProvArgs& args, const Output& out) {
  SpecPtr spec = specs::parse(args.semiring);
  Structure a = load_structure_file(args.structure_path);
  KTeam team = load_team_csv_file(args.team_path, spec, a.universe);
  TfPtr f = parse_team(args.formula, a.vocab);
  AnnotatedTeam ax = annotate(team);
  CompiledPoly cp = compile_prov(a, f, ax);

  // one provenance polynomial per witness valuation of the fresh families
  std::vector<Value> polys;
  std::size_t witnesses = 0;
  for_each_witness_valuation(cp, ax.team, SplitStrategy::exact(), [&](const Valuation& v) {
    Value p = evaluate(cp.root, v, cp.spec);
    if (!p.is_zero()) {
      ++witnesses;
      polys.push_back(p);
    }
    return true;
  });
  std::sort(polys.begin(), polys.end());
  polys.erase(std::unique(polys.begin(), polys.end()), polys.end());

  if (args.emit == "poly") {
    json arr = json::array();
    for (const auto& p : polys) arr.push_back(p.str());
    out.emit(json{{"polynomials", arr}, {"witnesses", witnesses}});
    return witnesses == 0 ? kUnsat : kOk;
  }
  if (args.emit == "specialized") {
    if (args.bind.empty()) fail(Errc::InvalidInput, "--emit specialized needs --bind p1=...,p2=...");
    SpecPtr target = specs::parse(args.target);
    std::map<std::string, Value> sub;
    for (const auto& pair : split_top_commas(args.bind)) {
      auto eq = pair.find('=');
      if (eq == std::string::npos) fail(Errc::InvalidInput, "bad --bind entry '" + pair + "'");
      sub[pair.substr(0, eq)] = parse_value(target, pair.substr(eq + 1));
    }
    for (const auto& name : ax.team.spec()->indets)
      if (!sub.count(name)) fail(Errc::MissingIndeterminate, "--bind misses token '" + name + "'");
    json arr = json::array();
    for (const auto& p : polys) arr.push_back(specialize(p, sub).str());
    out.emit(json{{"values", arr}});
    return polys.empty() ? kUnsat : kOk;
  }
  fail(Errc::InvalidInput, "--emit must be poly or specialized");
}

struct RepairArgs {
  std::string team_path, semiring = "nat", constraints, notion = "sym", weights, xs, ys, universe;
};

int run_repair(const RepairArgs& args, const Output& out) {
  SpecPtr spec = specs::parse(args.semiring);
  std::optional<UniversePtr> u;
  if (!args.universe.empty()) u = parse_universe(args.universe);
  KTeam team = load_team_csv_file(args.team_path, spec, u);

  RepairSpace space;
  if (args.weights.empty()) fail(Errc::InvalidInput, "repair needs --weights w1,w2,...");
  for (const auto& w : split_top_commas(args.weights)) space.weights.push_back(parse_value(spec, w));

  auto parse_vars = [](const std::string& s) {
    std::vector<std::string> vs;
    for (const auto& v : split_top_commas(s)) vs.push_back(v);
    return vs;
  };

  RepairResult res = [&] {
    if (args.notion == "nonindep") {
      if (args.xs.empty() || args.ys.empty())
        fail(Errc::InvalidInput, "nonindep repairs need --xs and --ys");
      return repair_min_nonindep(team, parse_vars(args.xs), parse_vars(args.ys), space);
    }
    std::vector<DependencyAtom> constraints;
    for (const auto& c : split_top_commas(args.constraints))
      constraints.push_back(parse_atom(c, Vocabulary{}));
    if (constraints.empty()) fail(Errc::InvalidInput, "repair needs --constraints");
    if (args.notion == "sym") return repair_symmetric(team, constraints, space);
    if (args.notion == "sub") return repair_subteam(team, constraints, space);
    if (args.notion == "super") return repair_superteam(team, constraints, space);
    fail(Errc::InvalidInput, "--notion must be sym, sub, super or nonindep");
  }();

  json repairs = json::array();
  for (const auto& t : res.repairs) repairs.push_back(team_to_json(t));
  out.emit(json{{"notion", res.notion},
                {"distance", res.distance.str()},
                {"exhaustive", res.exhaustive},
                {"repairs", repairs},
                // the repair minimises the distance from the input team over
                // all constraint-satisfying candidates (intended reading of
                // the distance inequality)
                {"reading", "min distance(input, repair) over satisfying candidates"}});
  return kOk;
}

struct AxiomArgs {
  std::string semiring = "rat";
  int samples = 500;
  std::uint64_t seed = 1;
};

json mixing_probe(const SpecPtr& spec, int samples, std::uint64_t seed) {
  Rng rng(seed);
  DependencyAtom xy = parse_atom("indep(;x;y)", {});
  DependencyAtom xy_z = parse_atom("indep(;x,y;z)", {});
  DependencyAtom x_yz = parse_atom("indep(;x;y,z)", {});

  int premise_hits = 0, violations = 0;
  json first_violation = nullptr;
  static const std::vector<std::string> pool{"a", "b", "c"};
  for (int i = 0; i < samples; ++i) {
    int n = 2 + rng.below(2);
    UniversePtr u = Universe::of(std::vector<std::string>(pool.begin(), pool.begin() + n));
    KTeam t({"x", "y", "z"}, u, spec);
    std::size_t grid = tuple_space_size(3, n);
    for (std::size_t r = 0; r < grid; ++r)
      if (rng.chance(1, 2))
        t.set_weight(tuple_unrank(r, 3, n), random_value(rng, spec, false));
    if (!satisfies(t, xy) || !satisfies(t, xy_z)) continue;
    ++premise_hits;
    if (!satisfies(t, x_yz)) {
      ++violations;
      if (first_violation.is_null()) first_violation = team_to_json(t);
    }
  }
  json j{{"semiring", spec->name()},
         {"samples", samples},
         {"premise_hits", premise_hits},
         {"violations", violations}};
  if (!first_violation.is_null()) j["counterexample"] = first_violation;
  return j;
}

int run_axioms(const AxiomArgs& args, const Output& out) {
  SpecPtr spec = specs::parse(args.semiring);
  json j = mixing_probe(spec, args.samples, args.seed);

  bool all_cancellative;
  switch (spec->kind) {
    case SemiringKind::Lukasiewicz: all_cancellative = false; break;
    case SemiringKind::IntMod: {
      all_cancellative = true;
      for (unsigned long a = 1; a < spec->modulus; ++a)
        all_cancellative =
            all_cancellative && is_cancellative(Value::make(spec, static_cast<unsigned long>(a)));
      break;
    }
    default: all_cancellative = true;
  }
  j["all_nonzero_cancellative"] = all_cancellative;

  if (spec->kind == SemiringKind::IntMod && spec->modulus == 4) {
    KTeam t = bundled_mixing_team();
    bool p1 = satisfies(t, parse_atom("indep(;x;y)", {}));
    bool p2 = satisfies(t, parse_atom("indep(;x,y;z)", {}));
    bool c = satisfies(t, parse_atom("indep(;x;y,z)", {}));
    j["bundled_counterexample"] = {{"premises", p1 && p2}, {"conclusion", c},
                                   {"violation", p1 && p2 && !c}};
  }
  out.emit(j);
  int violations = j["violations"].get<int>();
  return violations == 0 || !all_cancellative ? kOk : kUnsat;
}

int run_paper_suite(const Output& out) {
  json items = json::array();
  bool all = true;
  auto item = [&](const std::string& name, bool pass, const std::string& detail) {
    items.push_back({{"name", name}, {"pass", pass}, {"detail", detail}});
    all = all && pass;
  };

  KTeam t1 = bundled_boolean_team();
  KTeam t2 = bundled_natural_team();
  KTeam t3 = bundled_rational_team();
  DependencyAtom ixy = parse_atom("indep(;x;y)", {});
  DependencyAtom dxy = parse_atom("dep(x;y)", {});
  DependencyAtom cxy = parse_atom("inc(x;y)", {});

  Value v1 = eval_atom(t1, ixy);
  item("boolean team satisfies x_|_y with value 1", v1.is_one(), v1.str());
  item("rational team satisfies x_|_y", satisfies(t3, ixy), "");
  item("natural team refutes x_|_y", !satisfies(t2, ixy), "");
  item("natural team satisfies dep(x;y)", satisfies(t2, dxy), "");
  item("boolean team refutes dep(x;y)", !satisfies(t1, dxy), "");
  item("rational team refutes dep(x;y)", !satisfies(t3, dxy), "");
  item("boolean team satisfies inc(x;y)", satisfies(t1, cxy), "");
  item("natural team satisfies inc(x;y)", satisfies(t2, cxy), "");
  item("rational team refutes inc(x;y)", !satisfies(t3, cxy), "");

  {
    Vocabulary vocab;
    vocab.arity["R"] = 2;
    FoPtr eq4 = parse_fo(
        "forall u,v. (exists y. R(u,y)) & (exists x. R(x,v)) = (exists x,y. R(x,y)) & R(u,v)",
        vocab);
    Value v = eval(to_interpretation(t1, "R"), {}, eq4);
    item("pure-independence sentence evaluates to 1 on the boolean team", v.is_one(), v.str());
    Value direct = eval_atom_direct(t1, ixy);
    item("sentence route agrees with the direct route", v == direct, direct.str());
  }

  {
    KTeam z4 = bundled_mixing_team();
    bool p1 = satisfies(z4, parse_atom("indep(;x;y)", {}));
    bool p2 = satisfies(z4, parse_atom("indep(;x,y;z)", {}));
    bool c = satisfies(z4, parse_atom("indep(;x;y,z)", {}));
    item("mixing team satisfies x_|_y", p1, "");
    item("mixing team satisfies xy_|_z", p2, "");
    item("mixing team refutes x_|_yz", !c, "");
  }

  {
    FoPtr th = theta({{1, 2}}, {{"u", "v"}}, "R", 3);
    FoPtr simplified = simplify(th);
    FoPtr expected = fo_exists("x3", fo_rel("R", {"u", "v", "x3"}));
    item("theta projection inlines to a direct lookup", fo_equal(simplified, expected),
         print_fo(simplified));
    FoPtr th_full = theta({{1, 2, 3}}, {{"u", "v", "w"}}, "R", 3);
    item("fully pinned theta collapses to the bare fact",
         fo_equal(simplify(th_full), fo_rel("R", {"u", "v", "w"})), print_fo(simplify(th_full)));
  }

  {
    Value n2 = nonindep(t2, {"x"}, {"y"});
    item("non-independence measure of the natural team is 40",
         n2 == Value::make(specs::natural(), mpz_class(40)), n2.str());
    Value n3 = nonindep(t3, {"x"}, {"y"});
    item("non-independence measure of the rational team is 0", n3.is_zero(), n3.str());
    KTeam zero(t2.domain(), t2.universe(), t2.spec());
    Value d = dist(t2, zero);
    item("distance from the natural team to the zero team is 7",
         d == Value::make(specs::natural(), mpz_class(7)), d.str());
  }

  {
    KTeam collapsed = possibilistic_collapse(t3);
    item("possibilistic collapse of the rational team is the boolean team", collapsed == t1, "");
  }

  out.emit(json{{"items", items}, {"all_pass", all}});
  return all ? kOk : kUnsat;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"semiteam: an exact engine for semiring-weighted teams, dependency atoms,\n"
               "team-logic model checking, constrained polynomials and repairs"};
  app.require_subcommand(1);
  app.fallthrough(); // global flags may follow the subcommand

  Output out;
  std::string format = "json";
  app.add_option("--out", out.path, "write the result to a file instead of stdout");
  app.add_option("--format", format, "output format (json)");

  CheckAtomArgs ca;
  auto* sc_ca = app.add_subcommand("check-atom", "evaluate a dependency atom over a team");
  sc_ca->add_option("--team", ca.team_path, "team CSV")->required();
  sc_ca->add_option("--atom", ca.atom_text, "atom text, e.g. indep(;x;y)")->required();
  sc_ca->add_option("--structure", ca.structure_path, "structure file (needed for literals)");
  sc_ca->add_option("--semiring", ca.semiring, "semiring selection");
  sc_ca->add_option("--universe", ca.universe, "comma-separated universe override");
  sc_ca->add_option("--route", ca.route, "direct (default) or sentence");

  EvalArgs ev;
  auto* sc_ev = app.add_subcommand("eval", "evaluate a sentence under a K-interpretation");
  sc_ev->add_option("--interp", ev.interp_path, "interpretation file");
  sc_ev->add_option("--structure", ev.structure_path, "structure file (canonical interpretation)");
  sc_ev->add_option("--formula", ev.formula, "sentence")->required();
  sc_ev->add_option("--semiring", ev.semiring, "semiring selection");

  TeamcheckArgs tc;
  auto* sc_tc = app.add_subcommand("teamcheck", "K-team semantics model checking");
  sc_tc->add_option("--structure", tc.structure_path, "structure file")->required();
  sc_tc->add_option("--team", tc.team_path, "team CSV")->required();
  sc_tc->add_option("--formula", tc.formula, "team formula")->required();
  sc_tc->add_option("--semiring", tc.semiring, "semiring selection");
  sc_tc->add_option("--strategy", tc.strategy, "exact | denom:<d> | export");
  sc_tc->add_option("--trace", tc.trace_path, "write the witness trace to a JSON file");

  PolyArgs po;
  auto* sc_po = app.add_subcommand("poly", "compile to a constrained polynomial");
  sc_po->add_option("--structure", po.structure_path, "structure file")->required();
  sc_po->add_option("--team", po.team_path, "team CSV")->required();
  sc_po->add_option("--formula", po.formula, "team formula")->required();
  sc_po->add_option("--semiring", po.semiring, "semiring selection");
  sc_po->add_option("--emit", po.emit, "ir | smt2 | count");
  sc_po->add_option("--strategy", po.strategy, "witness strategy for count");

  ProvArgs pr;
  auto* sc_pr = app.add_subcommand("provenance", "provenance polynomials over N[X]");
  sc_pr->add_option("--structure", pr.structure_path, "structure file")->required();
  sc_pr->add_option("--team", pr.team_path, "team CSV")->required();
  sc_pr->add_option("--formula", pr.formula, "team formula")->required();
  sc_pr->add_option("--semiring", pr.semiring, "semiring the team weights are read in");
  sc_pr->add_option("--emit", pr.emit, "poly | specialized");
  sc_pr->add_option("--bind", pr.bind, "token bindings p1=...,p2=...");
  sc_pr->add_option("--target", pr.target, "target semiring for --emit specialized");

  RepairArgs re;
  auto* sc_re = app.add_subcommand("repair", "minimal team repairs");
  sc_re->add_option("--team", re.team_path, "team CSV")->required();
  sc_re->add_option("--semiring", re.semiring, "semiring selection");
  sc_re->add_option("--constraints", re.constraints, "comma-separated atoms");
  sc_re->add_option("--notion", re.notion, "sym | sub | super | nonindep");
  sc_re->add_option("--weights", re.weights, "candidate weights, e.g. 0,1,2,3");
  sc_re->add_option("--xs", re.xs, "left tuple for nonindep");
  sc_re->add_option("--ys", re.ys, "right tuple for nonindep");
  sc_re->add_option("--universe", re.universe, "comma-separated universe override");

  AxiomArgs ax;
  auto* sc_ax = app.add_subcommand("axioms", "sampling probe for the mixing rule");
  sc_ax->add_option("--semiring", ax.semiring, "semiring selection");
  sc_ax->add_option("--samples", ax.samples, "number of random teams");
  sc_ax->add_option("--seed", ax.seed, "random seed");

  auto* sc_ps = app.add_subcommand("paper-suite", "re-derive the bundled worked examples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kError;
  }

  if (format != "json") {
    out.emit(json{{"error", "InvalidInput"}, {"message", "only --format json is supported"}});
    return kError;
  }

  try {
    if (*sc_ca) return run_check_atom(ca, out);
    if (*sc_ev) return run_eval(ev, out);
    if (*sc_tc) return run_teamcheck(tc, out);
    if (*sc_po) return run_poly(po, out);
    if (*sc_pr) return run_provenance(pr, out);
    if (*sc_re) return run_repair(re, out);
    if (*sc_ax) return run_axioms(ax, out);
    if (*sc_ps) return run_paper_suite(out);
  } catch (const Error& e) {
    out.emit(json{{"error", e.code_name()}, {"message", e.what()}});
    return kError;
  } catch (const std::exception& e) {
    out.emit(json{{"error", "InternalError"}, {"message", e.what()}});
    return kError;
  }
  return kError;
}
