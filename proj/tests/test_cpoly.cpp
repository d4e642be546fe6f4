#include <doctest.h>

#include <cctype>
#include <sstream>

#include "semiteam/atoms.hpp"
#include "semiteam/cpoly.hpp"
#include "support.hpp"

using namespace semiteam;
using namespace semiteam::testing;

namespace {

Structure s_structure(const std::vector<std::string>& selems,
                      const std::vector<std::string>& universe = {"a", "b"}) {
  Structure a;
  a.universe = Universe::of(universe);
  a.vocab.arity["S"] = 1;
  std::set<std::vector<int>> ext;
  for (const auto& e : selems) ext.insert({a.universe->index_of(e)});
  a.relations["S"] = ext;
  return a;
}

int count_families(const CPolyPtr& p, std::set<int>& fams) {
  if (!p) return 0;
  if (p->kind == CPoly::Kind::TeamVar) fams.insert(p->family);
  for (const auto& c : p->children) count_families(c, fams);
  return static_cast<int>(fams.size());
}

// ---------------------------------------------------------------------------
// A tiny evaluator for the exported SMT-LIB text: s-expression parser plus
// rational arithmetic, used to cross-check export_existential without a
// solver dependency.

struct Sexp {
  std::string atom;
  std::vector<Sexp> list;
  bool is_atom = false;
};

struct SexpParser {
  const std::string& s;
  std::size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  Sexp parse() {
    skip();
    if (s[i] == '(') {
      ++i;
      Sexp e;
      skip();
      while (s[i] != ')') {
        e.list.push_back(parse());
        skip();
      }
      ++i;
      return e;
    }
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '(' &&
           s[i] != ')')
      ++i;
    Sexp e;
    e.is_atom = true;
    e.atom = s.substr(start, i - start);
    return e;
  }
};

struct SmtScript {
  std::string logic;
  std::vector<std::string> vars;
  std::vector<Sexp> asserts;
};

SmtScript parse_script(const std::string& text) {
  SmtScript out;
  SexpParser p{text};
  while (true) {
    p.skip();
    if (p.i >= text.size()) break;
    Sexp e = p.parse();
    REQUIRE(!e.is_atom);
    const std::string& head = e.list[0].atom;
    if (head == "set-logic") out.logic = e.list[1].atom;
    if (head == "declare-const") out.vars.push_back(e.list[1].atom);
    if (head == "assert") out.asserts.push_back(e.list[1]);
  }
  return out;
}

mpq_class eval_term(const Sexp& e, const std::map<std::string, mpq_class>& env);

bool eval_bool(const Sexp& e, const std::map<std::string, mpq_class>& env) {
  if (e.is_atom) {
    if (e.atom == "true") return true;
    if (e.atom == "false") return false;
    throw std::logic_error("unexpected atom " + e.atom);
  }
  const std::string& op = e.list[0].atom;
  if (op == "not") return !eval_bool(e.list[1], env);
  if (op == "and") {
    for (std::size_t i = 1; i < e.list.size(); ++i)
      if (!eval_bool(e.list[i], env)) return false;
    return true;
  }
  if (op == "or") {
    for (std::size_t i = 1; i < e.list.size(); ++i)
      if (eval_bool(e.list[i], env)) return true;
    return false;
  }
  if (op == "=") return eval_term(e.list[1], env) == eval_term(e.list[2], env);
  if (op == "<=") return eval_term(e.list[1], env) <= eval_term(e.list[2], env);
  if (op == ">=") return eval_term(e.list[1], env) >= eval_term(e.list[2], env);
  throw std::logic_error("unexpected operator " + op);
}

mpq_class eval_term(const Sexp& e, const std::map<std::string, mpq_class>& env) {
  if (e.is_atom) {
    auto it = env.find(e.atom);
    if (it != env.end()) return it->second;
    return mpq_class(e.atom);
  }
  const std::string& op = e.list[0].atom;
  if (op == "+") {
    mpq_class acc = 0;
    for (std::size_t i = 1; i < e.list.size(); ++i) acc += eval_term(e.list[i], env);
    return acc;
  }
  if (op == "*") {
    mpq_class acc = 1;
    for (std::size_t i = 1; i < e.list.size(); ++i) acc *= eval_term(e.list[i], env);
    return acc;
  }
  if (op == "/") return eval_term(e.list[1], env) / eval_term(e.list[2], env);
  if (op == "ite") return eval_bool(e.list[1], env) ? eval_term(e.list[2], env)
                                                    : eval_term(e.list[3], env);
  throw std::logic_error("unexpected term operator " + op);
}

// exhaustive satisfiability over integer assignments 0..bound per variable
bool smt_satisfiable_bounded(const SmtScript& sc, int bound) {
  std::map<std::string, mpq_class> env;
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == sc.vars.size()) {
      for (const auto& a : sc.asserts)
        if (!eval_bool(a, env)) return false;
      return true;
    }
    for (int v = 0; v <= bound; ++v) {
      env[sc.vars[i]] = v;
      if (rec(i + 1)) return true;
    }
    return false;
  };
  return rec(0);
}

} // namespace

TEST_CASE("literal compilation has the guarded-product shape") {
  Structure a = s_structure({"a"});
  TfPtr lit = parse_team("S(x)", a.vocab);
  CompiledPoly cp = compile(a, lit, {"x"}, specs::natural());
  REQUIRE(cp.families.size() == 1); // literals add no fresh families

  // one-row team satisfying S: value 1; a row outside S kills the product
  KTeam in({"x"}, a.universe, specs::natural());
  in.set_weight({0}, parse_value(specs::natural(), "2"));
  CHECK(evaluate(cp.root, fix_input(cp, in), cp.spec).is_one());
  KTeam out({"x"}, a.universe, specs::natural());
  out.set_weight({1}, parse_value(specs::natural(), "3"));
  CHECK(evaluate(cp.root, fix_input(cp, out), cp.spec).is_zero());

  // cross-module: the compiled literal at the team's true weights equals the
  // direct literal-atom value
  DependencyAtom lit_atom = parse_atom("S(x)", a.vocab);
  CHECK(evaluate(cp.root, fix_input(cp, in), cp.spec) ==
        eval_atom_direct_in_structure(a, in, lit_atom));
  CHECK(evaluate(cp.root, fix_input(cp, out), cp.spec) ==
        eval_atom_direct_in_structure(a, out, lit_atom));

  // chi nodes themselves evaluate to 0/1
  CPolyPtr chi = cp_chi(cp_const(Value::zero(specs::natural())), CmpOp::Eq,
                        cp_const(Value::zero(specs::natural())));
  Valuation v(cp, cp.spec);
  CHECK(evaluate(chi, v, specs::natural()).is_one());
}

TEST_CASE("conjunction shares the team, disjunction introduces two fresh families") {
  Structure a = s_structure({"a"});
  TfPtr conj = parse_team("S(x) & !S(x)", a.vocab);
  CompiledPoly cp1 = compile(a, conj, {"x"}, specs::natural());
  CHECK(cp1.families.size() == 1);

  TfPtr disj = parse_team("S(x) | !S(x)", a.vocab);
  CompiledPoly cp2 = compile(a, disj, {"x"}, specs::natural());
  REQUIRE(cp2.families.size() == 3);
  CHECK(cp2.families[1].origin == FamilyInfo::Origin::SplitLeft);
  CHECK(cp2.families[2].origin == FamilyInfo::Origin::SplitRight);
  CHECK(cp2.families[1].partner == 2);

  // the two halves mention disjoint fresh families
  REQUIRE(cp2.root->kind == CPoly::Kind::Mul);
  std::set<int> left, right;
  count_families(cp2.root->children[0], left);
  count_families(cp2.root->children[1], right);
  for (int f : left)
    if (f != 0) CHECK(!right.count(f));

  // an all-zero fresh valuation on a nonzero team violates the constraints
  KTeam t({"x"}, a.universe, specs::natural());
  t.set_weight({0}, parse_value(specs::natural(), "2"));
  CHECK(evaluate(cp2.root, fix_input(cp2, t), cp2.spec).is_zero());
}

TEST_CASE("compiled atoms evaluate to the direct atom value at the input weights") {
  Structure a = s_structure({"a"});
  Rng rng(501);
  for (int i = 0; i < 60; ++i) {
    KTeam t = random_team(rng, a.universe, {"x", "y"}, specs::natural(), 4);
    for (const char* text : {"dep(x;y)", "indep(;x;y)", "inc(x;y)"}) {
      DependencyAtom at = parse_atom(text, a.vocab);
      TfPtr f = tf_atom(at);
      CompiledPoly cp = compile(a, f, {"x", "y"}, specs::natural());
      CHECK(evaluate(cp.root, fix_input(cp, t), cp.spec) ==
            eval_atom_direct_in_structure(a, t, at));
    }
  }
}

TEST_CASE("range_nonzero agrees with the operational checker") {
  Rng rng(503);
  Vocabulary v;
  v.arity["S"] = 1;
  for (int i = 0; i < 120; ++i) {
    UniversePtr u = Universe::of({"a", "b"});
    Structure a = random_structure(rng, u, v);
    KTeam t = random_team(rng, u, {"x"}, specs::natural(), 3);
    TeamGenConfig cfg;
    cfg.depth = 2;
    cfg.max_splits = 1;
    TfPtr f = random_team_formula(rng, v, {"x"}, cfg, cfg.depth);
    CompiledPoly cp = compile(a, f, {"x"}, specs::natural());
    CHECK(range_nonzero(cp, t, SplitStrategy::exact()) ==
          check(a, t, f, SplitStrategy::exact()).satisfied);
  }
}

TEST_CASE("range_nonzero over booleans agrees with classical team semantics") {
  Rng rng(509);
  Vocabulary v;
  v.arity["S"] = 1;
  for (int i = 0; i < 120; ++i) {
    UniversePtr u = Universe::of({"a", "b"});
    Structure a = random_structure(rng, u, v);
    KTeam t = random_team(rng, u, {"x"}, specs::boolean(), 3);
    TeamGenConfig cfg;
    cfg.depth = 2;
    cfg.max_splits = 1;
    TfPtr f = random_team_formula(rng, v, {"x"}, cfg, cfg.depth);
    CompiledPoly cp = compile(a, f, {"x"}, specs::boolean());
    CHECK(range_nonzero(cp, t, SplitStrategy::exact()) ==
          check_classical(a, collapse_support(t), f));
  }
}

TEST_CASE("the algebraic route agrees with the checker when quantifiers rebind") {
  Structure a = s_structure({"b"});
  for (const char* text : {"exists x. S(x)", "forall x. S(x)", "exists x. dep(;x)"}) {
    TfPtr f = parse_team(text, a.vocab);
    for (int mask = 0; mask < 4; ++mask) {
      KTeam t({"x"}, a.universe, specs::natural());
      if (mask & 1) t.set_weight({0}, parse_value(specs::natural(), "1"));
      if (mask & 2) t.set_weight({1}, parse_value(specs::natural(), "2"));
      CompiledPoly cp = compile(a, f, {"x"}, specs::natural());
      CHECK(range_nonzero(cp, t, SplitStrategy::exact()) ==
            check(a, t, f, SplitStrategy::exact()).satisfied);
    }
  }
}

TEST_CASE("witness counting matches a brute-force scan of the fresh tables") {
  Structure a = s_structure({"a", "b"}); // S is total here
  TfPtr f = parse_team("S(x) | S(x)", a.vocab);
  CompiledPoly cp = compile(a, f, {"x"}, specs::boolean());
  REQUIRE(cp.families.size() == 3);

  KTeam t({"x"}, a.universe, specs::boolean());
  t.set_weight({0}, Value::one(specs::boolean()));
  t.set_weight({1}, Value::one(specs::boolean()));

  // brute force: all boolean tables for the two fresh families
  std::size_t grid = cp.grid_size(1);
  std::size_t total = static_cast<std::size_t>(1) << (2 * grid);
  mpz_class expected = 0;
  for (std::size_t bits = 0; bits < total; ++bits) {
    Valuation v = fix_input(cp, t);
    for (std::size_t r = 0; r < grid; ++r) {
      v.table(1)[r] = (bits >> r) & 1 ? Value::one(cp.spec) : Value::zero(cp.spec);
      v.table(2)[r] = (bits >> (grid + r)) & 1 ? Value::one(cp.spec) : Value::zero(cp.spec);
    }
    if (!evaluate(cp.root, v, cp.spec).is_zero()) ++expected;
  }
  CHECK(count_witnesses(cp, t, SplitStrategy::exact()) == expected);
  // both rows split three ways each (1 = 1+0 = 0+1 = 1+1 in the booleans)
  CHECK(expected == 9);
}

TEST_CASE("witness counts and range agree on emptiness") {
  Rng rng(521);
  Vocabulary v;
  v.arity["S"] = 1;
  for (int i = 0; i < 80; ++i) {
    UniversePtr u = Universe::of({"a", "b"});
    Structure a = random_structure(rng, u, v);
    KTeam t = random_team(rng, u, {"x"}, specs::boolean(), 2);
    TeamGenConfig cfg;
    cfg.depth = 2;
    cfg.max_splits = 1;
    TfPtr f = random_team_formula(rng, v, {"x"}, cfg, cfg.depth);
    CompiledPoly cp = compile(a, f, {"x"}, specs::boolean());
    bool nonzero = range_nonzero(cp, t, SplitStrategy::exact());
    mpz_class n = count_witnesses(cp, t, SplitStrategy::exact());
    CHECK(nonzero == (n > 0));
  }
}

TEST_CASE("formulae without fresh families count a single empty witness") {
  Structure a = s_structure({"a"});
  TfPtr f = parse_team("S(x)", a.vocab);
  CompiledPoly cp = compile(a, f, {"x"}, specs::boolean());
  KTeam in({"x"}, a.universe, specs::boolean());
  in.set_weight({0}, Value::one(specs::boolean()));
  CHECK(count_witnesses(cp, in, SplitStrategy::exact()) == 1);
  KTeam out({"x"}, a.universe, specs::boolean());
  out.set_weight({1}, Value::one(specs::boolean()));
  CHECK(count_witnesses(cp, out, SplitStrategy::exact()) == 0);
}

TEST_CASE("counting satisfying teams") {
  Structure a = s_structure({});
  a.vocab = {};
  a.relations = {};
  TfPtr dep_refl = parse_team("dep(x;x)", {});
  std::vector<Value> bool_weights{Value::zero(specs::boolean()), Value::one(specs::boolean())};
  CHECK(count_satisfying_teams(a, dep_refl, {"x"}, bool_weights, SplitStrategy::exact()) == 4);

  // dep(;x): all rows share the x-value; over two singleton rows that
  // forbids exactly the team with both rows present
  TfPtr dep_const = parse_team("dep(;x)", {});
  CHECK(count_satisfying_teams(a, dep_const, {"x"}, bool_weights, SplitStrategy::exact()) == 3);

  // brute-force cross-check against the classical checker
  Structure b = s_structure({"a"});
  TfPtr f = parse_team("S(x) | dep(;x)", b.vocab);
  mpz_class direct = 0;
  for (int bits = 0; bits < 4; ++bits) {
    std::set<Assignment> rows;
    if (bits & 1) rows.insert(Assignment{{{"x", 0}}});
    if (bits & 2) rows.insert(Assignment{{{"x", 1}}});
    if (check_classical(b, rows, f)) ++direct;
  }
  CHECK(count_satisfying_teams(b, f, {"x"}, bool_weights, SplitStrategy::exact()) == direct);
}

TEST_CASE("evaluation of chi-free polynomials commutes with homomorphisms") {
  // build Add/Mul/Const/TeamVar trees by hand; transporting the constants
  // and the valuation through h commutes with evaluation
  Structure a = s_structure({"a"});
  TfPtr lit = parse_team("S(x)", a.vocab);
  CompiledPoly frame = compile(a, lit, {"x"}, specs::natural()); // registry donor
  Homomorphism h = Homomorphism::nat_to_rat();

  Rng rng(541);
  for (int round = 0; round < 60; ++round) {
    std::function<CPolyPtr(int)> build = [&](int depth) -> CPolyPtr {
      if (depth == 0 || rng.chance(1, 3)) {
        if (rng.chance(1, 2)) return cp_const(random_value(rng, specs::natural()));
        return cp_var(0, {rng.below(2)});
      }
      std::vector<CPolyPtr> kids{build(depth - 1), build(depth - 1)};
      return rng.chance(1, 2) ? cp_add(std::move(kids)) : cp_mul(std::move(kids));
    };
    CPolyPtr p = build(3);

    Valuation v(frame, specs::natural());
    v.set(0, {0}, random_value(rng, specs::natural()));
    v.set(0, {1}, random_value(rng, specs::natural()));
    Valuation vq(frame, specs::rational());
    vq.set(0, {0}, hom_apply(h, v.at(0, {0})));
    vq.set(0, {1}, hom_apply(h, v.at(0, {1})));

    std::function<CPolyPtr(const CPolyPtr&)> map_consts = [&](const CPolyPtr& q) -> CPolyPtr {
      if (q->kind == CPoly::Kind::Const) return cp_const(hom_apply(h, q->cval));
      if (q->kind == CPoly::Kind::TeamVar) return q;
      std::vector<CPolyPtr> kids;
      for (const auto& c : q->children) kids.push_back(map_consts(c));
      return q->kind == CPoly::Kind::Add ? cp_add(std::move(kids)) : cp_mul(std::move(kids));
    };
    CHECK(hom_apply(h, evaluate(p, v, specs::natural())) ==
          evaluate(map_consts(p), vq, specs::rational()));
  }
}

TEST_CASE("the printed IR is deterministic s-expression text") {
  Structure a = s_structure({"a"});
  TfPtr f = parse_team("S(x) | !S(x)", a.vocab);
  CompiledPoly cp1 = compile(a, f, {"x"}, specs::natural());
  CompiledPoly cp2 = compile(a, f, {"x"}, specs::natural());
  CHECK(print_cpoly(cp1) == print_cpoly(cp2));
  CHECK(print_cpoly(cp1).find("(chi=") != std::string::npos);
  CHECK(print_cpoly(cp1).find("Y1(") != std::string::npos);
}

TEST_CASE("SMT export is bit-stable and matches the witness search") {
  Rng rng(523);
  Vocabulary v;
  v.arity["S"] = 1;
  int agreements = 0;
  for (int i = 0; i < 40; ++i) {
    UniversePtr u = Universe::of({"a", "b"});
    Structure a = random_structure(rng, u, v);
    KTeam t = random_team(rng, u, {"x"}, specs::natural(), 2);
    TeamGenConfig cfg;
    cfg.depth = 2;
    cfg.max_splits = 1;
    cfg.max_foralls = 0; // keep the bounded SMT enumeration small
    TfPtr f = random_team_formula(rng, v, {"x"}, cfg, cfg.depth);
    CompiledPoly cp = compile(a, f, {"x"}, specs::natural());
    std::string text = export_existential(cp, t);
    CHECK(text == export_existential(cp, t));

    SmtScript sc = parse_script(text);
    CHECK(!sc.logic.empty());
    // natural witnesses are bounded by the largest input weight
    bool sat = smt_satisfiable_bounded(sc, 8);
    bool range = range_nonzero(cp, t, SplitStrategy::exact());
    CHECK(sat == range);
    ++agreements;
  }
  CHECK(agreements == 40);
}

TEST_CASE("compilation rejects inclusion atoms on unordered semirings") {
  Structure a = s_structure({"a"});
  TfPtr f = parse_team("S(x) | inc(x;x)", a.vocab);
  CHECK_THROWS_AS(compile(a, f, {"x"}, specs::int_mod(4)), Error);
  CHECK_NOTHROW(compile(a, f, {"x"}, specs::natural()));
}

TEST_CASE("export rejects unsupported semirings and names variables canonically") {
  Structure a = s_structure({"a"});
  TfPtr f = parse_team("S(x) | S(x)", a.vocab);
  CompiledPoly cp = compile(a, f, {"x"}, specs::boolean());
  KTeam t({"x"}, a.universe, specs::boolean());
  CHECK_THROWS_AS(export_existential(cp, t), Error);

  CompiledPoly cpn = compile(a, f, {"x"}, specs::natural());
  KTeam tn({"x"}, a.universe, specs::natural());
  tn.set_weight({0}, parse_value(specs::natural(), "2"));
  std::string text = export_existential(cpn, tn);
  CHECK(text.find("(declare-const y1_a Int)") != std::string::npos);
  CHECK(text.find("(declare-const y2_b Int)") != std::string::npos);
  CHECK(text.find("(set-logic QF_LIA)") != std::string::npos);
  CHECK(text.find("(check-sat)") != std::string::npos);
}

TEST_CASE("a single-literal export lists the failing-row zero constraints") {
  Structure a = s_structure({"a"});
  TfPtr f = parse_team("S(x)", a.vocab);
  CompiledPoly cp = compile(a, f, {"x"}, specs::natural());
  KTeam t({"x"}, a.universe, specs::natural());
  t.set_weight({1}, parse_value(specs::natural(), "3"));
  std::string text = export_existential(cp, t);
  // the b-row fails S, and its weight 3 makes the assertion unsatisfiable
  SmtScript sc = parse_script(text);
  CHECK(sc.vars.empty());
  CHECK(!smt_satisfiable_bounded(sc, 4));
}
