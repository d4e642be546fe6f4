#include <doctest.h>

#include "semiteam/teamcheck.hpp"
#include "support.hpp"

using namespace semiteam;
using namespace semiteam::testing;

namespace {

Structure s_structure(const std::vector<std::string>& selems) {
  Structure a;
  a.universe = Universe::of({"a", "b"});
  a.vocab.arity["S"] = 1;
  std::set<std::vector<int>> ext;
  for (const auto& e : selems) ext.insert({a.universe->index_of(e)});
  a.relations["S"] = ext;
  return a;
}

KTeam two_singleton_rows(const SpecPtr& spec, const UniversePtr& u, const std::string& w0,
                         const std::string& w1) {
  KTeam t({"x"}, u, spec);
  t.set_weight({0}, parse_value(spec, w0));
  t.set_weight({1}, parse_value(spec, w1));
  return t;
}

} // namespace

TEST_CASE("boolean excluded-middle split over a two-row team") {
  Structure a = s_structure({"a"});
  KTeam t = two_singleton_rows(specs::boolean(), a.universe, "1", "1");
  TfPtr f = parse_team("S(x) | !S(x)", a.vocab);
  CheckResult r = check(a, t, f, SplitStrategy::exact(), true);
  CHECK(r.satisfied);
  CHECK(r.complete);
  CHECK(replay_trace(a, t, f, r.trace));

  TfPtr lit = parse_team("S(x)", a.vocab);
  CHECK(!check(a, t, lit, SplitStrategy::exact()).satisfied); // x -> b lies outside S
  CHECK(check(a, t, lit, SplitStrategy::exact()).complete);
}

TEST_CASE("natural weights split pointwise across a disjunction") {
  Structure a = s_structure({"a"});
  KTeam t = two_singleton_rows(specs::natural(), a.universe, "2", "3");
  TfPtr f = parse_team("S(x) | !S(x)", a.vocab);
  CHECK(check(a, t, f, SplitStrategy::exact()).satisfied);
  // S(x) alone still fails: the b-row cannot vanish
  CHECK(!check(a, t, parse_team("S(x)", a.vocab), SplitStrategy::exact()).satisfied);
}

TEST_CASE("the empty team satisfies every formula") {
  Structure a = s_structure({"a"});
  KTeam zero({"x"}, a.universe, specs::natural());
  Rng rng(401);
  TeamGenConfig cfg;
  cfg.depth = 3;
  for (int i = 0; i < 60; ++i) {
    TeamGenConfig c = cfg;
    TfPtr f = random_team_formula(rng, a.vocab, {"x"}, c, c.depth);
    CHECK(check(a, zero, f, SplitStrategy::exact()).satisfied);
    CHECK(check_classical(a, {}, f));
  }
}

TEST_CASE("universal quantification copies weights deterministically") {
  Structure a = s_structure({"a", "b"});
  KTeam t({"x"}, a.universe, specs::natural());
  t.set_weight({0}, parse_value(specs::natural(), "2"));
  // forall q. S(q) holds since S is total, regardless of splits
  CHECK(check(a, t, parse_team("forall q. S(q)", a.vocab), SplitStrategy::exact()).satisfied);
  // dep(x;q) fails after the q-extension duplicates the x-row
  CHECK(!check(a, t, parse_team("forall q. dep(x;q)", a.vocab), SplitStrategy::exact()).satisfied);
}

TEST_CASE("K-team checking over booleans equals classical team semantics") {
  Rng rng(409);
  Vocabulary v;
  v.arity["S"] = 1;
  v.arity["R"] = 2;
  int checked = 0;
  for (int i = 0; i < 150; ++i) {
    int n = 2 + rng.below(2);
    UniversePtr u = Universe::of(n == 2 ? std::vector<std::string>{"a", "b"}
                                        : std::vector<std::string>{"a", "b", "c"});
    Structure a = random_structure(rng, u, v);
    KTeam t = random_team(rng, u, {"x", "y"}, specs::boolean(), n == 3 ? 2 : 4);
    TeamGenConfig cfg;
    cfg.depth = 3;
    cfg.max_splits = 1;
    TfPtr f = random_team_formula(rng, v, {"x", "y"}, cfg, cfg.depth);
    bool kteam = check(a, t, f, SplitStrategy::exact()).satisfied;
    bool classical = check_classical(a, collapse_support(t), f);
    CHECK(kteam == classical);
    ++checked;
  }
  CHECK(checked == 150);
}

TEST_CASE("witness traces replay") {
  Rng rng(419);
  Vocabulary v;
  v.arity["S"] = 1;
  int replayed = 0;
  for (int i = 0; i < 100 && replayed < 30; ++i) {
    UniversePtr u = random_universe(rng, 2);
    Structure a = random_structure(rng, u, v);
    KTeam t = random_team(rng, u, {"x"}, specs::natural(), 3);
    TeamGenConfig cfg;
    cfg.depth = 2;
    cfg.max_splits = 1;
    TfPtr f = random_team_formula(rng, v, {"x"}, cfg, cfg.depth);
    CheckResult r = check(a, t, f, SplitStrategy::exact(), true);
    if (!r.satisfied) continue;
    CHECK(replay_trace(a, t, f, r.trace));
    ++replayed;
  }
  CHECK(replayed >= 20);
}

TEST_CASE("denominator-bounded search on rational teams") {
  Structure a = s_structure({"a"});
  KTeam t({"x"}, a.universe, specs::rational());
  t.set_weight({0}, parse_value(specs::rational(), "1/2"));
  t.set_weight({1}, parse_value(specs::rational(), "1/2"));
  TfPtr f = parse_team("S(x) | !S(x)", a.vocab);

  CheckResult r = check(a, t, f, SplitStrategy::denom(2));
  CHECK(r.satisfied);
  CHECK(r.complete); // found witnesses are proofs

  // unsatisfied formulas come back incomplete once grid enumeration ran
  TfPtr g = parse_team("S(x) | S(x)", a.vocab);
  CheckResult rg = check(a, t, g, SplitStrategy::denom(2));
  CHECK(!rg.satisfied);
  CHECK(!rg.complete);

  // literal-only negatives involve no grid search and stay conclusive
  CheckResult rl = check(a, t, parse_team("S(x)", a.vocab), SplitStrategy::denom(2));
  CHECK(!rl.satisfied);
  CHECK(rl.complete);

  // enlarging the bound never flips a positive to a negative
  for (unsigned long d : {2ul, 4ul, 8ul}) {
    CHECK(check(a, t, f, SplitStrategy::denom(d)).satisfied);
  }

  CHECK_THROWS_AS(check(a, t, f, SplitStrategy::exact()), Error);
  SplitStrategy exp;
  exp.mode = SplitStrategy::Mode::ExportOnly;
  CHECK_THROWS_AS(check(a, t, f, exp), Error);
}

TEST_CASE("collapse preservation directions on random rational instances") {
  Rng rng(421);
  Vocabulary v;
  v.arity["S"] = 1;
  int forward_hits = 0, backward_hits = 0;
  for (int i = 0; i < 120; ++i) {
    UniversePtr u = Universe::of({"a", "b"});
    Structure a = random_structure(rng, u, v);
    // quarter-grid weights keep the witness search exact enough for the
    // denominator bound below
    KTeam t({"x"}, u, specs::rational());
    for (int e = 0; e < 2; ++e)
      if (rng.chance(2, 3))
        t.set_weight({e}, parse_value(specs::rational(),
                                      std::to_string(1 + rng.below(4)) + "/4"));

    // forward: indep/inc/lit-definable formulae
    TfPtr fwd = rng.chance(1, 2) ? parse_team("indep(;x;x) | S(x)", v)
                                 : parse_team("S(x) | !S(x)", v);
    auto [kres, cres] = collapse_check(a, t, fwd, SplitStrategy::denom(16));
    if (kres.satisfied) {
      CHECK(cres);
      ++forward_hits;
    }

    // backward under +-density: dep-definable formulae
    TfPtr bwd = rng.chance(1, 2) ? parse_team("dep(x;x) | dep(;x)", v)
                                 : parse_team("!S(x) | dep(;x)", v);
    auto [kres2, cres2] = collapse_check(a, t, bwd, SplitStrategy::denom(16));
    if (cres2) {
      CHECK(kres2.satisfied);
      ++backward_hits;
    }
  }
  CHECK(forward_hits > 10);
  CHECK(backward_hits > 10);
}

TEST_CASE("boolean collapse comparison is the identity") {
  Rng rng(431);
  Vocabulary v;
  v.arity["S"] = 1;
  for (int i = 0; i < 40; ++i) {
    UniversePtr u = Universe::of({"a", "b"});
    Structure a = random_structure(rng, u, v);
    KTeam t = random_team(rng, u, {"x"}, specs::boolean(), 2);
    TeamGenConfig cfg;
    cfg.depth = 2;
    TfPtr f = random_team_formula(rng, v, {"x"}, cfg, cfg.depth);
    auto [k, c] = collapse_check(a, t, f, SplitStrategy::exact());
    CHECK(k.satisfied == c);
  }
}

TEST_CASE("requantifying a domain variable needs fiber-constant weights") {
  // the weighted quantifier clauses constrain all rows of a fiber to carry
  // the same weight; classical semantics instead overwrites the value, so
  // the two readings genuinely diverge here
  Structure a;
  a.universe = Universe::of({"a", "b"});
  a.vocab.arity["S"] = 1;
  a.relations["S"] = {{1}}; // S = {b}
  KTeam t({"x"}, a.universe, specs::boolean());
  t.set_weight({0}, Value::one(specs::boolean())); // x -> a only

  TfPtr f = parse_team("exists x. S(x)", a.vocab);
  CHECK(!check(a, t, f, SplitStrategy::exact()).satisfied);
  CHECK(check_classical(a, collapse_support(t), f)); // classical overwrite succeeds

  // fiber-constant weights make the weighted reading succeed too
  KTeam both({"x"}, a.universe, specs::boolean());
  both.set_weight({0}, Value::one(specs::boolean()));
  both.set_weight({1}, Value::one(specs::boolean()));
  CHECK(check(a, both, f, SplitStrategy::exact()).satisfied);

  TfPtr g = parse_team("forall x. S(x)", a.vocab);
  CHECK(!check(a, both, g, SplitStrategy::exact()).satisfied); // S(a) fails after the copy
}

TEST_CASE("free variables must live in the team domain") {
  Structure a = s_structure({"a"});
  KTeam t({"x"}, a.universe, specs::boolean());
  CHECK_THROWS_AS(check(a, t, parse_team("S(w)", a.vocab), SplitStrategy::exact()), Error);
}

TEST_CASE("inclusion atoms on unordered semirings are rejected up front") {
  // eager rejection keeps the error independent of the search order: a lazy
  // check could otherwise return false without ever touching the atom
  Structure a = s_structure({"a"});
  KTeam t({"x"}, a.universe, specs::int_mod(4));
  t.set_weight({1}, Value::from_uint(specs::int_mod(4), 2));
  TfPtr f = parse_team("S(x) & inc(x;x)", a.vocab); // S(x) alone already fails
  CHECK_THROWS_AS(check(a, t, f, SplitStrategy::exact()), Error);
  try {
    check(a, t, f, SplitStrategy::exact());
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotOrdered);
  }
}
