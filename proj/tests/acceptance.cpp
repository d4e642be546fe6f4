// Acceptance suite: one line per criterion, nonzero exit when any fails.
#include <chrono>
#include <cstdio>
#include <functional>

#include "semiteam/atoms.hpp"
#include "semiteam/bundled.hpp"
#include "semiteam/cpoly.hpp"
#include "semiteam/repairs.hpp"
#include "support.hpp"

using namespace semiteam;
using namespace semiteam::testing;

namespace {

int failures = 0;

void criterion(int number, const char* name, const std::function<bool()>& body,
               double max_seconds = 0.0) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string error;
  try {
    ok = body();
  } catch (const std::exception& e) {
    error = e.what();
  }
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (max_seconds > 0 && dt > max_seconds) ok = false;
  if (!ok) ++failures;
  std::printf("%s  criterion-%02d  %-34s  %6.2fs%s%s\n", ok ? "PASS" : "FAIL", number, name, dt,
              error.empty() ? "" : "  error: ", error.c_str());
  std::fflush(stdout);
}

DependencyAtom atom(const std::string& text) { return parse_atom(text, {}); }

Vocabulary rs_vocab() {
  Vocabulary v;
  v.arity["R"] = 2;
  v.arity["S"] = 1;
  return v;
}

// ---------------------------------------------------------------------------

bool worked_example_matrix() {
  KTeam x1 = bundled_boolean_team();
  KTeam x2 = bundled_natural_team();
  KTeam x3 = bundled_rational_team();
  DependencyAtom ixy = atom("indep(;x;y)");
  DependencyAtom dxy = atom("dep(x;y)");
  bool ok = true;
  ok = ok && eval_atom(x1, ixy).is_one();   // satisfied with value exactly 1
  ok = ok && satisfies(x3, ixy);
  ok = ok && !satisfies(x2, ixy);
  ok = ok && satisfies(x2, dxy);
  ok = ok && !satisfies(x1, dxy);
  ok = ok && !satisfies(x3, dxy);
  // the two routes agree on all six verdicts
  for (const KTeam* t : {&x1, &x2, &x3}) {
    ok = ok && (eval_atom(*t, ixy).is_zero() == eval_atom_direct(*t, ixy).is_zero());
    ok = ok && (eval_atom(*t, dxy).is_zero() == eval_atom_direct(*t, dxy).is_zero());
  }
  return ok;
}

bool z4_mixing_counterexample() {
  KTeam t = bundled_mixing_team();
  return satisfies(t, atom("indep(;x;y)")) && satisfies(t, atom("indep(;x,y;z)")) &&
         !satisfies(t, atom("indep(;x;y,z)"));
}

bool b_equivalences() {
  Rng rng(9001);
  Vocabulary v = rs_vocab();
  FoGenConfig cfg;
  cfg.depth = 4;
  cfg.allow_cmp = true;
  for (int i = 0; i < 200; ++i) {
    UniversePtr u = random_universe(rng, 3);
    KInterpretation pi = random_model_defining(rng, u, v, specs::boolean());
    FoPtr phi = random_fo(rng, v, cfg);
    FoPtr psi = random_fo(rng, v, cfg);
    if (eval(pi, {}, fo_cmp(phi, CmpOp::Leq, psi)) != eval(pi, {}, fo_implies(phi, psi)))
      return false;
    if (eval(pi, {}, fo_cmp(phi, CmpOp::Eq, psi)) != eval(pi, {}, fo_iff(phi, psi))) return false;
  }
  return true;
}

bool homomorphism_transport() {
  Rng rng(9002);
  Vocabulary v = rs_vocab();
  FoGenConfig cfg;
  cfg.depth = 3;

  struct Case {
    SpecPtr source;
    Homomorphism h;
  };
  std::vector<Case> cases;
  for (const auto& src : {specs::boolean(), specs::natural(), specs::rational(),
                          specs::prov_poly({"p", "q"})})
    cases.push_back({src, Homomorphism::characteristic_map(src)});
  cases.push_back({specs::natural(), Homomorphism::mod_reduction(4)});
  cases.push_back({specs::natural(), Homomorphism::nat_to_rat()});
  cases.push_back({specs::prov_poly({"p", "q"}),
                   Homomorphism::poly_eval(specs::prov_poly({"p", "q"}), specs::natural(),
                                           {{"p", parse_value(specs::natural(), "2")},
                                            {"q", parse_value(specs::natural(), "3")}})});

  for (int i = 0; i < 200; ++i) {
    const Case& c = cases[static_cast<std::size_t>(i) % cases.size()];
    UniversePtr u = random_universe(rng, 3);
    KInterpretation pi = random_model_defining(rng, u, v, c.source);
    KInterpretation image = transport(c.h, pi);
    FoPtr f = random_fo(rng, v, cfg);
    if (hom_apply(c.h, eval(pi, {}, f)) != eval(image, {}, f)) return false;
  }
  return true;
}

bool canonical_truth_oracle() {
  Rng rng(9003);
  Vocabulary v = rs_vocab();
  FoGenConfig cfg;
  cfg.depth = 3;
  for (int i = 0; i < 500; ++i) {
    UniversePtr u = random_universe(rng, 3);
    Structure a = random_structure(rng, u, v);
    FoPtr f = random_fo(rng, v, cfg);
    if (tarski(a, {}, f) != eval(canonical_interpretation(a), {}, f).is_one()) return false;
  }
  return true;
}

bool team_semantics_agreement() {
  Rng rng(9004);
  Vocabulary v;
  v.arity["S"] = 1;
  v.arity["R"] = 2;
  for (int i = 0; i < 500; ++i) {
    int n = 2 + rng.below(2);
    UniversePtr u = Universe::of(n == 2 ? std::vector<std::string>{"a", "b"}
                                        : std::vector<std::string>{"a", "b", "c"});
    Structure a = random_structure(rng, u, v);
    KTeam t = random_team(rng, u, {"x", "y"}, specs::boolean(), n == 3 ? 2 : 4);
    TeamGenConfig cfg;
    cfg.depth = 3;
    TfPtr f = random_team_formula(rng, v, {"x", "y"}, cfg, cfg.depth);
    bool kteam = check(a, t, f, SplitStrategy::exact()).satisfied;
    bool classical = check_classical(a, collapse_support(t), f);
    if (kteam != classical) return false;
  }
  return true;
}

bool algebraic_equals_operational() {
  Rng rng(9005);
  Vocabulary v;
  v.arity["S"] = 1;
  for (int i = 0; i < 500; ++i) {
    UniversePtr u = Universe::of({"a", "b"});
    Structure a = random_structure(rng, u, v);
    // weights at most 3
    KTeam t({"x"}, u, specs::natural());
    for (int e = 0; e < 2; ++e)
      if (rng.chance(2, 3)) t.set_weight({e}, Value::from_uint(specs::natural(),
                                                               1 + static_cast<unsigned long>(rng.below(3))));
    TeamGenConfig cfg;
    cfg.depth = 2;
    TfPtr f = random_team_formula(rng, v, {"x"}, cfg, cfg.depth);
    CompiledPoly cp = compile(a, f, {"x"}, specs::natural());
    if (range_nonzero(cp, t, SplitStrategy::exact()) !=
        check(a, t, f, SplitStrategy::exact()).satisfied)
      return false;
  }
  return true;
}

bool collapse_preservation() {
  Rng rng(9006);
  Vocabulary v;
  v.arity["S"] = 1;
  std::vector<std::string> forward{"indep(;x;x) | S(x)", "S(x) | !S(x)", "inc(x;x) & S(x)",
                                   "exists q. indep(;x;q) & S(x)"};
  std::vector<std::string> backward{"dep(x;x) | dep(;x)", "!S(x) | dep(;x)", "dep(;x) | dep(;x)",
                                    "S(x) & dep(x;x)"};
  int fwd_hits = 0, bwd_hits = 0;
  for (int i = 0; i < 500; ++i) {
    UniversePtr u = Universe::of({"a", "b"});
    Structure a = random_structure(rng, u, v);
    KTeam t({"x"}, u, specs::rational());
    for (int e = 0; e < 2; ++e)
      if (rng.chance(2, 3))
        t.set_weight({e},
                     parse_value(specs::rational(), std::to_string(1 + rng.below(4)) + "/4"));

    TfPtr f = parse_team(forward[static_cast<std::size_t>(rng.below(4))], v);
    auto [kf, cf] = collapse_check(a, t, f, SplitStrategy::denom(32));
    if (kf.satisfied) {
      ++fwd_hits;
      if (!cf) return false;
    }

    TfPtr g = parse_team(backward[static_cast<std::size_t>(rng.below(4))], v);
    auto [kb, cb] = collapse_check(a, t, g, SplitStrategy::denom(32));
    if (cb) {
      ++bwd_hits;
      if (!kb.satisfied) return false;
    }
  }
  return fwd_hits > 50 && bwd_hits > 50; // the probe must not be vacuous
}

bool mixing_soundness() {
  DependencyAtom xy = atom("indep(;x;y)");
  DependencyAtom xy_z = atom("indep(;x,y;z)");
  DependencyAtom x_yz = atom("indep(;x;y,z)");
  for (const auto& spec : {specs::boolean(), specs::natural(), specs::rational()}) {
    Rng rng(9007);
    for (int i = 0; i < 500; ++i) {
      UniversePtr u = random_universe(rng, 3);
      KTeam t = random_team(rng, u, {"x", "y", "z"}, spec, 5);
      if (satisfies(t, xy) && satisfies(t, xy_z) && !satisfies(t, x_yz)) return false;
    }
  }
  // and the bundled Z4 team is a genuine violation
  return z4_mixing_counterexample();
}

bool repair_criteria() {
  if (nonindep(bundled_natural_team(), {"x"}, {"y"}) != parse_value(specs::natural(), "40"))
    return false;
  if (!nonindep(bundled_rational_team(), {"x"}, {"y"}).is_zero()) return false;

  // exhaustive: every boolean team over |A| = 2, domain {x, y}
  UniversePtr u = Universe::of({"a", "b"});
  RepairSpace space;
  space.weights = {Value::zero(specs::boolean()), Value::one(specs::boolean())};
  std::vector<std::vector<DependencyAtom>> constraint_sets{{atom("dep(x;y)")},
                                                           {atom("inc(x;y)")}};
  for (std::size_t mask = 0; mask < 16; ++mask) {
    KTeam x({"x", "y"}, u, specs::boolean());
    for (std::size_t r = 0; r < 4; ++r)
      if (mask & (static_cast<std::size_t>(1) << r))
        x.set_weight(tuple_unrank(r, 2, 2), Value::one(specs::boolean()));
    for (const auto& cs : constraint_sets) {
      RepairResult res = repair_symmetric(x, cs, space);
      // oracle: minimal symmetric-difference cardinality by full scan
      std::set<std::vector<int>> xrows;
      for (const auto& [t, w] : x.weights()) xrows.insert(t);
      std::size_t best = SIZE_MAX;
      std::vector<std::set<std::vector<int>>> winners;
      for (std::size_t cand = 0; cand < 16; ++cand) {
        std::set<Assignment> as;
        std::set<std::vector<int>> rows;
        for (std::size_t r = 0; r < 4; ++r)
          if (cand & (static_cast<std::size_t>(1) << r)) {
            auto tup = tuple_unrank(r, 2, 2);
            rows.insert(tup);
            Assignment s;
            s.map["x"] = tup[0];
            s.map["y"] = tup[1];
            as.insert(s);
          }
        bool ok = cs[0].kind == DependencyAtom::Kind::Dep ? oracle_dep(as, {"x"}, {"y"})
                                                          : oracle_inc(as, {"x"}, {"y"});
        if (!ok) continue;
        std::set<std::vector<int>> sym;
        std::set_symmetric_difference(rows.begin(), rows.end(), xrows.begin(), xrows.end(),
                                      std::inserter(sym, sym.begin()));
        if (sym.size() < best) {
          best = sym.size();
          winners.clear();
        }
        if (sym.size() == best) winners.push_back(rows);
      }
      if (res.repairs.size() != winners.size()) return false;
      if (res.distance != Value::from_uint(specs::natural(), best)) return false;
      for (std::size_t k = 0; k < winners.size(); ++k) {
        std::set<std::vector<int>> got;
        for (const auto& [t, w] : res.repairs[k].weights()) got.insert(t);
        if (got != winners[k]) return false;
      }
    }
  }
  return true;
}

bool semiring_kernel() {
  std::vector<SpecPtr> kinds{specs::boolean(),     specs::natural(),  specs::rational(),
                             specs::tropical(),    specs::lukasiewicz(), specs::int_mod(4),
                             specs::prov_poly({"p", "q"})};
  Rng rng(9008);
  for (const auto& s : kinds) {
    for (int i = 0; i < 1000; ++i) {
      Value a = random_value(rng, s);
      Value b = random_value(rng, s);
      Value c = random_value(rng, s);
      if (!(add(a, b) == add(b, a))) return false;
      if (!(mul(a, b) == mul(b, a))) return false;
      if (!(add(add(a, b), c) == add(a, add(b, c)))) return false;
      if (!(mul(mul(a, b), c) == mul(a, mul(b, c)))) return false;
      if (!(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)))) return false;
      if (!(add(a, Value::zero(s)) == a)) return false;
      if (!(mul(a, Value::one(s)) == a)) return false;
      if (!mul(a, Value::zero(s)).is_zero()) return false;
    }
    // positivity corresponds to the characteristic map being a homomorphism
    bool hom = true;
    for (int i = 0; i < 400; ++i) {
      Value a = random_value(rng, s);
      Value b = random_value(rng, s);
      hom = hom &&
            characteristic(add(a, b)).as_bool() ==
                (characteristic(a).as_bool() || characteristic(b).as_bool()) &&
            characteristic(mul(a, b)).as_bool() ==
                (characteristic(a).as_bool() && characteristic(b).as_bool());
    }
    if (s->positive() && !hom) return false;
    if (!s->positive()) {
      // exhibit a violation explicitly for the shipped non-positive kinds
      if (s->kind == SemiringKind::IntMod) {
        Value two = Value::from_uint(s, 2);
        bool add_breaks = !characteristic(Value::from_uint(s, s->modulus)).as_bool();
        bool mul_breaks = s->modulus == 4 && characteristic(mul(two, two)).as_bool() !=
                                                 (characteristic(two).as_bool() &&
                                                  characteristic(two).as_bool());
        if (!(add_breaks || mul_breaks)) return false;
      }
      if (s->kind == SemiringKind::Lukasiewicz) {
        Value half = parse_value(s, "1/2");
        if (characteristic(mul(half, half)).as_bool()) return false;
      }
    }
  }
  return true;
}

} // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion(1, "worked-example-matrix", worked_example_matrix, 1.0);
  criterion(2, "z4-mixing-counterexample", z4_mixing_counterexample, 1.0);
  criterion(3, "boolean-comparison-equivalences", b_equivalences);
  criterion(4, "homomorphism-transport", homomorphism_transport);
  criterion(5, "canonical-truth-oracle", canonical_truth_oracle);
  criterion(6, "team-semantics-agreement", team_semantics_agreement);
  criterion(7, "algebraic-equals-operational", algebraic_equals_operational);
  criterion(8, "collapse-preservation", collapse_preservation);
  criterion(9, "mixing-soundness-probe", mixing_soundness);
  criterion(10, "repairs", repair_criteria);
  criterion(11, "semiring-kernel", semiring_kernel);
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
