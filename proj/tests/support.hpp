#pragma once

// Test-only support: independent oracles (kept deliberately separate from
// the implementation paths they check) and seeded random instance
// generators.

#include <set>

#include "semiteam/formula.hpp"
#include "semiteam/interpretation.hpp"
#include "semiteam/kteam.hpp"
#include "semiteam/random.hpp"

namespace semiteam::testing {

// ---------------------------------------------------------------------------
// Independent Tarski evaluator: classical two-valued first-order semantics
// with native negation (no nnf detour). Comparisons are out of scope here.

inline bool tarski(const Structure& a, Assignment s, const FoPtr& f) {
  switch (f->kind) {
    case FoFormula::Kind::RelLit: {
      std::vector<int> tuple;
      for (const auto& v : f->vars) tuple.push_back(s.at(v));
      bool in = a.holds(f->rel, tuple);
      return f->negated ? !in : in;
    }
    case FoFormula::Kind::EqLit: {
      bool eq = s.at(f->vars[0]) == s.at(f->vars[1]);
      return f->negated ? !eq : eq;
    }
    case FoFormula::Kind::Bot: return false;
    case FoFormula::Kind::Top: return true;
    case FoFormula::Kind::Not: return !tarski(a, s, f->a);
    case FoFormula::Kind::And: return tarski(a, s, f->a) && tarski(a, s, f->b);
    case FoFormula::Kind::Or: return tarski(a, s, f->a) || tarski(a, s, f->b);
    case FoFormula::Kind::Forall: {
      for (int e = 0; e < a.universe->size(); ++e)
        if (!tarski(a, s.extended(f->var, e), f->a)) return false;
      return true;
    }
    case FoFormula::Kind::Exists: {
      for (int e = 0; e < a.universe->size(); ++e)
        if (tarski(a, s.extended(f->var, e), f->a)) return true;
      return false;
    }
    case FoFormula::Kind::Cmp: throw std::logic_error("tarski oracle is for pure FO");
  }
  return false;
}

// ---------------------------------------------------------------------------
// Classical atom satisfaction straight from the textbook quantifier forms.

inline std::vector<int> proj(const Assignment& s, const std::vector<std::string>& vars) {
  std::vector<int> out;
  for (const auto& v : vars) out.push_back(s.at(v));
  return out;
}

inline bool oracle_dep(const std::set<Assignment>& x, const std::vector<std::string>& xs,
                       const std::vector<std::string>& ys) {
  for (const auto& s : x)
    for (const auto& t : x)
      if (proj(s, xs) == proj(t, xs) && proj(s, ys) != proj(t, ys)) return false;
  return true;
}

inline bool oracle_indep(const std::set<Assignment>& x, const std::vector<std::string>& cond,
                         const std::vector<std::string>& ys, const std::vector<std::string>& zs) {
  for (const auto& s : x)
    for (const auto& t : x) {
      if (proj(s, cond) != proj(t, cond)) continue;
      bool found = false;
      for (const auto& u : x) {
        if (proj(u, cond) == proj(s, cond) && proj(u, ys) == proj(s, ys) &&
            proj(u, zs) == proj(t, zs)) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
  return true;
}

inline bool oracle_inc(const std::set<Assignment>& x, const std::vector<std::string>& xs,
                       const std::vector<std::string>& ys) {
  for (const auto& s : x) {
    bool found = false;
    for (const auto& t : x)
      if (proj(s, xs) == proj(t, ys)) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Random instances

inline UniversePtr random_universe(Rng& rng, int max_size) {
  static const std::vector<std::string> pool{"a", "b", "c", "d"};
  int n = 1 + rng.below(max_size);
  return Universe::of(std::vector<std::string>(pool.begin(), pool.begin() + n));
}

inline Structure random_structure(Rng& rng, const UniversePtr& u, const Vocabulary& vocab) {
  Structure a;
  a.universe = u;
  a.vocab = vocab;
  for (const auto& [rel, ar] : vocab.arity) {
    std::set<std::vector<int>> ext;
    std::size_t total = tuple_space_size(ar, u->size());
    for (std::size_t r = 0; r < total; ++r)
      if (rng.chance(1, 2)) ext.insert(tuple_unrank(r, ar, u->size()));
    a.relations[rel] = std::move(ext);
  }
  return a;
}

inline KInterpretation random_model_defining(Rng& rng, const UniversePtr& u,
                                             const Vocabulary& vocab, const SpecPtr& spec) {
  KInterpretation pi(u, vocab, spec);
  for (const auto& [rel, ar] : vocab.arity) {
    std::size_t total = tuple_space_size(ar, u->size());
    for (std::size_t r = 0; r < total; ++r) {
      auto tuple = tuple_unrank(r, ar, u->size());
      bool pos_zero = rng.chance(1, 2);
      pi.set_fact(rel, tuple, pos_zero, Value::zero(spec));
      pi.set_fact(rel, tuple, !pos_zero, random_value(rng, spec, true));
    }
  }
  return pi;
}

struct FoGenConfig {
  int depth = 3;
  bool allow_cmp = false;               // formula (in)equalities
  std::set<FocOp> cmp_ops = foc_all();  // operators to draw from
  bool positive_cmp_only = false;       // keep comparisons out of negation scope
  bool as_sentence = true;              // close over leftover free variables
};

inline FoPtr random_pure_fo(Rng& rng, const Vocabulary& vocab,
                            const std::vector<std::string>& vars, int depth) {
  if (depth <= 0 || rng.chance(1, 4)) {
    // literal
    if (rng.chance(1, 4) && vars.size() >= 2) {
      const auto& x = vars[static_cast<std::size_t>(rng.below(static_cast<int>(vars.size())))];
      const auto& y = vars[static_cast<std::size_t>(rng.below(static_cast<int>(vars.size())))];
      return fo_eq(x, y, rng.chance(1, 2));
    }
    auto it = vocab.arity.begin();
    std::advance(it, rng.below(static_cast<int>(vocab.arity.size())));
    std::vector<std::string> args;
    for (int i = 0; i < it->second; ++i)
      args.push_back(vars[static_cast<std::size_t>(rng.below(static_cast<int>(vars.size())))]);
    return fo_rel(it->first, args, rng.chance(1, 2));
  }
  switch (rng.below(6)) {
    case 0: return fo_and(random_pure_fo(rng, vocab, vars, depth - 1),
                          random_pure_fo(rng, vocab, vars, depth - 1));
    case 1: return fo_or(random_pure_fo(rng, vocab, vars, depth - 1),
                         random_pure_fo(rng, vocab, vars, depth - 1));
    case 2: return fo_not(random_pure_fo(rng, vocab, vars, depth - 1));
    case 3: {
      const auto& v = vars[static_cast<std::size_t>(rng.below(static_cast<int>(vars.size())))];
      return fo_exists(v, random_pure_fo(rng, vocab, vars, depth - 1));
    }
    case 4: {
      const auto& v = vars[static_cast<std::size_t>(rng.below(static_cast<int>(vars.size())))];
      return fo_forall(v, random_pure_fo(rng, vocab, vars, depth - 1));
    }
    default: return fo_not(random_pure_fo(rng, vocab, vars, depth - 1));
  }
}

inline FoPtr random_cmp_node(Rng& rng, const Vocabulary& vocab,
                             const std::vector<std::string>& vars, int depth,
                             const std::set<FocOp>& ops) {
  std::vector<FocOp> pool(ops.begin(), ops.end());
  FocOp pick = pool[static_cast<std::size_t>(rng.below(static_cast<int>(pool.size())))];
  FoPtr lhs = random_pure_fo(rng, vocab, vars, depth);
  switch (pick) {
    case FocOp::IsBot: return fo_cmp(lhs, CmpOp::Eq, fo_bot());
    case FocOp::NotBot: return fo_cmp(lhs, CmpOp::Neq, fo_bot());
    case FocOp::Eq: return fo_cmp(lhs, CmpOp::Eq, random_pure_fo(rng, vocab, vars, depth));
    case FocOp::Neq: return fo_cmp(lhs, CmpOp::Neq, random_pure_fo(rng, vocab, vars, depth));
    case FocOp::Leq: return fo_cmp(lhs, CmpOp::Leq, random_pure_fo(rng, vocab, vars, depth));
    case FocOp::NotLeq: return fo_cmp(lhs, CmpOp::NotLeq, random_pure_fo(rng, vocab, vars, depth));
  }
  return lhs;
}

// Formula with comparisons occurring positively and unnested.
inline FoPtr random_foc(Rng& rng, const Vocabulary& vocab, const std::vector<std::string>& vars,
                        const FoGenConfig& cfg, int depth) {
  if (!cfg.allow_cmp) return random_pure_fo(rng, vocab, vars, depth);
  if (depth <= 0 || rng.chance(1, 3))
    return rng.chance(1, 2) ? random_cmp_node(rng, vocab, vars, std::max(0, depth - 1), cfg.cmp_ops)
                            : random_pure_fo(rng, vocab, vars, depth);
  switch (rng.below(5)) {
    case 0: return fo_and(random_foc(rng, vocab, vars, cfg, depth - 1),
                          random_foc(rng, vocab, vars, cfg, depth - 1));
    case 1: return fo_or(random_foc(rng, vocab, vars, cfg, depth - 1),
                         random_foc(rng, vocab, vars, cfg, depth - 1));
    case 2: {
      const auto& v = vars[static_cast<std::size_t>(rng.below(static_cast<int>(vars.size())))];
      return fo_exists(v, random_foc(rng, vocab, vars, cfg, depth - 1));
    }
    case 3: {
      const auto& v = vars[static_cast<std::size_t>(rng.below(static_cast<int>(vars.size())))];
      return fo_forall(v, random_foc(rng, vocab, vars, cfg, depth - 1));
    }
    default:
      // negation stays legal by wrapping comparison-free subformulae only
      return fo_not(random_pure_fo(rng, vocab, vars, depth - 1));
  }
}

inline FoPtr close_sentence(const FoPtr& f) {
  FoPtr out = f;
  for (const auto& v : free_vars(f)) out = fo_exists(v, out);
  return out;
}

inline FoPtr random_fo(Rng& rng, const Vocabulary& vocab, const FoGenConfig& cfg) {
  static const std::vector<std::string> vars{"x", "y", "z"};
  FoPtr f = random_foc(rng, vocab, vars, cfg, cfg.depth);
  return cfg.as_sentence ? close_sentence(f) : f;
}

inline KTeam random_team(Rng& rng, const UniversePtr& u, const std::vector<std::string>& domain,
                         const SpecPtr& spec, int max_rows) {
  KTeam t(domain, u, spec);
  std::size_t grid = tuple_space_size(static_cast<int>(domain.size()), u->size());
  int rows = rng.below(max_rows + 1);
  for (int i = 0; i < rows; ++i) {
    std::size_t r = static_cast<std::size_t>(rng.below(static_cast<int>(grid)));
    t.set_weight(tuple_unrank(r, static_cast<int>(domain.size()), u->size()),
                 random_value(rng, spec, true));
  }
  return t;
}

struct TeamGenConfig {
  int depth = 3;
  int max_splits = 1;     // disjunction/existential nodes
  int max_foralls = 1;    // universal nodes (they multiply team rows)
  bool atoms = true;      // dependency atoms as leaves
  int fresh_vars = 0;     // counter for fresh quantified variables
};

inline TfPtr random_team_formula(Rng& rng, const Vocabulary& vocab,
                                 std::vector<std::string> vars, TeamGenConfig& cfg, int depth) {
  auto leaf = [&]() -> TfPtr {
    int pick = rng.below(cfg.atoms ? 4 : 2);
    switch (pick) {
      case 0: {
        auto it = vocab.arity.begin();
        std::advance(it, rng.below(static_cast<int>(vocab.arity.size())));
        std::vector<std::string> args;
        for (int i = 0; i < it->second; ++i)
          args.push_back(vars[static_cast<std::size_t>(rng.below(static_cast<int>(vars.size())))]);
        return tf_rel(it->first, args, rng.chance(1, 2));
      }
      case 1: {
        const auto& x = vars[static_cast<std::size_t>(rng.below(static_cast<int>(vars.size())))];
        const auto& y = vars[static_cast<std::size_t>(rng.below(static_cast<int>(vars.size())))];
        return tf_eq(x, y, rng.chance(1, 2));
      }
      case 2: {
        DependencyAtom a;
        a.kind = DependencyAtom::Kind::Dep;
        a.xs = {vars[static_cast<std::size_t>(rng.below(static_cast<int>(vars.size())))]};
        a.ys = {vars[static_cast<std::size_t>(rng.below(static_cast<int>(vars.size())))]};
        return tf_atom(a);
      }
      default: {
        DependencyAtom a;
        if (rng.chance(1, 2)) {
          a.kind = DependencyAtom::Kind::Indep;
          a.ys = {vars[static_cast<std::size_t>(rng.below(static_cast<int>(vars.size())))]};
          a.zs = {vars[static_cast<std::size_t>(rng.below(static_cast<int>(vars.size())))]};
          if (rng.chance(1, 2))
            a.xs = {vars[static_cast<std::size_t>(rng.below(static_cast<int>(vars.size())))]};
        } else {
          a.kind = DependencyAtom::Kind::Inc;
          a.xs = {vars[static_cast<std::size_t>(rng.below(static_cast<int>(vars.size())))]};
          a.ys = {vars[static_cast<std::size_t>(rng.below(static_cast<int>(vars.size())))]};
        }
        return tf_atom(a);
      }
    }
  };
  if (depth <= 0 || rng.chance(1, 3)) return leaf();
  int pick = rng.below(4);
  if (pick == 1 && cfg.max_splits <= 0) pick = 0;
  if (pick == 2 && cfg.max_foralls <= 0) pick = 0;
  switch (pick) {
    case 0:
      return tf_and(random_team_formula(rng, vocab, vars, cfg, depth - 1),
                    random_team_formula(rng, vocab, vars, cfg, depth - 1));
    case 1: {
      --cfg.max_splits;
      if (rng.chance(1, 2))
        return tf_or(random_team_formula(rng, vocab, vars, cfg, depth - 1),
                     random_team_formula(rng, vocab, vars, cfg, depth - 1));
      std::string fresh = "q" + std::to_string(++cfg.fresh_vars);
      auto inner = vars;
      inner.push_back(fresh);
      return tf_exists(fresh, random_team_formula(rng, vocab, inner, cfg, depth - 1));
    }
    case 2: {
      --cfg.max_foralls;
      std::string fresh = "q" + std::to_string(++cfg.fresh_vars);
      auto inner = vars;
      inner.push_back(fresh);
      return tf_forall(fresh, random_team_formula(rng, vocab, inner, cfg, depth - 1));
    }
    default: return leaf();
  }
}

} // namespace semiteam::testing
