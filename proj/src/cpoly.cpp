#include "semiteam/cpoly.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>

#include "semiteam/atoms.hpp"

namespace semiteam {

CPolyPtr cp_const(Value v) {
  auto p = std::make_shared<CPoly>();
  p->kind = CPoly::Kind::Const;
  p->cval = std::move(v);
  return p;
}
CPolyPtr cp_var(int family, std::vector<int> tuple) {
  auto p = std::make_shared<CPoly>();
  p->kind = CPoly::Kind::TeamVar;
  p->family = family;
  p->tuple = std::move(tuple);
  return p;
}
CPolyPtr cp_add(std::vector<CPolyPtr> children) {
  auto p = std::make_shared<CPoly>();
  p->kind = CPoly::Kind::Add;
  p->children = std::move(children);
  return p;
}
CPolyPtr cp_mul(std::vector<CPolyPtr> children) {
  auto p = std::make_shared<CPoly>();
  p->kind = CPoly::Kind::Mul;
  p->children = std::move(children);
  return p;
}
CPolyPtr cp_chi(CPolyPtr l, CmpOp op, CPolyPtr r) {
  auto p = std::make_shared<CPoly>();
  p->kind = CPoly::Kind::Chi;
  p->op = op;
  p->children = {std::move(l), std::move(r)};
  return p;
}

std::size_t CompiledPoly::grid_size(int family) const {
  return tuple_space_size(static_cast<int>(families[static_cast<std::size_t>(family)].domain.size()),
                          universe->size());
}

Valuation::Valuation(const CompiledPoly& cp, const SpecPtr& spec) : base_(cp.universe->size()) {
  tables_.reserve(cp.families.size());
  for (std::size_t i = 0; i < cp.families.size(); ++i)
    tables_.emplace_back(cp.grid_size(static_cast<int>(i)), Value::zero(spec));
}

const Value& Valuation::at(int family, const std::vector<int>& tuple) const {
  const auto& t = tables_[static_cast<std::size_t>(family)];
  std::size_t r = tuple_rank(tuple, base_);
  if (r >= t.size()) fail(Errc::MissingVariable, "team variable outside its family grid");
  return t[r];
}

void Valuation::set(int family, const std::vector<int>& tuple, Value v) {
  auto& t = tables_[static_cast<std::size_t>(family)];
  std::size_t r = tuple_rank(tuple, base_);
  if (r >= t.size()) fail(Errc::MissingVariable, "team variable outside its family grid");
  t[r] = std::move(v);
}

// ---------------------------------------------------------------------------
// Compilation

namespace {

using Tuple = std::vector<int>;

struct Compiler {
  const Structure& a;
  const SpecPtr& spec;
  bool prov_literals = false;
  std::vector<FamilyInfo> families;

  int add_family(FamilyInfo info) {
    families.push_back(std::move(info));
    return static_cast<int>(families.size()) - 1;
  }

  std::size_t grid(int fam) const {
    return tuple_space_size(static_cast<int>(families[static_cast<std::size_t>(fam)].domain.size()),
                            a.universe->size());
  }

  Tuple unrank(int fam, std::size_t r) const {
    return tuple_unrank(r, static_cast<int>(families[static_cast<std::size_t>(fam)].domain.size()),
                        a.universe->size());
  }

  // Tarski truth of a first-order literal at the assignment encoded by a
  // family tuple, folded in as a 0/1 constant of the team's semiring.
  CPolyPtr literal_const(const TfPtr& lit, const std::vector<std::string>& domain,
                         const Tuple& row) const {
    Assignment s;
    for (std::size_t i = 0; i < domain.size(); ++i) s.map[domain[i]] = row[i];
    bool holds;
    if (lit->kind == TeamFormula::Kind::RelLit) {
      std::vector<int> tuple;
      for (const auto& v : lit->vars) tuple.push_back(s.at(v));
      holds = a.holds(lit->rel, tuple);
    } else {
      holds = s.at(lit->vars[0]) == s.at(lit->vars[1]);
    }
    if (lit->negated) holds = !holds;
    return cp_const(holds ? Value::one(spec) : Value::zero(spec));
  }

  CPolyPtr compile_literal(const TfPtr& lit, int fam) {
    const auto& dom = families[static_cast<std::size_t>(fam)].domain;
    std::vector<CPolyPtr> factors;
    std::size_t n = grid(fam);
    factors.reserve(n);
    CPolyPtr zero = cp_const(Value::zero(spec));
    for (std::size_t r = 0; r < n; ++r) {
      Tuple row = unrank(fam, r);
      CPolyPtr w = cp_var(fam, row);
      CPolyPtr carrier = prov_literals ? w : cp_chi(w, CmpOp::Neq, zero);
      factors.push_back(cp_add({cp_chi(w, CmpOp::Eq, zero),
                                cp_mul({carrier, literal_const(lit, dom, row)})}));
    }
    return cp_mul(std::move(factors));
  }

  // Symbolic compositional evaluation of an atom's defining sentence under
  // pi_{A,X} with the team weights as variables.
  CPolyPtr symbolic_eval(const FoPtr& f, Assignment& s, int fam, const std::string& team_rel) {
    switch (f->kind) {
      case FoFormula::Kind::RelLit: {
        Tuple tuple;
        for (const auto& v : f->vars) tuple.push_back(s.at(v));
        if (f->rel == team_rel) {
          if (!f->negated) return cp_var(fam, tuple);
          // negated team facts carry the chi-complement of the weight
          return cp_chi(cp_var(fam, tuple), CmpOp::Eq, cp_const(Value::zero(spec)));
        }
        bool in = a.holds(f->rel, tuple);
        if (f->negated) in = !in;
        return cp_const(in ? Value::one(spec) : Value::zero(spec));
      }
      case FoFormula::Kind::EqLit: {
        bool eq = s.at(f->vars[0]) == s.at(f->vars[1]);
        if (f->negated) eq = !eq;
        return cp_const(eq ? Value::one(spec) : Value::zero(spec));
      }
      case FoFormula::Kind::Bot: return cp_const(Value::zero(spec));
      case FoFormula::Kind::Top: return cp_const(Value::one(spec));
      case FoFormula::Kind::And:
        return cp_mul({symbolic_eval(f->a, s, fam, team_rel), symbolic_eval(f->b, s, fam, team_rel)});
      case FoFormula::Kind::Or:
        return cp_add({symbolic_eval(f->a, s, fam, team_rel), symbolic_eval(f->b, s, fam, team_rel)});
      case FoFormula::Kind::Forall:
      case FoFormula::Kind::Exists: {
        std::vector<CPolyPtr> parts;
        auto it = s.map.find(f->var);
        std::optional<int> saved;
        if (it != s.map.end()) saved = it->second;
        for (int e = 0; e < a.universe->size(); ++e) {
          s.map[f->var] = e;
          parts.push_back(symbolic_eval(f->a, s, fam, team_rel));
        }
        if (saved)
          s.map[f->var] = *saved;
        else
          s.map.erase(f->var);
        return f->kind == FoFormula::Kind::Forall ? cp_mul(std::move(parts))
                                                  : cp_add(std::move(parts));
      }
      case FoFormula::Kind::Not: return symbolic_eval(nnf(fo_not(f->a)), s, fam, team_rel);
      case FoFormula::Kind::Cmp:
        return cp_chi(symbolic_eval(f->a, s, fam, team_rel), f->op,
                      symbolic_eval(f->b, s, fam, team_rel));
    }
    fail(Errc::InvalidInput, "bad formula node");
  }

  CPolyPtr compile_atom(const DependencyAtom& atom, int fam) {
    const auto& dom = families[static_cast<std::size_t>(fam)].domain;
    if (atom.kind == DependencyAtom::Kind::Lit && !a.vocab.has(atom.rel))
      fail(Errc::UnknownSymbol, "literal relation '" + atom.rel + "' not in structure vocabulary");
    std::string team_rel = "R";
    while (a.vocab.has(team_rel)) team_rel += "_t";
    FoPtr sentence = atom_sentence(atom, dom, team_rel);
    Assignment s;
    return symbolic_eval(sentence, s, fam, team_rel);
  }

  CPolyPtr rec(const TfPtr& f, int fam) {
    switch (f->kind) {
      case TeamFormula::Kind::RelLit:
      case TeamFormula::Kind::EqLit: return compile_literal(f, fam);
      case TeamFormula::Kind::Atom: return compile_atom(f->atom, fam);
      case TeamFormula::Kind::And: return cp_mul({rec(f->a, fam), rec(f->b, fam)});
      case TeamFormula::Kind::Or: {
        // copy: add_family may reallocate the registry
        const std::vector<std::string> dom = families[static_cast<std::size_t>(fam)].domain;
        FamilyInfo yi{"Y" + std::to_string(families.size()), dom, FamilyInfo::Origin::SplitLeft,
                      fam, -1, "", false};
        int y = add_family(yi);
        FamilyInfo zi{"Y" + std::to_string(families.size()), dom, FamilyInfo::Origin::SplitRight,
                      fam, y, "", false};
        int z = add_family(zi);
        families[static_cast<std::size_t>(y)].partner = z;
        std::vector<CPolyPtr> factors{rec(f->a, y), rec(f->b, z)};
        std::size_t n = grid(fam);
        for (std::size_t r = 0; r < n; ++r) {
          Tuple row = unrank(fam, r);
          factors.push_back(
              cp_chi(cp_add({cp_var(y, row), cp_var(z, row)}), CmpOp::Eq, cp_var(fam, row)));
        }
        return cp_mul(std::move(factors));
      }
      case TeamFormula::Kind::Forall:
      case TeamFormula::Kind::Exists: {
        bool uni = f->kind == TeamFormula::Kind::Forall;
        const auto dom = families[static_cast<std::size_t>(fam)].domain;
        bool rebind = std::find(dom.begin(), dom.end(), f->var) != dom.end();
        std::vector<std::string> dy = dom;
        if (!rebind) {
          dy.push_back(f->var);
          std::sort(dy.begin(), dy.end(), VarOrder{});
        }
        FamilyInfo yi{"Y" + std::to_string(families.size()), dy,
                      uni ? FamilyInfo::Origin::ForallExt : FamilyInfo::Origin::ExistsExt, fam, -1,
                      f->var, rebind};
        int y = add_family(yi);
        std::size_t xpos = static_cast<std::size_t>(
            std::find(dy.begin(), dy.end(), f->var) - dy.begin());
        std::vector<CPolyPtr> factors{rec(f->a, y)};
        std::size_t n = grid(fam);
        for (std::size_t r = 0; r < n; ++r) {
          Tuple row = unrank(fam, r);
          if (uni) {
            for (int e = 0; e < a.universe->size(); ++e) {
              Tuple ext = row;
              if (rebind)
                ext[xpos] = e;
              else
                ext.insert(ext.begin() + static_cast<long>(xpos), e);
              factors.push_back(cp_chi(cp_var(fam, row), CmpOp::Eq, cp_var(y, ext)));
            }
          } else {
            std::vector<CPolyPtr> sum;
            for (int e = 0; e < a.universe->size(); ++e) {
              Tuple ext = row;
              if (rebind)
                ext[xpos] = e;
              else
                ext.insert(ext.begin() + static_cast<long>(xpos), e);
              sum.push_back(cp_var(y, ext));
            }
            factors.push_back(cp_chi(cp_var(fam, row), CmpOp::Eq, cp_add(std::move(sum))));
          }
        }
        return cp_mul(std::move(factors));
      }
    }
    fail(Errc::InvalidInput, "bad team formula node");
  }
};

} // namespace

CompiledPoly compile(const Structure& a, const TfPtr& f,
                     const std::vector<std::string>& team_domain, const SpecPtr& spec,
                     bool provenance_literals) {
  std::vector<std::string> dom = team_domain;
  std::sort(dom.begin(), dom.end(), VarOrder{});
  for (const auto& v : free_vars(f))
    if (std::find(dom.begin(), dom.end(), v) == dom.end())
      fail(Errc::UnknownVariable, "free variable '" + v + "' not in team domain");
  if (!spec->naturally_ordered() && contains_inclusion_atom(f))
    fail(Errc::NotOrdered, "inclusion atoms need a naturally ordered semiring");
  Compiler c{a, spec, provenance_literals, {}};
  c.add_family({"X", dom, FamilyInfo::Origin::Input, -1, -1, "", false});
  CPolyPtr root = c.rec(f, 0);
  return CompiledPoly{std::move(root), std::move(c.families), a.universe, spec};
}

Value evaluate(const CPolyPtr& p, const Valuation& v, const SpecPtr& spec) {
  switch (p->kind) {
    case CPoly::Kind::Const: return p->cval;
    case CPoly::Kind::TeamVar: return v.at(p->family, p->tuple);
    case CPoly::Kind::Add: {
      Value acc = Value::zero(spec);
      for (const auto& c : p->children) acc = add(acc, evaluate(c, v, spec));
      return acc;
    }
    case CPoly::Kind::Mul: {
      Value acc = Value::one(spec);
      for (const auto& c : p->children) acc = mul(acc, evaluate(c, v, spec));
      return acc;
    }
    case CPoly::Kind::Chi: {
      Value l = evaluate(p->children[0], v, spec);
      Value r = evaluate(p->children[1], v, spec);
      bool holds = false;
      switch (p->op) {
        case CmpOp::Eq: holds = l == r; break;
        case CmpOp::Neq: holds = l != r; break;
        case CmpOp::Leq: holds = nat_leq(l, r); break;
        case CmpOp::NotLeq: holds = !nat_leq(l, r); break;
      }
      return holds ? Value::one(spec) : Value::zero(spec);
    }
  }
  fail(Errc::InvalidInput, "bad polynomial node");
}

Valuation fix_input(const CompiledPoly& cp, const KTeam& x) {
  if (x.domain() != cp.families[0].domain)
    fail(Errc::InvalidInput, "team domain does not match the compiled polynomial");
  if (x.universe()->elems != cp.universe->elems)
    fail(Errc::InvalidInput, "team universe does not match the compiled polynomial");
  Valuation v(cp, cp.spec);
  for (const auto& [tuple, w] : x.weights()) v.set(0, tuple, w);
  return v;
}

// ---------------------------------------------------------------------------
// Witness search by constraint propagation

namespace {

struct WitnessSearch {
  const CompiledPoly& cp;
  SplitStrategy strat;
  const std::function<bool(const Valuation&)>& visit;

  std::optional<GridBound> bound() const {
    if (cp.spec->finitely_decomposable()) return std::nullopt;
    return GridBound{strat.denominator, strat.tropical_steps};
  }

  // rows of the parent grid whose weights may decompose into nonzero parts
  std::vector<std::size_t> active_rows(const std::vector<Value>& parent) const {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < parent.size(); ++r)
      if (!cp.spec->positive() || !parent[r].is_zero()) rows.push_back(r);
    return rows;
  }

  // returns true when the walk was stopped by the callback
  bool run(Valuation& v, std::size_t fam) {
    if (fam == cp.families.size()) return !visit(v);
    const FamilyInfo& info = cp.families[fam];
    const int n = cp.universe->size();
    switch (info.origin) {
      case FamilyInfo::Origin::Input: return run(v, fam + 1);
      case FamilyInfo::Origin::SplitRight: return run(v, fam + 1); // set with its partner
      case FamilyInfo::Origin::SplitLeft: {
        int z = info.partner;
        const auto parent = v.table(info.parent);
        auto rows = active_rows(parent);
        auto gb = bound();
        std::function<bool(std::size_t)> step = [&](std::size_t i) -> bool {
          if (i == rows.size()) return run(v, fam + 2);
          bool stop = !for_each_decomposition(
              parent[rows[i]], 2, gb, [&](const std::vector<Value>& parts) {
                v.table(static_cast<int>(fam))[rows[i]] = parts[0];
                v.table(z)[rows[i]] = parts[1];
                return !step(i + 1);
              });
          return stop;
        };
        bool found = step(0);
        std::fill(v.table(static_cast<int>(fam)).begin(), v.table(static_cast<int>(fam)).end(),
                  Value::zero(cp.spec));
        std::fill(v.table(z).begin(), v.table(z).end(), Value::zero(cp.spec));
        return found;
      }
      case FamilyInfo::Origin::ForallExt: {
        const auto parent = v.table(info.parent);
        auto& mine = v.table(static_cast<int>(fam));
        std::size_t xpos = static_cast<std::size_t>(
            std::find(info.domain.begin(), info.domain.end(), info.var) - info.domain.begin());
        int pararity = static_cast<int>(cp.families[static_cast<std::size_t>(info.parent)].domain.size());
        if (!info.rebind) {
          for (std::size_t r = 0; r < parent.size(); ++r) {
            Tuple row = tuple_unrank(r, pararity, n);
            for (int e = 0; e < n; ++e) {
              Tuple ext = row;
              ext.insert(ext.begin() + static_cast<long>(xpos), e);
              mine[tuple_rank(ext, n)] = parent[r];
            }
          }
        } else {
          // the constraints force Y = X and X constant along the coordinate;
          // a violating X just never produces a nonzero value, so still
          // propagate the forced table
          for (std::size_t r = 0; r < parent.size(); ++r) mine[r] = parent[r];
        }
        bool found = run(v, fam + 1);
        std::fill(mine.begin(), mine.end(), Value::zero(cp.spec));
        return found;
      }
      case FamilyInfo::Origin::ExistsExt: {
        const auto parent = v.table(info.parent);
        auto& mine = v.table(static_cast<int>(fam));
        std::size_t xpos = static_cast<std::size_t>(
            std::find(info.domain.begin(), info.domain.end(), info.var) - info.domain.begin());
        int pararity = static_cast<int>(cp.families[static_cast<std::size_t>(info.parent)].domain.size());
        auto gb = bound();
        if (!info.rebind) {
          auto rows = active_rows(parent);
          std::function<bool(std::size_t)> step = [&](std::size_t i) -> bool {
            if (i == rows.size()) return run(v, fam + 1);
            Tuple row = tuple_unrank(rows[i], pararity, n);
            bool stop = !for_each_decomposition(
                parent[rows[i]], static_cast<std::size_t>(n), gb,
                [&](const std::vector<Value>& parts) {
                  for (int e = 0; e < n; ++e) {
                    Tuple ext = row;
                    ext.insert(ext.begin() + static_cast<long>(xpos), e);
                    mine[tuple_rank(ext, n)] = parts[static_cast<std::size_t>(e)];
                  }
                  return !step(i + 1);
                });
            return stop;
          };
          bool found = step(0);
          std::fill(mine.begin(), mine.end(), Value::zero(cp.spec));
          return found;
        }
        // rebinding: fibers over the removed coordinate must be constant in
        // the parent; each fiber constant decomposes across its |A| rows
        std::map<Tuple, Value> fibers;
        bool consistent = true;
        for (std::size_t r = 0; r < parent.size(); ++r) {
          Tuple row = tuple_unrank(r, pararity, n);
          Tuple key = row;
          key.erase(key.begin() + static_cast<long>(xpos));
          auto it = fibers.find(key);
          if (it == fibers.end())
            fibers.emplace(std::move(key), parent[r]);
          else if (it->second != parent[r])
            consistent = false;
        }
        if (!consistent) return false; // no fresh table satisfies the constraints
        std::vector<std::pair<Tuple, Value>> fl(fibers.begin(), fibers.end());
        std::function<bool(std::size_t)> step = [&](std::size_t i) -> bool {
          if (i == fl.size()) return run(v, fam + 1);
          if (cp.spec->positive() && fl[i].second.is_zero()) return step(i + 1);
          bool stop = !for_each_decomposition(
              fl[i].second, static_cast<std::size_t>(n), gb, [&](const std::vector<Value>& parts) {
                for (int e = 0; e < n; ++e) {
                  Tuple ext = fl[i].first;
                  ext.insert(ext.begin() + static_cast<long>(xpos), e);
                  mine[tuple_rank(ext, n)] = parts[static_cast<std::size_t>(e)];
                }
                return !step(i + 1);
              });
          return stop;
        };
        bool found = step(0);
        std::fill(mine.begin(), mine.end(), Value::zero(cp.spec));
        return found;
      }
    }
    fail(Errc::InvalidInput, "bad family origin");
  }
};

void validate_strategy(const CompiledPoly& cp, const SplitStrategy& strat) {
  if (strat.mode == SplitStrategy::Mode::ExportOnly)
    fail(Errc::InfiniteSearch, "export-only strategy defers to export_existential");
  if (strat.mode == SplitStrategy::Mode::ExactFinite && !cp.spec->finitely_decomposable() &&
      cp.families.size() > 1)
    fail(Errc::InfiniteSearch,
         "exact witness search needs a finitely decomposable semiring; use a denominator bound");
}

} // namespace

void for_each_witness_valuation(const CompiledPoly& cp, const KTeam& x,
                                const SplitStrategy& strat,
                                const std::function<bool(const Valuation&)>& fn) {
  validate_strategy(cp, strat);
  Valuation v = fix_input(cp, x);
  WitnessSearch ws{cp, strat, fn};
  ws.run(v, 1);
}

bool range_nonzero(const CompiledPoly& cp, const KTeam& x, const SplitStrategy& strat) {
  bool found = false;
  for_each_witness_valuation(cp, x, strat, [&](const Valuation& v) {
    if (!evaluate(cp.root, v, cp.spec).is_zero()) {
      found = true;
      return false;
    }
    return true;
  });
  return found;
}

mpz_class count_witnesses(const CompiledPoly& cp, const KTeam& x, const SplitStrategy& strat) {
  mpz_class count = 0;
  for_each_witness_valuation(cp, x, strat, [&](const Valuation& v) {
    if (!evaluate(cp.root, v, cp.spec).is_zero()) ++count;
    return true;
  });
  return count;
}

mpz_class count_satisfying_teams(const Structure& a, const TfPtr& f,
                                 const std::vector<std::string>& domain,
                                 const std::vector<Value>& weight_candidates,
                                 const SplitStrategy& strat, ExecMode mode) {
  if (weight_candidates.empty()) fail(Errc::EmptySpace, "no weight candidates");
  bool has_zero = false;
  for (const auto& w : weight_candidates) has_zero = has_zero || w.is_zero();
  if (!has_zero) fail(Errc::InvalidInput, "weight candidate set must contain zero");
  const SpecPtr spec = weight_candidates.front().spec();
  CompiledPoly cp = compile(a, f, domain, spec);

  std::vector<std::string> dom = cp.families[0].domain;
  std::size_t grid = cp.grid_size(0);
  std::size_t cand = weight_candidates.size();
  std::size_t total_teams = 1;
  for (std::size_t i = 0; i < grid; ++i) {
    if (total_teams > (static_cast<std::size_t>(1) << 40) / cand)
      fail(Errc::InfiniteSearch, "team grid too large to enumerate");
    total_teams *= cand;
  }

  // per-thread clones keep the per-candidate Value traffic off the shared
  // spec object
  struct Ctx {
    CompiledPoly cp;
    std::vector<Value> weights;
  };
  struct Acc {
    mpz_class n = 0;
    std::shared_ptr<const Ctx> ctx;
  };
  auto fold = [&](std::size_t index, Acc& acc) {
    if (!acc.ctx) {
      SpecPtr clone = std::make_shared<SemiringSpec>(*spec);
      auto ctx = std::make_shared<Ctx>(Ctx{compile(a, f, domain, clone), {}});
      ctx->weights.reserve(cand);
      for (const auto& w : weight_candidates) ctx->weights.push_back(w.with_spec(clone));
      acc.ctx = std::move(ctx);
    }
    KTeam team(dom, a.universe, acc.ctx->cp.spec);
    for (std::size_t r = 0; r < grid; ++r) {
      team.set_weight(tuple_unrank(r, static_cast<int>(dom.size()), a.universe->size()),
                      acc.ctx->weights[index % cand]);
      index /= cand;
    }
    if (range_nonzero(acc.ctx->cp, team, strat)) ++acc.n;
  };
  auto merge = [](Acc& into, Acc& from) { into.n += from.n; };
  return index_reduce<Acc>(total_teams, Acc{}, fold, merge, mode).n;
}

// ---------------------------------------------------------------------------
// Printing and SMT export

namespace {

void print_rec(const CompiledPoly& cp, const CPolyPtr& p, std::string& out) {
  switch (p->kind) {
    case CPoly::Kind::Const: out += p->cval.str(); break;
    case CPoly::Kind::TeamVar: {
      out += cp.families[static_cast<std::size_t>(p->family)].name;
      out += '(';
      for (std::size_t i = 0; i < p->tuple.size(); ++i) {
        if (i) out += ' ';
        out += cp.universe->elems[static_cast<std::size_t>(p->tuple[i])];
      }
      out += ')';
      break;
    }
    case CPoly::Kind::Add:
    case CPoly::Kind::Mul: {
      out += p->kind == CPoly::Kind::Add ? "(+ " : "(* ";
      for (std::size_t i = 0; i < p->children.size(); ++i) {
        if (i) out += ' ';
        print_rec(cp, p->children[i], out);
      }
      out += ')';
      break;
    }
    case CPoly::Kind::Chi: {
      out += "(chi";
      out += cmp_op_text(p->op);
      out += ' ';
      print_rec(cp, p->children[0], out);
      out += ' ';
      print_rec(cp, p->children[1], out);
      out += ')';
      break;
    }
  }
}

struct SmtExporter {
  const CompiledPoly& cp;
  const KTeam& x;
  bool integer_logic;
  bool nonlinear = false;
  std::vector<std::string> var_names; // by (family, rank); empty for family 0

  std::string var_name(int fam, const Tuple& t) const {
    std::string n = "y" + std::to_string(fam);
    for (int e : t) n += "_" + cp.universe->elems[static_cast<std::size_t>(e)];
    return n;
  }

  std::string num(const Value& v) const {
    if (integer_logic) return v.as_int().get_str();
    const mpq_class& q = v.as_rat();
    if (q.get_den() == 1) return q.get_num().get_str();
    return "(/ " + q.get_num().get_str() + " " + q.get_den().get_str() + ")";
  }

  // value-level term; only reached from chi operands
  std::string term(const CPolyPtr& p, int* var_degree) {
    switch (p->kind) {
      case CPoly::Kind::Const: {
        if (var_degree) *var_degree = 0;
        return num(p->cval);
      }
      case CPoly::Kind::TeamVar: {
        if (p->family == 0) {
          if (var_degree) *var_degree = 0;
          return num(x.weight(p->tuple));
        }
        if (var_degree) *var_degree = 1;
        return var_name(p->family, p->tuple);
      }
      case CPoly::Kind::Add: {
        std::string out = "(+";
        int deg = 0;
        for (const auto& c : p->children) {
          int d = 0;
          out += " " + term(c, &d);
          deg = std::max(deg, d);
        }
        if (var_degree) *var_degree = deg;
        return out + ")";
      }
      case CPoly::Kind::Mul: {
        std::string out = "(*";
        int deg = 0;
        for (const auto& c : p->children) {
          int d = 0;
          out += " " + term(c, &d);
          deg += d;
        }
        if (deg > 1) nonlinear = true;
        if (var_degree) *var_degree = deg;
        return out + ")";
      }
      case CPoly::Kind::Chi: {
        // a chi value used as a term: 0/1 by construction
        if (var_degree) *var_degree = 0;
        return "(ite " + chi_formula(p) + " 1 0)";
      }
    }
    fail(Errc::InvalidInput, "bad polynomial node");
  }

  std::string chi_formula(const CPolyPtr& p) {
    std::string l = term(p->children[0], nullptr);
    std::string r = term(p->children[1], nullptr);
    switch (p->op) {
      case CmpOp::Eq: return "(= " + l + " " + r + ")";
      case CmpOp::Neq: return "(not (= " + l + " " + r + "))";
      case CmpOp::Leq: return "(<= " + l + " " + r + ")";
      case CmpOp::NotLeq: return "(not (<= " + l + " " + r + "))";
    }
    fail(Errc::InvalidInput, "bad chi operator");
  }

  // positivity of the semiring turns nonzero-ness into a boolean combination
  std::string nonzero(const CPolyPtr& p) {
    switch (p->kind) {
      case CPoly::Kind::Const: return p->cval.is_zero() ? "false" : "true";
      case CPoly::Kind::TeamVar:
        if (p->family == 0) return x.weight(p->tuple).is_zero() ? "false" : "true";
        return "(not (= " + var_name(p->family, p->tuple) + " 0))";
      case CPoly::Kind::Add: {
        std::string out = "(or";
        for (const auto& c : p->children) out += " " + nonzero(c);
        return out + ")";
      }
      case CPoly::Kind::Mul: {
        std::string out = "(and";
        for (const auto& c : p->children) out += " " + nonzero(c);
        return out + ")";
      }
      case CPoly::Kind::Chi: return chi_formula(p);
    }
    fail(Errc::InvalidInput, "bad polynomial node");
  }
};

} // namespace

std::string print_cpoly(const CompiledPoly& cp) {
  std::string out;
  print_rec(cp, cp.root, out);
  return out;
}

std::string export_existential(const CompiledPoly& cp, const KTeam& x) {
  bool integer_logic;
  if (cp.spec->kind == SemiringKind::Natural)
    integer_logic = true;
  else if (cp.spec->kind == SemiringKind::Rational)
    integer_logic = false;
  else
    fail(Errc::UnsupportedSpec,
         "existential export supports the natural and non-negative rational semirings");

  SmtExporter ex{cp, x, integer_logic};
  std::string body = ex.nonzero(cp.root);

  std::ostringstream out;
  std::string logic = ex.nonlinear ? (integer_logic ? "QF_NIA" : "QF_NRA")
                                   : (integer_logic ? "QF_LIA" : "QF_LRA");
  out << "(set-logic " << logic << ")\n";
  const char* sort = integer_logic ? "Int" : "Real";
  for (std::size_t fam = 1; fam < cp.families.size(); ++fam) {
    std::size_t n = cp.grid_size(static_cast<int>(fam));
    for (std::size_t r = 0; r < n; ++r) {
      Tuple t = tuple_unrank(r, static_cast<int>(cp.families[fam].domain.size()),
                             cp.universe->size());
      std::string name = ex.var_name(static_cast<int>(fam), t);
      out << "(declare-const " << name << " " << sort << ")\n";
      out << "(assert (>= " << name << " 0))\n";
    }
  }
  out << "(assert " << body << ")\n";
  out << "(check-sat)\n";
  return out.str();
}

} // namespace semiteam
