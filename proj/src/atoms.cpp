#include "semiteam/atoms.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace semiteam {

namespace {

std::vector<std::string> fresh_names(const std::string& stem, int count,
                                     const std::set<std::string>& avoid) {
  for (int round = 0;; ++round) {
    std::string prefix = stem + std::string(static_cast<std::size_t>(round), 'x');
    std::vector<std::string> names;
    bool clash = false;
    for (int i = 1; i <= count && !clash; ++i) {
      std::string n = prefix + std::to_string(i);
      if (avoid.count(n)) clash = true;
      names.push_back(n);
    }
    if (!clash) return names;
  }
}

// 1-based positions of the atom variables within the sorted team domain
std::vector<int> index_tuple(const std::vector<std::string>& vars,
                             const std::vector<std::string>& domain) {
  std::vector<int> idx;
  idx.reserve(vars.size());
  for (const auto& v : vars) {
    auto it = std::find(domain.begin(), domain.end(), v);
    if (it == domain.end()) fail(Errc::UnknownVariable, "atom variable '" + v + "' not in team domain");
    idx.push_back(static_cast<int>(it - domain.begin()) + 1);
  }
  return idx;
}

FoPtr quantify_all(const std::vector<std::vector<std::string>>& tuples, FoPtr body) {
  std::vector<std::string> flat;
  for (const auto& t : tuples) flat.insert(flat.end(), t.begin(), t.end());
  for (auto it = flat.rbegin(); it != flat.rend(); ++it) body = fo_forall(*it, body);
  return body;
}

FoPtr tuple_equality(const std::vector<std::string>& xs, const std::vector<std::string>& ys) {
  std::vector<FoPtr> eqs;
  for (std::size_t i = 0; i < xs.size(); ++i) eqs.push_back(fo_eq(xs[i], ys[i]));
  return fo_and_all(eqs);
}

} // namespace

FoPtr theta(const std::vector<std::vector<int>>& index_tuples,
            const std::vector<std::vector<std::string>>& uvar_tuples, const std::string& rel,
            int arity) {
  if (index_tuples.size() != uvar_tuples.size())
    fail(Errc::LengthMismatch, "theta needs one variable tuple per index tuple");
  std::set<std::string> avoid;
  for (const auto& t : uvar_tuples) avoid.insert(t.begin(), t.end());
  std::vector<std::string> bound = fresh_names("x", arity, avoid);

  std::vector<FoPtr> conj;
  conj.push_back(fo_rel(rel, bound));
  for (std::size_t l = 0; l < index_tuples.size(); ++l) {
    if (index_tuples[l].size() != uvar_tuples[l].size())
      fail(Errc::LengthMismatch, "index tuple and variable tuple lengths differ");
    for (std::size_t p = 0; p < index_tuples[l].size(); ++p) {
      int i = index_tuples[l][p];
      if (i < 1 || i > arity) fail(Errc::LengthMismatch, "index position outside arity");
      conj.push_back(fo_eq(bound[static_cast<std::size_t>(i - 1)], uvar_tuples[l][p]));
    }
  }
  FoPtr body = fo_and_all(conj);
  for (auto it = bound.rbegin(); it != bound.rend(); ++it) body = fo_exists(*it, body);
  return body;
}

FoPtr atom_sentence(const DependencyAtom& atom, const std::vector<std::string>& domain,
                    const std::string& team_rel) {
  const int arity = static_cast<int>(domain.size());
  switch (atom.kind) {
    case DependencyAtom::Kind::Lit: {
      // forall x ( R(x) = bot  |  (R(x) != bot & T(x_i)) )
      std::vector<int> idx = index_tuple(atom.xs, domain);
      std::vector<std::string> xs = fresh_names("x", arity, {});
      std::vector<std::string> proj;
      proj.reserve(idx.size());
      for (int i : idx) proj.push_back(xs[static_cast<std::size_t>(i - 1)]);
      FoPtr r = fo_rel(team_rel, xs);
      FoPtr body = fo_or(fo_is_bot(r), fo_and(fo_not_bot(r), fo_rel(atom.rel, proj, atom.negated)));
      return quantify_all({xs}, body);
    }
    case DependencyAtom::Kind::Dep: {
      std::vector<int> i = index_tuple(atom.xs, domain);
      std::vector<int> j = index_tuple(atom.ys, domain);
      std::set<std::string> avoid;
      std::vector<std::string> u = fresh_names("u", static_cast<int>(i.size()), avoid);
      std::vector<std::string> v = fresh_names("v", static_cast<int>(j.size()), avoid);
      std::vector<std::string> w = fresh_names("w", static_cast<int>(j.size()), avoid);
      FoPtr guard = fo_and(theta({i, j}, {u, v}, team_rel, arity), theta({i, j}, {u, w}, team_rel, arity));
      FoPtr body = fo_or(fo_is_bot(guard), fo_not_bot(tuple_equality(v, w)));
      return quantify_all({u, v, w}, body);
    }
    case DependencyAtom::Kind::Indep: {
      std::vector<int> i = index_tuple(atom.xs, domain);
      std::vector<int> j = index_tuple(atom.ys, domain);
      std::vector<int> k = index_tuple(atom.zs, domain);
      std::set<std::string> avoid;
      std::vector<std::string> u = fresh_names("u", static_cast<int>(i.size()), avoid);
      std::vector<std::string> v = fresh_names("v", static_cast<int>(j.size()), avoid);
      std::vector<std::string> w = fresh_names("w", static_cast<int>(k.size()), avoid);
      FoPtr lhs = fo_and(theta({i, j}, {u, v}, team_rel, arity), theta({i, k}, {u, w}, team_rel, arity));
      FoPtr rhs = fo_and(theta({i}, {u}, team_rel, arity), theta({i, j, k}, {u, v, w}, team_rel, arity));
      return quantify_all({u, v, w}, fo_cmp(lhs, CmpOp::Eq, rhs));
    }
    case DependencyAtom::Kind::Inc: {
      std::vector<int> i = index_tuple(atom.xs, domain);
      std::vector<int> j = index_tuple(atom.ys, domain);
      if (i.size() != j.size())
        fail(Errc::LengthMismatch, "inclusion atom tuples must have equal length");
      std::vector<std::string> u = fresh_names("u", static_cast<int>(i.size()), {});
      FoPtr body = fo_cmp(theta({i}, {u}, team_rel, arity), CmpOp::Leq, theta({j}, {u}, team_rel, arity));
      return quantify_all({u}, body);
    }
  }
  fail(Errc::InvalidInput, "bad atom kind");
}

// ---------------------------------------------------------------------------
// Example-4.4 simplification

namespace {

void flatten_and(const FoPtr& f, std::vector<FoPtr>& out) {
  if (f->kind == FoFormula::Kind::And) {
    flatten_and(f->a, out);
    flatten_and(f->b, out);
  } else {
    out.push_back(f);
  }
}

FoPtr try_inline_theta(const FoPtr& f) {
  // match: exists-chain over x1..xk, body = R(x1..xk) & eqs pinning some xi
  // to variables from outside the chain
  std::vector<std::string> chain;
  FoPtr body = f;
  while (body->kind == FoFormula::Kind::Exists) {
    chain.push_back(body->var);
    body = body->a;
  }
  if (chain.empty()) return f;
  std::set<std::string> chain_set(chain.begin(), chain.end());
  if (chain_set.size() != chain.size()) return f;

  std::vector<FoPtr> leaves;
  flatten_and(body, leaves);
  if (leaves.empty() || leaves[0]->kind != FoFormula::Kind::RelLit || leaves[0]->negated) return f;
  const FoPtr& rel = leaves[0];
  if (rel->vars != chain) return f;

  std::map<std::string, std::string> pin; // chain var -> outer var
  for (std::size_t i = 1; i < leaves.size(); ++i) {
    const FoPtr& eq = leaves[i];
    if (eq->kind != FoFormula::Kind::EqLit || eq->negated) return f;
    bool l_in = chain_set.count(eq->vars[0]) != 0;
    bool r_in = chain_set.count(eq->vars[1]) != 0;
    std::string cv, ov;
    if (l_in && !r_in) {
      cv = eq->vars[0];
      ov = eq->vars[1];
    } else if (r_in && !l_in) {
      cv = eq->vars[1];
      ov = eq->vars[0];
    } else {
      return f;
    }
    if (!pin.emplace(cv, ov).second) return f; // pinned twice: leave alone
  }

  std::vector<std::string> args;
  args.reserve(chain.size());
  std::vector<std::string> remaining;
  for (const auto& x : chain) {
    auto it = pin.find(x);
    if (it == pin.end()) {
      args.push_back(x);
      remaining.push_back(x);
    } else {
      args.push_back(it->second);
    }
  }
  FoPtr out = fo_rel(rel->rel, args);
  for (auto it = remaining.rbegin(); it != remaining.rend(); ++it) out = fo_exists(*it, out);
  return out;
}

} // namespace

FoPtr simplify(const FoPtr& f) {
  FoPtr g = f;
  switch (f->kind) {
    case FoFormula::Kind::And: g = fo_and(simplify(f->a), simplify(f->b)); break;
    case FoFormula::Kind::Or: g = fo_or(simplify(f->a), simplify(f->b)); break;
    case FoFormula::Kind::Not: g = fo_not(simplify(f->a)); break;
    case FoFormula::Kind::Cmp: g = fo_cmp(simplify(f->a), f->op, simplify(f->b)); break;
    case FoFormula::Kind::Exists: g = fo_exists(f->var, simplify(f->a)); break;
    case FoFormula::Kind::Forall: return fo_forall(f->var, simplify(f->a));
    default: return f;
  }
  if (g->kind == FoFormula::Kind::Exists) {
    FoPtr inlined = try_inline_theta(g);
    if (inlined != g) return inlined;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Evaluation routes

namespace {

void check_atom_spec(const KTeam& x, const DependencyAtom& atom) {
  if (atom.kind == DependencyAtom::Kind::Inc && !x.spec()->naturally_ordered())
    fail(Errc::NotOrdered, "inclusion atoms need a naturally ordered semiring");
}

using Tuple = std::vector<int>;

std::vector<std::size_t> domain_positions(const KTeam& x, const std::vector<std::string>& vars) {
  std::vector<std::size_t> pos;
  pos.reserve(vars.size());
  for (const auto& v : vars) {
    auto it = std::find(x.domain().begin(), x.domain().end(), v);
    if (it == x.domain().end()) fail(Errc::UnknownVariable, "atom variable '" + v + "' not in team domain");
    pos.push_back(static_cast<std::size_t>(it - x.domain().begin()));
  }
  return pos;
}

Tuple project(const Tuple& row, const std::vector<std::size_t>& pos) {
  Tuple t;
  t.reserve(pos.size());
  for (auto p : pos) t.push_back(row[p]);
  return t;
}

std::map<Tuple, Value> marginal_table(const KTeam& x, const std::vector<std::size_t>& pos) {
  std::map<Tuple, Value> m;
  for (const auto& [row, w] : x.weights()) {
    Tuple key = project(row, pos);
    auto it = m.find(key);
    if (it == m.end())
      m.emplace(std::move(key), w);
    else
      it->second = add(it->second, w);
  }
  return m;
}

Value direct_indep(const KTeam& x, const DependencyAtom& atom) {
  auto pi = domain_positions(x, atom.xs);
  auto pj = domain_positions(x, atom.ys);
  auto pk = domain_positions(x, atom.zs);
  auto pij = pi, pik = pi, pijk = pi;
  pij.insert(pij.end(), pj.begin(), pj.end());
  pik.insert(pik.end(), pk.begin(), pk.end());
  pijk.insert(pijk.end(), pj.begin(), pj.end());
  pijk.insert(pijk.end(), pk.begin(), pk.end());

  auto m_i = marginal_table(x, pi);
  auto m_ij = marginal_table(x, pij);
  auto m_ik = marginal_table(x, pik);
  auto m_ijk = marginal_table(x, pijk);

  const Value zero = Value::zero(x.spec());
  // only (u,v)/(u,w) pairs realized in the support can break a chi factor
  for (const auto& [uv, wuv] : m_ij) {
    Tuple u(uv.begin(), uv.begin() + static_cast<long>(pi.size()));
    for (const auto& [uw, wuw] : m_ik) {
      if (!std::equal(u.begin(), u.end(), uw.begin())) continue;
      Tuple uvw = uv;
      uvw.insert(uvw.end(), uw.begin() + static_cast<long>(pi.size()), uw.end());
      Value lhs = mul(wuv, wuw);
      auto itu = m_i.find(u);
      Value mu = itu == m_i.end() ? zero : itu->second;
      auto itw = m_ijk.find(uvw);
      Value rhs = mul(mu, itw == m_ijk.end() ? zero : itw->second);
      if (lhs != rhs) return zero;
    }
  }
  return Value::one(x.spec());
}

Value direct_inc(const KTeam& x, const DependencyAtom& atom) {
  auto px = domain_positions(x, atom.xs);
  auto py = domain_positions(x, atom.ys);
  auto m_x = marginal_table(x, px);
  auto m_y = marginal_table(x, py);
  const Value zero = Value::zero(x.spec());
  for (const auto& [u, wx] : m_x) {
    auto it = m_y.find(u);
    if (!nat_leq(wx, it == m_y.end() ? zero : it->second)) return zero;
  }
  return Value::one(x.spec());
}

Value direct_dep(const KTeam& x, const DependencyAtom& atom) {
  auto pi = domain_positions(x, atom.xs);
  auto pj = domain_positions(x, atom.ys);
  auto pij = pi;
  pij.insert(pij.end(), pj.begin(), pj.end());
  auto m_ij = marginal_table(x, pij);

  // group realized (u, v) rows by u
  std::map<Tuple, std::vector<std::pair<Tuple, Value>>> groups;
  for (const auto& [uv, w] : m_ij) {
    Tuple u(uv.begin(), uv.begin() + static_cast<long>(pi.size()));
    Tuple v(uv.begin() + static_cast<long>(pi.size()), uv.end());
    groups[u].emplace_back(v, w);
  }
  const Value zero = Value::zero(x.spec());
  mpz_class square_nonzero = 0;
  for (const auto& [u, vs] : groups) {
    for (std::size_t a = 0; a < vs.size(); ++a) {
      if (!mul(vs[a].second, vs[a].second).is_zero()) ++square_nonzero;
      for (std::size_t b = a + 1; b < vs.size(); ++b)
        if (!mul(vs[a].second, vs[b].second).is_zero()) return zero;
    }
  }
  // remaining (u, v) grid points have a vanishing guard: each contributes 1+1
  mpz_class grid = 1;
  mpz_class base(x.universe()->size());
  for (std::size_t i = 0; i < pij.size(); ++i) grid *= base;
  mpz_class m = grid - square_nonzero;
  Value two = add(Value::one(x.spec()), Value::one(x.spec()));
  return pow_nat(two, m);
}

Value direct_lit(const Structure& a, const KTeam& x, const DependencyAtom& atom) {
  if (!a.vocab.has(atom.rel))
    fail(Errc::UnknownSymbol, "literal relation '" + atom.rel + "' not in structure vocabulary");
  if (a.vocab.arity_of(atom.rel) != static_cast<int>(atom.xs.size()))
    fail(Errc::ArityError, "literal arity mismatch for '" + atom.rel + "'");
  auto pos = domain_positions(x, atom.xs);
  for (const auto& [row, w] : x.weights()) {
    (void)w;
    bool in = a.holds(atom.rel, project(row, pos));
    if (atom.negated) in = !in;
    if (!in) return Value::zero(x.spec());
  }
  return Value::one(x.spec());
}

} // namespace

Value eval_atom(const KTeam& x, const DependencyAtom& atom) {
  if (atom.kind == DependencyAtom::Kind::Lit)
    fail(Errc::VocabularyClash, "literal atoms are evaluated against a structure");
  check_atom_spec(x, atom);
  FoPtr sentence = atom_sentence(atom, x.domain(), "R");
  KInterpretation pi = to_interpretation(x, "R");
  return eval(pi, {}, sentence);
}

Value eval_atom_direct(const KTeam& x, const DependencyAtom& atom) {
  check_atom_spec(x, atom);
  switch (atom.kind) {
    case DependencyAtom::Kind::Indep: return direct_indep(x, atom);
    case DependencyAtom::Kind::Inc: return direct_inc(x, atom);
    case DependencyAtom::Kind::Dep: return direct_dep(x, atom);
    case DependencyAtom::Kind::Lit:
      fail(Errc::VocabularyClash, "literal atoms are evaluated against a structure");
  }
  fail(Errc::InvalidInput, "bad atom kind");
}

Value eval_atom_in_structure(const Structure& a, const KTeam& x, const DependencyAtom& atom) {
  check_atom_spec(x, atom);
  if (atom.kind == DependencyAtom::Kind::Lit && !a.vocab.has(atom.rel))
    fail(Errc::UnknownSymbol, "literal relation '" + atom.rel + "' not in structure vocabulary");
  std::string team_rel = "R";
  while (a.vocab.has(team_rel)) team_rel += "_t";
  FoPtr sentence = atom_sentence(atom, x.domain(), team_rel);
  KInterpretation pi = to_joint_interpretation(a, x, team_rel);
  return eval(pi, {}, sentence);
}

Value eval_atom_direct_in_structure(const Structure& a, const KTeam& x,
                                    const DependencyAtom& atom) {
  if (atom.kind == DependencyAtom::Kind::Lit) return direct_lit(a, x, atom);
  return eval_atom_direct(x, atom);
}

bool satisfies(const KTeam& x, const DependencyAtom& atom) {
  return !eval_atom_direct(x, atom).is_zero();
}

bool satisfies_in_structure(const Structure& a, const KTeam& x, const DependencyAtom& atom) {
  return !eval_atom_direct_in_structure(a, x, atom).is_zero();
}

} // namespace semiteam
