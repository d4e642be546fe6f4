#include "semiteam/interpretation.hpp"

#include <algorithm>
#include <functional>
#include <optional>

#include "semiteam/random.hpp"

namespace semiteam {

std::shared_ptr<const Universe> Universe::of(std::vector<std::string> names) {
  if (names.empty()) fail(Errc::InvalidInput, "universe must be nonempty");
  auto u = std::make_shared<Universe>();
  u->elems = std::move(names);
  for (std::size_t i = 0; i < u->elems.size(); ++i) {
    if (!u->index.emplace(u->elems[i], static_cast<int>(i)).second)
      fail(Errc::InvalidInput, "duplicate universe element '" + u->elems[i] + "'");
  }
  return u;
}

int Universe::index_of(const std::string& name) const {
  auto it = index.find(name);
  if (it == index.end()) fail(Errc::UnknownSymbol, "element '" + name + "' not in universe");
  return it->second;
}

int Assignment::at(const std::string& v) const {
  auto it = map.find(v);
  if (it == map.end()) fail(Errc::UnboundVariable, "variable '" + v + "' is unbound");
  return it->second;
}

Assignment Assignment::extended(const std::string& v, int elem) const {
  Assignment s = *this;
  s.map[v] = elem;
  return s;
}

bool Structure::holds(const std::string& rel, const std::vector<int>& tuple) const {
  if (!vocab.has(rel)) fail(Errc::UnknownSymbol, "unknown relation '" + rel + "'");
  auto it = relations.find(rel);
  return it != relations.end() && it->second.count(tuple) != 0;
}

std::size_t tuple_rank(const std::vector<int>& tuple, int base) {
  std::size_t r = 0;
  for (int x : tuple) r = r * static_cast<std::size_t>(base) + static_cast<std::size_t>(x);
  return r;
}

std::vector<int> tuple_unrank(std::size_t rank, int arity, int base) {
  std::vector<int> t(static_cast<std::size_t>(arity), 0);
  for (int i = arity - 1; i >= 0; --i) {
    t[static_cast<std::size_t>(i)] = static_cast<int>(rank % static_cast<std::size_t>(base));
    rank /= static_cast<std::size_t>(base);
  }
  return t;
}

std::size_t tuple_space_size(int arity, int base) {
  std::size_t n = 1;
  for (int i = 0; i < arity; ++i) n *= static_cast<std::size_t>(base);
  return n;
}

// ---------------------------------------------------------------------------
// KInterpretation

KInterpretation::KInterpretation(UniversePtr universe, Vocabulary vocab, SpecPtr spec)
    : universe_(std::move(universe)), vocab_(std::move(vocab)), spec_(std::move(spec)) {
  for (const auto& [rel, ar] : vocab_.arity) {
    RelTable t;
    t.arity = ar;
    std::size_t n = tuple_space_size(ar, universe_->size());
    t.pos.assign(n, Value::zero(spec_));
    t.neg.assign(n, Value::zero(spec_));
    tables_.emplace(rel, std::move(t));
  }
}

const Value& KInterpretation::fact(const std::string& rel, const std::vector<int>& tuple,
                                   bool negated) const {
  auto it = tables_.find(rel);
  if (it == tables_.end()) fail(Errc::UnknownSymbol, "unknown relation '" + rel + "'");
  if (static_cast<int>(tuple.size()) != it->second.arity)
    fail(Errc::ArityError, "tuple length does not match arity of " + rel);
  std::size_t r = tuple_rank(tuple, universe_->size());
  return negated ? it->second.neg[r] : it->second.pos[r];
}

void KInterpretation::set_fact(const std::string& rel, const std::vector<int>& tuple, bool negated,
                               Value v) {
  auto it = tables_.find(rel);
  if (it == tables_.end()) fail(Errc::UnknownSymbol, "unknown relation '" + rel + "'");
  if (static_cast<int>(tuple.size()) != it->second.arity)
    fail(Errc::ArityError, "tuple length does not match arity of " + rel);
  if (*v.spec() != *spec_) fail(Errc::SpecMismatch, "fact value from wrong semiring");
  std::size_t r = tuple_rank(tuple, universe_->size());
  (negated ? it->second.neg[r] : it->second.pos[r]) = std::move(v);
}

void KInterpretation::for_each_fact(
    const std::function<void(const std::string&, const std::vector<int>&, const Value&,
                             const Value&)>& fn) const {
  for (const auto& [rel, table] : tables_) {
    std::size_t n = table.pos.size();
    for (std::size_t r = 0; r < n; ++r) {
      std::vector<int> tuple = tuple_unrank(r, table.arity, universe_->size());
      fn(rel, tuple, table.pos[r], table.neg[r]);
    }
  }
}

// ---------------------------------------------------------------------------
// Compositional evaluation plus formula comparisons

namespace {

// Quantifiers rebind in place; the saved slot restores shadowed values so
// deep nests avoid per-step map copies.
Value eval_rec(const KInterpretation& pi, Assignment& s, const FoPtr& f) {
  const SpecPtr& K = pi.spec();
  switch (f->kind) {
    case FoFormula::Kind::RelLit: {
      std::vector<int> tuple;
      tuple.reserve(f->vars.size());
      for (const auto& v : f->vars) tuple.push_back(s.at(v));
      return pi.fact(f->rel, tuple, f->negated);
    }
    case FoFormula::Kind::EqLit: {
      bool eq = s.at(f->vars[0]) == s.at(f->vars[1]);
      if (f->negated) eq = !eq;
      return eq ? Value::one(K) : Value::zero(K);
    }
    case FoFormula::Kind::Bot: return Value::zero(K);
    case FoFormula::Kind::Top: return Value::one(K);
    case FoFormula::Kind::And: return mul(eval_rec(pi, s, f->a), eval_rec(pi, s, f->b));
    case FoFormula::Kind::Or: return add(eval_rec(pi, s, f->a), eval_rec(pi, s, f->b));
    case FoFormula::Kind::Forall:
    case FoFormula::Kind::Exists: {
      bool uni = f->kind == FoFormula::Kind::Forall;
      auto it = s.map.find(f->var);
      std::optional<int> saved;
      if (it != s.map.end()) saved = it->second;
      Value acc = uni ? Value::one(K) : Value::zero(K);
      for (int a = 0; a < pi.universe()->size(); ++a) {
        s.map[f->var] = a;
        Value sub = eval_rec(pi, s, f->a);
        acc = uni ? mul(acc, sub) : add(acc, sub);
      }
      if (saved)
        s.map[f->var] = *saved;
      else
        s.map.erase(f->var);
      return acc;
    }
    case FoFormula::Kind::Not: return eval_rec(pi, s, nnf(fo_not(f->a)));
    case FoFormula::Kind::Cmp: {
      Value l = eval_rec(pi, s, f->a);
      Value r = eval_rec(pi, s, f->b);
      bool holds = false;
      switch (f->op) {
        case CmpOp::Eq: holds = l == r; break;
        case CmpOp::Neq: holds = l != r; break;
        case CmpOp::Leq: holds = nat_leq(l, r); break;
        case CmpOp::NotLeq: holds = !nat_leq(l, r); break;
      }
      return holds ? Value::one(K) : Value::zero(K);
    }
  }
  fail(Errc::InvalidInput, "bad formula node");
}

} // namespace

Value eval(const KInterpretation& pi, const Assignment& s, const FoPtr& f) {
  Assignment scratch = s;
  return eval_rec(pi, scratch, f);
}

bool is_model_defining(const KInterpretation& pi) {
  bool ok = true;
  pi.for_each_fact([&](const std::string&, const std::vector<int>&, const Value& pos,
                       const Value& neg) {
    if (pos.is_zero() == neg.is_zero()) ok = false;
  });
  return ok;
}

KInterpretation canonical_interpretation(const Structure& a) {
  KInterpretation pi(a.universe, a.vocab, specs::boolean());
  const Value one = Value::one(specs::boolean());
  const Value zero = Value::zero(specs::boolean());
  for (const auto& [rel, ar] : a.vocab.arity) {
    std::size_t n = tuple_space_size(ar, a.universe->size());
    for (std::size_t r = 0; r < n; ++r) {
      std::vector<int> tuple = tuple_unrank(r, ar, a.universe->size());
      bool in = a.holds(rel, tuple);
      pi.set_fact(rel, tuple, false, in ? one : zero);
      pi.set_fact(rel, tuple, true, in ? zero : one);
    }
  }
  return pi;
}

KInterpretation transport(const Homomorphism& h, const KInterpretation& pi) {
  if (*pi.spec() != *h.source)
    fail(Errc::SpecMismatch, "interpretation is not over the homomorphism's source");
  KInterpretation out(pi.universe(), pi.vocab(), h.target);
  pi.for_each_fact([&](const std::string& rel, const std::vector<int>& tuple, const Value& pos,
                       const Value& neg) {
    out.set_fact(rel, tuple, false, hom_apply(h, pos));
    out.set_fact(rel, tuple, true, hom_apply(h, neg));
  });
  return out;
}

bool k_equivalent_sample(const FoPtr& f, const FoPtr& g, const SpecPtr& spec,
                         const SampleConfig& cfg) {
  if (!free_vars(f).empty() || !free_vars(g).empty())
    fail(Errc::InvalidInput, "k_equivalent_sample compares sentences");
  // vocabulary inferred from both formulae
  Vocabulary vocab;
  std::function<void(const FoPtr&)> scan = [&](const FoPtr& h) {
    if (!h) return;
    if (h->kind == FoFormula::Kind::RelLit) {
      int ar = static_cast<int>(h->vars.size());
      auto it = vocab.arity.find(h->rel);
      if (it == vocab.arity.end())
        vocab.arity[h->rel] = ar;
      else if (it->second != ar)
        fail(Errc::ArityError, "relation '" + h->rel + "' used with two arities");
    }
    scan(h->a);
    scan(h->b);
  };
  scan(f);
  scan(g);
  if (vocab.arity.empty()) vocab.arity["R"] = 1;

  Rng rng(cfg.seed);
  static const std::vector<std::string> pool{"a", "b", "c", "d", "e"};
  for (int round = 0; round < cfg.samples; ++round) {
    int n = 1 + rng.below(cfg.max_universe);
    UniversePtr u = Universe::of(std::vector<std::string>(pool.begin(), pool.begin() + n));
    KInterpretation pi(u, vocab, spec);
    for (const auto& [rel, ar] : vocab.arity) {
      std::size_t nt = tuple_space_size(ar, n);
      for (std::size_t r = 0; r < nt; ++r) {
        std::vector<int> tuple = tuple_unrank(r, ar, n);
        bool pos_zero = rng.chance(1, 2);
        Value v = random_value(rng, spec, /*nonzero=*/true);
        pi.set_fact(rel, tuple, pos_zero, Value::zero(spec));
        pi.set_fact(rel, tuple, !pos_zero, v);
      }
    }
    if (eval(pi, {}, f) != eval(pi, {}, g)) return false;
  }
  return true;
}

} // namespace semiteam
