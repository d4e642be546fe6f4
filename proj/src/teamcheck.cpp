#include "semiteam/teamcheck.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>

namespace semiteam {

SplitStrategy SplitStrategy::exact() { return {}; }
SplitStrategy SplitStrategy::denom(unsigned long d) {
  SplitStrategy s;
  s.mode = Mode::DenomBounded;
  s.denominator = d;
  return s;
}

namespace {

using Tuple = std::vector<int>;

bool tarski_literal(const Structure& a, const Assignment& s, const TfPtr& lit) {
  if (lit->kind == TeamFormula::Kind::RelLit) {
    std::vector<int> tuple;
    tuple.reserve(lit->vars.size());
    for (const auto& v : lit->vars) tuple.push_back(s.at(v));
    bool in = a.holds(lit->rel, tuple);
    return lit->negated ? !in : in;
  }
  if (lit->kind == TeamFormula::Kind::EqLit) {
    bool eq = s.at(lit->vars[0]) == s.at(lit->vars[1]);
    return lit->negated ? !eq : eq;
  }
  fail(Errc::InvalidInput, "not a literal");
}

// lazily walks the product of per-row option lists; fn true stops the walk
bool odometer(const std::vector<std::size_t>& sizes,
              const std::function<bool(const std::vector<std::size_t>&)>& fn) {
  for (auto s : sizes)
    if (s == 0) return false;
  std::vector<std::size_t> idx(sizes.size(), 0);
  for (;;) {
    if (fn(idx)) return true;
    std::size_t i = 0;
    while (i < idx.size()) {
      if (++idx[i] < sizes[i]) break;
      idx[i] = 0;
      ++i;
    }
    if (i == idx.size()) return false;
  }
}

std::vector<std::string> sorted_with(const std::vector<std::string>& domain,
                                     const std::string& var) {
  std::vector<std::string> d = domain;
  d.push_back(var);
  std::sort(d.begin(), d.end(), VarOrder{});
  return d;
}

std::size_t position_of(const std::vector<std::string>& domain, const std::string& var) {
  return static_cast<std::size_t>(
      std::find(domain.begin(), domain.end(), var) - domain.begin());
}

Tuple insert_at(const Tuple& t, std::size_t pos, int v) {
  Tuple r = t;
  r.insert(r.begin() + static_cast<long>(pos), v);
  return r;
}

Tuple erase_at(const Tuple& t, std::size_t pos) {
  Tuple r = t;
  r.erase(r.begin() + static_cast<long>(pos));
  return r;
}

// rows that can carry nonzero splits: the support, or the whole grid when
// zero has nontrivial decompositions (non-positive semirings)
std::vector<Tuple> split_rows(const KTeam& x) {
  std::vector<Tuple> rows;
  if (x.spec()->positive()) {
    rows.reserve(x.weights().size());
    for (const auto& [t, w] : x.weights()) rows.push_back(t);
    return rows;
  }
  int n = x.universe()->size();
  int ar = static_cast<int>(x.domain().size());
  std::size_t total = tuple_space_size(ar, n);
  rows.reserve(total);
  for (std::size_t r = 0; r < total; ++r) rows.push_back(tuple_unrank(r, ar, n));
  return rows;
}

struct Checker {
  const Structure& a;
  SplitStrategy strat;
  bool want_trace = false;
  bool used_grid = false; // a grid-bounded enumeration ran; negatives are then inconclusive
  std::map<std::pair<const TeamFormula*, std::string>, bool> memo;

  std::optional<GridBound> bound(const SpecPtr& spec) {
    if (spec->finitely_decomposable()) return std::nullopt;
    used_grid = true;
    return GridBound{strat.denominator, strat.tropical_steps};
  }

  bool rec(const KTeam& x, const TfPtr& f, TracePtr* out) {
    std::pair<const TeamFormula*, std::string> key;
    if (!want_trace) {
      key = {f.get(), x.str()};
      auto it = memo.find(key);
      if (it != memo.end()) return it->second;
    }
    bool r = rec_inner(x, f, out);
    if (!want_trace) memo.emplace(std::move(key), r);
    return r;
  }

  TracePtr leaf(const std::string& rule, const TfPtr& f) const {
    if (!want_trace) return nullptr;
    auto n = std::make_shared<TraceNode>();
    n->rule = rule;
    n->formula = print_team(f);
    return n;
  }

  bool rec_inner(const KTeam& x, const TfPtr& f, TracePtr* out) {
    switch (f->kind) {
      case TeamFormula::Kind::RelLit:
      case TeamFormula::Kind::EqLit: {
        for (const auto& [tup, w] : x.weights()) {
          (void)w;
          if (!tarski_literal(a, x.assignment_of(tup), f)) return false;
        }
        if (out) *out = leaf("literal", f);
        return true;
      }
      case TeamFormula::Kind::Atom: {
        if (!satisfies_in_structure(a, x, f->atom)) return false;
        if (out) *out = leaf("atom", f);
        return true;
      }
      case TeamFormula::Kind::And: {
        TracePtr l, r;
        if (!rec(x, f->a, out ? &l : nullptr)) return false;
        if (!rec(x, f->b, out ? &r : nullptr)) return false;
        if (out) {
          auto n = std::make_shared<TraceNode>();
          n->rule = "and";
          n->formula = print_team(f);
          n->children = {l, r};
          *out = n;
        }
        return true;
      }
      case TeamFormula::Kind::Or: return rec_or(x, f, out);
      case TeamFormula::Kind::Forall: return rec_forall(x, f, out);
      case TeamFormula::Kind::Exists: return rec_exists(x, f, out);
    }
    fail(Errc::InvalidInput, "bad team formula node");
  }

  bool rec_or(const KTeam& x, const TfPtr& f, TracePtr* out) {
    std::vector<Tuple> rows = split_rows(x);
    auto gb = bound(x.spec());
    std::vector<std::vector<std::vector<Value>>> options;
    options.reserve(rows.size());
    std::vector<std::size_t> sizes;
    sizes.reserve(rows.size());
    for (const auto& r : rows) {
      options.push_back(decompositions(x.weight(r), 2, gb));
      sizes.push_back(options.back().size());
    }
    return odometer(sizes, [&](const std::vector<std::size_t>& idx) {
      KTeam y(x.domain(), x.universe(), x.spec());
      KTeam z(x.domain(), x.universe(), x.spec());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& parts = options[i][idx[i]];
        y.set_weight(rows[i], parts[0]);
        z.set_weight(rows[i], parts[1]);
      }
      TracePtr l, r;
      if (!rec(y, f->a, out ? &l : nullptr)) return false;
      if (!rec(z, f->b, out ? &r : nullptr)) return false;
      if (out) {
        auto n = std::make_shared<TraceNode>();
        n->rule = "or";
        n->formula = print_team(f);
        n->teams = {y, z};
        n->children = {l, r};
        *out = n;
      }
      return true;
    });
  }

  bool rec_forall(const KTeam& x, const TfPtr& f, TracePtr* out) {
    const auto& dom = x.domain();
    bool rebind = std::find(dom.begin(), dom.end(), f->var) != dom.end();
    std::optional<KTeam> y;
    if (!rebind) {
      std::vector<std::string> dy = sorted_with(dom, f->var);
      std::size_t xpos = position_of(dy, f->var);
      KTeam t(dy, x.universe(), x.spec());
      for (const auto& [row, w] : x.weights())
        for (int e = 0; e < x.universe()->size(); ++e) t.set_weight(insert_at(row, xpos, e), w);
      y = std::move(t);
    } else {
      // requantifying a domain variable: the weight function must already be
      // constant along that coordinate, and the extension is the team itself
      std::size_t xpos = position_of(dom, f->var);
      std::map<Tuple, Value> fiber;
      for (const auto& [row, w] : x.weights()) {
        Tuple key = erase_at(row, xpos);
        auto it = fiber.find(key);
        if (it == fiber.end())
          fiber.emplace(std::move(key), w);
        else if (it->second != w)
          return false;
      }
      for (const auto& [key, w] : fiber) {
        (void)w;
        for (int e = 0; e < x.universe()->size(); ++e) {
          Tuple row = insert_at(key, position_of(dom, f->var), e);
          if (x.weight(row) != fiber.at(key)) return false;
        }
      }
      y = x;
    }
    TracePtr c;
    if (!rec(*y, f->a, out ? &c : nullptr)) return false;
    if (out) {
      auto n = std::make_shared<TraceNode>();
      n->rule = "forall";
      n->formula = print_team(f);
      n->teams = {*y};
      n->children = {c};
      *out = n;
    }
    return true;
  }

  bool rec_exists(const KTeam& x, const TfPtr& f, TracePtr* out) {
    const auto& dom = x.domain();
    const int n = x.universe()->size();
    auto gb = bound(x.spec());
    bool rebind = std::find(dom.begin(), dom.end(), f->var) != dom.end();

    if (!rebind) {
      std::vector<std::string> dy = sorted_with(dom, f->var);
      std::size_t xpos = position_of(dy, f->var);
      std::vector<Tuple> rows = split_rows(x);
      std::vector<std::vector<std::vector<Value>>> options;
      std::vector<std::size_t> sizes;
      for (const auto& r : rows) {
        options.push_back(decompositions(x.weight(r), static_cast<std::size_t>(n), gb));
        sizes.push_back(options.back().size());
      }
      return odometer(sizes, [&](const std::vector<std::size_t>& idx) {
        KTeam y(dy, x.universe(), x.spec());
        for (std::size_t i = 0; i < rows.size(); ++i) {
          const auto& parts = options[i][idx[i]];
          for (int e = 0; e < n; ++e) y.set_weight(insert_at(rows[i], xpos, e), parts[static_cast<std::size_t>(e)]);
        }
        TracePtr c;
        if (!rec(y, f->a, out ? &c : nullptr)) return false;
        if (out) {
          auto node = std::make_shared<TraceNode>();
          node->rule = "exists";
          node->formula = print_team(f);
          node->teams = {y};
          node->children = {c};
          *out = node;
        }
        return true;
      });
    }

    // requantified domain variable: weights must be constant per fiber and
    // the fiber constant decomposes across the |A| rows of the fiber
    std::size_t xpos = position_of(dom, f->var);
    std::map<Tuple, Value> fiber;
    for (const auto& row : split_rows(x)) {
      Tuple key = erase_at(row, xpos);
      auto it = fiber.find(key);
      if (it == fiber.end())
        fiber.emplace(std::move(key), x.weight(row));
      else if (it->second != x.weight(row))
        return false;
    }
    if (x.spec()->positive()) {
      // absent fiber rows weigh zero; a nonzero fiber constant then clashes
      for (const auto& [key, w] : fiber) {
        if (w.is_zero()) continue;
        for (int e = 0; e < n; ++e)
          if (x.weight(insert_at(key, xpos, e)) != w) return false;
      }
    }
    std::vector<Tuple> keys;
    std::vector<std::vector<std::vector<Value>>> options;
    std::vector<std::size_t> sizes;
    for (const auto& [key, w] : fiber) {
      keys.push_back(key);
      options.push_back(decompositions(w, static_cast<std::size_t>(n), gb));
      sizes.push_back(options.back().size());
    }
    return odometer(sizes, [&](const std::vector<std::size_t>& idx) {
      KTeam y(dom, x.universe(), x.spec());
      for (std::size_t i = 0; i < keys.size(); ++i) {
        const auto& parts = options[i][idx[i]];
        for (int e = 0; e < n; ++e) y.set_weight(insert_at(keys[i], xpos, e), parts[static_cast<std::size_t>(e)]);
      }
      TracePtr c;
      if (!rec(y, f->a, out ? &c : nullptr)) return false;
      if (out) {
        auto node = std::make_shared<TraceNode>();
        node->rule = "exists";
        node->formula = print_team(f);
        node->teams = {y};
        node->children = {c};
        *out = node;
      }
      return true;
    });
  }
};

} // namespace

CheckResult check(const Structure& a, const KTeam& x, const TfPtr& f, const SplitStrategy& strat,
                  bool want_trace) {
  if (strat.mode == SplitStrategy::Mode::ExportOnly)
    fail(Errc::InfiniteSearch, "export-only strategy defers to the algebraic export (poly --emit smt2)");
  if (strat.mode == SplitStrategy::Mode::ExactFinite && !x.spec()->finitely_decomposable())
    fail(Errc::InfiniteSearch,
         "exact search needs a finitely decomposable semiring; use a denominator bound");
  if (!x.spec()->naturally_ordered() && contains_inclusion_atom(f))
    fail(Errc::NotOrdered, "inclusion atoms need a naturally ordered semiring");
  for (const auto& v : free_vars(f)) {
    if (std::find(x.domain().begin(), x.domain().end(), v) == x.domain().end())
      fail(Errc::UnknownVariable, "free variable '" + v + "' not in team domain");
  }
  Checker c{a, strat, want_trace};
  CheckResult res;
  TracePtr trace;
  res.satisfied = c.rec(x, f, want_trace ? &trace : nullptr);
  res.trace = trace;
  // a found witness is a proof; a miss is a refutation unless some
  // grid-bounded enumeration may have skipped witnesses
  res.complete = res.satisfied || !c.used_grid;
  return res;
}

// ---------------------------------------------------------------------------
// Classical lax team semantics plus the relational atom definitions

namespace {

std::vector<int> values_of(const Assignment& s, const std::vector<std::string>& vars) {
  std::vector<int> out;
  out.reserve(vars.size());
  for (const auto& v : vars) out.push_back(s.at(v));
  return out;
}

bool classical_atom(const Structure& a, const std::set<Assignment>& x, const DependencyAtom& at) {
  switch (at.kind) {
    case DependencyAtom::Kind::Dep: {
      for (const auto& s : x)
        for (const auto& t : x)
          if (values_of(s, at.xs) == values_of(t, at.xs) &&
              values_of(s, at.ys) != values_of(t, at.ys))
            return false;
      return true;
    }
    case DependencyAtom::Kind::Indep: {
      for (const auto& s : x)
        for (const auto& t : x) {
          if (values_of(s, at.xs) != values_of(t, at.xs)) continue;
          bool found = false;
          for (const auto& u : x) {
            if (values_of(u, at.xs) == values_of(s, at.xs) &&
                values_of(u, at.ys) == values_of(s, at.ys) &&
                values_of(u, at.zs) == values_of(t, at.zs)) {
              found = true;
              break;
            }
          }
          if (!found) return false;
        }
      return true;
    }
    case DependencyAtom::Kind::Inc: {
      for (const auto& s : x) {
        bool found = false;
        for (const auto& t : x)
          if (values_of(s, at.xs) == values_of(t, at.ys)) {
            found = true;
            break;
          }
        if (!found) return false;
      }
      return true;
    }
    case DependencyAtom::Kind::Lit: {
      for (const auto& s : x) {
        std::vector<int> tuple = values_of(s, at.xs);
        bool in = a.holds(at.rel, tuple);
        if (at.negated) in = !in;
        if (!in) return false;
      }
      return true;
    }
  }
  fail(Errc::InvalidInput, "bad atom kind");
}

struct ClassicalChecker {
  const Structure& a;
  std::map<std::pair<const TeamFormula*, std::string>, bool> memo;

  std::string key_of(const std::set<Assignment>& x) {
    std::string k;
    for (const auto& s : x) {
      for (const auto& [v, e] : s.map) k += v + ":" + std::to_string(e) + ",";
      k += ";";
    }
    return k;
  }

  bool rec(const std::set<Assignment>& x, const TfPtr& f) {
    auto key = std::make_pair(f.get(), key_of(x));
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool r = rec_inner(x, f);
    memo.emplace(std::move(key), r);
    return r;
  }

  bool rec_inner(const std::set<Assignment>& x, const TfPtr& f) {
    switch (f->kind) {
      case TeamFormula::Kind::RelLit:
      case TeamFormula::Kind::EqLit: {
        for (const auto& s : x)
          if (!tarski_literal(a, s, f)) return false;
        return true;
      }
      case TeamFormula::Kind::Atom: return classical_atom(a, x, f->atom);
      case TeamFormula::Kind::And: return rec(x, f->a) && rec(x, f->b);
      case TeamFormula::Kind::Or: {
        std::vector<Assignment> rows(x.begin(), x.end());
        std::vector<std::size_t> sizes(rows.size(), 3); // left, right, both
        return odometer(sizes, [&](const std::vector<std::size_t>& idx) {
          std::set<Assignment> y, z;
          for (std::size_t i = 0; i < rows.size(); ++i) {
            if (idx[i] != 1) y.insert(rows[i]);
            if (idx[i] != 0) z.insert(rows[i]);
          }
          return rec(y, f->a) && rec(z, f->b);
        });
      }
      case TeamFormula::Kind::Forall: {
        std::set<Assignment> y;
        for (const auto& s : x)
          for (int e = 0; e < a.universe->size(); ++e) y.insert(s.extended(f->var, e));
        return rec(y, f->a);
      }
      case TeamFormula::Kind::Exists: {
        std::vector<Assignment> rows(x.begin(), x.end());
        const int n = a.universe->size();
        std::size_t masks = (static_cast<std::size_t>(1) << n) - 1;
        std::vector<std::size_t> sizes(rows.size(), masks);
        return odometer(sizes, [&](const std::vector<std::size_t>& idx) {
          std::set<Assignment> y;
          for (std::size_t i = 0; i < rows.size(); ++i) {
            std::size_t mask = idx[i] + 1; // skip the empty set
            for (int e = 0; e < n; ++e)
              if (mask & (static_cast<std::size_t>(1) << e)) y.insert(rows[i].extended(f->var, e));
          }
          return rec(y, f->a);
        });
      }
    }
    fail(Errc::InvalidInput, "bad team formula node");
  }
};

} // namespace

bool check_classical(const Structure& a, const std::set<Assignment>& team, const TfPtr& f) {
  ClassicalChecker c{a};
  return c.rec(team, f);
}

std::set<Assignment> collapse_support(const KTeam& x) {
  std::set<Assignment> out;
  for (const auto& s : x.support()) out.insert(s);
  return out;
}

std::pair<CheckResult, bool> collapse_check(const Structure& a, const KTeam& x, const TfPtr& f,
                                            const SplitStrategy& strat) {
  if (!x.spec()->positive())
    fail(Errc::UnsupportedSpec, "collapse comparison assumes a positive semiring");
  CheckResult k = check(a, x, f, strat);
  bool c = check_classical(a, collapse_support(x), f);
  return {k, c};
}

// ---------------------------------------------------------------------------
// Trace replay

namespace {

bool validate_or_split(const KTeam& x, const KTeam& y, const KTeam& z) {
  if (y.domain() != x.domain() || z.domain() != x.domain()) return false;
  std::set<Tuple> keys;
  for (const auto& [t, w] : x.weights()) keys.insert(t);
  for (const auto& [t, w] : y.weights()) keys.insert(t);
  for (const auto& [t, w] : z.weights()) keys.insert(t);
  for (const auto& t : keys)
    if (add(y.weight(t), z.weight(t)) != x.weight(t)) return false;
  return true;
}

bool validate_quantifier(const KTeam& x, const std::string& var, const KTeam& y, bool universal) {
  const auto& dom = x.domain();
  bool rebind = std::find(dom.begin(), dom.end(), var) != dom.end();
  const int n = x.universe()->size();
  if (!rebind) {
    if (y.domain() != sorted_with(dom, var)) return false;
    std::size_t xpos = position_of(y.domain(), var);
    std::set<Tuple> keys;
    for (const auto& [t, w] : x.weights()) keys.insert(t);
    for (const auto& [t, w] : y.weights()) keys.insert(erase_at(t, xpos));
    for (const auto& s : keys) {
      if (universal) {
        for (int e = 0; e < n; ++e)
          if (y.weight(insert_at(s, xpos, e)) != x.weight(s)) return false;
      } else {
        Value sum = Value::zero(x.spec());
        for (int e = 0; e < n; ++e) sum = add(sum, y.weight(insert_at(s, xpos, e)));
        if (sum != x.weight(s)) return false;
      }
    }
    return true;
  }
  if (y.domain() != dom) return false;
  std::size_t xpos = position_of(dom, var);
  std::set<Tuple> fibers;
  for (const auto& [t, w] : x.weights()) fibers.insert(erase_at(t, xpos));
  for (const auto& [t, w] : y.weights()) fibers.insert(erase_at(t, xpos));
  for (const auto& key : fibers) {
    Value c = x.weight(insert_at(key, xpos, 0));
    for (int e = 1; e < n; ++e)
      if (x.weight(insert_at(key, xpos, e)) != c) return false;
    if (universal) {
      for (int e = 0; e < n; ++e)
        if (y.weight(insert_at(key, xpos, e)) != c) return false;
    } else {
      Value sum = Value::zero(x.spec());
      for (int e = 0; e < n; ++e) sum = add(sum, y.weight(insert_at(key, xpos, e)));
      if (sum != c) return false;
    }
  }
  return true;
}

bool replay_rec(const Structure& a, const KTeam& x, const TfPtr& f, const TracePtr& t) {
  if (!t) return false;
  switch (f->kind) {
    case TeamFormula::Kind::RelLit:
    case TeamFormula::Kind::EqLit: {
      for (const auto& [tup, w] : x.weights()) {
        (void)w;
        if (!tarski_literal(a, x.assignment_of(tup), f)) return false;
      }
      return true;
    }
    case TeamFormula::Kind::Atom: return satisfies_in_structure(a, x, f->atom);
    case TeamFormula::Kind::And:
      return t->children.size() == 2 && replay_rec(a, x, f->a, t->children[0]) &&
             replay_rec(a, x, f->b, t->children[1]);
    case TeamFormula::Kind::Or:
      return t->teams.size() == 2 && t->children.size() == 2 &&
             validate_or_split(x, t->teams[0], t->teams[1]) &&
             replay_rec(a, t->teams[0], f->a, t->children[0]) &&
             replay_rec(a, t->teams[1], f->b, t->children[1]);
    case TeamFormula::Kind::Forall:
      return t->teams.size() == 1 && t->children.size() == 1 &&
             validate_quantifier(x, f->var, t->teams[0], true) &&
             replay_rec(a, t->teams[0], f->a, t->children[0]);
    case TeamFormula::Kind::Exists:
      return t->teams.size() == 1 && t->children.size() == 1 &&
             validate_quantifier(x, f->var, t->teams[0], false) &&
             replay_rec(a, t->teams[0], f->a, t->children[0]);
  }
  return false;
}

} // namespace

bool replay_trace(const Structure& a, const KTeam& x, const TfPtr& f, const TracePtr& trace) {
  return replay_rec(a, x, f, trace);
}

} // namespace semiteam
