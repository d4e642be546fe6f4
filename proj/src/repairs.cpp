#include "semiteam/repairs.hpp"

#include <algorithm>

#include "semiteam/atoms.hpp"

namespace semiteam {

namespace {

using Tuple = std::vector<int>;

// embeds a weight into the ambient ordered field (Q) for |a-b| arithmetic
mpq_class embed(const Value& v) {
  switch (v.spec()->kind) {
    case SemiringKind::Boolean: return v.as_bool() ? 1 : 0;
    case SemiringKind::Natural: return mpq_class(v.as_int());
    case SemiringKind::Rational: return v.as_rat();
    default:
      fail(Errc::UnsupportedSpec,
           "semiring " + v.spec()->name() + " has no difference embedding");
  }
}

Value reimport(const mpq_class& q, const SpecPtr& s) {
  switch (s->kind) {
    case SemiringKind::Boolean: return Value::make(s, q != 0);
    case SemiringKind::Natural: return Value::make(s, mpz_class(q.get_num()));
    case SemiringKind::Rational: return Value::make(s, q);
    default: fail(Errc::UnsupportedSpec, "no re-import into " + s->name());
  }
}

void check_compatible(const KTeam& x, const KTeam& y) {
  if (x.domain() != y.domain() || x.universe()->elems != y.universe()->elems)
    fail(Errc::InvalidInput, "teams live on different domains or universes");
  if (*x.spec() != *y.spec()) fail(Errc::SpecMismatch, "teams over different semirings");
}

} // namespace

SpecPtr distance_spec(const SpecPtr& s) {
  switch (s->kind) {
    case SemiringKind::Boolean:
    case SemiringKind::Natural: return specs::natural();
    case SemiringKind::Rational: return specs::rational();
    default:
      fail(Errc::UnsupportedSpec,
           "semiring " + s->name() + " has no difference embedding");
  }
}

KTeam symdiff(const KTeam& x, const KTeam& y) {
  check_compatible(x, y);
  distance_spec(x.spec()); // validates the embedding exists
  KTeam out(x.domain(), x.universe(), x.spec());
  std::set<Tuple> keys;
  for (const auto& [t, w] : x.weights()) keys.insert(t);
  for (const auto& [t, w] : y.weights()) keys.insert(t);
  for (const auto& t : keys) {
    mpq_class d = embed(x.weight(t)) - embed(y.weight(t));
    if (d < 0) d = -d;
    out.set_weight(t, reimport(d, x.spec()));
  }
  return out;
}

Value dist(const KTeam& x, const KTeam& y) {
  check_compatible(x, y);
  SpecPtr ds = distance_spec(x.spec());
  mpq_class total = 0;
  std::set<Tuple> keys;
  for (const auto& [t, w] : x.weights()) keys.insert(t);
  for (const auto& [t, w] : y.weights()) keys.insert(t);
  for (const auto& t : keys) {
    mpq_class d = embed(x.weight(t)) - embed(y.weight(t));
    total += d < 0 ? -d : d;
  }
  return reimport(total, ds);
}

Value nonindep(const KTeam& x, const std::vector<std::string>& xs,
               const std::vector<std::string>& ys) {
  SpecPtr ds = distance_spec(x.spec());
  const int n = x.universe()->size();
  mpq_class total_q = 0;

  // marginal tables keyed by projected tuples
  auto positions = [&](const std::vector<std::string>& vars) {
    std::vector<std::size_t> pos;
    for (const auto& v : vars) {
      auto it = std::find(x.domain().begin(), x.domain().end(), v);
      if (it == x.domain().end()) fail(Errc::UnknownVariable, "variable '" + v + "' not in team");
      pos.push_back(static_cast<std::size_t>(it - x.domain().begin()));
    }
    return pos;
  };
  auto px = positions(xs);
  auto py = positions(ys);
  auto pxy = px;
  pxy.insert(pxy.end(), py.begin(), py.end());

  std::map<Tuple, mpq_class> mx, my, mxy;
  mpq_class tot = 0;
  for (const auto& [row, w] : x.weights()) {
    mpq_class q = embed(w);
    tot += q;
    Tuple tx, ty, txy;
    for (auto p : px) tx.push_back(row[p]);
    for (auto p : py) ty.push_back(row[p]);
    txy = tx;
    for (auto p : py) txy.push_back(row[p]);
    mx[tx] += q;
    my[ty] += q;
    mxy[txy] += q;
  }

  // ranges are the full cartesian products of the universe
  std::size_t nx = tuple_space_size(static_cast<int>(xs.size()), n);
  std::size_t ny = tuple_space_size(static_cast<int>(ys.size()), n);
  for (std::size_t ra = 0; ra < nx; ++ra) {
    Tuple a = tuple_unrank(ra, static_cast<int>(xs.size()), n);
    auto ita = mx.find(a);
    mpq_class ma = ita == mx.end() ? 0 : ita->second;
    for (std::size_t rb = 0; rb < ny; ++rb) {
      Tuple b = tuple_unrank(rb, static_cast<int>(ys.size()), n);
      auto itb = my.find(b);
      mpq_class mb = itb == my.end() ? 0 : itb->second;
      Tuple ab = a;
      ab.insert(ab.end(), b.begin(), b.end());
      auto itab = mxy.find(ab);
      mpq_class mab = itab == mxy.end() ? 0 : itab->second;
      mpq_class d = tot * mab - ma * mb;
      total_q += d < 0 ? -d : d;
    }
  }
  return reimport(total_q, ds);
}

// ---------------------------------------------------------------------------
// Repair search

namespace {

std::vector<Tuple> candidate_rows(const KTeam& x, const RepairSpace& space) {
  if (space.rows) return *space.rows;
  std::vector<Tuple> rows;
  int ar = static_cast<int>(x.domain().size());
  std::size_t total = tuple_space_size(ar, x.universe()->size());
  rows.reserve(total);
  for (std::size_t r = 0; r < total; ++r)
    rows.push_back(tuple_unrank(r, ar, x.universe()->size()));
  return rows;
}

void validate_space(const KTeam& x, const RepairSpace& space) {
  if (space.weights.empty()) fail(Errc::EmptySpace, "repair space has no weights");
  bool zero = false;
  for (const auto& w : space.weights) {
    if (*w.spec() != *x.spec()) fail(Errc::SpecMismatch, "candidate weight from wrong semiring");
    zero = zero || w.is_zero();
  }
  if (!zero) fail(Errc::InvalidInput, "candidate weight set must contain zero");
}

KTeam team_at_index(const KTeam& x, const std::vector<Tuple>& rows,
                    const std::vector<Value>& weights, std::size_t index) {
  KTeam t(x.domain(), x.universe(), x.spec());
  std::size_t w = weights.size();
  for (const auto& row : rows) {
    t.set_weight(row, weights[index % w]);
    index /= w;
  }
  return t;
}

// thread-private clones of the scan inputs: candidate construction copies a
// Value per grid row, and cloned specs keep those reference counts off the
// shared singletons
struct ThreadInputs {
  KTeam x;
  std::vector<Value> weights;

  static std::shared_ptr<const ThreadInputs> make(const KTeam& x,
                                                  const std::vector<Value>& weights) {
    SpecPtr spec = std::make_shared<SemiringSpec>(*x.spec());
    auto universe = Universe::of(x.universe()->elems);
    auto out = std::make_shared<ThreadInputs>(
        ThreadInputs{KTeam(x.domain(), universe, spec), {}});
    for (const auto& [tup, w] : x.weights()) out->x.set_weight(tup, w.with_spec(spec));
    out->weights.reserve(weights.size());
    for (const auto& w : weights) out->weights.push_back(w.with_spec(spec));
    return out;
  }
};

struct ScanAcc {
  std::optional<Value> best;       // in the distance semiring
  std::vector<std::size_t> argmin; // candidate indices achieving it
  std::shared_ptr<const ThreadInputs> inputs;
};

// exhaustive scan over the candidate space, kept schedule-independent by
// sorting the collected tie set afterwards; the callbacks receive the
// thread-local copy of the input team
using ScanPredicate = std::function<bool(const KTeam& x_local, const KTeam& cand)>;
using ScanObjective = std::function<Value(const KTeam& x_local, const KTeam& cand)>;

RepairResult scan_space(const KTeam& x, const RepairSpace& space, const std::string& notion,
                        const ScanPredicate& admissible, const ScanObjective& objective,
                        ExecMode mode) {
  validate_space(x, space);
  std::vector<Tuple> rows = candidate_rows(x, space);
  std::size_t total = 1;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (total > (static_cast<std::size_t>(1) << 40) / space.weights.size())
      fail(Errc::InfiniteSearch, "repair space too large to enumerate");
    total *= space.weights.size();
  }

  auto fold = [&](std::size_t idx, ScanAcc& acc) {
    if (!acc.inputs) acc.inputs = ThreadInputs::make(x, space.weights);
    KTeam cand = team_at_index(acc.inputs->x, rows, acc.inputs->weights, idx);
    if (!admissible(acc.inputs->x, cand)) return;
    Value d = objective(acc.inputs->x, cand);
    if (!acc.best || d < *acc.best) {
      acc.best = d;
      acc.argmin.clear();
      acc.argmin.push_back(idx);
    } else if (d == *acc.best) {
      acc.argmin.push_back(idx);
    }
  };
  auto merge = [&](ScanAcc& into, ScanAcc& from) {
    if (!from.best) return;
    if (!into.best || *from.best < *into.best) {
      into = std::move(from);
    } else if (*from.best == *into.best) {
      into.argmin.insert(into.argmin.end(), from.argmin.begin(), from.argmin.end());
    }
  };

  ScanAcc acc = index_reduce<ScanAcc>(total, ScanAcc{}, fold, merge, mode);
  if (!acc.best) fail(Errc::EmptySpace, "no candidate in the space satisfies the constraints");
  std::sort(acc.argmin.begin(), acc.argmin.end());

  RepairResult res;
  res.distance = *acc.best;
  res.notion = notion;
  res.exhaustive = true;
  res.repairs.reserve(acc.argmin.size());
  for (auto idx : acc.argmin) res.repairs.push_back(team_at_index(x, rows, space.weights, idx));
  return res;
}

bool satisfies_all(const KTeam& t, const std::vector<DependencyAtom>& constraints) {
  for (const auto& c : constraints) {
    if (c.kind == DependencyAtom::Kind::Lit)
      fail(Errc::UnsupportedSpec, "literal constraints need a structure; use teamcheck");
    if (!satisfies(t, c)) return false;
  }
  return true;
}

} // namespace

RepairResult repair_symmetric(const KTeam& x, const std::vector<DependencyAtom>& constraints,
                              const RepairSpace& space, ExecMode mode) {
  distance_spec(x.spec());
  return scan_space(
      x, space, "symmetric",
      [&](const KTeam&, const KTeam& t) { return satisfies_all(t, constraints); },
      [](const KTeam& xl, const KTeam& t) { return dist(xl, t); }, mode);
}

RepairResult repair_subteam(const KTeam& x, const std::vector<DependencyAtom>& constraints,
                            const RepairSpace& space, ExecMode mode) {
  if (!x.spec()->naturally_ordered())
    fail(Errc::NotOrdered, "subteam repairs need a naturally ordered semiring");
  return scan_space(
      x, space, "subteam",
      [&](const KTeam& xl, const KTeam& t) { return is_subteam(t, xl) && satisfies_all(t, constraints); },
      [](const KTeam& xl, const KTeam& t) { return dist(xl, t); }, mode);
}

RepairResult repair_superteam(const KTeam& x, const std::vector<DependencyAtom>& constraints,
                              const RepairSpace& space, ExecMode mode) {
  if (!x.spec()->naturally_ordered())
    fail(Errc::NotOrdered, "superteam repairs need a naturally ordered semiring");
  return scan_space(
      x, space, "superteam",
      [&](const KTeam& xl, const KTeam& t) { return is_subteam(xl, t) && satisfies_all(t, constraints); },
      [](const KTeam& xl, const KTeam& t) { return dist(xl, t); }, mode);
}

RepairResult repair_min_nonindep(const KTeam& x, const std::vector<std::string>& xs,
                                 const std::vector<std::string>& ys, const RepairSpace& space,
                                 ExecMode mode) {
  distance_spec(x.spec());
  return scan_space(
      x, space, "nonindep", [](const KTeam&, const KTeam&) { return true; },
      [&](const KTeam& xl, const KTeam& t) { return nonindep(symdiff(xl, t), xs, ys); }, mode);
}

} // namespace semiteam
