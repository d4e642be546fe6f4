#include "semiteam/semiring.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace semiteam {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::SpecMismatch: return "SpecMismatch";
    case Errc::NotOrdered: return "NotOrdered";
    case Errc::InfiniteSearch: return "InfiniteSearch";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::ArityError: return "ArityError";
    case Errc::UnknownSymbol: return "UnknownSymbol";
    case Errc::UnboundVariable: return "UnboundVariable";
    case Errc::VocabularyClash: return "VocabularyClash";
    case Errc::UnknownVariable: return "UnknownVariable";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::UnsupportedSpec: return "UnsupportedSpec";
    case Errc::EmptySpace: return "EmptySpace";
    case Errc::MissingVariable: return "MissingVariable";
    case Errc::MissingIndeterminate: return "MissingIndeterminate";
    case Errc::InvalidInput: return "InvalidInput";
  }
  return "UnknownError";
}

// ---------------------------------------------------------------------------
// SemiringSpec

bool SemiringSpec::positive() const {
  // Lukasiewicz multiplication truncates at zero (1/2 * 1/2 = 0), so the
  // unit interval has zero divisors; Z_n fails +-positivity.
  return kind != SemiringKind::IntMod && kind != SemiringKind::Lukasiewicz;
}

bool SemiringSpec::naturally_ordered() const {
  return kind != SemiringKind::IntMod;
}

bool SemiringSpec::plus_dense() const {
  switch (kind) {
    case SemiringKind::Boolean: return true;   // 1 = 1 + 1
    case SemiringKind::Natural: return false;  // 1 has no nonzero split
    case SemiringKind::Rational: return true;  // a = a/2 + a/2
    case SemiringKind::Tropical: return true;  // a = min(a, a)
    case SemiringKind::Lukasiewicz: return true;
    case SemiringKind::IntMod: return modulus >= 3;
    case SemiringKind::ProvPoly: return false; // single tokens behave like 1 in N
  }
  return false;
}

bool SemiringSpec::finitely_decomposable() const {
  switch (kind) {
    case SemiringKind::Boolean:
    case SemiringKind::Natural:
    case SemiringKind::IntMod:
    case SemiringKind::ProvPoly: return true;
    default: return false;
  }
}

std::string SemiringSpec::name() const {
  switch (kind) {
    case SemiringKind::Boolean: return "boolean";
    case SemiringKind::Natural: return "nat";
    case SemiringKind::Rational: return "rat";
    case SemiringKind::Tropical: return "tropical";
    case SemiringKind::Lukasiewicz: return "lukasiewicz";
    case SemiringKind::IntMod: return "zmod:" + std::to_string(modulus);
    case SemiringKind::ProvPoly: {
      std::string s = "poly:";
      for (std::size_t i = 0; i < indets.size(); ++i) {
        if (i) s += ',';
        s += indets[i];
      }
      return s;
    }
  }
  return "?";
}

SemiringSpec SemiringSpec::parse(const std::string& text) {
  if (text == "boolean" || text == "bool") return {SemiringKind::Boolean};
  if (text == "nat" || text == "natural") return {SemiringKind::Natural};
  if (text == "rat" || text == "rational") return {SemiringKind::Rational};
  if (text == "tropical") return {SemiringKind::Tropical};
  if (text == "lukasiewicz") return {SemiringKind::Lukasiewicz};
  if (text.rfind("zmod:", 0) == 0) {
    unsigned long n = 0;
    try {
      n = std::stoul(text.substr(5));
    } catch (...) {
      fail(Errc::SyntaxError, "bad modulus in semiring selection '" + text + "'");
    }
    if (n < 2) fail(Errc::InvalidInput, "zmod modulus must be >= 2");
    SemiringSpec s{SemiringKind::IntMod};
    s.modulus = n;
    return s;
  }
  if (text.rfind("poly:", 0) == 0) {
    SemiringSpec s{SemiringKind::ProvPoly};
    std::string rest = text.substr(5);
    std::string cur;
    for (char c : rest + ",") {
      if (c == ',') {
        if (!cur.empty()) s.indets.push_back(cur);
        cur.clear();
      } else if (!std::isspace(static_cast<unsigned char>(c))) {
        cur += c;
      }
    }
    if (s.indets.empty()) fail(Errc::InvalidInput, "poly semiring needs at least one indeterminate");
    for (std::size_t i = 0; i < s.indets.size(); ++i)
      for (std::size_t j = i + 1; j < s.indets.size(); ++j)
        if (s.indets[i] == s.indets[j])
          fail(Errc::InvalidInput, "duplicate indeterminate '" + s.indets[i] + "'");
    return s;
  }
  fail(Errc::SyntaxError, "unknown semiring selection '" + text + "'");
}

namespace specs {

SpecPtr boolean() {
  static SpecPtr s = std::make_shared<SemiringSpec>(SemiringSpec{SemiringKind::Boolean});
  return s;
}
SpecPtr natural() {
  static SpecPtr s = std::make_shared<SemiringSpec>(SemiringSpec{SemiringKind::Natural});
  return s;
}
SpecPtr rational() {
  static SpecPtr s = std::make_shared<SemiringSpec>(SemiringSpec{SemiringKind::Rational});
  return s;
}
SpecPtr tropical() {
  static SpecPtr s = std::make_shared<SemiringSpec>(SemiringSpec{SemiringKind::Tropical});
  return s;
}
SpecPtr lukasiewicz() {
  static SpecPtr s = std::make_shared<SemiringSpec>(SemiringSpec{SemiringKind::Lukasiewicz});
  return s;
}
SpecPtr int_mod(unsigned long n) {
  if (n < 2) fail(Errc::InvalidInput, "zmod modulus must be >= 2");
  SemiringSpec s{SemiringKind::IntMod};
  s.modulus = n;
  return std::make_shared<SemiringSpec>(std::move(s));
}
SpecPtr prov_poly(std::vector<std::string> indets) {
  SemiringSpec s{SemiringKind::ProvPoly};
  s.indets = std::move(indets);
  if (s.indets.empty()) fail(Errc::InvalidInput, "poly semiring needs at least one indeterminate");
  return std::make_shared<SemiringSpec>(std::move(s));
}
SpecPtr parse(const std::string& text) {
  return std::make_shared<SemiringSpec>(SemiringSpec::parse(text));
}

} // namespace specs

// ---------------------------------------------------------------------------
// Value construction and canonical form

static void check_same_spec(const Value& a, const Value& b) {
  if (!a.valid() || !b.valid()) fail(Errc::InvalidInput, "uninitialised Value");
  if (*a.spec() != *b.spec())
    fail(Errc::SpecMismatch,
         "operands from different semirings: " + a.spec()->name() + " vs " + b.spec()->name());
}

Value Value::make(const SpecPtr& s, Payload p) {
  Value v;
  v.spec_ = s;
  switch (s->kind) {
    case SemiringKind::Boolean:
      if (!std::holds_alternative<bool>(p)) fail(Errc::InvalidInput, "boolean payload expected");
      break;
    case SemiringKind::Natural: {
      auto& z = std::get<mpz_class>(p);
      if (z < 0) fail(Errc::InvalidInput, "natural payload must be non-negative");
      break;
    }
    case SemiringKind::Rational: {
      auto& q = std::get<mpq_class>(p);
      q.canonicalize();
      if (q < 0) fail(Errc::InvalidInput, "rational payload must be non-negative");
      break;
    }
    case SemiringKind::Tropical: {
      auto& t = std::get<TropNum>(p);
      if (t.inf)
        t.q = 0;
      else
        t.q.canonicalize();
      break;
    }
    case SemiringKind::Lukasiewicz: {
      auto& q = std::get<mpq_class>(p);
      q.canonicalize();
      if (q < 0 || q > 1) fail(Errc::InvalidInput, "Lukasiewicz payload must lie in [0,1]");
      break;
    }
    case SemiringKind::IntMod: {
      auto& r = std::get<unsigned long>(p);
      r %= s->modulus;
      break;
    }
    case SemiringKind::ProvPoly: {
      auto& m = std::get<PolyMap>(p);
      for (auto it = m.begin(); it != m.end();) {
        if (it->first.size() != s->indets.size())
          fail(Errc::InvalidInput, "monomial width does not match indeterminate list");
        if (it->second == 0)
          it = m.erase(it);
        else if (it->second < 0)
          fail(Errc::InvalidInput, "polynomial coefficients must be natural");
        else
          ++it;
      }
      break;
    }
  }
  v.v_ = std::move(p);
  return v;
}

Value Value::zero(const SpecPtr& s) {
  switch (s->kind) {
    case SemiringKind::Boolean: return make(s, false);
    case SemiringKind::Natural: return make(s, mpz_class(0));
    case SemiringKind::Rational: return make(s, mpq_class(0));
    case SemiringKind::Tropical: return make(s, TropNum{true, 0});
    case SemiringKind::Lukasiewicz: return make(s, mpq_class(0));
    case SemiringKind::IntMod: return make(s, 0ul);
    case SemiringKind::ProvPoly: return make(s, PolyMap{});
  }
  fail(Errc::InvalidInput, "bad spec");
}

Value Value::one(const SpecPtr& s) {
  switch (s->kind) {
    case SemiringKind::Boolean: return make(s, true);
    case SemiringKind::Natural: return make(s, mpz_class(1));
    case SemiringKind::Rational: return make(s, mpq_class(1));
    case SemiringKind::Tropical: return make(s, TropNum{false, 0});
    case SemiringKind::Lukasiewicz: return make(s, mpq_class(1));
    case SemiringKind::IntMod: return make(s, 1ul);
    case SemiringKind::ProvPoly: {
      PolyMap m;
      m[Monomial(s->indets.size(), 0u)] = 1;
      return make(s, std::move(m));
    }
  }
  fail(Errc::InvalidInput, "bad spec");
}

Value Value::from_uint(const SpecPtr& s, unsigned long n) {
  switch (s->kind) {
    case SemiringKind::Boolean: return make(s, n != 0);
    case SemiringKind::Natural: return make(s, mpz_class(static_cast<long>(n)));
    case SemiringKind::Rational: return make(s, mpq_class(static_cast<long>(n)));
    case SemiringKind::Tropical:
      // n-fold min of the multiplicative identity 0; still 0 unless n = 0.
      return n == 0 ? zero(s) : one(s);
    case SemiringKind::Lukasiewicz: return n == 0 ? zero(s) : one(s); // max-fold of 1
    case SemiringKind::IntMod: return make(s, n % s->modulus);
    case SemiringKind::ProvPoly: {
      PolyMap m;
      if (n != 0) m[Monomial(s->indets.size(), 0u)] = static_cast<long>(n);
      return make(s, std::move(m));
    }
  }
  fail(Errc::InvalidInput, "bad spec");
}

bool Value::is_zero() const { return *this == zero(spec_); }
bool Value::is_one() const { return *this == one(spec_); }

Value Value::with_spec(const SpecPtr& s) const {
  if (!spec_ || *s != *spec_) fail(Errc::SpecMismatch, "with_spec needs a content-equal spec");
  Value v;
  v.spec_ = s;
  v.v_ = v_;
  return v;
}

bool Value::operator==(const Value& o) const {
  if (!spec_ || !o.spec_) return spec_ == o.spec_;
  return *spec_ == *o.spec_ && v_ == o.v_;
}

bool Value::operator<(const Value& o) const {
  check_same_spec(*this, o);
  switch (spec_->kind) {
    case SemiringKind::Boolean: return as_bool() < o.as_bool();
    case SemiringKind::Natural: return as_int() < o.as_int();
    case SemiringKind::Rational:
    case SemiringKind::Lukasiewicz: return as_rat() < o.as_rat();
    case SemiringKind::Tropical: {
      const auto& x = as_trop();
      const auto& y = o.as_trop();
      if (x.inf != y.inf) return y.inf; // finite < inf
      return !x.inf && x.q < y.q;
    }
    case SemiringKind::IntMod: return as_residue() < o.as_residue();
    case SemiringKind::ProvPoly: return as_poly() < o.as_poly();
  }
  return false;
}

// ---------------------------------------------------------------------------
// Arithmetic

static PolyMap poly_add(const PolyMap& a, const PolyMap& b) {
  PolyMap r = a;
  for (const auto& [m, c] : b) {
    auto& slot = r[m];
    slot += c;
    if (slot == 0) r.erase(m);
  }
  return r;
}

static PolyMap poly_mul(const PolyMap& a, const PolyMap& b) {
  PolyMap r;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Monomial m(ma.size());
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      auto& slot = r[m];
      slot += ca * cb;
      if (slot == 0) r.erase(m);
    }
  return r;
}

Value add(const Value& a, const Value& b) {
  check_same_spec(a, b);
  const SpecPtr& s = a.spec();
  switch (s->kind) {
    case SemiringKind::Boolean: return Value::make(s, a.as_bool() || b.as_bool());
    case SemiringKind::Natural: return Value::make(s, mpz_class(a.as_int() + b.as_int()));
    case SemiringKind::Rational: return Value::make(s, mpq_class(a.as_rat() + b.as_rat()));
    case SemiringKind::Tropical: {
      const auto& x = a.as_trop();
      const auto& y = b.as_trop();
      if (x.inf) return b;
      if (y.inf) return a;
      return Value::make(s, TropNum{false, std::min(x.q, y.q)});
    }
    case SemiringKind::Lukasiewicz: return Value::make(s, std::max(a.as_rat(), b.as_rat()));
    case SemiringKind::IntMod: return Value::make(s, (a.as_residue() + b.as_residue()) % s->modulus);
    case SemiringKind::ProvPoly: return Value::make(s, poly_add(a.as_poly(), b.as_poly()));
  }
  fail(Errc::InvalidInput, "bad spec");
}

Value mul(const Value& a, const Value& b) {
  check_same_spec(a, b);
  const SpecPtr& s = a.spec();
  switch (s->kind) {
    case SemiringKind::Boolean: return Value::make(s, a.as_bool() && b.as_bool());
    case SemiringKind::Natural: return Value::make(s, mpz_class(a.as_int() * b.as_int()));
    case SemiringKind::Rational: return Value::make(s, mpq_class(a.as_rat() * b.as_rat()));
    case SemiringKind::Tropical: {
      const auto& x = a.as_trop();
      const auto& y = b.as_trop();
      if (x.inf || y.inf) return Value::zero(s);
      return Value::make(s, TropNum{false, x.q + y.q});
    }
    case SemiringKind::Lukasiewicz: {
      // t-norm max(0, a+b-1); the unit interval analogue of truncated sum.
      mpq_class r = a.as_rat() + b.as_rat() - 1;
      if (r < 0) r = 0;
      return Value::make(s, r);
    }
    case SemiringKind::IntMod: {
      // modulus fits in unsigned long; widen through mpz to avoid overflow
      mpz_class z = mpz_class(a.as_residue()) * mpz_class(b.as_residue());
      return Value::make(s, mpz_class(z % s->modulus).get_ui());
    }
    case SemiringKind::ProvPoly: return Value::make(s, poly_mul(a.as_poly(), b.as_poly()));
  }
  fail(Errc::InvalidInput, "bad spec");
}

Value pow_nat(const Value& a, const mpz_class& e) {
  if (e < 0) fail(Errc::InvalidInput, "negative exponent");
  Value acc = Value::one(a.spec());
  Value base = a;
  mpz_class k = e;
  while (k > 0) {
    if (mpz_odd_p(k.get_mpz_t())) acc = mul(acc, base);
    k >>= 1;
    if (k > 0) base = mul(base, base);
  }
  return acc;
}

bool nat_leq(const Value& a, const Value& b) {
  check_same_spec(a, b);
  const SpecPtr& s = a.spec();
  if (!s->naturally_ordered())
    fail(Errc::NotOrdered, "semiring " + s->name() + " is not naturally ordered");
  switch (s->kind) {
    case SemiringKind::Boolean: return !a.as_bool() || b.as_bool();
    case SemiringKind::Natural: return a.as_int() <= b.as_int();
    case SemiringKind::Rational: return a.as_rat() <= b.as_rat();
    case SemiringKind::Tropical: {
      // min(a, c) = b is solvable iff b is numerically <= a (inf at the bottom).
      const auto& x = a.as_trop();
      const auto& y = b.as_trop();
      if (x.inf) return true;
      if (y.inf) return false;
      return y.q <= x.q;
    }
    case SemiringKind::Lukasiewicz: return a.as_rat() <= b.as_rat();
    case SemiringKind::ProvPoly: {
      // coefficient-wise <=
      const auto& p = a.as_poly();
      const auto& q = b.as_poly();
      for (const auto& [m, c] : p) {
        auto it = q.find(m);
        if (it == q.end() || it->second < c) return false;
      }
      return true;
    }
    case SemiringKind::IntMod: break;
  }
  fail(Errc::NotOrdered, "unreachable");
}

Value characteristic(const Value& a) {
  return Value::make(specs::boolean(), !a.is_zero());
}

bool is_positive(const SemiringSpec& s) { return s.positive(); }

bool is_cancellative(const Value& a) {
  const SpecPtr& s = a.spec();
  switch (s->kind) {
    case SemiringKind::Boolean: return a.as_bool();
    case SemiringKind::Natural: return a.as_int() != 0;
    case SemiringKind::Rational: return a.as_rat() != 0;
    case SemiringKind::Tropical: return !a.as_trop().inf;
    case SemiringKind::Lukasiewicz:
      // a*b = max(0, a+b-1) collapses [0, 1-a] to 0; only a = 1 cancels.
      return a.as_rat() == 1;
    case SemiringKind::IntMod: {
      mpz_class g;
      mpz_gcd_ui(g.get_mpz_t(), mpz_class(a.as_residue()).get_mpz_t(), s->modulus);
      return g == 1;
    }
    case SemiringKind::ProvPoly: return !a.as_poly().empty();
  }
  return false;
}

// ---------------------------------------------------------------------------
// Decomposition enumeration

namespace {

// All tuples of naturals summing to k, lexicographic on the tuple.
bool each_nat_composition(const mpz_class& k, std::size_t parts,
                          const std::function<bool(const std::vector<mpz_class>&)>& yield) {
  std::vector<mpz_class> cur(parts, 0);
  std::function<bool(std::size_t, mpz_class)> rec = [&](std::size_t i, mpz_class rest) -> bool {
    if (i + 1 == parts) {
      cur[i] = rest;
      return yield(cur);
    }
    for (mpz_class v = 0; v <= rest; ++v) {
      cur[i] = v;
      if (!rec(i + 1, rest - v)) return false;
    }
    return true;
  };
  if (parts == 0) return k == 0 ? yield(cur) : true;
  return rec(0, k);
}

// All tuples over a finite candidate list subject to an acceptance test on
// the completed tuple.
bool each_tuple(const std::vector<Value>& candidates, std::size_t parts,
                const std::function<bool(const std::vector<Value>&)>& accept_and_yield) {
  std::vector<Value> cur(parts, candidates.empty() ? Value() : candidates.front());
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == parts) return accept_and_yield(cur);
    for (const Value& c : candidates) {
      cur[i] = c;
      if (!rec(i + 1)) return false;
    }
    return true;
  };
  return rec(0);
}

} // namespace

bool for_each_decomposition(const Value& a, std::size_t parts,
                            const std::optional<GridBound>& bound,
                            const std::function<bool(const std::vector<Value>&)>& yield) {
  const SpecPtr& s = a.spec();
  if (parts == 0) fail(Errc::InvalidInput, "decomposition into zero parts");
  switch (s->kind) {
    case SemiringKind::Boolean: {
      std::vector<Value> cands{Value::zero(s), Value::one(s)};
      if (!a.as_bool()) {
        std::vector<Value> zeros(parts, Value::zero(s));
        return yield(zeros);
      }
      return each_tuple(cands, parts, [&](const std::vector<Value>& t) {
        bool any = false;
        for (const auto& v : t) any = any || v.as_bool();
        return any ? yield(t) : true;
      });
    }
    case SemiringKind::Natural:
      return each_nat_composition(a.as_int(), parts, [&](const std::vector<mpz_class>& ks) {
        std::vector<Value> t;
        t.reserve(parts);
        for (const auto& k : ks) t.push_back(Value::make(s, k));
        return yield(t);
      });
    case SemiringKind::IntMod: {
      unsigned long n = s->modulus;
      std::vector<unsigned long> cur(parts, 0);
      std::function<bool(std::size_t, unsigned long)> rec = [&](std::size_t i,
                                                                unsigned long sum) -> bool {
        if (i + 1 == parts) {
          cur[i] = (a.as_residue() + n - sum % n) % n;
          std::vector<Value> t;
          t.reserve(parts);
          for (unsigned long r : cur) t.push_back(Value::make(s, r));
          return yield(t);
        }
        for (unsigned long v = 0; v < n; ++v) {
          cur[i] = v;
          if (!rec(i + 1, (sum + v) % n)) return false;
        }
        return true;
      };
      return rec(0, 0);
    }
    case SemiringKind::ProvPoly: {
      // Coefficient-wise natural compositions, one block per monomial of a.
      std::vector<std::pair<Monomial, mpz_class>> monos(a.as_poly().begin(), a.as_poly().end());
      std::vector<PolyMap> cur(parts);
      std::function<bool(std::size_t)> rec = [&](std::size_t mi) -> bool {
        if (mi == monos.size()) {
          std::vector<Value> t;
          t.reserve(parts);
          for (const auto& pm : cur) t.push_back(Value::make(s, pm));
          return yield(t);
        }
        return each_nat_composition(monos[mi].second, parts,
                                    [&](const std::vector<mpz_class>& ks) {
                                      for (std::size_t i = 0; i < parts; ++i) {
                                        if (ks[i] != 0)
                                          cur[i][monos[mi].first] = ks[i];
                                        else
                                          cur[i].erase(monos[mi].first);
                                      }
                                      return rec(mi + 1);
                                    });
      };
      return rec(0);
    }
    case SemiringKind::Rational: {
      if (!bound)
        fail(Errc::InfiniteSearch, "rational decompositions need a grid bound");
      // refine the requested grid so that a itself lies on it
      mpz_class den = mpz_class(a.as_rat().get_den());
      mpz_class g;
      mpz_lcm_ui(g.get_mpz_t(), den.get_mpz_t(), std::max(1ul, bound->denominator));
      mpq_class scaled = a.as_rat() * mpq_class(g);
      scaled.canonicalize();
      mpz_class k = scaled.get_num();
      return each_nat_composition(k, parts, [&](const std::vector<mpz_class>& ks) {
        std::vector<Value> t;
        t.reserve(parts);
        for (const auto& kk : ks) {
          mpq_class q(kk, g);
          q.canonicalize();
          t.push_back(Value::make(s, q));
        }
        return yield(t);
      });
    }
    case SemiringKind::Lukasiewicz: {
      if (!bound)
        fail(Errc::InfiniteSearch, "Lukasiewicz decompositions need a grid bound");
      mpz_class den = mpz_class(a.as_rat().get_den());
      mpz_class g;
      mpz_lcm_ui(g.get_mpz_t(), den.get_mpz_t(), std::max(1ul, bound->denominator));
      mpq_class scaled = a.as_rat() * mpq_class(g);
      scaled.canonicalize();
      mpz_class k = scaled.get_num(); // a = k/g, parts range over {0..k}/g, max must be k
      std::vector<Value> cands;
      for (mpz_class v = 0; v <= k; ++v) {
        mpq_class q(v, g);
        q.canonicalize();
        cands.push_back(Value::make(s, q));
      }
      const Value target = a;
      return each_tuple(cands, parts, [&](const std::vector<Value>& t) {
        bool hit = false;
        for (const auto& v : t) hit = hit || v == target;
        return hit ? yield(t) : true;
      });
    }
    case SemiringKind::Tropical: {
      if (a.as_trop().inf) {
        // min = inf forces every part to inf
        std::vector<Value> t(parts, Value::zero(s));
        return yield(t);
      }
      if (!bound)
        fail(Errc::InfiniteSearch, "tropical decompositions need a grid bound");
      mpz_class den = mpz_class(a.as_trop().q.get_den());
      mpz_class g;
      mpz_lcm_ui(g.get_mpz_t(), den.get_mpz_t(), std::max(1ul, bound->denominator));
      std::vector<Value> cands;
      for (unsigned long j = 0; j <= bound->tropical_steps; ++j) {
        mpq_class q = a.as_trop().q + mpq_class(static_cast<long>(j), g);
        q.canonicalize();
        cands.push_back(Value::make(s, TropNum{false, q}));
      }
      cands.push_back(Value::zero(s)); // infinity is always an admissible part
      const Value target = a;
      return each_tuple(cands, parts, [&](const std::vector<Value>& t) {
        bool hit = false;
        for (const auto& v : t) hit = hit || v == target;
        return hit ? yield(t) : true;
      });
    }
  }
  fail(Errc::InvalidInput, "bad spec");
}

std::vector<std::vector<Value>> decompositions(const Value& a, std::size_t parts,
                                               std::optional<GridBound> bound) {
  std::vector<std::vector<Value>> out;
  for_each_decomposition(a, parts, bound, [&](const std::vector<Value>& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Homomorphisms

Homomorphism Homomorphism::characteristic_map(SpecPtr source) {
  Homomorphism h;
  h.kind = Kind::Characteristic;
  h.source = std::move(source);
  h.target = specs::boolean();
  return h;
}
Homomorphism Homomorphism::mod_reduction(unsigned long n) {
  Homomorphism h;
  h.kind = Kind::ModReduction;
  h.source = specs::natural();
  h.target = specs::int_mod(n);
  return h;
}
Homomorphism Homomorphism::nat_to_rat() {
  Homomorphism h;
  h.kind = Kind::NatToRat;
  h.source = specs::natural();
  h.target = specs::rational();
  return h;
}
Homomorphism Homomorphism::poly_eval(SpecPtr source, SpecPtr target,
                                     std::map<std::string, Value> substitution) {
  if (source->kind != SemiringKind::ProvPoly)
    fail(Errc::UnsupportedSpec, "poly_eval source must be a polynomial semiring");
  Homomorphism h;
  h.kind = Kind::PolyEval;
  h.source = std::move(source);
  h.target = std::move(target);
  h.substitution = std::move(substitution);
  for (const auto& name : h.source->indets)
    if (!h.substitution.count(name))
      fail(Errc::MissingIndeterminate, "no substitution for indeterminate '" + name + "'");
  return h;
}
Homomorphism Homomorphism::identity(SpecPtr s) {
  Homomorphism h;
  h.kind = Kind::Identity;
  h.source = s;
  h.target = std::move(s);
  return h;
}

Value hom_apply(const Homomorphism& h, const Value& a) {
  if (*a.spec() != *h.source)
    fail(Errc::SpecMismatch, "value is not from the homomorphism's source semiring");
  switch (h.kind) {
    case Homomorphism::Kind::Identity: return a;
    case Homomorphism::Kind::Characteristic: return characteristic(a);
    case Homomorphism::Kind::ModReduction: {
      mpz_class r = a.as_int() % static_cast<long>(h.target->modulus);
      return Value::make(h.target, r.get_ui());
    }
    case Homomorphism::Kind::NatToRat: return Value::make(h.target, mpq_class(a.as_int()));
    case Homomorphism::Kind::PolyEval: {
      Value acc = Value::zero(h.target);
      for (const auto& [mono, coeff] : a.as_poly()) {
        Value term = Value::from_uint(h.target, 0);
        // coeff * prod(x_i^e_i) with coeff embedded as 1+...+1
        Value prod = Value::one(h.target);
        for (std::size_t i = 0; i < mono.size(); ++i) {
          if (mono[i] == 0) continue;
          const Value& x = h.substitution.at(h.source->indets[i]);
          if (*x.spec() != *h.target) fail(Errc::SpecMismatch, "substituted value in wrong semiring");
          prod = mul(prod, pow_nat(x, mpz_class(mono[i])));
        }
        // natural-coefficient action: coeff-fold sum of prod
        mpz_class k = coeff;
        Value base = prod;
        term = Value::zero(h.target);
        while (k > 0) {
          if (mpz_odd_p(k.get_mpz_t())) term = add(term, base);
          k >>= 1;
          if (k > 0) base = add(base, base);
        }
        acc = add(acc, term);
      }
      return acc;
    }
  }
  fail(Errc::InvalidInput, "bad homomorphism");
}

// ---------------------------------------------------------------------------
// Value literals

static std::string mpq_str(const mpq_class& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

std::string Value::str() const {
  if (!spec_) return "<invalid>";
  switch (spec_->kind) {
    case SemiringKind::Boolean: return as_bool() ? "1" : "0";
    case SemiringKind::Natural: return as_int().get_str();
    case SemiringKind::Rational:
    case SemiringKind::Lukasiewicz: return mpq_str(as_rat());
    case SemiringKind::Tropical: return as_trop().inf ? "inf" : mpq_str(as_trop().q);
    case SemiringKind::IntMod: return std::to_string(as_residue());
    case SemiringKind::ProvPoly: {
      const auto& p = as_poly();
      if (p.empty()) return "0";
      std::string out;
      bool first = true;
      for (const auto& [mono, coeff] : p) {
        if (!first) out += " + ";
        first = false;
        bool wrote = false;
        if (coeff != 1) {
          out += coeff.get_str();
          wrote = true;
        }
        bool any_var = false;
        for (std::size_t i = 0; i < mono.size(); ++i) {
          if (mono[i] == 0) continue;
          any_var = true;
          if (wrote) out += "*";
          out += spec_->indets[i];
          if (mono[i] > 1) out += "^" + std::to_string(mono[i]);
          wrote = true;
        }
        if (!any_var && coeff == 1) out += "1";
      }
      return out;
    }
  }
  return "?";
}

namespace {

mpq_class parse_mpq(const std::string& t) {
  // accepts "p", "p/q", with optional leading '-'
  try {
    mpq_class q(t);
    q.canonicalize();
    return q;
  } catch (...) {
    fail(Errc::SyntaxError, "bad numeric literal '" + t + "'");
  }
}

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

Value parse_poly_literal(const SpecPtr& s, const std::string& text) {
  PolyMap acc;
  std::string t = strip(text);
  if (t == "0") return Value::make(s, std::move(acc));
  std::size_t pos = 0;
  auto add_term = [&](const std::string& term) {
    std::string tt = strip(term);
    if (tt.empty()) fail(Errc::SyntaxError, "empty polynomial term");
    mpz_class coeff = 1;
    Monomial mono(s->indets.size(), 0u);
    bool saw_factor = false;
    std::size_t i = 0;
    auto next_factor = [&]() -> std::string {
      std::size_t start = i;
      while (i < tt.size() && tt[i] != '*') ++i;
      std::string f = strip(tt.substr(start, i - start));
      if (i < tt.size()) ++i; // skip '*'
      return f;
    };
    while (i < tt.size()) {
      std::string f = next_factor();
      if (f.empty()) fail(Errc::SyntaxError, "empty factor in '" + term + "'");
      if (std::isdigit(static_cast<unsigned char>(f[0]))) {
        coeff *= mpz_class(f);
      } else {
        std::string name = f;
        unsigned exp = 1;
        auto caret = f.find('^');
        if (caret != std::string::npos) {
          name = strip(f.substr(0, caret));
          exp = static_cast<unsigned>(std::stoul(strip(f.substr(caret + 1))));
        }
        auto it = std::find(s->indets.begin(), s->indets.end(), name);
        if (it == s->indets.end())
          fail(Errc::MissingIndeterminate, "unknown indeterminate '" + name + "'");
        mono[static_cast<std::size_t>(it - s->indets.begin())] += exp;
      }
      saw_factor = true;
    }
    if (!saw_factor) fail(Errc::SyntaxError, "empty polynomial term");
    auto& slot = acc[mono];
    slot += coeff;
    if (slot == 0) acc.erase(mono);
  };
  std::size_t start = 0;
  while ((pos = t.find('+', start)) != std::string::npos) {
    add_term(t.substr(start, pos - start));
    start = pos + 1;
  }
  add_term(t.substr(start));
  return Value::make(s, std::move(acc));
}

} // namespace

Value parse_value(const SpecPtr& s, const std::string& raw) {
  std::string text = strip(raw);
  if (text.empty()) fail(Errc::SyntaxError, "empty value literal");
  switch (s->kind) {
    case SemiringKind::Boolean:
      if (text == "0") return Value::make(s, false);
      if (text == "1") return Value::make(s, true);
      fail(Errc::SyntaxError, "boolean literal must be 0 or 1, got '" + text + "'");
    case SemiringKind::Natural: {
      mpq_class q = parse_mpq(text);
      if (q.get_den() != 1 || q < 0) fail(Errc::SyntaxError, "not a natural: '" + text + "'");
      return Value::make(s, mpz_class(q.get_num()));
    }
    case SemiringKind::Rational: {
      mpq_class q = parse_mpq(text);
      if (q < 0) fail(Errc::SyntaxError, "negative rational weight '" + text + "'");
      return Value::make(s, q);
    }
    case SemiringKind::Tropical: {
      if (text == "inf") return Value::make(s, TropNum{true, 0});
      return Value::make(s, TropNum{false, parse_mpq(text)});
    }
    case SemiringKind::Lukasiewicz: {
      mpq_class q = parse_mpq(text);
      if (q < 0 || q > 1) fail(Errc::SyntaxError, "Lukasiewicz literal outside [0,1]: '" + text + "'");
      return Value::make(s, q);
    }
    case SemiringKind::IntMod: {
      mpq_class q = parse_mpq(text);
      if (q.get_den() != 1 || q < 0) fail(Errc::SyntaxError, "bad residue '" + text + "'");
      mpz_class r = q.get_num() % static_cast<long>(s->modulus);
      return Value::make(s, r.get_ui());
    }
    case SemiringKind::ProvPoly: return parse_poly_literal(s, text);
  }
  fail(Errc::InvalidInput, "bad spec");
}

} // namespace semiteam
