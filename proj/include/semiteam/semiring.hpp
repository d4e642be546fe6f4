#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "semiteam/error.hpp"

namespace semiteam {

enum class SemiringKind {
  Boolean,     // ({0,1}, or, and, 0, 1)
  Natural,     // (N, +, *, 0, 1)
  Rational,    // (Q>=0, +, *, 0, 1)
  Tropical,    // (Q u {inf}, min, +, inf, 0)
  Lukasiewicz, // ([0,1], max, a*b = max(0, a+b-1), 0, 1)
  IntMod,      // (Z_n, +, *, 0, 1)
  ProvPoly,    // (N[X], +, *, 0, 1) over a fixed indeterminate list
};

/// A semiring carrier description plus capability flags. The flags are a
/// fixed function of the kind; they gate which engine operations apply
/// (natural order comparisons, finite weight-decomposition search, ...).
struct SemiringSpec {
  SemiringKind kind = SemiringKind::Boolean;
  unsigned long modulus = 0;        // IntMod only, >= 2
  std::vector<std::string> indets;  // ProvPoly only, ordered

  bool positive() const;               // +-positive and no zero divisors
  bool naturally_ordered() const;      // a <= b iff exists c: a+c=b is a partial order
  bool plus_dense() const;             // every nonzero a splits as nonzero b+c
  bool finitely_decomposable() const;  // {(b,c) : b+c=a} finite for every a

  bool operator==(const SemiringSpec& o) const {
    return kind == o.kind && modulus == o.modulus && indets == o.indets;
  }
  bool operator!=(const SemiringSpec& o) const { return !(*this == o); }

  std::string name() const;

  /// Parses a selection string: boolean | nat | rat | tropical | lukasiewicz
  /// | zmod:<n> | poly:<p1,p2,...>
  static SemiringSpec parse(const std::string& text);
};

using SpecPtr = std::shared_ptr<const SemiringSpec>;

namespace specs {
SpecPtr boolean();
SpecPtr natural();
SpecPtr rational();
SpecPtr tropical();
SpecPtr lukasiewicz();
SpecPtr int_mod(unsigned long n);
SpecPtr prov_poly(std::vector<std::string> indets);
SpecPtr parse(const std::string& text);
} // namespace specs

/// Tropical payload: a rational or the point at infinity (the additive
/// identity of the min-plus semiring).
struct TropNum {
  bool inf = false;
  mpq_class q;  // zero when inf, keeping equality structural

  bool operator==(const TropNum& o) const { return inf == o.inf && q == o.q; }
};

using Monomial = std::vector<unsigned>;        // exponent per indeterminate
using PolyMap = std::map<Monomial, mpz_class>; // sorted, no zero coefficients

/// A single semiring element. Payloads are exact (GMP-backed); two Values
/// compare equal iff their canonical payloads are identical.
class Value {
public:
  using Payload = std::variant<bool, mpz_class, mpq_class, TropNum, unsigned long, PolyMap>;

  Value() = default;

  static Value zero(const SpecPtr& s);
  static Value one(const SpecPtr& s);
  static Value make(const SpecPtr& s, Payload p);

  /// Convenience: embeds a small non-negative integer via repeated 1+1+...
  /// semantics (exact for every kind).
  static Value from_uint(const SpecPtr& s, unsigned long n);

  const SpecPtr& spec() const { return spec_; }
  bool valid() const { return spec_ != nullptr; }
  bool is_zero() const;
  bool is_one() const;

  bool as_bool() const { return std::get<bool>(v_); }
  const mpz_class& as_int() const { return std::get<mpz_class>(v_); }
  const mpq_class& as_rat() const { return std::get<mpq_class>(v_); }
  const TropNum& as_trop() const { return std::get<TropNum>(v_); }
  unsigned long as_residue() const { return std::get<unsigned long>(v_); }
  const PolyMap& as_poly() const { return std::get<PolyMap>(v_); }

  /// Same payload bound to a content-equal spec object. Parallel scans hand
  /// each thread its own spec clone so reference-count traffic stays local.
  Value with_spec(const SpecPtr& s) const;

  bool operator==(const Value& o) const;
  bool operator!=(const Value& o) const { return !(*this == o); }
  /// Deterministic total order for canonical sorting; unrelated to the
  /// semiring's natural order.
  bool operator<(const Value& o) const;

  std::string str() const;

private:
  SpecPtr spec_;
  Payload v_;
};

Value add(const Value& a, const Value& b);
Value mul(const Value& a, const Value& b);
Value pow_nat(const Value& a, const mpz_class& e); // a^e by binary exponentiation, e >= 0

/// Natural order: a <= b iff exists c with a+c=b. Throws NotOrdered for
/// kinds where this relation is not antisymmetric (IntMod).
bool nat_leq(const Value& a, const Value& b);

/// chi: 1 if a != 0 else 0, landing in the Boolean semiring.
Value characteristic(const Value& a);

bool is_positive(const SemiringSpec& s);

/// a is cancellative iff ab = ac implies b = c for all b, c.
bool is_cancellative(const Value& a);

/// Grid bound for weight-decomposition search on kinds that are not
/// finitely decomposable. Rational-like kinds restrict parts to multiples
/// of 1/denominator (refined by the denominators already present in a);
/// the tropical kind additionally needs a finite window of grid steps
/// above the target together with the point at infinity.
struct GridBound {
  unsigned long denominator = 1;
  unsigned long tropical_steps = 8;
};

/// Enumerates tuples (b_1..b_parts) with b_1 + ... + b_parts = a. Exhaustive
/// for finitely decomposable kinds; restricted to the bound's grid otherwise
/// (InfiniteSearch when unbounded). `yield` returns false to stop early;
/// the function returns false iff stopped.
bool for_each_decomposition(const Value& a, std::size_t parts,
                            const std::optional<GridBound>& bound,
                            const std::function<bool(const std::vector<Value>&)>& yield);

std::vector<std::vector<Value>> decompositions(const Value& a, std::size_t parts,
                                               std::optional<GridBound> bound = {});

/// Semiring homomorphisms shipped with the engine.
struct Homomorphism {
  enum class Kind {
    Characteristic, // K -> B (a homomorphism iff the source is positive)
    ModReduction,   // N -> Z_n
    NatToRat,       // N -> Q>=0
    PolyEval,       // N[X] -> K, substituting a target Value per indeterminate
    Identity,
  };
  Kind kind = Kind::Identity;
  SpecPtr source, target;
  std::map<std::string, Value> substitution; // PolyEval only

  static Homomorphism characteristic_map(SpecPtr source);
  static Homomorphism mod_reduction(unsigned long n);
  static Homomorphism nat_to_rat();
  static Homomorphism poly_eval(SpecPtr source, SpecPtr target,
                                std::map<std::string, Value> substitution);
  static Homomorphism identity(SpecPtr s);
};

Value hom_apply(const Homomorphism& h, const Value& a);

/// Value-literal parsing/printing, kind-directed: 0/1; decimal naturals;
/// p/q rationals; rational or inf; rational in [0,1]; residues; polynomial
/// text like `2*p1*p2 + q`.
Value parse_value(const SpecPtr& s, const std::string& text);

} // namespace semiteam
