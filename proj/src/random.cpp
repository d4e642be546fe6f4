#include "semiteam/random.hpp"

namespace semiteam {

Value random_value(Rng& rng, const SpecPtr& spec, bool nonzero) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Value v;
    switch (spec->kind) {
      case SemiringKind::Boolean: v = Value::make(spec, rng.chance(1, 2)); break;
      case SemiringKind::Natural: v = Value::make(spec, mpz_class(rng.below(8))); break;
      case SemiringKind::Rational: {
        mpq_class q(rng.below(9), rng.below(4) + 1);
        q.canonicalize();
        v = Value::make(spec, q);
        break;
      }
      case SemiringKind::Tropical: {
        if (rng.chance(1, 8)) {
          v = Value::zero(spec);
        } else {
          mpq_class q(rng.below(13) - 6, rng.below(3) + 1);
          q.canonicalize();
          v = Value::make(spec, TropNum{false, q});
        }
        break;
      }
      case SemiringKind::Lukasiewicz: {
        int den = rng.below(4) + 1;
        mpq_class q(rng.below(den + 1), den);
        q.canonicalize();
        v = Value::make(spec, q);
        break;
      }
      case SemiringKind::IntMod:
        v = Value::make(spec, static_cast<unsigned long>(rng.below(static_cast<int>(spec->modulus))));
        break;
      case SemiringKind::ProvPoly: {
        PolyMap m;
        int terms = rng.below(3);
        for (int t = 0; t < terms; ++t) {
          Monomial mono(spec->indets.size(), 0u);
          for (auto& e : mono) e = static_cast<unsigned>(rng.below(3));
          mpz_class c(rng.below(3) + 1);
          auto& slot = m[mono];
          slot += c;
        }
        v = Value::make(spec, std::move(m));
        break;
      }
    }
    if (!nonzero || !v.is_zero()) return v;
  }
  return Value::one(spec);
}

} // namespace semiteam
