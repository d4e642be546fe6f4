#pragma once

#include <map>
#include <string>

#include "semiteam/cpoly.hpp"
#include "semiteam/kteam.hpp"

namespace semiteam {

/// A team re-weighted over N[X] with one fresh token per support assignment.
struct AnnotatedTeam {
  KTeam team; // over the prov-poly semiring
  std::map<std::vector<int>, std::string> tokens;
};

/// Tokens p1, p2, ... are handed out in tuple order, so re-annotation is
/// stable across runs.
AnnotatedTeam annotate(const KTeam& x);

/// Provenance literal value: each satisfied support row contributes its
/// token as a factor, an unsatisfied support row annihilates the product,
/// rows outside the support contribute 1.
Value eval_prov_literal(const std::string& rel, const std::vector<std::string>& vars, bool negated,
                        const Structure& a, const AnnotatedTeam& ax);

/// The algebraic compilation with provenance literal expansion.
CompiledPoly compile_prov(const Structure& a, const TfPtr& f, const AnnotatedTeam& ax);

/// Substitutes a target value per indeterminate (the polynomial-evaluation
/// homomorphism).
Value specialize(const Value& poly, const std::map<std::string, Value>& substitution);

} // namespace semiteam
