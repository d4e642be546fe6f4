#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "semiteam/atoms.hpp"
#include "semiteam/formula.hpp"
#include "semiteam/kteam.hpp"

namespace semiteam {

/// Witness search strategy for the disjunction/existential weight splits.
/// ExactFinite enumerates every decomposition (finitely decomposable
/// semirings only); DenomBounded restricts rational-like weights to a
/// 1/denominator grid, sound but complete only relative to the grid;
/// ExportOnly refuses to search and points at the algebraic export.
struct SplitStrategy {
  enum class Mode { ExactFinite, DenomBounded, ExportOnly };
  Mode mode = Mode::ExactFinite;
  unsigned long denominator = 1;
  unsigned long tropical_steps = 4;

  static SplitStrategy exact();
  static SplitStrategy denom(unsigned long d);
};

/// Witness tree for a successful check: the split teams chosen at each
/// disjunction / quantifier node. Replaying re-verifies satisfaction.
struct TraceNode {
  std::string rule;
  std::string formula;
  std::vector<KTeam> teams;
  std::vector<std::shared_ptr<const TraceNode>> children;
};

using TracePtr = std::shared_ptr<const TraceNode>;

struct CheckResult {
  bool satisfied = false;
  bool complete = true; // false: bounded search exhausted its grid without a witness
  TracePtr trace;
};

/// Weighted team semantics: literals hold on the support,
/// conjunction shares the team, disjunction splits weights pointwise,
/// universal quantification copies weights to every extension, existential
/// quantification decomposes each weight across the universe, and atoms are
/// evaluated under the joint interpretation.
CheckResult check(const Structure& a, const KTeam& x, const TfPtr& f, const SplitStrategy& strat,
                  bool want_trace = false);

/// Classical lax team semantics plus the standard relational atom
/// definitions; the boolean reference point for collapse comparisons.
bool check_classical(const Structure& a, const std::set<Assignment>& team, const TfPtr& f);

std::set<Assignment> collapse_support(const KTeam& x);

/// (K-team verdict, collapse verdict) pair for the preservation suite.
std::pair<CheckResult, bool> collapse_check(const Structure& a, const KTeam& x, const TfPtr& f,
                                            const SplitStrategy& strat);

/// Re-verifies a trace against the instance it came from.
bool replay_trace(const Structure& a, const KTeam& x, const TfPtr& f, const TracePtr& trace);

} // namespace semiteam
