#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semiteam/formula.hpp"
#include "semiteam/kteam.hpp"
#include "semiteam/parallel.hpp"

namespace semiteam {

/// Finite candidate space for repair search: a weight set (must contain 0)
/// over either the full assignment grid or an explicit row list.
struct RepairSpace {
  std::vector<Value> weights;
  std::optional<std::vector<std::vector<int>>> rows;
};

struct RepairResult {
  std::vector<KTeam> repairs; // all minimisers, canonically sorted
  Value distance;             // achieved minimum, in the distance semiring
  std::string notion;
  bool exhaustive = true;
};

/// The semiring the distances land in: weights embed into an ordered ring
/// where |a-b| makes sense, and the non-negative cone re-imports as
/// naturals (boolean, natural) or non-negative rationals.
SpecPtr distance_spec(const SpecPtr& s);

/// Pointwise |X(s) - Y(s)|, back in the teams' own semiring.
KTeam symdiff(const KTeam& x, const KTeam& y);

/// Sum of the symmetric-difference weights in the distance semiring. For
/// boolean teams this is the cardinality of the classical symmetric
/// difference.
Value dist(const KTeam& x, const KTeam& y);

/// Quantitative non-independence: sum over all value pairs (a, b) of
/// |total * marginal_xy(ab) - marginal_x(a) * marginal_y(b)|. Zero exactly
/// when the pure independence atom holds.
Value nonindep(const KTeam& x, const std::vector<std::string>& xs,
               const std::vector<std::string>& ys);

RepairResult repair_symmetric(const KTeam& x, const std::vector<DependencyAtom>& constraints,
                              const RepairSpace& space, ExecMode mode = ExecMode::Auto);
RepairResult repair_subteam(const KTeam& x, const std::vector<DependencyAtom>& constraints,
                            const RepairSpace& space, ExecMode mode = ExecMode::Auto);
RepairResult repair_superteam(const KTeam& x, const std::vector<DependencyAtom>& constraints,
                              const RepairSpace& space, ExecMode mode = ExecMode::Auto);

/// Minimises nonindep(symdiff(X, Y), xs, ys) over the space; the input team
/// itself is always among the minimisers.
RepairResult repair_min_nonindep(const KTeam& x, const std::vector<std::string>& xs,
                                 const std::vector<std::string>& ys, const RepairSpace& space,
                                 ExecMode mode = ExecMode::Auto);

} // namespace semiteam
