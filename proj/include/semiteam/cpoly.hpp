#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "semiteam/kteam.hpp"
#include "semiteam/parallel.hpp"
#include "semiteam/teamcheck.hpp"

namespace semiteam {

struct CPoly;
using CPolyPtr = std::shared_ptr<const CPoly>;

/// Constrained-polynomial IR: terms over the semiring extended with
/// chi-constraint nodes that compare two term values and yield 0 or 1.
/// Team weights enter as variables X(a), Y1(a), ... indexed by family and
/// tuple; big products and sums are realised as n-ary Mul/Add nodes.
struct CPoly {
  enum class Kind { Const, TeamVar, Add, Mul, Chi };

  Kind kind = Kind::Const;
  Value cval;                      // Const
  int family = -1;                 // TeamVar
  std::vector<int> tuple;          // TeamVar
  CmpOp op = CmpOp::Eq;            // Chi
  std::vector<CPolyPtr> children;  // Add/Mul n-ary; Chi exactly two
};

CPolyPtr cp_const(Value v);
CPolyPtr cp_var(int family, std::vector<int> tuple);
CPolyPtr cp_add(std::vector<CPolyPtr> children);
CPolyPtr cp_mul(std::vector<CPolyPtr> children);
CPolyPtr cp_chi(CPolyPtr l, CmpOp op, CPolyPtr r);

/// Registry entry for a team-variable family. families[0] is always the
/// input team X; every disjunction and quantifier introduces fresh families
/// whose origin records how their tables relate to the parent's.
struct FamilyInfo {
  enum class Origin { Input, SplitLeft, SplitRight, ForallExt, ExistsExt };

  std::string name;
  std::vector<std::string> domain; // VarOrder-sorted
  Origin origin = Origin::Input;
  int parent = -1;
  int partner = -1;   // the other half of a split
  std::string var;    // quantifier variable for the extension origins
  bool rebind = false; // quantified variable was already in the parent domain
};

struct CompiledPoly {
  CPolyPtr root;
  std::vector<FamilyInfo> families;
  UniversePtr universe;
  SpecPtr spec;

  std::size_t grid_size(int family) const;
};

/// Total assignment of values to every (family, tuple) slot.
class Valuation {
public:
  Valuation(const CompiledPoly& cp, const SpecPtr& spec);

  const Value& at(int family, const std::vector<int>& tuple) const;
  void set(int family, const std::vector<int>& tuple, Value v);
  std::vector<Value>& table(int family) { return tables_[static_cast<std::size_t>(family)]; }
  const std::vector<Value>& table(int family) const {
    return tables_[static_cast<std::size_t>(family)];
  }
  int universe_size() const { return base_; }

private:
  std::vector<std::vector<Value>> tables_;
  int base_;
};

/// Compiles a team formula against a structure: literals expand into
/// chi-guarded products of structure truths, dependency atoms import their
/// defining sentences with team weights as variables, disjunction /
/// quantifier nodes introduce fresh families tied by chi constraints.
/// With provenance_literals the literal rule drops the chi guard on the
/// nonzero side and lets the weight itself flow into the product.
CompiledPoly compile(const Structure& a, const TfPtr& f,
                     const std::vector<std::string>& team_domain, const SpecPtr& spec,
                     bool provenance_literals = false);

Value evaluate(const CPolyPtr& p, const Valuation& v, const SpecPtr& spec);

/// Fills families[0] from the team (and zero elsewhere); helper for the
/// searches below.
Valuation fix_input(const CompiledPoly& cp, const KTeam& x);

/// Enumerates every valuation of the fresh families admitted by the chi
/// constraints (the same space the operational checker searches), with
/// families[0] fixed
/// from the team. The callback returns false to stop early.
void for_each_witness_valuation(const CompiledPoly& cp, const KTeam& x,
                                const SplitStrategy& strat,
                                const std::function<bool(const Valuation&)>& fn);

/// True iff some assignment of the fresh families yields a nonzero value.
/// The search enumerates exactly the decompositions admitted by the chi
/// constraints, which is exactly the operational checker's split space.
bool range_nonzero(const CompiledPoly& cp, const KTeam& x, const SplitStrategy& strat);

/// Number of fresh-family valuations (in the strategy's space) with nonzero
/// value. Formulae without fresh families count one empty valuation when
/// satisfied.
mpz_class count_witnesses(const CompiledPoly& cp, const KTeam& x, const SplitStrategy& strat);

/// Number of teams over the given weight grid whose compiled polynomial has
/// nonzero range. The candidate set must contain zero. The scan over the
/// team grid runs on the OpenMP kernel unless a serial mode is forced.
mpz_class count_satisfying_teams(const Structure& a, const TfPtr& f,
                                 const std::vector<std::string>& domain,
                                 const std::vector<Value>& weight_candidates,
                                 const SplitStrategy& strat, ExecMode mode = ExecMode::Auto);

/// SMT-LIB2 rendering of "some fresh valuation makes the polynomial
/// nonzero", with the input team inlined as constants and non-negativity
/// side constraints. Supported for the natural and non-negative rational
/// semirings (positivity lets nonzero-ness distribute over + and *).
std::string export_existential(const CompiledPoly& cp, const KTeam& x);

std::string print_cpoly(const CompiledPoly& cp);

} // namespace semiteam
