#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "semiteam/error.hpp"

namespace semiteam {

/// Relational vocabulary: symbol names with arities.
struct Vocabulary {
  std::map<std::string, int> arity;

  bool has(const std::string& r) const { return arity.count(r) != 0; }
  int arity_of(const std::string& r) const;
  Vocabulary with(const std::string& r, int ar) const;
};

enum class CmpOp { Eq, Neq, Leq, NotLeq };

const char* cmp_op_text(CmpOp op);
CmpOp cmp_negate(CmpOp op); // = <-> !=, <= <-> !<=

struct FoFormula;
using FoPtr = std::shared_ptr<const FoFormula>;

/// First-order formulae extended with formula (in)equalities. Immutable;
/// share freely. Bot/Top are the formula constants evaluating to 0 and 1.
struct FoFormula {
  enum class Kind { RelLit, EqLit, Bot, Top, And, Or, Not, Exists, Forall, Cmp };

  Kind kind;
  bool negated = false;           // literal polarity (RelLit, EqLit)
  std::string rel;                // RelLit
  std::vector<std::string> vars;  // RelLit args; EqLit uses vars[0], vars[1]
  std::string var;                // quantifiers
  CmpOp op = CmpOp::Eq;           // Cmp
  FoPtr a, b;                     // children; Not and quantifier body in a
};

FoPtr fo_rel(std::string rel, std::vector<std::string> vars, bool negated = false);
FoPtr fo_eq(std::string x, std::string y, bool negated = false);
FoPtr fo_bot();
FoPtr fo_top();
FoPtr fo_and(FoPtr l, FoPtr r);
FoPtr fo_or(FoPtr l, FoPtr r);
FoPtr fo_not(FoPtr f);
FoPtr fo_exists(std::string var, FoPtr body);
FoPtr fo_forall(std::string var, FoPtr body);
FoPtr fo_cmp(FoPtr l, CmpOp op, FoPtr r);
FoPtr fo_implies(FoPtr l, FoPtr r);   // !l | r
FoPtr fo_iff(FoPtr l, FoPtr r);       // (l -> r) & (r -> l)
FoPtr fo_is_bot(FoPtr f);             // f = bot
FoPtr fo_not_bot(FoPtr f);            // f != bot

/// Conjunction / disjunction of a list; empty list gives top / bot.
FoPtr fo_and_all(const std::vector<FoPtr>& fs);
FoPtr fo_or_all(const std::vector<FoPtr>& fs);

bool fo_equal(const FoPtr& x, const FoPtr& y);

/// Negation normal form. Negation moves to literals; formula (in)equalities
/// flip their operator (= <-> !=, <= <-> !<=) and normalise both sides.
FoPtr nnf(const FoPtr& f);

std::set<std::string> free_vars(const FoPtr& f);

/// Comparison operators as they appear in FO(C) operator sets. IsBot and
/// NotBot are the special cases `phi = bot` and `phi != bot`; Eq and Neq
/// stand for the unrestricted versions.
enum class FocOp { IsBot, NotBot, Eq, Neq, Leq, NotLeq };

std::set<FocOp> foc_collapse_forward();  // {=, !=bot, <=}
std::set<FocOp> foc_collapse_backward(); // {=bot, !=, !<=}
std::set<FocOp> foc_all();

/// FO(C) well-formedness: every comparison node uses an operator from
/// `allowed` (a bot-sided =/!= also passes via IsBot/NotBot), sits under an
/// even number of negations, and nests no further comparison in either
/// operand.
bool check_foc(const FoPtr& f, const std::set<FocOp>& allowed);

std::string print_fo(const FoPtr& f);

/// Parses the concrete syntax. Comparison binds weakest below quantifiers,
/// so `A & B = C & D` reads ((A&B) = (C&D)); bare `x = y` between variable
/// tokens is an equality atom.
FoPtr parse_fo(const std::string& text, const Vocabulary& vocab);

// ---------------------------------------------------------------------------
// Team-logic formulae (negation normal form by construction)

/// Dependency atom over team variables. Tuple roles:
///   dep(xs; ys)        xs functionally determine ys
///   indep(xs; ys; zs)  ys and zs independent given xs (xs may be empty)
///   inc(xs; ys)        xs-marginals dominated by ys-marginals, |xs| = |ys|
///   lit: rel(xs) or !rel(xs), a first-order literal over the structure
struct DependencyAtom {
  enum class Kind { Dep, Indep, Inc, Lit };
  Kind kind = Kind::Dep;
  std::vector<std::string> xs, ys, zs;
  std::string rel;
  bool negated = false;

  std::string str() const;
};

/// Parses atom text: dep(x;y), indep(x;y;z) (first block may be empty),
/// inc(x,y;u,v), T(x,y), !T(x,y).
DependencyAtom parse_atom(const std::string& text, const Vocabulary& structure_vocab);

struct TeamFormula;
using TfPtr = std::shared_ptr<const TeamFormula>;

struct TeamFormula {
  enum class Kind { RelLit, EqLit, Atom, And, Or, Exists, Forall };

  Kind kind;
  bool negated = false;
  std::string rel;
  std::vector<std::string> vars;
  DependencyAtom atom;
  std::string var;
  TfPtr a, b;
};

TfPtr tf_rel(std::string rel, std::vector<std::string> vars, bool negated = false);
TfPtr tf_eq(std::string x, std::string y, bool negated = false);
TfPtr tf_atom(DependencyAtom atom);
TfPtr tf_and(TfPtr l, TfPtr r);
TfPtr tf_or(TfPtr l, TfPtr r);
TfPtr tf_exists(std::string var, TfPtr body);
TfPtr tf_forall(std::string var, TfPtr body);

bool tf_equal(const TfPtr& x, const TfPtr& y);
std::set<std::string> free_vars(const TfPtr& f);

/// Inclusion atoms compare marginals with the natural order, so formulas
/// containing one are rejected up front on unordered semirings.
bool contains_inclusion_atom(const TfPtr& f);
std::string print_team(const TfPtr& f);
TfPtr parse_team(const std::string& text, const Vocabulary& structure_vocab);

} // namespace semiteam
