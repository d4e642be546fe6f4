#pragma once

#include <string>
#include <vector>

#include "semiteam/formula.hpp"
#include "semiteam/kteam.hpp"

namespace semiteam {

/// theta_{i1..in}(u1..un): there is an R-fact whose projections to the index
/// tuples equal the given variable tuples. Index positions are 1-based into
/// the arity of `rel`; bound variables are chosen fresh against the u-vars.
FoPtr theta(const std::vector<std::vector<int>>& index_tuples,
            const std::vector<std::vector<std::string>>& uvar_tuples, const std::string& rel,
            int arity);

/// The defining sentence of a dependency atom over a team with the given
/// (VarOrder-sorted) domain: dep uses =bot / !=bot comparisons, indep uses =,
/// inc uses <=, literals use =bot and !=bot.
FoPtr atom_sentence(const DependencyAtom& atom, const std::vector<std::string>& team_domain,
                    const std::string& team_rel = "R");

/// Inlines theta-style subformulae whose equality constraints pin bound
/// variables to outer variables, turning them into direct relational lookups
/// (the Example-4.4 rewriting). Evaluation-preserving.
FoPtr simplify(const FoPtr& f);

/// Reference route: evaluates the defining sentence under pi_X.
/// Literal atoms need a structure; use eval_atom_in_structure.
Value eval_atom(const KTeam& x, const DependencyAtom& atom);

/// Fast route over marginal tables. Yields exactly the sentence value
/// (which is 0/1 for indep, inc and literals, and 0 or (1+1)^m for dep).
Value eval_atom_direct(const KTeam& x, const DependencyAtom& atom);

/// Sentence route under pi_{A,X} (required for literal atoms; dependency
/// atoms ignore the structure part).
Value eval_atom_in_structure(const Structure& a, const KTeam& x, const DependencyAtom& atom);

/// Fast route with a structure for literal atoms.
Value eval_atom_direct_in_structure(const Structure& a, const KTeam& x,
                                    const DependencyAtom& atom);

bool satisfies(const KTeam& x, const DependencyAtom& atom);
bool satisfies_in_structure(const Structure& a, const KTeam& x, const DependencyAtom& atom);

} // namespace semiteam
