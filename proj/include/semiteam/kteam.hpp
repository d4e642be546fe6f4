#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semiteam/interpretation.hpp"
#include "semiteam/semiring.hpp"

namespace semiteam {

/// Fixed global variable order: lexicographic on names. It determines the
/// tuple encoding a_s = (s(x_1), ..., s(x_k)) shared by every operation that
/// turns assignments into relation tuples.
struct VarOrder {
  bool operator()(const std::string& a, const std::string& b) const { return a < b; }
};

/// Weight function from assignments over a fixed domain/universe to semiring
/// values, stored sparsely (absent tuple = 0). Domain is kept sorted by
/// VarOrder; tuples index elements of the universe in domain order.
class KTeam {
public:
  KTeam(std::vector<std::string> domain, UniversePtr universe, SpecPtr spec);

  /// Builds from (assignment, weight) rows; variables may come in any order.
  static KTeam from_rows(const std::vector<std::string>& domain, UniversePtr universe,
                         SpecPtr spec,
                         const std::vector<std::pair<Assignment, Value>>& rows);

  const std::vector<std::string>& domain() const { return domain_; }
  const UniversePtr& universe() const { return universe_; }
  const SpecPtr& spec() const { return spec_; }
  const std::map<std::vector<int>, Value>& weights() const { return weights_; }

  Value weight(const std::vector<int>& tuple) const;
  Value weight(const Assignment& s) const;
  void set_weight(const std::vector<int>& tuple, Value v); // erases zeros

  std::vector<int> tuple_of(const Assignment& s) const;
  Assignment assignment_of(const std::vector<int>& tuple) const;

  std::vector<Assignment> support() const;
  bool operator==(const KTeam& o) const;

  std::string str() const; // canonical one-line rendering, for keys and logs

private:
  std::vector<std::string> domain_;
  UniversePtr universe_;
  SpecPtr spec_;
  std::map<std::vector<int>, Value> weights_;
};

/// X is a subteam of Y when X(s) <= Y(s) on the support of X (natural order).
bool is_subteam(const KTeam& x, const KTeam& y);

/// chi composed with the weight function: the boolean shadow of the team.
KTeam possibilistic_collapse(const KTeam& x);

/// Sum of weights of rows whose projection to `vars` equals `values`
/// (element indices). An empty tuple yields the total weight.
Value marginal(const KTeam& x, const std::vector<std::string>& vars,
               const std::vector<int>& values);
Value marginal_named(const KTeam& x, const std::vector<std::string>& vars,
                     const std::vector<std::string>& value_names);

/// The interpretation pi_X: a fresh |domain|-ary relation holds the team
/// weights, with chi-complement negated facts, making the result
/// model-defining.
KInterpretation to_interpretation(const KTeam& x, const std::string& rel = "R");

/// pi_{A,X}: structure facts become 0/1 in the team's semiring, the team
/// relation carries the weights. The team symbol must not clash with the
/// structure's vocabulary.
KInterpretation to_joint_interpretation(const Structure& a, const KTeam& x,
                                        const std::string& rel = "R");

/// Team CSV: header row of variable names plus trailing `weight`; one row
/// per assignment; duplicate assignments are an error; zero weights are
/// dropped. Universe defaults to the elements mentioned in the file, in
/// first-appearance order, unless one is supplied.
KTeam load_team_csv(std::istream& in, const SpecPtr& spec,
                    std::optional<UniversePtr> universe = {});
KTeam load_team_csv_file(const std::string& path, const SpecPtr& spec,
                         std::optional<UniversePtr> universe = {});

} // namespace semiteam
