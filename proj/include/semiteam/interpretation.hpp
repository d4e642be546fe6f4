#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "semiteam/formula.hpp"
#include "semiteam/semiring.hpp"

namespace semiteam {

/// Finite ordered universe. Element order is fixed at construction and
/// drives quantifier iteration and tuple encodings.
struct Universe {
  std::vector<std::string> elems;
  std::map<std::string, int> index;

  static std::shared_ptr<const Universe> of(std::vector<std::string> names);
  int size() const { return static_cast<int>(elems.size()); }
  int index_of(const std::string& name) const;
};

using UniversePtr = std::shared_ptr<const Universe>;

/// Finite map from variables to universe element indices.
struct Assignment {
  std::map<std::string, int> map;

  bool has(const std::string& v) const { return map.count(v) != 0; }
  int at(const std::string& v) const;
  Assignment extended(const std::string& v, int elem) const; // s[a/x]
  bool operator<(const Assignment& o) const { return map < o.map; }
  bool operator==(const Assignment& o) const { return map == o.map; }
};

/// Classical relational structure over a finite universe.
struct Structure {
  UniversePtr universe;
  Vocabulary vocab;
  std::map<std::string, std::set<std::vector<int>>> relations;

  bool holds(const std::string& rel, const std::vector<int>& tuple) const;
};

/// Mixed-radix rank of a tuple over a universe of the given size.
std::size_t tuple_rank(const std::vector<int>& tuple, int base);
std::vector<int> tuple_unrank(std::size_t rank, int arity, int base);
std::size_t tuple_space_size(int arity, int base);

/// Total map from facts and negated facts over the universe to semiring
/// values (the K-interpretation of literals).
class KInterpretation {
public:
  KInterpretation(UniversePtr universe, Vocabulary vocab, SpecPtr spec);

  const UniversePtr& universe() const { return universe_; }
  const Vocabulary& vocab() const { return vocab_; }
  const SpecPtr& spec() const { return spec_; }

  const Value& fact(const std::string& rel, const std::vector<int>& tuple, bool negated) const;
  void set_fact(const std::string& rel, const std::vector<int>& tuple, bool negated, Value v);

  /// Applies fn(rel, tuple, positive_value, negated_value) to every fact pair.
  void for_each_fact(const std::function<void(const std::string&, const std::vector<int>&,
                                              const Value&, const Value&)>& fn) const;

private:
  struct RelTable {
    int arity;
    std::vector<Value> pos, neg;
  };
  UniversePtr universe_;
  Vocabulary vocab_;
  SpecPtr spec_;
  std::map<std::string, RelTable> tables_;
};

/// Compositional evaluation: and -> product, or -> sum, forall -> product
/// over the universe, exists -> sum, negation via nnf, equality atoms and
/// formula comparisons to 0/1. Comparisons with <= need a naturally ordered
/// semiring.
Value eval(const KInterpretation& pi, const Assignment& s, const FoPtr& f);

bool is_model_defining(const KInterpretation& pi);

KInterpretation canonical_interpretation(const Structure& a);

/// Literal-wise image under a homomorphism; FO sentences then commute.
KInterpretation transport(const Homomorphism& h, const KInterpretation& pi);

struct SampleConfig {
  int samples = 200;
  int max_universe = 3;
  std::uint64_t seed = 1;
};

/// Refutation-only equivalence probe: evaluates both sentences on sampled
/// model-defining interpretations and reports whether they always agreed.
bool k_equivalent_sample(const FoPtr& f, const FoPtr& g, const SpecPtr& spec,
                         const SampleConfig& cfg);

} // namespace semiteam
