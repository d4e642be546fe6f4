#include "semiteam/provenance.hpp"

#include <algorithm>

namespace semiteam {

AnnotatedTeam annotate(const KTeam& x) {
  std::vector<std::string> names;
  std::map<std::vector<int>, std::string> tokens;
  int i = 0;
  for (const auto& [tuple, w] : x.weights()) {
    (void)w;
    std::string name = "p" + std::to_string(++i);
    names.push_back(name);
    tokens.emplace(tuple, std::move(name));
  }
  if (names.empty()) names.push_back("p1"); // the polynomial semiring needs an indeterminate
  SpecPtr spec = specs::prov_poly(names);

  KTeam t(x.domain(), x.universe(), spec);
  std::size_t k = 0;
  for (const auto& [tuple, name] : tokens) {
    PolyMap m;
    Monomial mono(names.size(), 0u);
    mono[k++] = 1;
    m[mono] = 1;
    t.set_weight(tuple, Value::make(spec, std::move(m)));
  }
  return AnnotatedTeam{std::move(t), std::move(tokens)};
}

Value eval_prov_literal(const std::string& rel, const std::vector<std::string>& vars, bool negated,
                        const Structure& a, const AnnotatedTeam& ax) {
  if (!a.vocab.has(rel)) fail(Errc::VocabularyClash, "literal relation '" + rel + "' unknown");
  const KTeam& t = ax.team;
  std::vector<std::size_t> pos;
  pos.reserve(vars.size());
  for (const auto& v : vars) {
    auto it = std::find(t.domain().begin(), t.domain().end(), v);
    if (it == t.domain().end()) fail(Errc::UnknownVariable, "variable '" + v + "' not in team");
    pos.push_back(static_cast<std::size_t>(it - t.domain().begin()));
  }
  Value acc = Value::one(t.spec());
  for (const auto& [row, w] : t.weights()) {
    std::vector<int> tuple;
    tuple.reserve(pos.size());
    for (auto p : pos) tuple.push_back(row[p]);
    bool in = a.holds(rel, tuple);
    if (negated) in = !in;
    if (!in) return Value::zero(t.spec()); // annihilates the whole product
    acc = mul(acc, w);
  }
  return acc;
}

CompiledPoly compile_prov(const Structure& a, const TfPtr& f, const AnnotatedTeam& ax) {
  return compile(a, f, ax.team.domain(), ax.team.spec(), /*provenance_literals=*/true);
}

Value specialize(const Value& poly, const std::map<std::string, Value>& substitution) {
  if (poly.spec()->kind != SemiringKind::ProvPoly)
    fail(Errc::UnsupportedSpec, "specialize expects a provenance polynomial");
  if (substitution.empty()) fail(Errc::MissingIndeterminate, "empty substitution");
  SpecPtr target = substitution.begin()->second.spec();
  Homomorphism h = Homomorphism::poly_eval(poly.spec(), target, substitution);
  return hom_apply(h, poly);
}

} // namespace semiteam
