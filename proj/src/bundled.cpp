#include "semiteam/bundled.hpp"

namespace semiteam {

namespace {

KTeam two_var_team(const SpecPtr& spec, const std::vector<std::pair<std::string, std::string>>& rows) {
  UniversePtr u = Universe::of({"a", "b"});
  KTeam t({"x", "y"}, u, spec);
  for (const auto& [cells, w] : rows) {
    std::vector<int> tuple{u->index_of(std::string(1, cells[0])),
                           u->index_of(std::string(1, cells[1]))};
    t.set_weight(tuple, parse_value(spec, w));
  }
  return t;
}

} // namespace

KTeam bundled_boolean_team() {
  return two_var_team(specs::boolean(), {{"aa", "1"}, {"ab", "1"}});
}

KTeam bundled_natural_team() {
  return two_var_team(specs::natural(), {{"aa", "2"}, {"bb", "5"}});
}

KTeam bundled_rational_team() {
  return two_var_team(specs::rational(), {{"aa", "1/4"}, {"ab", "3/4"}});
}

KTeam bundled_mixing_team() {
  SpecPtr spec = specs::int_mod(4);
  UniversePtr u = Universe::of({"a0", "a1", "a2", "a3", "b0", "b1", "b2", "b3", "c0", "c1"});
  KTeam t({"x", "y", "z"}, u, spec);
  const Value one = Value::one(spec);
  auto row = [&](const char* x, const char* y, const char* z) {
    t.set_weight({u->index_of(x), u->index_of(y), u->index_of(z)}, one);
  };
  row("a0", "b0", "c0");
  row("a0", "b1", "c0");
  row("a1", "b0", "c1");
  row("a1", "b1", "c1");
  row("a2", "b2", "c0");
  row("a2", "b3", "c0");
  row("a3", "b2", "c1");
  row("a3", "b3", "c1");
  return t;
}

} // namespace semiteam
