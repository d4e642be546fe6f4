#include "semiteam/kteam.hpp"

#include <algorithm>
#include <set>
#include <fstream>
#include <sstream>

namespace semiteam {

KTeam::KTeam(std::vector<std::string> domain, UniversePtr universe, SpecPtr spec)
    : domain_(std::move(domain)), universe_(std::move(universe)), spec_(std::move(spec)) {
  std::sort(domain_.begin(), domain_.end(), VarOrder{});
  for (std::size_t i = 1; i < domain_.size(); ++i)
    if (domain_[i] == domain_[i - 1])
      fail(Errc::InvalidInput, "duplicate team variable '" + domain_[i] + "'");
}

KTeam KTeam::from_rows(const std::vector<std::string>& domain, UniversePtr universe, SpecPtr spec,
                       const std::vector<std::pair<Assignment, Value>>& rows) {
  KTeam t(domain, std::move(universe), std::move(spec));
  std::set<std::vector<int>> seen; // zero rows are dropped but still count as duplicates
  for (const auto& [s, v] : rows) {
    std::vector<int> tup = t.tuple_of(s);
    if (!seen.insert(tup).second) fail(Errc::InvalidInput, "duplicate assignment row");
    if (*v.spec() != *t.spec_) fail(Errc::SpecMismatch, "weight from wrong semiring");
    if (!v.is_zero()) t.weights_.emplace(std::move(tup), v);
  }
  return t;
}

Value KTeam::weight(const std::vector<int>& tuple) const {
  auto it = weights_.find(tuple);
  return it == weights_.end() ? Value::zero(spec_) : it->second;
}

Value KTeam::weight(const Assignment& s) const { return weight(tuple_of(s)); }

void KTeam::set_weight(const std::vector<int>& tuple, Value v) {
  if (tuple.size() != domain_.size()) fail(Errc::InvalidInput, "tuple width != domain size");
  if (*v.spec() != *spec_) fail(Errc::SpecMismatch, "weight from wrong semiring");
  if (v.is_zero())
    weights_.erase(tuple);
  else
    weights_[tuple] = std::move(v);
}

std::vector<int> KTeam::tuple_of(const Assignment& s) const {
  if (s.map.size() != domain_.size())
    fail(Errc::InvalidInput, "assignment domain differs from team domain");
  std::vector<int> t;
  t.reserve(domain_.size());
  for (const auto& v : domain_) {
    auto it = s.map.find(v);
    if (it == s.map.end()) fail(Errc::UnknownVariable, "assignment lacks variable '" + v + "'");
    if (it->second < 0 || it->second >= universe_->size())
      fail(Errc::InvalidInput, "assignment value outside universe");
    t.push_back(it->second);
  }
  return t;
}

Assignment KTeam::assignment_of(const std::vector<int>& tuple) const {
  Assignment s;
  for (std::size_t i = 0; i < domain_.size(); ++i) s.map[domain_[i]] = tuple[i];
  return s;
}

std::vector<Assignment> KTeam::support() const {
  std::vector<Assignment> out;
  out.reserve(weights_.size());
  for (const auto& [tup, w] : weights_) out.push_back(assignment_of(tup));
  return out;
}

bool KTeam::operator==(const KTeam& o) const {
  return domain_ == o.domain_ && universe_->elems == o.universe_->elems && *spec_ == *o.spec_ &&
         weights_ == o.weights_;
}

std::string KTeam::str() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [tup, w] : weights_) {
    if (!first) out += ", ";
    first = false;
    for (std::size_t i = 0; i < tup.size(); ++i) {
      if (i) out += " ";
      out += universe_->elems[static_cast<std::size_t>(tup[i])];
    }
    out += " -> " + w.str();
  }
  return out + "}";
}

bool is_subteam(const KTeam& x, const KTeam& y) {
  if (x.domain() != y.domain() || x.universe()->elems != y.universe()->elems)
    fail(Errc::InvalidInput, "subteam comparison needs matching domain and universe");
  if (*x.spec() != *y.spec()) fail(Errc::SpecMismatch, "subteam comparison across semirings");
  if (!x.spec()->naturally_ordered())
    fail(Errc::NotOrdered, "subteam order needs a naturally ordered semiring");
  for (const auto& [tup, w] : x.weights())
    if (!nat_leq(w, y.weight(tup))) return false;
  return true;
}

KTeam possibilistic_collapse(const KTeam& x) {
  KTeam out(x.domain(), x.universe(), specs::boolean());
  for (const auto& [tup, w] : x.weights()) out.set_weight(tup, characteristic(w));
  return out;
}

Value marginal(const KTeam& x, const std::vector<std::string>& vars,
               const std::vector<int>& values) {
  if (vars.size() != values.size()) fail(Errc::LengthMismatch, "marginal tuple width mismatch");
  std::vector<std::size_t> pos;
  pos.reserve(vars.size());
  for (const auto& v : vars) {
    auto it = std::find(x.domain().begin(), x.domain().end(), v);
    if (it == x.domain().end()) fail(Errc::UnknownVariable, "variable '" + v + "' not in team");
    pos.push_back(static_cast<std::size_t>(it - x.domain().begin()));
  }
  Value acc = Value::zero(x.spec());
  for (const auto& [tup, w] : x.weights()) {
    bool match = true;
    for (std::size_t i = 0; i < pos.size(); ++i)
      if (tup[pos[i]] != values[i]) {
        match = false;
        break;
      }
    if (match) acc = add(acc, w);
  }
  return acc;
}

Value marginal_named(const KTeam& x, const std::vector<std::string>& vars,
                     const std::vector<std::string>& value_names) {
  std::vector<int> vals;
  vals.reserve(value_names.size());
  for (const auto& n : value_names) vals.push_back(x.universe()->index_of(n));
  return marginal(x, vars, vals);
}

KInterpretation to_interpretation(const KTeam& x, const std::string& rel) {
  Vocabulary vocab;
  vocab.arity[rel] = static_cast<int>(x.domain().size());
  KInterpretation pi(x.universe(), vocab, x.spec());
  const int n = x.universe()->size();
  const int ar = static_cast<int>(x.domain().size());
  const Value one = Value::one(x.spec());
  const Value zero = Value::zero(x.spec());
  std::size_t total = tuple_space_size(ar, n);
  for (std::size_t r = 0; r < total; ++r) {
    std::vector<int> tuple = tuple_unrank(r, ar, n);
    Value w = x.weight(tuple);
    bool z = w.is_zero();
    pi.set_fact(rel, tuple, false, std::move(w));
    pi.set_fact(rel, tuple, true, z ? one : zero);
  }
  return pi;
}

KInterpretation to_joint_interpretation(const Structure& a, const KTeam& x,
                                        const std::string& rel) {
  if (a.universe->elems != x.universe()->elems)
    fail(Errc::InvalidInput, "structure and team live on different universes");
  if (a.vocab.has(rel))
    fail(Errc::VocabularyClash, "team relation symbol '" + rel + "' already in vocabulary");
  Vocabulary vocab = a.vocab.with(rel, static_cast<int>(x.domain().size()));
  KInterpretation pi(x.universe(), vocab, x.spec());
  const Value one = Value::one(x.spec());
  const Value zero = Value::zero(x.spec());
  const int n = x.universe()->size();
  for (const auto& [r, ar] : a.vocab.arity) {
    std::size_t total = tuple_space_size(ar, n);
    for (std::size_t t = 0; t < total; ++t) {
      std::vector<int> tuple = tuple_unrank(t, ar, n);
      bool in = a.holds(r, tuple);
      pi.set_fact(r, tuple, false, in ? one : zero);
      pi.set_fact(r, tuple, true, in ? zero : one);
    }
  }
  const int ar = static_cast<int>(x.domain().size());
  std::size_t total = tuple_space_size(ar, n);
  for (std::size_t t = 0; t < total; ++t) {
    std::vector<int> tuple = tuple_unrank(t, ar, n);
    Value w = x.weight(tuple);
    bool z = w.is_zero();
    pi.set_fact(rel, tuple, false, std::move(w));
    pi.set_fact(rel, tuple, true, z ? one : zero);
  }
  return pi;
}

// ---------------------------------------------------------------------------
// CSV loading

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line + ",") {
    if (c == ',') {
      std::size_t b = cur.find_first_not_of(" \t\r");
      std::size_t e = cur.find_last_not_of(" \t\r");
      out.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

} // namespace

KTeam load_team_csv(std::istream& in, const SpecPtr& spec, std::optional<UniversePtr> universe) {
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    header = split_csv_line(line);
    break;
  }
  if (header.size() < 1 || header.back() != "weight")
    fail(Errc::SyntaxError, "team CSV header must end with a 'weight' column");
  std::vector<std::string> vars(header.begin(), header.end() - 1);

  struct Row {
    std::vector<std::string> elems;
    std::string weight;
  };
  std::vector<Row> rows;
  std::vector<std::string> elem_order;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      fail(Errc::SyntaxError, "team CSV row has " + std::to_string(cells.size()) +
                                  " cells, expected " + std::to_string(header.size()));
    Row r;
    r.weight = cells.back();
    r.elems.assign(cells.begin(), cells.end() - 1);
    for (const auto& e : r.elems)
      if (seen.emplace(e, 1).second) elem_order.push_back(e);
    rows.push_back(std::move(r));
  }

  UniversePtr u;
  if (universe) {
    u = *universe;
  } else {
    if (elem_order.empty()) elem_order.push_back("a"); // empty team still needs a universe
    u = Universe::of(elem_order);
  }

  std::vector<std::pair<Assignment, Value>> parsed;
  parsed.reserve(rows.size());
  for (const auto& r : rows) {
    Assignment s;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (s.map.count(vars[i])) fail(Errc::SyntaxError, "duplicate column '" + vars[i] + "'");
      s.map[vars[i]] = u->index_of(r.elems[i]);
    }
    parsed.emplace_back(std::move(s), parse_value(spec, r.weight));
  }
  return KTeam::from_rows(vars, u, spec, parsed);
}

KTeam load_team_csv_file(const std::string& path, const SpecPtr& spec,
                         std::optional<UniversePtr> universe) {
  std::ifstream in(path);
  if (!in) fail(Errc::InvalidInput, "cannot open team file '" + path + "'");
  return load_team_csv(in, spec, std::move(universe));
}

} // namespace semiteam
