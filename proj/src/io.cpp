#include "semiteam/io.hpp"

#include <fstream>
#include <sstream>

namespace semiteam {

namespace {

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

struct HeaderLines {
  std::vector<std::string> universe;
  std::vector<std::tuple<std::string, int, std::string>> rels; // name, arity, extension text
  std::vector<std::string> rest;                               // lit / default lines
};

HeaderLines read_lines(std::istream& in) {
  HeaderLines h;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = strip(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.rfind("universe:", 0) == 0) {
      h.universe = words(t.substr(9));
      continue;
    }
    if (t.rfind("rel ", 0) == 0) {
      std::string rest = strip(t.substr(4));
      std::string decl = rest, ext;
      auto colon = rest.find(':');
      if (colon != std::string::npos) {
        decl = strip(rest.substr(0, colon));
        ext = strip(rest.substr(colon + 1));
      }
      auto slash = decl.find('/');
      if (slash == std::string::npos)
        fail(Errc::SyntaxError, "relation declaration needs name/arity: '" + t + "'");
      std::string name = strip(decl.substr(0, slash));
      int arity = 0;
      try {
        arity = std::stoi(decl.substr(slash + 1));
      } catch (...) {
        fail(Errc::SyntaxError, "bad arity in '" + t + "'");
      }
      if (arity < 0) fail(Errc::SyntaxError, "negative arity in '" + t + "'");
      h.rels.emplace_back(name, arity, ext);
      continue;
    }
    h.rest.push_back(t);
  }
  if (h.universe.empty()) fail(Errc::SyntaxError, "missing 'universe:' line");
  return h;
}

std::vector<std::vector<int>> parse_extension(const std::string& ext, int arity,
                                              const Universe& u) {
  std::vector<std::vector<int>> tuples;
  if (strip(ext).empty()) return tuples;
  std::string cur;
  auto flush = [&]() {
    auto ws = words(cur);
    if (ws.empty()) return;
    if (static_cast<int>(ws.size()) != arity)
      fail(Errc::ArityError, "tuple '" + cur + "' does not match arity " + std::to_string(arity));
    std::vector<int> t;
    for (const auto& w : ws) t.push_back(u.index_of(w));
    tuples.push_back(std::move(t));
    cur.clear();
  };
  for (char c : ext + "|") {
    if (c == '|')
      flush();
    else
      cur += c;
  }
  return tuples;
}

} // namespace

Structure load_structure(std::istream& in) {
  HeaderLines h = read_lines(in);
  if (!h.rest.empty())
    fail(Errc::SyntaxError, "unexpected line in structure file: '" + h.rest.front() + "'");
  Structure a;
  a.universe = Universe::of(h.universe);
  for (const auto& [name, arity, ext] : h.rels) {
    if (a.vocab.has(name)) fail(Errc::SyntaxError, "relation '" + name + "' declared twice");
    a.vocab.arity[name] = arity;
    auto tuples = parse_extension(ext, arity, *a.universe);
    a.relations[name] = {tuples.begin(), tuples.end()};
  }
  return a;
}

Structure load_structure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::InvalidInput, "cannot open structure file '" + path + "'");
  return load_structure(in);
}

std::string save_structure(const Structure& a) {
  std::string out = "universe:";
  for (const auto& e : a.universe->elems) out += " " + e;
  out += "\n";
  for (const auto& [name, arity] : a.vocab.arity) {
    out += "rel " + name + "/" + std::to_string(arity) + ":";
    bool first = true;
    auto it = a.relations.find(name);
    if (it != a.relations.end()) {
      for (const auto& t : it->second) {
        out += first ? " " : " | ";
        first = false;
        for (std::size_t i = 0; i < t.size(); ++i) {
          if (i) out += " ";
          out += a.universe->elems[static_cast<std::size_t>(t[i])];
        }
      }
    }
    out += "\n";
  }
  return out;
}

KInterpretation load_interpretation(std::istream& in, const SpecPtr& spec) {
  HeaderLines h = read_lines(in);
  UniversePtr u = Universe::of(h.universe);
  Vocabulary vocab;
  for (const auto& [name, arity, ext] : h.rels) {
    (void)ext;
    vocab.arity[name] = arity;
  }

  Value dflt = Value::zero(spec);
  struct LitLine {
    std::string rel;
    std::vector<int> tuple;
    bool negated;
    Value v;
  };
  std::vector<LitLine> lits;

  for (const auto& line : h.rest) {
    if (line.rfind("default:", 0) == 0) {
      dflt = parse_value(spec, strip(line.substr(8)));
      continue;
    }
    if (line.rfind("lit ", 0) != 0)
      fail(Errc::SyntaxError, "unexpected line in interpretation file: '" + line + "'");
    std::string rest = strip(line.substr(4));
    auto eq = rest.rfind('=');
    if (eq == std::string::npos) fail(Errc::SyntaxError, "lit line needs '= value': '" + line + "'");
    std::string litpart = strip(rest.substr(0, eq));
    std::string valpart = strip(rest.substr(eq + 1));
    bool neg = false;
    if (!litpart.empty() && litpart[0] == '!') {
      neg = true;
      litpart = strip(litpart.substr(1));
    }
    auto lp = litpart.find('(');
    auto rp = litpart.rfind(')');
    if (lp == std::string::npos || rp == std::string::npos || rp < lp)
      fail(Errc::SyntaxError, "bad literal '" + litpart + "'");
    std::string rel = strip(litpart.substr(0, lp));
    if (!vocab.has(rel)) fail(Errc::UnknownSymbol, "literal uses undeclared relation '" + rel + "'");
    std::string args = litpart.substr(lp + 1, rp - lp - 1);
    std::vector<int> tuple;
    std::string cur;
    for (char c : args + ",") {
      if (c == ',') {
        std::string w = strip(cur);
        if (!w.empty()) tuple.push_back(u->index_of(w));
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (static_cast<int>(tuple.size()) != vocab.arity_of(rel))
      fail(Errc::ArityError, "literal arity mismatch in '" + line + "'");
    lits.push_back({rel, std::move(tuple), neg, parse_value(spec, valpart)});
  }

  KInterpretation pi(u, vocab, spec);
  for (const auto& [rel, arity] : vocab.arity) {
    std::size_t n = tuple_space_size(arity, u->size());
    for (std::size_t r = 0; r < n; ++r) {
      auto tuple = tuple_unrank(r, arity, u->size());
      pi.set_fact(rel, tuple, false, dflt);
      pi.set_fact(rel, tuple, true, dflt);
    }
  }
  for (const auto& l : lits) pi.set_fact(l.rel, l.tuple, l.negated, l.v);
  return pi;
}

KInterpretation load_interpretation_file(const std::string& path, const SpecPtr& spec) {
  std::ifstream in(path);
  if (!in) fail(Errc::InvalidInput, "cannot open interpretation file '" + path + "'");
  return load_interpretation(in, spec);
}

} // namespace semiteam
