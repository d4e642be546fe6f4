#include "semiteam/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace semiteam {

int Vocabulary::arity_of(const std::string& r) const {
  auto it = arity.find(r);
  if (it == arity.end()) fail(Errc::UnknownSymbol, "unknown relation symbol '" + r + "'");
  return it->second;
}

Vocabulary Vocabulary::with(const std::string& r, int ar) const {
  Vocabulary v = *this;
  v.arity[r] = ar;
  return v;
}

const char* cmp_op_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Neq: return "!=";
    case CmpOp::Leq: return "<=";
    case CmpOp::NotLeq: return "!<=";
  }
  return "?";
}

CmpOp cmp_negate(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return CmpOp::Neq;
    case CmpOp::Neq: return CmpOp::Eq;
    case CmpOp::Leq: return CmpOp::NotLeq;
    case CmpOp::NotLeq: return CmpOp::Leq;
  }
  return CmpOp::Eq;
}

// ---------------------------------------------------------------------------
// Constructors

static FoPtr mk(FoFormula f) { return std::make_shared<const FoFormula>(std::move(f)); }

FoPtr fo_rel(std::string rel, std::vector<std::string> vars, bool negated) {
  FoFormula f{FoFormula::Kind::RelLit};
  f.rel = std::move(rel);
  f.vars = std::move(vars);
  f.negated = negated;
  return mk(std::move(f));
}
FoPtr fo_eq(std::string x, std::string y, bool negated) {
  FoFormula f{FoFormula::Kind::EqLit};
  f.vars = {std::move(x), std::move(y)};
  f.negated = negated;
  return mk(std::move(f));
}
FoPtr fo_bot() {
  static FoPtr b = mk(FoFormula{FoFormula::Kind::Bot});
  return b;
}
FoPtr fo_top() {
  static FoPtr t = mk(FoFormula{FoFormula::Kind::Top});
  return t;
}
FoPtr fo_and(FoPtr l, FoPtr r) {
  FoFormula f{FoFormula::Kind::And};
  f.a = std::move(l);
  f.b = std::move(r);
  return mk(std::move(f));
}
FoPtr fo_or(FoPtr l, FoPtr r) {
  FoFormula f{FoFormula::Kind::Or};
  f.a = std::move(l);
  f.b = std::move(r);
  return mk(std::move(f));
}
FoPtr fo_not(FoPtr x) {
  FoFormula f{FoFormula::Kind::Not};
  f.a = std::move(x);
  return mk(std::move(f));
}
FoPtr fo_exists(std::string var, FoPtr body) {
  FoFormula f{FoFormula::Kind::Exists};
  f.var = std::move(var);
  f.a = std::move(body);
  return mk(std::move(f));
}
FoPtr fo_forall(std::string var, FoPtr body) {
  FoFormula f{FoFormula::Kind::Forall};
  f.var = std::move(var);
  f.a = std::move(body);
  return mk(std::move(f));
}
FoPtr fo_cmp(FoPtr l, CmpOp op, FoPtr r) {
  FoFormula f{FoFormula::Kind::Cmp};
  f.op = op;
  f.a = std::move(l);
  f.b = std::move(r);
  return mk(std::move(f));
}
FoPtr fo_implies(FoPtr l, FoPtr r) { return fo_or(fo_not(std::move(l)), std::move(r)); }
FoPtr fo_iff(FoPtr l, FoPtr r) {
  return fo_and(fo_implies(l, r), fo_implies(r, l));
}
FoPtr fo_is_bot(FoPtr f) { return fo_cmp(std::move(f), CmpOp::Eq, fo_bot()); }
FoPtr fo_not_bot(FoPtr f) { return fo_cmp(std::move(f), CmpOp::Neq, fo_bot()); }

FoPtr fo_and_all(const std::vector<FoPtr>& fs) {
  if (fs.empty()) return fo_top();
  FoPtr acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = fo_and(acc, fs[i]);
  return acc;
}
FoPtr fo_or_all(const std::vector<FoPtr>& fs) {
  if (fs.empty()) return fo_bot();
  FoPtr acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = fo_or(acc, fs[i]);
  return acc;
}

bool fo_equal(const FoPtr& x, const FoPtr& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->kind != y->kind || x->negated != y->negated || x->rel != y->rel ||
      x->vars != y->vars || x->var != y->var || x->op != y->op)
    return false;
  return fo_equal(x->a, y->a) && fo_equal(x->b, y->b);
}

// ---------------------------------------------------------------------------
// nnf / free variables / FO(C) check

static FoPtr nnf_neg(const FoPtr& f);

FoPtr nnf(const FoPtr& f) {
  switch (f->kind) {
    case FoFormula::Kind::RelLit:
    case FoFormula::Kind::EqLit:
    case FoFormula::Kind::Bot:
    case FoFormula::Kind::Top: return f;
    case FoFormula::Kind::And: return fo_and(nnf(f->a), nnf(f->b));
    case FoFormula::Kind::Or: return fo_or(nnf(f->a), nnf(f->b));
    case FoFormula::Kind::Exists: return fo_exists(f->var, nnf(f->a));
    case FoFormula::Kind::Forall: return fo_forall(f->var, nnf(f->a));
    case FoFormula::Kind::Cmp: return fo_cmp(nnf(f->a), f->op, nnf(f->b));
    case FoFormula::Kind::Not: return nnf_neg(f->a);
  }
  return f;
}

static FoPtr nnf_neg(const FoPtr& f) {
  switch (f->kind) {
    case FoFormula::Kind::RelLit: return fo_rel(f->rel, f->vars, !f->negated);
    case FoFormula::Kind::EqLit: return fo_eq(f->vars[0], f->vars[1], !f->negated);
    case FoFormula::Kind::Bot: return fo_top();
    case FoFormula::Kind::Top: return fo_bot();
    case FoFormula::Kind::And: return fo_or(nnf_neg(f->a), nnf_neg(f->b));
    case FoFormula::Kind::Or: return fo_and(nnf_neg(f->a), nnf_neg(f->b));
    case FoFormula::Kind::Exists: return fo_forall(f->var, nnf_neg(f->a));
    case FoFormula::Kind::Forall: return fo_exists(f->var, nnf_neg(f->a));
    case FoFormula::Kind::Cmp: return fo_cmp(nnf(f->a), cmp_negate(f->op), nnf(f->b));
    case FoFormula::Kind::Not: return nnf(f->a);
  }
  return f;
}

std::set<std::string> free_vars(const FoPtr& f) {
  std::set<std::string> out;
  std::function<void(const FoPtr&, std::set<std::string>&)> rec =
      [&](const FoPtr& g, std::set<std::string>& bound) {
        switch (g->kind) {
          case FoFormula::Kind::RelLit:
            for (const auto& v : g->vars)
              if (!bound.count(v)) out.insert(v);
            break;
          case FoFormula::Kind::EqLit:
            for (const auto& v : g->vars)
              if (!bound.count(v)) out.insert(v);
            break;
          case FoFormula::Kind::Bot:
          case FoFormula::Kind::Top: break;
          case FoFormula::Kind::Not: rec(g->a, bound); break;
          case FoFormula::Kind::And:
          case FoFormula::Kind::Or:
          case FoFormula::Kind::Cmp:
            rec(g->a, bound);
            rec(g->b, bound);
            break;
          case FoFormula::Kind::Exists:
          case FoFormula::Kind::Forall: {
            bool had = bound.count(g->var) != 0;
            bound.insert(g->var);
            rec(g->a, bound);
            if (!had) bound.erase(g->var);
            break;
          }
        }
      };
  std::set<std::string> bound;
  rec(f, bound);
  return out;
}

std::set<FocOp> foc_collapse_forward() { return {FocOp::Eq, FocOp::NotBot, FocOp::Leq}; }
std::set<FocOp> foc_collapse_backward() { return {FocOp::IsBot, FocOp::Neq, FocOp::NotLeq}; }
std::set<FocOp> foc_all() {
  return {FocOp::IsBot, FocOp::NotBot, FocOp::Eq, FocOp::Neq, FocOp::Leq, FocOp::NotLeq};
}

static bool has_cmp(const FoPtr& f) {
  if (!f) return false;
  if (f->kind == FoFormula::Kind::Cmp) return true;
  return has_cmp(f->a) || has_cmp(f->b);
}

bool check_foc(const FoPtr& f, const std::set<FocOp>& allowed) {
  std::function<bool(const FoPtr&, bool)> rec = [&](const FoPtr& g, bool odd) -> bool {
    switch (g->kind) {
      case FoFormula::Kind::RelLit:
      case FoFormula::Kind::EqLit:
      case FoFormula::Kind::Bot:
      case FoFormula::Kind::Top: return true;
      case FoFormula::Kind::Not: return rec(g->a, !odd);
      case FoFormula::Kind::And:
      case FoFormula::Kind::Or: return rec(g->a, odd) && rec(g->b, odd);
      case FoFormula::Kind::Exists:
      case FoFormula::Kind::Forall: return rec(g->a, odd);
      case FoFormula::Kind::Cmp: {
        if (odd) return false;
        if (has_cmp(g->a) || has_cmp(g->b)) return false;
        bool bot_side = g->a->kind == FoFormula::Kind::Bot || g->b->kind == FoFormula::Kind::Bot;
        bool ok = false;
        switch (g->op) {
          case CmpOp::Eq: ok = allowed.count(FocOp::Eq) || (bot_side && allowed.count(FocOp::IsBot)); break;
          case CmpOp::Neq: ok = allowed.count(FocOp::Neq) || (bot_side && allowed.count(FocOp::NotBot)); break;
          case CmpOp::Leq: ok = allowed.count(FocOp::Leq) != 0; break;
          case CmpOp::NotLeq: ok = allowed.count(FocOp::NotLeq) != 0; break;
        }
        return ok;
      }
    }
    return false;
  };
  return rec(f, false);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// precedence ranks for printing: quantifier 0, cmp 1, or 2, and 3, unary 4
int fo_rank(const FoFormula& f) {
  switch (f.kind) {
    case FoFormula::Kind::Exists:
    case FoFormula::Kind::Forall: return 0;
    case FoFormula::Kind::Cmp: return 1;
    case FoFormula::Kind::Or: return 2;
    case FoFormula::Kind::And: return 3;
    default: return 4;
  }
}

void print_fo_rec(const FoPtr& f, std::string& out) {
  auto paren = [&](const FoPtr& g, int need) {
    if (fo_rank(*g) < need) {
      out += '(';
      print_fo_rec(g, out);
      out += ')';
    } else {
      print_fo_rec(g, out);
    }
  };
  switch (f->kind) {
    case FoFormula::Kind::RelLit: {
      if (f->negated) out += '!';
      out += f->rel;
      out += '(';
      for (std::size_t i = 0; i < f->vars.size(); ++i) {
        if (i) out += ", ";
        out += f->vars[i];
      }
      out += ')';
      break;
    }
    case FoFormula::Kind::EqLit:
      out += f->vars[0];
      out += f->negated ? " != " : " = ";
      out += f->vars[1];
      break;
    case FoFormula::Kind::Bot: out += "bot"; break;
    case FoFormula::Kind::Top: out += "top"; break;
    case FoFormula::Kind::Not: {
      // always parenthesised: `!atom` is reserved for negated literals
      out += "!(";
      print_fo_rec(f->a, out);
      out += ')';
      break;
    }
    case FoFormula::Kind::And:
      paren(f->a, 3);
      out += " & ";
      paren(f->b, 4);
      break;
    case FoFormula::Kind::Or:
      paren(f->a, 2);
      out += " | ";
      paren(f->b, 3);
      break;
    case FoFormula::Kind::Cmp:
      paren(f->a, 2);
      out += ' ';
      out += cmp_op_text(f->op);
      out += ' ';
      paren(f->b, 2);
      break;
    case FoFormula::Kind::Exists:
    case FoFormula::Kind::Forall: {
      out += f->kind == FoFormula::Kind::Exists ? "exists " : "forall ";
      out += f->var;
      FoPtr body = f->a;
      while (body->kind == f->kind) {
        out += ", ";
        out += body->var;
        body = body->a;
      }
      out += ". ";
      print_fo_rec(body, out);
      break;
    }
  }
}

} // namespace

std::string print_fo(const FoPtr& f) {
  std::string out;
  print_fo_rec(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Lexer shared by both grammars

namespace {

enum class Tok {
  Ident, LParen, RParen, Comma, Dot, Semi, Amp, Pipe, Bang,
  Eq, Neq, Leq, NotLeq, End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

struct Lexer {
  std::string src;
  std::vector<Token> toks;
  std::size_t i = 0;

  explicit Lexer(std::string s) : src(std::move(s)) {
    std::size_t p = 0;
    auto push = [&](Tok k, std::string t, std::size_t at) { toks.push_back({k, std::move(t), at}); };
    while (p < src.size()) {
      char c = src[p];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++p;
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t s0 = p;
        while (p < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[p])) || src[p] == '_' || src[p] == '\''))
          ++p;
        push(Tok::Ident, src.substr(s0, p - s0), s0);
        continue;
      }
      if (src.compare(p, 3, "!<=") == 0) { push(Tok::NotLeq, "!<=", p); p += 3; continue; }
      if (src.compare(p, 2, "!=") == 0) { push(Tok::Neq, "!=", p); p += 2; continue; }
      if (src.compare(p, 2, "<=") == 0) { push(Tok::Leq, "<=", p); p += 2; continue; }
      switch (c) {
        case '(': push(Tok::LParen, "(", p); break;
        case ')': push(Tok::RParen, ")", p); break;
        case ',': push(Tok::Comma, ",", p); break;
        case '.': push(Tok::Dot, ".", p); break;
        case ';': push(Tok::Semi, ";", p); break;
        case '&': push(Tok::Amp, "&", p); break;
        case '|': push(Tok::Pipe, "|", p); break;
        case '!': push(Tok::Bang, "!", p); break;
        case '=': push(Tok::Eq, "=", p); break;
        default:
          fail(Errc::SyntaxError,
               "unexpected character '" + std::string(1, c) + "' at position " + std::to_string(p));
      }
      ++p;
    }
    toks.push_back({Tok::End, "", src.size()});
  }

  const Token& peek(std::size_t k = 0) const { return toks[std::min(i + k, toks.size() - 1)]; }
  Token next() { return toks[std::min(i++, toks.size() - 1)]; }
  bool accept(Tok k) {
    if (peek().kind == k) {
      ++i;
      return true;
    }
    return false;
  }
  Token expect(Tok k, const std::string& what) {
    if (peek().kind != k)
      fail(Errc::SyntaxError, "expected " + what + " at position " + std::to_string(peek().pos) +
                                  ", got '" + peek().text + "'");
    return next();
  }
  [[noreturn]] void bail(const std::string& what) {
    fail(Errc::SyntaxError, "expected " + what + " at position " + std::to_string(peek().pos) +
                                ", got '" + (peek().kind == Tok::End ? "<end>" : peek().text) + "'");
  }
};

bool is_keyword(const std::string& s) {
  return s == "forall" || s == "exists" || s == "bot" || s == "top" || s == "dep" ||
         s == "indep" || s == "inc";
}

std::vector<std::string> parse_varlist(Lexer& lx) {
  std::vector<std::string> vars;
  for (;;) {
    Token t = lx.expect(Tok::Ident, "variable");
    if (is_keyword(t.text)) fail(Errc::SyntaxError, "keyword '" + t.text + "' used as variable");
    vars.push_back(t.text);
    if (!lx.accept(Tok::Comma)) break;
  }
  return vars;
}

// --------------------------- first-order grammar ---------------------------

struct FoParser {
  Lexer& lx;
  const Vocabulary& vocab;

  FoPtr formula() {
    if (lx.peek().kind == Tok::Ident && (lx.peek().text == "forall" || lx.peek().text == "exists")) {
      bool uni = lx.next().text == "forall";
      std::vector<std::string> vars = parse_varlist(lx);
      lx.expect(Tok::Dot, "'.'");
      FoPtr body = formula();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        body = uni ? fo_forall(*it, body) : fo_exists(*it, body);
      return body;
    }
    return cmp();
  }

  FoPtr cmp() {
    FoPtr l = disj();
    CmpOp op;
    switch (lx.peek().kind) {
      case Tok::Eq: op = CmpOp::Eq; break;
      case Tok::Neq: op = CmpOp::Neq; break;
      case Tok::Leq: op = CmpOp::Leq; break;
      case Tok::NotLeq: op = CmpOp::NotLeq; break;
      default: return l;
    }
    lx.next();
    FoPtr r = disj();
    return fo_cmp(std::move(l), op, std::move(r));
  }

  FoPtr disj() {
    FoPtr l = conj();
    while (lx.accept(Tok::Pipe)) l = fo_or(l, conj());
    return l;
  }

  FoPtr conj() {
    FoPtr l = unary();
    while (lx.accept(Tok::Amp)) l = fo_and(l, unary());
    return l;
  }

  FoPtr unary() {
    if (lx.accept(Tok::Bang)) {
      // negation applied directly to an atom yields a negated literal,
      // keeping print/parse round trips exact
      if (lx.peek().kind == Tok::Ident && !is_keyword(lx.peek().text)) {
        FoPtr atom = ident_atom();
        if (atom->kind == FoFormula::Kind::RelLit)
          return fo_rel(atom->rel, atom->vars, !atom->negated);
        return fo_eq(atom->vars[0], atom->vars[1], !atom->negated);
      }
      return fo_not(unary());
    }
    return primary();
  }

  FoPtr primary() {
    const Token& t = lx.peek();
    if (t.kind == Tok::LParen) {
      lx.next();
      FoPtr f = formula();
      lx.expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "bot") {
        lx.next();
        return fo_bot();
      }
      if (t.text == "top") {
        lx.next();
        return fo_top();
      }
      if (t.text == "forall" || t.text == "exists") return formula();
      return ident_atom();
    }
    lx.bail("formula");
  }

  // REL '(' vars ')' or VAR ('='|'!=') VAR
  FoPtr ident_atom() {
    Token name = lx.expect(Tok::Ident, "identifier");
    if (is_keyword(name.text)) fail(Errc::SyntaxError, "keyword '" + name.text + "' used as atom");
    if (lx.accept(Tok::LParen)) {
      std::vector<std::string> args;
      if (lx.peek().kind != Tok::RParen) args = parse_varlist(lx);
      lx.expect(Tok::RParen, "')'");
      int ar = vocab.arity_of(name.text);
      if (static_cast<int>(args.size()) != ar)
        fail(Errc::ArityError, "relation " + name.text + "/" + std::to_string(ar) + " applied to " +
                                   std::to_string(args.size()) + " arguments");
      return fo_rel(name.text, std::move(args));
    }
    if (lx.peek().kind == Tok::Eq || lx.peek().kind == Tok::Neq) {
      bool neg = lx.next().kind == Tok::Neq;
      Token rhs = lx.expect(Tok::Ident, "variable");
      if (is_keyword(rhs.text)) fail(Errc::SyntaxError, "keyword '" + rhs.text + "' used as variable");
      return fo_eq(name.text, rhs.text, neg);
    }
    lx.bail("'(' or '='/'!=' after identifier");
  }
};

} // namespace

FoPtr parse_fo(const std::string& text, const Vocabulary& vocab) {
  Lexer lx(text);
  FoParser p{lx, vocab};
  FoPtr f = p.formula();
  if (lx.peek().kind != Tok::End) lx.bail("end of input");
  return f;
}

// ---------------------------------------------------------------------------
// Team formulae

static TfPtr mkt(TeamFormula f) { return std::make_shared<const TeamFormula>(std::move(f)); }

TfPtr tf_rel(std::string rel, std::vector<std::string> vars, bool negated) {
  TeamFormula f{TeamFormula::Kind::RelLit};
  f.rel = std::move(rel);
  f.vars = std::move(vars);
  f.negated = negated;
  return mkt(std::move(f));
}
TfPtr tf_eq(std::string x, std::string y, bool negated) {
  TeamFormula f{TeamFormula::Kind::EqLit};
  f.vars = {std::move(x), std::move(y)};
  f.negated = negated;
  return mkt(std::move(f));
}
TfPtr tf_atom(DependencyAtom atom) {
  TeamFormula f{TeamFormula::Kind::Atom};
  f.atom = std::move(atom);
  return mkt(std::move(f));
}
TfPtr tf_and(TfPtr l, TfPtr r) {
  TeamFormula f{TeamFormula::Kind::And};
  f.a = std::move(l);
  f.b = std::move(r);
  return mkt(std::move(f));
}
TfPtr tf_or(TfPtr l, TfPtr r) {
  TeamFormula f{TeamFormula::Kind::Or};
  f.a = std::move(l);
  f.b = std::move(r);
  return mkt(std::move(f));
}
TfPtr tf_exists(std::string var, TfPtr body) {
  TeamFormula f{TeamFormula::Kind::Exists};
  f.var = std::move(var);
  f.a = std::move(body);
  return mkt(std::move(f));
}
TfPtr tf_forall(std::string var, TfPtr body) {
  TeamFormula f{TeamFormula::Kind::Forall};
  f.var = std::move(var);
  f.a = std::move(body);
  return mkt(std::move(f));
}

bool tf_equal(const TfPtr& x, const TfPtr& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->kind != y->kind || x->negated != y->negated || x->rel != y->rel ||
      x->vars != y->vars || x->var != y->var)
    return false;
  if (x->kind == TeamFormula::Kind::Atom) {
    const auto& p = x->atom;
    const auto& q = y->atom;
    if (p.kind != q.kind || p.xs != q.xs || p.ys != q.ys || p.zs != q.zs || p.rel != q.rel ||
        p.negated != q.negated)
      return false;
  }
  return tf_equal(x->a, y->a) && tf_equal(x->b, y->b);
}

std::set<std::string> free_vars(const TfPtr& f) {
  std::set<std::string> out;
  std::function<void(const TfPtr&, std::set<std::string>&)> rec =
      [&](const TfPtr& g, std::set<std::string>& bound) {
        auto note = [&](const std::vector<std::string>& vs) {
          for (const auto& v : vs)
            if (!bound.count(v)) out.insert(v);
        };
        switch (g->kind) {
          case TeamFormula::Kind::RelLit:
          case TeamFormula::Kind::EqLit: note(g->vars); break;
          case TeamFormula::Kind::Atom:
            note(g->atom.xs);
            note(g->atom.ys);
            note(g->atom.zs);
            break;
          case TeamFormula::Kind::And:
          case TeamFormula::Kind::Or:
            rec(g->a, bound);
            rec(g->b, bound);
            break;
          case TeamFormula::Kind::Exists:
          case TeamFormula::Kind::Forall: {
            bool had = bound.count(g->var) != 0;
            bound.insert(g->var);
            rec(g->a, bound);
            if (!had) bound.erase(g->var);
            break;
          }
        }
      };
  std::set<std::string> bound;
  rec(f, bound);
  return out;
}

bool contains_inclusion_atom(const TfPtr& f) {
  if (!f) return false;
  if (f->kind == TeamFormula::Kind::Atom && f->atom.kind == DependencyAtom::Kind::Inc) return true;
  return contains_inclusion_atom(f->a) || contains_inclusion_atom(f->b);
}

std::string DependencyAtom::str() const {
  auto block = [](const std::vector<std::string>& vs) {
    std::string s;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (i) s += ",";
      s += vs[i];
    }
    return s;
  };
  switch (kind) {
    case Kind::Dep: return "dep(" + block(xs) + ";" + block(ys) + ")";
    case Kind::Indep: return "indep(" + block(xs) + ";" + block(ys) + ";" + block(zs) + ")";
    case Kind::Inc: return "inc(" + block(xs) + ";" + block(ys) + ")";
    case Kind::Lit: {
      std::string s = negated ? "!" : "";
      return s + rel + "(" + block(xs) + ")";
    }
  }
  return "?";
}

namespace {

int tf_rank(const TeamFormula& f) {
  switch (f.kind) {
    case TeamFormula::Kind::Exists:
    case TeamFormula::Kind::Forall: return 0;
    case TeamFormula::Kind::Or: return 2;
    case TeamFormula::Kind::And: return 3;
    default: return 4;
  }
}

void print_team_rec(const TfPtr& f, std::string& out) {
  auto paren = [&](const TfPtr& g, int need) {
    if (tf_rank(*g) < need) {
      out += '(';
      print_team_rec(g, out);
      out += ')';
    } else {
      print_team_rec(g, out);
    }
  };
  switch (f->kind) {
    case TeamFormula::Kind::RelLit: {
      if (f->negated) out += '!';
      out += f->rel;
      out += '(';
      for (std::size_t i = 0; i < f->vars.size(); ++i) {
        if (i) out += ", ";
        out += f->vars[i];
      }
      out += ')';
      break;
    }
    case TeamFormula::Kind::EqLit:
      out += f->vars[0];
      out += f->negated ? " != " : " = ";
      out += f->vars[1];
      break;
    case TeamFormula::Kind::Atom: out += f->atom.str(); break;
    case TeamFormula::Kind::And:
      paren(f->a, 3);
      out += " & ";
      paren(f->b, 4);
      break;
    case TeamFormula::Kind::Or:
      paren(f->a, 2);
      out += " | ";
      paren(f->b, 3);
      break;
    case TeamFormula::Kind::Exists:
    case TeamFormula::Kind::Forall: {
      out += f->kind == TeamFormula::Kind::Exists ? "exists " : "forall ";
      out += f->var;
      TfPtr body = f->a;
      while (body->kind == f->kind) {
        out += ", ";
        out += body->var;
        body = body->a;
      }
      out += ". ";
      print_team_rec(body, out);
      break;
    }
  }
}

struct TeamParser {
  Lexer& lx;
  const Vocabulary& vocab;

  TfPtr formula() {
    if (lx.peek().kind == Tok::Ident && (lx.peek().text == "forall" || lx.peek().text == "exists")) {
      bool uni = lx.next().text == "forall";
      std::vector<std::string> vars = parse_varlist(lx);
      lx.expect(Tok::Dot, "'.'");
      TfPtr body = formula();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        body = uni ? tf_forall(*it, body) : tf_exists(*it, body);
      return body;
    }
    return disj();
  }

  TfPtr disj() {
    TfPtr l = conj();
    while (lx.accept(Tok::Pipe)) l = tf_or(l, conj());
    return l;
  }

  TfPtr conj() {
    TfPtr l = unary();
    while (lx.accept(Tok::Amp)) l = tf_and(l, unary());
    return l;
  }

  TfPtr unary() {
    if (lx.accept(Tok::Bang)) {
      // team formulae are nnf: negation must sit on a first-order literal
      if (lx.peek().kind != Tok::Ident || is_keyword(lx.peek().text))
        fail(Errc::SyntaxError, "negation in team formulae applies to literals only");
      TfPtr lit = ident_atom();
      if (lit->kind == TeamFormula::Kind::RelLit) return tf_rel(lit->rel, lit->vars, !lit->negated);
      if (lit->kind == TeamFormula::Kind::EqLit) return tf_eq(lit->vars[0], lit->vars[1], !lit->negated);
      fail(Errc::SyntaxError, "negation in team formulae applies to literals only");
    }
    const Token& t = lx.peek();
    if (t.kind == Tok::LParen) {
      lx.next();
      TfPtr f = formula();
      lx.expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "forall" || t.text == "exists") return formula();
      if (t.text == "dep" || t.text == "indep" || t.text == "inc") return dependency_atom();
      return ident_atom();
    }
    lx.bail("team formula");
  }

  std::vector<std::string> var_block() {
    if (lx.peek().kind != Tok::Ident) return {}; // empty block
    return parse_varlist(lx);
  }

  TfPtr dependency_atom() {
    std::string kw = lx.next().text;
    lx.expect(Tok::LParen, "'('");
    DependencyAtom a;
    if (kw == "dep") {
      a.kind = DependencyAtom::Kind::Dep;
      a.xs = var_block();
      lx.expect(Tok::Semi, "';'");
      a.ys = var_block();
    } else if (kw == "indep") {
      a.kind = DependencyAtom::Kind::Indep;
      a.xs = var_block();
      lx.expect(Tok::Semi, "';'");
      a.ys = var_block();
      lx.expect(Tok::Semi, "';'");
      a.zs = var_block();
    } else {
      a.kind = DependencyAtom::Kind::Inc;
      a.xs = var_block();
      lx.expect(Tok::Semi, "';'");
      a.ys = var_block();
      if (a.xs.size() != a.ys.size())
        fail(Errc::LengthMismatch, "inclusion atom requires tuples of equal length");
    }
    lx.expect(Tok::RParen, "')'");
    return tf_atom(std::move(a));
  }

  TfPtr ident_atom() {
    Token name = lx.expect(Tok::Ident, "identifier");
    if (is_keyword(name.text)) fail(Errc::SyntaxError, "keyword '" + name.text + "' used as atom");
    if (lx.accept(Tok::LParen)) {
      std::vector<std::string> args;
      if (lx.peek().kind != Tok::RParen) args = parse_varlist(lx);
      lx.expect(Tok::RParen, "')'");
      int ar = vocab.arity_of(name.text);
      if (static_cast<int>(args.size()) != ar)
        fail(Errc::ArityError, "relation " + name.text + "/" + std::to_string(ar) + " applied to " +
                                   std::to_string(args.size()) + " arguments");
      return tf_rel(name.text, std::move(args));
    }
    if (lx.peek().kind == Tok::Eq || lx.peek().kind == Tok::Neq) {
      bool neg = lx.next().kind == Tok::Neq;
      Token rhs = lx.expect(Tok::Ident, "variable");
      return tf_eq(name.text, rhs.text, neg);
    }
    lx.bail("'(' or '='/'!=' after identifier");
  }
};

} // namespace

std::string print_team(const TfPtr& f) {
  std::string out;
  print_team_rec(f, out);
  return out;
}

TfPtr parse_team(const std::string& text, const Vocabulary& vocab) {
  Lexer lx(text);
  TeamParser p{lx, vocab};
  TfPtr f = p.formula();
  if (lx.peek().kind != Tok::End) lx.bail("end of input");
  return f;
}

DependencyAtom parse_atom(const std::string& text, const Vocabulary& structure_vocab) {
  TfPtr f = parse_team(text, structure_vocab);
  if (f->kind == TeamFormula::Kind::Atom) return f->atom;
  if (f->kind == TeamFormula::Kind::RelLit) {
    DependencyAtom a;
    a.kind = DependencyAtom::Kind::Lit;
    a.rel = f->rel;
    a.xs = f->vars;
    a.negated = f->negated;
    return a;
  }
  fail(Errc::SyntaxError, "'" + text + "' is not a dependency atom or literal");
}

} // namespace semiteam
