#include "hont/formula.hpp"

#include <cctype>

#include "hont/error.hpp"

namespace hont {

namespace {

FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

}  // namespace

FormulaPtr Formula::exists(std::string v, FormulaPtr body) {
  return make({Kind::Exists, std::move(v), {std::move(body)}, {}, std::nullopt});
}
FormulaPtr Formula::forall(std::string v, FormulaPtr body) {
  return make({Kind::Forall, std::move(v), {std::move(body)}, {}, std::nullopt});
}
FormulaPtr Formula::conj(std::vector<FormulaPtr> xs) { return make({Kind::And, {}, std::move(xs), {}, std::nullopt}); }
FormulaPtr Formula::disj(std::vector<FormulaPtr> xs) { return make({Kind::Or, {}, std::move(xs), {}, std::nullopt}); }
FormulaPtr Formula::neg(FormulaPtr x) { return make({Kind::Not, {}, {std::move(x)}, {}, std::nullopt}); }
FormulaPtr Formula::eq(std::string x, std::string y) {
  return make({Kind::Eq, {}, {}, {std::move(x), std::move(y)}, std::nullopt});
}
FormulaPtr Formula::edge(std::string x, std::string y, std::optional<TransitionId> label) {
  return make({Kind::Edge, {}, {}, {std::move(x), std::move(y)}, label});
}
FormulaPtr Formula::jump(std::string x, std::string y) {
  return make({Kind::Jump, {}, {}, {std::move(x), std::move(y)}, std::nullopt});
}
FormulaPtr Formula::root(std::string x) { return make({Kind::Root, {}, {}, {std::move(x)}, std::nullopt}); }

bool formula_equal(const Formula& a, const Formula& b) {
  if (a.kind != b.kind || a.var != b.var || a.args != b.args || a.label != b.label ||
      a.children.size() != b.children.size())
    return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!formula_equal(*a.children[i], *b.children[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Token {
  enum class T { Ident, Nat, Sym, End } t;
  std::string text;
  std::size_t pos;
};

bool is_keyword(const std::string& s) {
  return s == "exists" || s == "forall" || s == "edge" || s == "jump" || s == "root";
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) { lex(); }

  FormulaPtr parse() {
    auto f = formula();
    if (peek().t != Token::T::End) error("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  std::string_view text_;
  std::vector<Token> toks_;
  std::size_t i_ = 0;

  [[noreturn]] void error(const std::string& msg) const {
    std::size_t pos = i_ < toks_.size() ? toks_[i_].pos : text_.size();
    throw ParseError(ErrorCode::Syntax, pos, "column " + std::to_string(pos) + ": " + msg);
  }

  void lex() {
    std::size_t p = 0;
    while (p < text_.size()) {
      char c = text_[p];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++p;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t q = p;
        while (q < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[q])) || text_[q] == '_')) ++q;
        toks_.push_back({Token::T::Ident, std::string(text_.substr(p, q - p)), p});
        p = q;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t q = p;
        while (q < text_.size() && std::isdigit(static_cast<unsigned char>(text_[q]))) ++q;
        toks_.push_back({Token::T::Nat, std::string(text_.substr(p, q - p)), p});
        p = q;
      } else if (std::string_view(".()|&!=[],").find(c) != std::string_view::npos) {
        toks_.push_back({Token::T::Sym, std::string(1, c), p});
        ++p;
      } else {
        throw ParseError(ErrorCode::Syntax, p, "column " + std::to_string(p) + ": unexpected character '" +
                                                   std::string(1, c) + "'");
      }
    }
    toks_.push_back({Token::T::End, "end of input", text_.size()});
  }

  const Token& peek() const { return toks_[i_]; }
  bool at_sym(const char* s) const { return peek().t == Token::T::Sym && peek().text == s; }
  bool at_word(const char* s) const { return peek().t == Token::T::Ident && peek().text == s; }
  void expect_sym(const char* s) {
    if (!at_sym(s)) error(std::string("expected '") + s + "'");
    ++i_;
  }
  bool next_is_paren() const { return i_ + 1 < toks_.size() && toks_[i_ + 1].text == "("; }
  // `root` doubles as a variable naming the empty run when not applied.
  bool at_var() const {
    if (peek().t != Token::T::Ident) return false;
    if (peek().text == "root") return !next_is_paren();
    return !is_keyword(peek().text);
  }
  std::string var() {
    if (!at_var()) error("expected a variable");
    return toks_[i_++].text;
  }

  FormulaPtr formula() {
    if (at_word("exists") || at_word("forall")) {
      bool ex = at_word("exists");
      ++i_;
      std::string v = var();
      expect_sym(".");
      auto body = formula();
      return ex ? Formula::exists(v, body) : Formula::forall(v, body);
    }
    return disj();
  }

  FormulaPtr disj() {
    std::vector<FormulaPtr> xs{conj()};
    while (at_sym("|")) {
      ++i_;
      xs.push_back(conj());
    }
    return xs.size() == 1 ? xs[0] : Formula::disj(std::move(xs));
  }

  FormulaPtr conj() {
    std::vector<FormulaPtr> xs{neg()};
    while (at_sym("&")) {
      ++i_;
      xs.push_back(neg());
    }
    return xs.size() == 1 ? xs[0] : Formula::conj(std::move(xs));
  }

  FormulaPtr neg() {
    if (at_word("exists") || at_word("forall")) return formula();
    if (at_sym("!")) {
      ++i_;
      return Formula::neg(neg());
    }
    if (at_sym("(")) {
      ++i_;
      auto f = formula();
      expect_sym(")");
      return f;
    }
    return atom();
  }

  FormulaPtr atom() {
    if (at_word("edge")) {
      ++i_;
      std::optional<TransitionId> label;
      if (at_sym("[")) {
        ++i_;
        if (peek().t != Token::T::Nat) error("expected a transition index");
        try {
          unsigned long v = std::stoul(peek().text);
          if (v > 0xFFFFFFFEul) error("transition index too large");
          label = static_cast<TransitionId>(v);
        } catch (const std::out_of_range&) {
          error("transition index too large");
        }
        ++i_;
        expect_sym("]");
      }
      expect_sym("(");
      std::string x = var();
      expect_sym(",");
      std::string y = var();
      expect_sym(")");
      return Formula::edge(x, y, label);
    }
    if (at_word("jump")) {
      ++i_;
      expect_sym("(");
      std::string x = var();
      expect_sym(",");
      std::string y = var();
      expect_sym(")");
      return Formula::jump(x, y);
    }
    if (at_word("root") && next_is_paren()) {
      ++i_;
      expect_sym("(");
      std::string x = var();
      expect_sym(")");
      return Formula::root(x);
    }
    if (at_var()) {
      std::string x = var();
      expect_sym("=");
      std::string y = var();
      return Formula::eq(x, y);
    }
    error("expected a formula");
  }
};

}  // namespace

FormulaPtr parse_formula(std::string_view text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Printer

namespace {

// 0 quantifier, 1 disjunction, 2 conjunction, 3 negation/atom
int level_of(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: return 0;
    case Formula::Kind::Or: return 1;
    case Formula::Kind::And: return 2;
    default: return 3;
  }
}

void print(const Formula& f, std::string& out);

void print_operand(const Formula& f, int min_level, std::string& out) {
  if (level_of(f) < min_level) {
    out += '(';
    print(f, out);
    out += ')';
  } else {
    print(f, out);
  }
}

void print(const Formula& f, std::string& out) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::Exists:
    case K::Forall:
      out += f.kind == K::Exists ? "exists " : "forall ";
      out += f.var;
      out += ". ";
      print(*f.children[0], out);
      return;
    case K::Or:
    case K::And: {
      // Nested operators of the same kind keep their parentheses.
      int own = level_of(f);
      for (std::size_t i = 0; i < f.children.size(); ++i) {
        if (i) out += own == 1 ? " | " : " & ";
        print_operand(*f.children[i], own + 1, out);
      }
      return;
    }
    case K::Not:
      out += '!';
      print_operand(*f.children[0], 3, out);
      return;
    case K::Eq:
      out += f.args[0] + " = " + f.args[1];
      return;
    case K::Edge:
      out += "edge";
      if (f.label) out += "[" + std::to_string(*f.label) + "]";
      out += "(" + f.args[0] + ", " + f.args[1] + ")";
      return;
    case K::Jump:
      out += "jump(" + f.args[0] + ", " + f.args[1] + ")";
      return;
    case K::Root:
      out += "root(" + f.args[0] + ")";
      return;
  }
}

}  // namespace

std::string print_formula(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

FormulaPtr nnf(const FormulaPtr& f, bool negated) {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::Exists:
    case K::Forall: {
      bool ex = (f->kind == K::Exists) != negated;
      auto body = nnf(f->children[0], negated);
      return ex ? Formula::exists(f->var, body) : Formula::forall(f->var, body);
    }
    case K::And:
    case K::Or: {
      std::vector<FormulaPtr> xs;
      for (const auto& c : f->children) xs.push_back(nnf(c, negated));
      bool is_and = (f->kind == K::And) != negated;
      return is_and ? Formula::conj(std::move(xs)) : Formula::disj(std::move(xs));
    }
    case K::Not:
      return nnf(f->children[0], !negated);
    default:
      return negated ? Formula::neg(f) : f;
  }
}

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  if (f.kind == Formula::Kind::Exists || f.kind == Formula::Kind::Forall) {
    bool fresh = bound.insert(f.var).second;
    collect_free(*f.children[0], bound, out);
    if (fresh) bound.erase(f.var);
    return;
  }
  for (const auto& a : f.args)
    if (!bound.count(a)) out.insert(a);
  for (const auto& c : f.children) collect_free(*c, bound, out);
}

}  // namespace

FormulaPtr to_nnf(const FormulaPtr& f) { return nnf(f, false); }

unsigned quantifier_rank(const Formula& f) {
  unsigned r = 0;
  for (const auto& c : f.children) r = std::max(r, quantifier_rank(*c));
  if (f.kind == Formula::Kind::Exists || f.kind == Formula::Kind::Forall) ++r;
  return r;
}

std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

NormalizedFormula normalize(const FormulaPtr& f) {
  auto g = to_nnf(f);
  return {g, quantifier_rank(*g)};
}

}  // namespace hont
