#include "splitmc/guard.hpp"

#include <algorithm>
#include <cctype>

#include "splitmc/error.hpp"

namespace splitmc {

GuardPtr make_atom(std::string var, std::string value, bool equal) {
  auto g = std::make_shared<GuardExpr>();
  g->kind = GuardExpr::Kind::Atom;
  g->var = std::move(var);
  g->value = std::move(value);
  g->equal = equal;
  return g;
}

GuardPtr make_and(std::vector<GuardPtr> children) {
  if (children.size() == 1) return children.front();
  auto g = std::make_shared<GuardExpr>();
  g->kind = GuardExpr::Kind::And;
  g->children = std::move(children);
  return g;
}

GuardPtr make_or(std::vector<GuardPtr> children) {
  if (children.size() == 1) return children.front();
  auto g = std::make_shared<GuardExpr>();
  g->kind = GuardExpr::Kind::Or;
  g->children = std::move(children);
  return g;
}

GuardPtr make_not(GuardPtr child) {
  auto g = std::make_shared<GuardExpr>();
  g->kind = GuardExpr::Kind::Not;
  g->children.push_back(std::move(child));
  return g;
}

static GuardPtr make_quant(GuardExpr::Kind kind, std::string binder, GuardPtr body) {
  auto g = std::make_shared<GuardExpr>();
  g->kind = kind;
  g->binder = std::move(binder);
  g->body = std::move(body);
  return g;
}

GuardPtr make_forall(std::string binder, GuardPtr body) {
  return make_quant(GuardExpr::Kind::Forall, std::move(binder), std::move(body));
}

GuardPtr make_exists(std::string binder, GuardPtr body) {
  return make_quant(GuardExpr::Kind::Exists, std::move(binder), std::move(body));
}

namespace {

struct Token {
  enum class Kind { Ident, Eq, Ne, AndAnd, OrOr, Bang, LParen, RParen, Colon, End };
  Kind kind;
  std::string text;
  int line;
  int col;
};

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, tok_.line, tok_.col);
  }

private:
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  }

  void advance() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      bump();
    }
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= text_.size()) {
      tok_ = {Token::Kind::End, "", line_, col_};
      return;
    }
    char c = text_[pos_];
    auto two = [&](char a, char b) {
      return c == a && pos_ + 1 < text_.size() && text_[pos_ + 1] == b;
    };
    if (two('&', '&')) { set(Token::Kind::AndAnd, "&&"); return; }
    if (two('|', '|')) { set(Token::Kind::OrOr, "||"); return; }
    if (two('!', '=')) { set(Token::Kind::Ne, "!="); return; }
    switch (c) {
      case '=': set(Token::Kind::Eq, "="); return;
      case '!': set(Token::Kind::Bang, "!"); return;
      case '(': set(Token::Kind::LParen, "("); return;
      case ')': set(Token::Kind::RParen, ")"); return;
      case ':': set(Token::Kind::Colon, ":"); return;
      default: break;
    }
    if (ident_char(c)) {
      size_t start = pos_;
      int l = line_, co = col_;
      while (pos_ < text_.size() && ident_char(text_[pos_])) bump();
      tok_ = {Token::Kind::Ident, std::string(text_.substr(start, pos_ - start)), l, co};
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
  }

  void set(Token::Kind k, const char* s) {
    tok_.kind = k;
    tok_.text = s;
    for (const char* p = s; *p; ++p) bump();
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_{Token::Kind::End, "", 1, 1};
};

class Parser {
public:
  explicit Parser(std::string_view text) : lex_(text) {}

  GuardPtr parse() {
    GuardPtr e = expr();
    if (lex_.peek().kind != Token::Kind::End) lex_.fail("trailing input after expression");
    return e;
  }

private:
  GuardPtr expr() {
    std::vector<GuardPtr> terms{term()};
    while (lex_.peek().kind == Token::Kind::OrOr) {
      lex_.take();
      terms.push_back(term());
    }
    return make_or(std::move(terms));
  }

  GuardPtr term() {
    std::vector<GuardPtr> factors{factor()};
    while (lex_.peek().kind == Token::Kind::AndAnd) {
      lex_.take();
      factors.push_back(factor());
    }
    return make_and(std::move(factors));
  }

  GuardPtr factor() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Token::Kind::Bang:
        lex_.take();
        return make_not(factor());
      case Token::Kind::LParen: {
        lex_.take();
        GuardPtr e = expr();
        if (lex_.peek().kind != Token::Kind::RParen) lex_.fail("expected ')'");
        lex_.take();
        return e;
      }
      case Token::Kind::Ident:
        if (t.text == "forall" || t.text == "exists") return quantifier();
        return atom();
      default:
        lex_.fail("expected '!', '(', quantifier, or atom");
    }
  }

  GuardPtr quantifier() {
    Token kw = lex_.take();
    if (lex_.peek().kind != Token::Kind::Ident)
      lex_.fail("expected binder name after '" + kw.text + "'");
    Token binder = lex_.take();
    if (lex_.peek().kind != Token::Kind::Colon) lex_.fail("expected ':' after binder");
    lex_.take();
    GuardPtr body = factor();
    return kw.text == "forall" ? make_forall(binder.text, std::move(body))
                               : make_exists(binder.text, std::move(body));
  }

  GuardPtr atom() {
    Token var = lex_.take();
    Token::Kind opk = lex_.peek().kind;
    if (opk != Token::Kind::Eq && opk != Token::Kind::Ne)
      lex_.fail("expected '=' or '!=' after '" + var.text + "'");
    lex_.take();
    if (lex_.peek().kind != Token::Kind::Ident) lex_.fail("expected value");
    Token value = lex_.take();
    return make_atom(var.text, value.text, opk == Token::Kind::Eq);
  }

  Lexer lex_;
};

}  // namespace

GuardPtr parse_guard(std::string_view text) { return Parser(text).parse(); }

namespace {

// precedence: Or < And < prefix (Not/quantifier) < Atom
int level(GuardExpr::Kind k) {
  switch (k) {
    case GuardExpr::Kind::Or: return 0;
    case GuardExpr::Kind::And: return 1;
    case GuardExpr::Kind::Not:
    case GuardExpr::Kind::Forall:
    case GuardExpr::Kind::Exists: return 2;
    case GuardExpr::Kind::Atom: return 3;
  }
  return 3;
}

void print_rec(const GuardExpr& g, int parent_level, std::string& out) {
  bool parens = level(g.kind) < parent_level;
  if (parens) out += '(';
  switch (g.kind) {
    case GuardExpr::Kind::Atom:
      out += g.var;
      out += g.equal ? "=" : "!=";
      out += g.value;
      break;
    case GuardExpr::Kind::And:
      for (size_t i = 0; i < g.children.size(); ++i) {
        if (i) out += " && ";
        print_rec(*g.children[i], 1, out);
      }
      break;
    case GuardExpr::Kind::Or:
      for (size_t i = 0; i < g.children.size(); ++i) {
        if (i) out += " || ";
        print_rec(*g.children[i], 0, out);
      }
      break;
    case GuardExpr::Kind::Not:
      out += '!';
      print_rec(*g.children[0], 3, out);
      break;
    case GuardExpr::Kind::Forall:
    case GuardExpr::Kind::Exists:
      out += g.kind == GuardExpr::Kind::Forall ? "forall " : "exists ";
      out += g.binder;
      out += ": ";
      print_rec(*g.body, 3, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string print_guard(const GuardExpr& g) {
  std::string out;
  print_rec(g, 0, out);
  return out;
}

std::string print_guard(const GuardPtr& g) { return print_guard(*g); }

bool guard_equal(const GuardExpr& a, const GuardExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case GuardExpr::Kind::Atom:
      return a.var == b.var && a.value == b.value && a.equal == b.equal;
    case GuardExpr::Kind::And:
    case GuardExpr::Kind::Or:
      if (a.children.size() != b.children.size()) return false;
      for (size_t i = 0; i < a.children.size(); ++i)
        if (!guard_equal(*a.children[i], *b.children[i])) return false;
      return true;
    case GuardExpr::Kind::Not:
      return guard_equal(*a.children[0], *b.children[0]);
    case GuardExpr::Kind::Forall:
    case GuardExpr::Kind::Exists:
      return a.binder == b.binder && guard_equal(*a.body, *b.body);
  }
  return false;
}

bool guard_equal(const GuardPtr& a, const GuardPtr& b) {
  if (!a || !b) return !a && !b;
  return guard_equal(*a, *b);
}

namespace {

void collect_free(const GuardExpr& g, std::vector<std::string>& bound,
                  std::vector<std::string>& out) {
  switch (g.kind) {
    case GuardExpr::Kind::Atom:
      if (std::find(bound.begin(), bound.end(), g.var) == bound.end() &&
          std::find(out.begin(), out.end(), g.var) == out.end()) {
        out.push_back(g.var);
      }
      break;
    case GuardExpr::Kind::And:
    case GuardExpr::Kind::Or:
    case GuardExpr::Kind::Not:
      for (const auto& c : g.children) collect_free(*c, bound, out);
      break;
    case GuardExpr::Kind::Forall:
    case GuardExpr::Kind::Exists:
      bound.push_back(g.binder);
      collect_free(*g.body, bound, out);
      bound.pop_back();
      break;
  }
}

}  // namespace

std::vector<std::string> free_vars(const GuardPtr& g) {
  std::vector<std::string> bound, out;
  if (g) collect_free(*g, bound, out);
  return out;
}

}  // namespace splitmc
