#ifndef SPLITMC_GUARD_HPP
#define SPLITMC_GUARD_HPP

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace splitmc {

// Guard expression AST. Atoms compare a variable against a value; the
// quantifiers range over the executing node's neighborhood edges. Nodes are
// immutable and shared, so copying a model is cheap.
//
// Grammar:
//   expr   := term ('||' term)*
//   term   := factor ('&&' factor)*
//   factor := '!' factor | '(' expr ')'
//           | 'forall' IDENT ':' factor | 'exists' IDENT ':' factor
//           | atom
//   atom   := IDENT ('=' | '!=') VALUE
struct GuardExpr;
using GuardPtr = std::shared_ptr<const GuardExpr>;

struct GuardExpr {
  enum class Kind { Atom, And, Or, Not, Forall, Exists };

  Kind kind;
  // Atom
  std::string var;
  std::string value;
  bool equal = true;  // false for '!='
  // And/Or children, or the single Not child
  std::vector<GuardPtr> children;
  // Forall/Exists
  std::string binder;
  GuardPtr body;
};

GuardPtr make_atom(std::string var, std::string value, bool equal = true);
GuardPtr make_and(std::vector<GuardPtr> children);
GuardPtr make_or(std::vector<GuardPtr> children);
GuardPtr make_not(GuardPtr child);
GuardPtr make_forall(std::string binder, GuardPtr body);
GuardPtr make_exists(std::string binder, GuardPtr body);

// Throws ParseError with line/column on malformed input.
GuardPtr parse_guard(std::string_view text);

// Emits text that parses back to a structurally equal AST.
std::string print_guard(const GuardExpr& g);
std::string print_guard(const GuardPtr& g);

bool guard_equal(const GuardExpr& a, const GuardExpr& b);
bool guard_equal(const GuardPtr& a, const GuardPtr& b);

// Variables mentioned outside any quantifier binder, in first-occurrence order.
std::vector<std::string> free_vars(const GuardPtr& g);

}  // namespace splitmc

#endif
