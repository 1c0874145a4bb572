#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>
#include <vector>

#include "gtd/jet.hpp"

namespace gtd {

// Abstract syntax tree for fundamental-relation and coefficient
// expressions.  Grammar (precedence climbing):
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | atom ['^' factor]        (^ right-associative)
//   atom   := number | ident | '(' expr ')' | ('ln'|'exp') '(' expr ')'
//
// '^' binds tighter than unary minus: -E1^2 parses as -(E1^2).
struct ExprNode {
  enum class Kind { Number, Var, Add, Sub, Mul, Div, Pow, Ln, Exp, Neg };
  Kind kind;
  double number = 0.0;
  int var = -1;
  std::shared_ptr<const ExprNode> a, b;
};

struct ExprAst {
  std::shared_ptr<const ExprNode> root;
  std::vector<std::string> variables;
};

// Throws ParseError (with byte offset and expected-token set) on malformed
// input and UnknownVariable for identifiers outside `variables`.
ExprAst parse_expression(const std::string& source,
                         const std::vector<std::string>& variables);

// Canonical text form; parse_expression(to_string(ast)) rebuilds the same
// tree.
std::string to_string(const ExprAst& ast);

double eval_expr(const ExprAst& ast, const Eigen::VectorXd& args);
Jet4 eval_expr(const ExprAst& ast, const std::vector<Jet4>& args);

}  // namespace gtd
