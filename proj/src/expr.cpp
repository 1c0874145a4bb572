#include "gtd/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "gtd/errors.hpp"

namespace gtd {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_number(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Number;
  n->number = v;
  return n;
}

NodePtr make_var(int idx) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Var;
  n->var = idx;
  return n;
}

NodePtr make_node(ExprNode::Kind kind, NodePtr a, NodePtr b = nullptr) {
  // Fold negation of literals so "-3" stays a constant exponent.
  if (kind == ExprNode::Kind::Neg && a->kind == ExprNode::Kind::Number)
    return make_number(-a->number);
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

struct Token {
  enum class Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen,
                    RParen, End };
  Kind kind;
  std::size_t offset;
  double number = 0.0;
  std::string text;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }
  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(unsigned(src_[pos_]))) ++pos_;
    tok_.offset = pos_;
    tok_.text.clear();
    if (pos_ >= src_.size()) {
      tok_.kind = Token::Kind::End;
      tok_.text = "end of input";
      return;
    }
    const char c = src_[pos_];
    switch (c) {
      case '+': tok_.kind = Token::Kind::Plus; break;
      case '-': tok_.kind = Token::Kind::Minus; break;
      case '*': tok_.kind = Token::Kind::Star; break;
      case '/': tok_.kind = Token::Kind::Slash; break;
      case '^': tok_.kind = Token::Kind::Caret; break;
      case '(': tok_.kind = Token::Kind::LParen; break;
      case ')': tok_.kind = Token::Kind::RParen; break;
      default:
        if (std::isdigit(unsigned(c)) || c == '.') {
          double v = 0.0;
          const char* begin = src_.data() + pos_;
          const char* end = src_.data() + src_.size();
          auto [p, ec] = std::from_chars(begin, end, v);
          if (ec != std::errc{})
            throw ParseError(pos_, {"number"}, std::string(1, c));
          tok_.kind = Token::Kind::Number;
          tok_.number = v;
          tok_.text = std::string(begin, p);
          pos_ = p - src_.data();
          return;
        }
        if (std::isalpha(unsigned(c)) || c == '_') {
          std::size_t e = pos_;
          while (e < src_.size() &&
                 (std::isalnum(unsigned(src_[e])) || src_[e] == '_'))
            ++e;
          tok_.kind = Token::Kind::Ident;
          tok_.text = src_.substr(pos_, e - pos_);
          pos_ = e;
          return;
        }
        throw ParseError(pos_, {"number", "identifier", "operator"},
                         std::string(1, c));
    }
    tok_.text = std::string(1, c);
    ++pos_;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  Token tok_;
};

class Parser {
 public:
  Parser(const std::string& src, const std::vector<std::string>& vars)
      : lex_(src), vars_(vars) {}

  NodePtr parse() {
    NodePtr e = expr();
    if (lex_.peek().kind != Token::Kind::End)
      throw ParseError(lex_.peek().offset,
                       {"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"},
                       describe(lex_.peek()));
    return e;
  }

 private:
  static std::string describe(const Token& t) {
    return t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (true) {
      const auto k = lex_.peek().kind;
      if (k == Token::Kind::Plus) {
        lex_.take();
        lhs = make_node(ExprNode::Kind::Add, lhs, term());
      } else if (k == Token::Kind::Minus) {
        lex_.take();
        lhs = make_node(ExprNode::Kind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (true) {
      const auto k = lex_.peek().kind;
      if (k == Token::Kind::Star) {
        lex_.take();
        lhs = make_node(ExprNode::Kind::Mul, lhs, factor());
      } else if (k == Token::Kind::Slash) {
        lex_.take();
        lhs = make_node(ExprNode::Kind::Div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    if (lex_.peek().kind == Token::Kind::Minus) {
      lex_.take();
      return make_node(ExprNode::Kind::Neg, factor());
    }
    NodePtr base = atom();
    if (lex_.peek().kind == Token::Kind::Caret) {
      lex_.take();
      return make_node(ExprNode::Kind::Pow, base, factor());
    }
    return base;
  }

  NodePtr atom() {
    const Token t = lex_.take();
    switch (t.kind) {
      case Token::Kind::Number:
        return make_number(t.number);
      case Token::Kind::Ident: {
        if (t.text == "ln" || t.text == "exp") {
          expect(Token::Kind::LParen, "'('");
          NodePtr arg = expr();
          expect(Token::Kind::RParen, "')'");
          return make_node(t.text == "ln" ? ExprNode::Kind::Ln
                                          : ExprNode::Kind::Exp,
                           arg);
        }
        for (std::size_t v = 0; v < vars_.size(); ++v)
          if (vars_[v] == t.text) return make_var(static_cast<int>(v));
        throw UnknownVariable(t.text, t.offset);
      }
      case Token::Kind::LParen: {
        NodePtr inner = expr();
        expect(Token::Kind::RParen, "')'");
        return inner;
      }
      default:
        throw ParseError(t.offset,
                         {"number", "identifier", "'('", "'ln'", "'exp'",
                          "'-'"},
                         describe(t));
    }
  }

  void expect(Token::Kind kind, const std::string& what) {
    if (lex_.peek().kind != kind)
      throw ParseError(lex_.peek().offset, {what}, describe(lex_.peek()));
    lex_.take();
  }

  Lexer lex_;
  const std::vector<std::string>& vars_;
};

int precedence(const ExprNode& n) {
  switch (n.kind) {
    case ExprNode::Kind::Add:
    case ExprNode::Kind::Sub: return 1;
    case ExprNode::Kind::Mul:
    case ExprNode::Kind::Div: return 2;
    case ExprNode::Kind::Neg: return 3;
    case ExprNode::Kind::Number:
      return n.number < 0 ? 3 : 5;
    case ExprNode::Kind::Pow: return 4;
    default: return 5;
  }
}

void print(const ExprNode& n, const std::vector<std::string>& vars,
           int parent_prec, std::string& out) {
  const int prec = precedence(n);
  const bool parens = prec < parent_prec;
  if (parens) out += '(';
  switch (n.kind) {
    case ExprNode::Kind::Number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.number);
      out += buf;
      break;
    }
    case ExprNode::Kind::Var:
      out += vars[n.var];
      break;
    case ExprNode::Kind::Add:
      print(*n.a, vars, 1, out);
      out += " + ";
      print(*n.b, vars, 2, out);
      break;
    case ExprNode::Kind::Sub:
      print(*n.a, vars, 1, out);
      out += " - ";
      print(*n.b, vars, 2, out);
      break;
    case ExprNode::Kind::Mul:
      print(*n.a, vars, 2, out);
      out += "*";
      print(*n.b, vars, 3, out);
      break;
    case ExprNode::Kind::Div:
      print(*n.a, vars, 2, out);
      out += "/";
      print(*n.b, vars, 3, out);
      break;
    case ExprNode::Kind::Pow:
      print(*n.a, vars, 5, out);
      out += "^";
      print(*n.b, vars, 3, out);
      break;
    case ExprNode::Kind::Neg:
      out += "-";
      print(*n.a, vars, 4, out);
      break;
    case ExprNode::Kind::Ln:
      out += "ln(";
      print(*n.a, vars, 0, out);
      out += ")";
      break;
    case ExprNode::Kind::Exp:
      out += "exp(";
      print(*n.a, vars, 0, out);
      out += ")";
      break;
  }
  if (parens) out += ')';
}

bool is_integral(double v) { return v == std::nearbyint(v) && std::abs(v) <= 64; }

// double counterparts of the jet functions, with matching domain guards
double checked_pow(double base, double p) {
  if (!is_integral(p) && base <= 0.0)
    throw DomainError("pow with non-integer exponent needs positive base");
  if (is_integral(p) && p < 0 && base == 0.0)
    throw DomainError("pow with negative exponent at zero base");
  return std::pow(base, p);
}
double checked_log(double v) {
  if (v <= 0.0) throw DomainError("log of non-positive value");
  return std::log(v);
}
double checked_exp(double v) { return std::exp(v); }
double checked_div(double a, double b) {
  if (b == 0.0) throw DomainError("division by zero value");
  return a / b;
}
Jet4 checked_pow(const Jet4& base, double p) { return pow(base, p); }
Jet4 checked_log(const Jet4& f) { return log(f); }
Jet4 checked_exp(const Jet4& f) { return exp(f); }
Jet4 checked_div(const Jet4& a, const Jet4& b) { return a / b; }

template <typename T, typename MakeConst>
T eval_node(const ExprNode& n, const std::vector<T>& args,
            const MakeConst& constant) {
  using K = ExprNode::Kind;
  switch (n.kind) {
    case K::Number: return constant(n.number);
    case K::Var: return args[n.var];
    case K::Add: return eval_node(*n.a, args, constant) +
                        eval_node(*n.b, args, constant);
    case K::Sub: return eval_node(*n.a, args, constant) -
                        eval_node(*n.b, args, constant);
    case K::Mul: return eval_node(*n.a, args, constant) *
                        eval_node(*n.b, args, constant);
    case K::Div: return checked_div(eval_node(*n.a, args, constant),
                                    eval_node(*n.b, args, constant));
    case K::Neg: return -eval_node(*n.a, args, constant);
    case K::Ln: return checked_log(eval_node(*n.a, args, constant));
    case K::Exp: return checked_exp(eval_node(*n.a, args, constant));
    case K::Pow: {
      T base = eval_node(*n.a, args, constant);
      if (n.b->kind == K::Number) return checked_pow(base, n.b->number);
      // variable exponent: base^e = exp(e * ln(base)), base must be positive
      return checked_exp(eval_node(*n.b, args, constant) *
                         checked_log(base));
    }
  }
  throw Error("unreachable expression kind");
}

}  // namespace

ExprAst parse_expression(const std::string& source,
                         const std::vector<std::string>& variables) {
  Parser p(source, variables);
  ExprAst ast;
  ast.root = p.parse();
  ast.variables = variables;
  return ast;
}

std::string to_string(const ExprAst& ast) {
  std::string out;
  print(*ast.root, ast.variables, 0, out);
  return out;
}

double eval_expr(const ExprAst& ast, const Eigen::VectorXd& args) {
  std::vector<double> a(args.data(), args.data() + args.size());
  auto constant = [](double v) { return v; };
  return eval_node<double>(*ast.root, a, constant);
}

Jet4 eval_expr(const ExprAst& ast, const std::vector<Jet4>& args) {
  if (args.empty()) throw std::invalid_argument("eval_expr: no arguments");
  const int dim = args[0].dim();
  auto constant = [dim](double v) { return Jet4::constant(dim, v); };
  return eval_node<Jet4>(*ast.root, args, constant);
}

}  // namespace gtd
