#include <doctest.h>

#include <cmath>

#include "gtd/errors.hpp"
#include "gtd/expr.hpp"

using gtd::ExprAst;
using gtd::parse_expression;

namespace {
const std::vector<std::string> kVars{"E1", "E2"};

double ev(const std::string& src, double x, double y) {
  Eigen::VectorXd p(2);
  p << x, y;
  return eval_expr(parse_expression(src, kVars), p);
}
}  // namespace

TEST_CASE("parser handles precedence and associativity") {
  CHECK(ev("1 + 2*3", 0, 0) == 7.0);
  CHECK(ev("2*3 - 4/2", 0, 0) == 4.0);
  CHECK(ev("2^3^2", 0, 0) == doctest::Approx(512.0));  // right associative
  CHECK(ev("-2^2", 0, 0) == -4.0);         // ^ binds tighter than unary -
  CHECK(ev("(-2)^2", 0, 0) == 4.0);
  CHECK(ev("2^-2", 0, 0) == 0.25);
  CHECK(ev("-E1^2", 3, 0) == -9.0);
  CHECK(ev("2 - - 3", 0, 0) == 5.0);
  CHECK(ev("ln(exp(2))", 0, 0) == doctest::Approx(2.0));
  CHECK(ev("exp(E1)*ln(E2)", 1.0, std::exp(1.0)) ==
        doctest::Approx(std::exp(1.0)));
  CHECK(ev("E1^0.75*E2^0.75", 1.0, 1.0) == 1.0);
  CHECK(ev("6/3/2", 0, 0) == 1.0);         // left associative
  CHECK(ev("1 - 2 - 3", 0, 0) == -4.0);
}

TEST_CASE("expression evaluation agrees with a hand-coded form on a grid") {
  const ExprAst ast = parse_expression("(E1*E2)^0.75 + E1^2/E2", kVars);
  for (double x : {0.5, 0.9, 1.4, 2.0})
    for (double y : {0.6, 1.0, 1.7}) {
      Eigen::VectorXd p(2);
      p << x, y;
      const double expect = std::pow(x * y, 0.75) + x * x / y;
      CHECK(eval_expr(ast, p) == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("parse errors carry byte offsets and expectations") {
  try {
    parse_expression("E1^^2", kVars);
    FAIL("expected ParseError");
  } catch (const gtd::ParseError& e) {
    CHECK(e.offset() == 3);
    CHECK(!e.expected().empty());
  }
  try {
    parse_expression("E1 + ", kVars);
    FAIL("expected ParseError");
  } catch (const gtd::ParseError& e) {
    CHECK(e.offset() == 5);
  }
  try {
    parse_expression("(E1 + E2", kVars);
    FAIL("expected ParseError");
  } catch (const gtd::ParseError& e) {
    CHECK(e.offset() == 8);
    REQUIRE(e.expected().size() == 1);
    CHECK(e.expected()[0] == "')'");
  }
  CHECK_THROWS_AS(parse_expression("E1 @ E2", kVars), gtd::ParseError);
}

TEST_CASE("unknown identifiers are reported with their position") {
  try {
    parse_expression("E1 + E3", kVars);
    FAIL("expected UnknownVariable");
  } catch (const gtd::UnknownVariable& e) {
    CHECK(e.name() == "E3");
    CHECK(e.offset() == 5);
  }
}

TEST_CASE("ln and exp require parenthesized arguments") {
  CHECK_THROWS_AS(parse_expression("ln E1", kVars), gtd::ParseError);
  CHECK_THROWS_AS(parse_expression("exp + 1", kVars), gtd::ParseError);
}

TEST_CASE("pretty printing round-trips through the parser") {
  const std::vector<std::string> sources{
      "E1^0.75*E2^0.75",
      "-E1^2 + (E1 + E2)*E2",
      "2^-3 + E1/(E2 - 4)",
      "ln(E1*E2) - exp(-E2)",
      "E1 - (E2 - 1) - 2",
      "(E1^E2)^2",
      "-(E1 + E2)^3/4",
  };
  for (const auto& src : sources) {
    CAPTURE(src);
    const ExprAst first = parse_expression(src, kVars);
    const std::string printed = to_string(first);
    const ExprAst second = parse_expression(printed, kVars);
    CHECK(to_string(second) == printed);
    Eigen::VectorXd p(2);
    p << 1.3, 2.1;
    CHECK(eval_expr(first, p) == doctest::Approx(eval_expr(second, p)));
  }
}

TEST_CASE("domain violations surface as DomainError") {
  Eigen::VectorXd p(2);
  p << -1.0, 0.0;
  CHECK_THROWS_AS(eval_expr(parse_expression("ln(E1)", kVars), p),
                  gtd::DomainError);
  CHECK_THROWS_AS(eval_expr(parse_expression("E1^0.5", kVars), p),
                  gtd::DomainError);
  CHECK_THROWS_AS(eval_expr(parse_expression("1/E2", kVars), p),
                  gtd::DomainError);
  CHECK_THROWS_AS(eval_expr(parse_expression("E1^E2", kVars), p),
                  gtd::DomainError);
}

TEST_CASE("jet evaluation of expressions matches the double evaluation") {
  const ExprAst ast =
      parse_expression("(E1*E2)^0.75 - E1^2/E2 + ln(E1)", kVars);
  Eigen::VectorXd p(2);
  p << 1.2, 0.8;
  const gtd::Jet4 j = eval_expr(ast, gtd::Jet4::seeds(p));
  CHECK(j.value() == doctest::Approx(eval_expr(ast, p)).epsilon(1e-14));
  // gradient vs analytic
  const double g0 = 0.75 * std::pow(p[0] * p[1], -0.25) * p[1] -
                    2 * p[0] / p[1] + 1.0 / p[0];
  const double g1 = 0.75 * std::pow(p[0] * p[1], -0.25) * p[0] +
                    p[0] * p[0] / (p[1] * p[1]);
  CHECK(j.partial1(0) == doctest::Approx(g0).epsilon(1e-12));
  CHECK(j.partial1(1) == doctest::Approx(g1).epsilon(1e-12));
}
