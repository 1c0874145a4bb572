#include <doctest.h>

#include <cmath>

#include "gtd/errors.hpp"
#include "gtd/finite_diff.hpp"
#include "gtd/relation.hpp"

using gtd::FundamentalRelation;
using gtd::make_index;
using gtd::monomial_relation;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

bool near(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

}  // namespace

TEST_CASE("monomial relation reproduces frozen values") {
  const FundamentalRelation rel = monomial_relation(1.0, vec2(0.75, 0.75));
  REQUIRE(rel.beta.has_value());
  CHECK(*rel.beta == doctest::Approx(1.5));

  const Eigen::VectorXd E = vec2(1.0, 1.0);
  CHECK(rel.value(E) == doctest::Approx(1.0));
  const Eigen::VectorXd I = rel.gradient(E);
  CHECK(I[0] == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(I[1] == doctest::Approx(0.75).epsilon(1e-13));
  const Eigen::MatrixXd H = rel.hessian(E);
  CHECK(H(0, 0) == doctest::Approx(-3.0 / 16.0).epsilon(1e-13));
  CHECK(H(0, 1) == doctest::Approx(9.0 / 16.0).epsilon(1e-13));
  CHECK(H(1, 0) == doctest::Approx(9.0 / 16.0).epsilon(1e-13));
  CHECK(H(1, 1) == doctest::Approx(-3.0 / 16.0).epsilon(1e-13));

  const FundamentalRelation half = monomial_relation(1.0, vec2(0.5, 0.5));
  const Eigen::VectorXd E2 = vec2(4.0, 1.0);
  CHECK(half.value(E2) == doctest::Approx(2.0));
  const Eigen::VectorXd I2 = half.gradient(E2);
  CHECK(I2[0] == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(I2[1] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("monomial domain is the positive orthant") {
  const FundamentalRelation rel = monomial_relation(2.0, vec2(0.5, -1.0));
  CHECK(rel.domain(vec2(1.0, 2.0)));
  CHECK(!rel.domain(vec2(-1.0, 2.0)));
  CHECK(!rel.domain(vec2(1.0, 0.0)));
  CHECK_THROWS_AS(rel.value(vec2(-1.0, 1.0)), gtd::DomainError);
  CHECK_THROWS_AS(monomial_relation(0.0, vec2(1.0, 1.0)), gtd::DomainError);
}

TEST_CASE("expression relations evaluate and take jets") {
  const FundamentalRelation rel =
      gtd::relation_from_expression("E1^2 + E1*E2", {"E1", "E2"});
  CHECK(rel.n == 2);
  CHECK(!rel.beta.has_value());
  CHECK(rel.value(vec2(2.0, 3.0)) == doctest::Approx(10.0));
  const Eigen::MatrixXd H = rel.hessian(vec2(2.0, 3.0));
  CHECK(H(0, 0) == doctest::Approx(2.0));
  CHECK(H(0, 1) == doctest::Approx(1.0));
  CHECK(H(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("homogeneity detection finds the degree or declines") {
  const auto rel1 = gtd::relation_from_expression("E1^2 + E1*E2", {"E1", "E2"});
  const auto beta1 = gtd::detect_homogeneity(rel1);
  REQUIRE(beta1.has_value());
  CHECK(*beta1 == doctest::Approx(2.0).epsilon(1e-10));

  const auto rel2 = gtd::relation_from_expression("E1^2 + E2", {"E1", "E2"});
  CHECK(!gtd::detect_homogeneity(rel2).has_value());

  const auto rel3 = gtd::relation_from_expression("exp(E1)*E2", {"E1", "E2"});
  CHECK(!gtd::detect_homogeneity(rel3).has_value());

  const auto mono = monomial_relation(3.0, vec2(0.75, 0.75));
  const auto beta4 = gtd::detect_homogeneity(mono);
  REQUIRE(beta4.has_value());
  CHECK(*beta4 == doctest::Approx(1.5).epsilon(1e-10));

  CHECK_THROWS_AS(gtd::detect_homogeneity(mono, 4), std::invalid_argument);
}

TEST_CASE("representation axis bookkeeping is involutive") {
  // n = 3, i = 1: u axes are (Phi, E1, E3) in canonical numbering 0,2
  CHECK(gtd::rep_axis_of(1, 0) == 1);
  CHECK(gtd::rep_axis_of(1, 2) == 2);
  CHECK(gtd::rep_coord_of(1, 1) == 0);
  CHECK(gtd::rep_coord_of(1, 2) == 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (j != i) CHECK(gtd::rep_coord_of(i, gtd::rep_axis_of(i, j)) == j);
}

TEST_CASE("implicit representation jet carries the frozen expansion") {
  const FundamentalRelation rel = monomial_relation(1.0, vec2(0.75, 0.75));
  const Eigen::VectorXd E = vec2(1.0, 1.0);
  const auto rj = gtd::induced_representation_jet(rel, 0, E);
  const gtd::Jet4& x = rj.jet;

  CHECK(x.value() == doctest::Approx(1.0).epsilon(1e-13));
  // first order: 1/I_1 and -I_2/I_1
  CHECK(x.partial1(0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(x.partial1(1) == doctest::Approx(-1.0).epsilon(1e-12));
  // second order
  CHECK(x.partial2(0, 0) == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
  CHECK(x.partial2(0, 1) == doctest::Approx(-4.0 / 3.0).epsilon(1e-12));
  CHECK(x.partial2(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
  // third order
  CHECK(x.partial(make_index({3, 0})) ==
        doctest::Approx(-8.0 / 27.0).epsilon(1e-11));
  CHECK(x.partial(make_index({2, 1})) ==
        doctest::Approx(-4.0 / 9.0).epsilon(1e-11));
  CHECK(x.partial(make_index({1, 2})) ==
        doctest::Approx(8.0 / 3.0).epsilon(1e-11));
  CHECK(x.partial(make_index({0, 3})) ==
        doctest::Approx(-6.0).epsilon(1e-11));
  // fourth order
  CHECK(x.partial(make_index({4, 0})) ==
        doctest::Approx(40.0 / 81.0).epsilon(1e-10));
  CHECK(x.partial(make_index({3, 1})) ==
        doctest::Approx(8.0 / 27.0).epsilon(1e-10));
  CHECK(x.partial(make_index({2, 2})) ==
        doctest::Approx(8.0 / 9.0).epsilon(1e-10));
  CHECK(x.partial(make_index({1, 3})) ==
        doctest::Approx(-8.0).epsilon(1e-10));
  CHECK(x.partial(make_index({0, 4})) ==
        doctest::Approx(24.0).epsilon(1e-10));
}

TEST_CASE("closed-form implicit partials agree with the jet route") {
  const FundamentalRelation rel = monomial_relation(2.0, vec2(0.6, 0.9));
  const Eigen::VectorXd E = vec2(1.4, 0.7);
  for (int i = 0; i < 2; ++i) {
    const auto rj = gtd::induced_representation_jet(rel, i, E);
    const auto ip = gtd::implicit_partials(rel, i, E);
    CHECK(near(ip.value, rj.jet.value(), 1e-13));
    for (int a = 0; a < 2; ++a) {
      CHECK(near(ip.first[a], rj.jet.partial1(a), 1e-11));
      for (int b = 0; b < 2; ++b)
        CHECK(near(ip.second(a, b), rj.jet.partial2(a, b), 1e-10));
    }
  }
}

TEST_CASE("implicit partials agree with differences over a root solver") {
  const FundamentalRelation rel = monomial_relation(1.0, vec2(0.75, 0.75));
  const Eigen::VectorXd E = vec2(1.3, 0.8);
  const int i = 0;
  const Eigen::VectorXd u0 = gtd::rep_point(rel, i, E);
  auto x_of_u = [&](const Eigen::VectorXd& u) {
    Eigen::VectorXd tmpl = E;
    tmpl[1] = u[1];
    return gtd::solve_extensive(rel, i, u[0], tmpl, 1.0);
  };
  const auto ip = gtd::implicit_partials(rel, i, E);
  CHECK(near(x_of_u(u0), E[0], 1e-12));
  for (int a = 0; a < 2; ++a) {
    gtd::MultiIndex first;
    first.dim = 2;
    first.e[a] = 1;
    CHECK(std::abs(gtd::fd_partial(x_of_u, u0, first) - ip.first[a]) <=
          1e-4 * std::max(1.0, std::abs(ip.first[a])));
    for (int b = a; b < 2; ++b) {
      gtd::MultiIndex second;
      second.dim = 2;
      second.e[a] += 1;
      second.e[b] += 1;
      CHECK(std::abs(gtd::fd_partial(x_of_u, u0, second) - ip.second(a, b)) <=
            1e-4 * std::max(1.0, std::abs(ip.second(a, b))));
    }
  }
}

TEST_CASE("representation points round-trip through the preimage solver") {
  const FundamentalRelation rel = monomial_relation(1.5, vec2(0.8, 0.4));
  const Eigen::VectorXd E = vec2(0.9, 1.7);
  for (int i = 0; i < 2; ++i) {
    const Eigen::VectorXd u = gtd::rep_point(rel, i, E);
    const Eigen::VectorXd back = gtd::rep_to_canonical(rel, i, u, 2.0);
    CHECK(near(back[0], E[0], 1e-12));
    CHECK(near(back[1], E[1], 1e-12));
  }
}

TEST_CASE("vanishing conjugate intensive variable is rejected") {
  const auto rel =
      gtd::relation_from_expression("E1^2 - 2*E1*E2", {"E1", "E2"});
  // dPhi/dE1 = 2E1 - 2E2 vanishes on the diagonal
  CHECK_THROWS_AS(gtd::induced_representation_jet(rel, 0, vec2(1.0, 1.0)),
                  gtd::SingularRepresentation);
  CHECK_THROWS_AS(gtd::implicit_partials(rel, 0, vec2(1.0, 1.0)),
                  gtd::SingularRepresentation);
  CHECK_NOTHROW(gtd::induced_representation_jet(rel, 0, vec2(2.0, 1.0)));
}

TEST_CASE("solve_extensive recovers roots away from the guess") {
  const FundamentalRelation rel = monomial_relation(1.0, vec2(0.75, 0.75));
  Eigen::VectorXd tmpl = vec2(0.0, 1.0);
  CHECK(near(gtd::solve_extensive(rel, 0, 1.0, tmpl, 1.9), 1.0, 1e-12));
  CHECK(near(gtd::solve_extensive(rel, 0, 2.0, tmpl, 0.3),
             std::pow(2.0, 4.0 / 3.0), 1e-12));
}
