#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "fixtures.hpp"
#include "gtd/curvature.hpp"
#include "gtd/errors.hpp"
#include "gtd/grid.hpp"
#include "gtd/metric.hpp"

using namespace gtd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd vec2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}

const VectorXd kOnes2 = VectorXd::Ones(2);

void check_tensor_symmetries(const CurvatureReport& rep) {
  const int n = static_cast<int>(rep.point.size());
  double scale = 0.0;
  for (double v : rep.riemann.v) scale = std::max(scale, std::abs(v));
  scale = std::max(scale, 1.0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        CHECK(std::abs(rep.gamma(a, b, c) - rep.gamma(a, c, b)) < 1e-8);
        for (int d = 0; d < n; ++d) {
          CHECK(std::abs(rep.riemann(a, b, c, d) + rep.riemann(a, b, d, c)) <
                1e-8 * scale);
          const double cyclic = rep.riemann(a, b, c, d) +
                                rep.riemann(a, c, d, b) +
                                rep.riemann(a, d, b, c);
          CHECK(std::abs(cyclic) < 1e-8 * scale);
        }
      }
    }
  }
}

}  // namespace

TEST_CASE("constant metrics are flat under both backends") {
  MatrixXd g0(2, 2);
  g0 << 2.0, 0.3, 0.3, 1.0;
  const MetricField field = fixtures::flat_field(g0);
  const Tensor3 gamma = christoffel(field, vec2(0.4, -1.0));
  for (double v : gamma.v) CHECK(v == 0.0);
  for (CurvatureBackend backend :
       {CurvatureBackend::Jets, CurvatureBackend::FiniteDiff}) {
    const CurvatureReport rep =
        scalar_curvature(field, vec2(0.4, -1.0), backend);
    CHECK(std::abs(rep.scalar) < 1e-8);
    CHECK(rep.det_g == doctest::Approx(2.0 - 0.09));
    CHECK_FALSE(rep.degenerate);
    REQUIRE(rep.backend_residual.has_value());
    CHECK(*rep.backend_residual < 1e-8);
  }
}

TEST_CASE("the unit sphere reproduces its textbook connection and scalar") {
  const MetricField field = fixtures::sphere_field();
  const VectorXd x = vec2(1.1, 0.4);

  const Tensor3 gamma = christoffel(field, x);
  CHECK(gamma(0, 1, 1) ==
        doctest::Approx(-std::sin(1.1) * std::cos(1.1)).epsilon(1e-10));
  CHECK(gamma(1, 0, 1) ==
        doctest::Approx(std::cos(1.1) / std::sin(1.1)).epsilon(1e-10));
  CHECK(gamma(0, 0, 0) == doctest::Approx(0.0));

  const CurvatureReport jets = scalar_curvature(field, x);
  CHECK(jets.scalar == doctest::Approx(2.0).epsilon(1e-6));
  check_tensor_symmetries(jets);

  const CurvatureReport fd =
      scalar_curvature(field, x, CurvatureBackend::FiniteDiff);
  CHECK(fd.scalar == doctest::Approx(2.0).epsilon(1e-4));
  REQUIRE(fd.backend_residual.has_value());
  CHECK(*fd.backend_residual < 1e-4);
}

TEST_CASE("the hyperbolic plane has scalar curvature minus two") {
  const MetricField field = fixtures::hyperbolic_field();
  for (double y : {0.5, 1.0, 2.5}) {
    const CurvatureReport rep = scalar_curvature(field, vec2(0.3, y));
    CHECK(rep.scalar == doctest::Approx(-2.0).epsilon(1e-6));
    check_tensor_symmetries(rep);
  }
}

TEST_CASE("degree-one degeneracy is refused, not regularized") {
  const auto rel = monomial_relation(1.0, vec2(0.5, 0.5));
  const MetricField field =
      metric_field(gt_general(kOnes2, kOnes2, LambdaConstant{1.0}), rel);
  CHECK_THROWS_AS(christoffel(field, kOnes2), DegenerateMetric);
  CHECK_THROWS_AS(scalar_curvature(field, kOnes2), DegenerateMetric);
}

TEST_CASE("inconsistent jet and value paths are surfaced loudly") {
  MetricField lying = fixtures::sphere_field();
  lying.components_value = [](const VectorXd&) {
    return MatrixXd::Identity(2, 2).eval();
  };
  const VectorXd x = vec2(1.1, 0.4);
  CHECK_THROWS_AS(scalar_curvature(lying, x), BackendDisagreement);
  CurvatureOptions trusting;
  trusting.cross_check = false;
  const CurvatureReport rep =
      scalar_curvature(lying, x, CurvatureBackend::Jets, trusting);
  CHECK(rep.scalar == doctest::Approx(2.0).epsilon(1e-6));
  CHECK_FALSE(rep.backend_residual.has_value());
}

TEST_CASE("induced metric fields expose closed-form components") {
  const auto rel = monomial_relation(1.0, vec2(0.75, 0.75));
  const MetricField inv = metric_field(natural(0), rel);
  const VectorXd E = vec2(1.2, 0.9);
  const auto jets = inv.components_jets(E);
  // 1/(E^2 I_2) times the Hessian entry, written out as monomials.
  const double I2 = 0.75 * std::pow(E(0), 0.75) * std::pow(E(1), -0.25);
  const double c = 1.0 / (E(1) * I2);
  const double H00 = -0.1875 * std::pow(E(0), -1.25) * std::pow(E(1), 0.75);
  CHECK(jets[0].value() == doctest::Approx(c * H00).epsilon(1e-12));

  const MetricField poly = metric_field(gp(1.0, 0), rel);
  const MatrixXd g = poly.components_value(kOnes2);
  CHECK(g(0, 0) == doctest::Approx(0.75 * (-3.0 / 16)).epsilon(1e-12));
  CHECK(g(0, 1) == doctest::Approx(0.75 * (9.0 / 16)).epsilon(1e-12));
}

TEST_CASE("invariant-metric curvature is representation independent") {
  // Degree-3/2 two-term potential: the invariant metric actually curves
  // here, so agreement across representations is not vacuous.
  const auto rel = relation_from_expression("E1^1.5 + E2^1.5", {"E1", "E2"});
  const MetricField canonical = metric_field(natural(0), rel);
  const MetricField rep_side =
      metric_field_in_representation(natural(0), rel, 0);
  CurvatureOptions quiet;
  quiet.cross_check = false;
  bool saw_curved = false;
  for (double e1 : {0.8, 1.0, 1.25}) {
    for (double e2 : {0.9, 1.1}) {
      const VectorXd E = vec2(e1, e2);
      const double sc =
          scalar_curvature(canonical, E, CurvatureBackend::Jets, quiet).scalar;
      const VectorXd u = rep_point(rel, 0, E);
      const double sr =
          scalar_curvature(rep_side, u, CurvatureBackend::Jets, quiet).scalar;
      CHECK(std::abs(sc - sr) <= 1e-6 * std::max(1.0, std::abs(sc)));
      if (std::abs(sc) > 0.1) saw_curved = true;
    }
  }
  CHECK(saw_curved);
}

TEST_CASE("conformally related metrics still bend differently") {
  const auto rel = relation_from_expression("E1^1.5 + E2^1.5", {"E1", "E2"});
  const MetricSpec spec = gt_general(kOnes2, kOnes2, LambdaConstant{1.0});
  const MetricField canonical = metric_field(spec, rel);
  const MetricField rep_side = metric_field_in_representation(spec, rel, 0);
  CurvatureOptions quiet;
  quiet.cross_check = false;
  const VectorXd E = vec2(1.2, 0.9);
  const double sc =
      scalar_curvature(canonical, E, CurvatureBackend::Jets, quiet).scalar;
  const double sr = scalar_curvature(rep_side, rep_point(rel, 0, E),
                                     CurvatureBackend::Jets, quiet)
                        .scalar;
  CHECK(std::abs(sc - sr) > 1e-3 * std::max(1.0, std::abs(sc)));
}

TEST_CASE("monomial potentials flatten every family in both representations") {
  // Power-law potentials are the degenerate case: scalars vanish on both
  // sides, so no curvature gap can be exhibited on them.
  const auto rel = monomial_relation(1.0, vec2(0.75, 0.75));
  CurvatureOptions quiet;
  quiet.cross_check = false;
  const VectorXd E = vec2(1.2, 0.9);
  for (const MetricSpec& spec :
       {gt_general(kOnes2, kOnes2, LambdaConstant{1.0}), natural(0),
        gp(1.0, 0)}) {
    const double sc =
        scalar_curvature(metric_field(spec, rel), E, CurvatureBackend::Jets,
                         quiet)
            .scalar;
    const double sr =
        scalar_curvature(metric_field_in_representation(spec, rel, 0),
                         rep_point(rel, 0, E), CurvatureBackend::Jets, quiet)
            .scalar;
    CHECK(std::abs(sc) < 1e-8);
    CHECK(std::abs(sr) < 1e-8);
  }
}

TEST_CASE("scans collect per-point failures instead of aborting") {
  // Product E^2 I_2 = -2 E2^2 vanishes on the E2 = 0 line.
  const auto rel = relation_from_expression("E1^2 - E2^2", {"E1", "E2"});
  const MetricField field = metric_field(natural(0), rel);
  const auto grid = make_grid({{1.0, 1.0, 1, false}, {-0.5, 0.5, 3, false}});
  REQUIRE(grid.size() == 3);
  const auto entries = curvature_scan(field, grid);
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].error.empty());
  CHECK(entries[0].report.has_value());
  CHECK_FALSE(entries[1].report.has_value());
  CHECK(entries[1].error.find("product") != std::string::npos);
  CHECK(entries[2].error.empty());
}

TEST_CASE("a scan over the sphere is constant") {
  const MetricField field = fixtures::sphere_field();
  const auto grid = make_grid({{0.6, 2.4, 4, false}, {0.0, 1.0, 2, false}});
  const auto entries = curvature_scan(field, grid);
  REQUIRE(entries.size() == 8);
  for (const auto& e : entries) {
    REQUIRE(e.error.empty());
    CHECK(e.report->scalar == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(e.degenerate == false);
  }
}

TEST_CASE("flat scans report zero everywhere") {
  const MetricField field = fixtures::flat_field(MatrixXd::Identity(2, 2));
  const auto grid = make_grid({{-1.0, 1.0, 3, false}, {-1.0, 1.0, 3, false}});
  for (const auto& e : curvature_scan(field, grid)) {
    REQUIRE(e.error.empty());
    CHECK(std::abs(e.report->scalar) < 1e-8);
  }
}

TEST_CASE("grids enumerate axes with the last one fastest") {
  const auto grid =
      make_grid({{0.0, 1.0, 3, false}, {10.0, 20.0, 2, false}});
  REQUIRE(grid.size() == 6);
  CHECK(grid[0] == vec2(0.0, 10.0));
  CHECK(grid[1] == vec2(0.0, 20.0));
  CHECK(grid[2] == vec2(0.5, 10.0));
  CHECK(grid[5] == vec2(1.0, 20.0));

  const auto geo = make_grid({{0.5, 2.0, 3, true}});
  CHECK(geo[1](0) == doctest::Approx(1.0));

  CHECK_THROWS_AS(make_grid({{1.0, 2.0, 0, false}}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid({{-1.0, 2.0, 2, true}}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid({}), std::invalid_argument);
}
