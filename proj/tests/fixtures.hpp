// Closed-form reference metrics with textbook curvature, used as ground
// truth for both differentiation backends.
#pragma once

#include <Eigen/Core>
#include <cmath>
#include <vector>

#include "gtd/curvature.hpp"
#include "gtd/jet.hpp"

namespace fixtures {

// Unit 2-sphere chart: diag(1, sin^2 theta), scalar curvature 2.
inline gtd::MetricField sphere_field() {
  gtd::MetricField f;
  f.dim = 2;
  f.coords = {"theta", "phi"};
  f.components_jets = [](const Eigen::VectorXd& x) {
    const auto seeds = gtd::Jet4::seeds(x);
    const gtd::Jet4 s = sin(seeds[0]);
    std::vector<gtd::Jet4> g;
    g.push_back(gtd::Jet4::constant(2, 1.0));
    g.push_back(gtd::Jet4::constant(2, 0.0));
    g.push_back(gtd::Jet4::constant(2, 0.0));
    g.push_back(s * s);
    return g;
  };
  f.components_value = [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = std::sin(x(0)) * std::sin(x(0));
    return g;
  };
  f.domain = [](const Eigen::VectorXd& x) {
    return x(0) > 0.05 && x(0) < 3.09;
  };
  return f;
}

// Poincare upper half-plane: diag(1/y^2, 1/y^2) over (x, y), scalar -2.
inline gtd::MetricField hyperbolic_field() {
  gtd::MetricField f;
  f.dim = 2;
  f.coords = {"x", "y"};
  f.components_jets = [](const Eigen::VectorXd& x) {
    const auto seeds = gtd::Jet4::seeds(x);
    const gtd::Jet4 w =
        gtd::Jet4::constant(2, 1.0) / (seeds[1] * seeds[1]);
    std::vector<gtd::Jet4> g;
    g.push_back(w);
    g.push_back(gtd::Jet4::constant(2, 0.0));
    g.push_back(gtd::Jet4::constant(2, 0.0));
    g.push_back(w);
    return g;
  };
  f.components_value = [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2, 2);
    g(0, 0) = g(1, 1) = 1.0 / (x(1) * x(1));
    return g;
  };
  f.domain = [](const Eigen::VectorXd& x) { return x(1) > 0.05; };
  return f;
}

// Constant-coefficient metric; curvature vanishes identically.
inline gtd::MetricField flat_field(const Eigen::MatrixXd& g0) {
  gtd::MetricField f;
  const int n = static_cast<int>(g0.rows());
  f.dim = n;
  for (int a = 0; a < n; ++a) f.coords.push_back("x" + std::to_string(a + 1));
  f.components_jets = [g0, n](const Eigen::VectorXd&) {
    std::vector<gtd::Jet4> g;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        g.push_back(gtd::Jet4::constant(n, g0(a, b)));
    return g;
  };
  f.components_value = [g0](const Eigen::VectorXd&) { return g0; };
  f.domain = [](const Eigen::VectorXd&) { return true; };
  return f;
}

}  // namespace fixtures
