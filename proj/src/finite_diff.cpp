#include "gtd/finite_diff.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gtd {

namespace {

struct StencilPoint {
  int offset;
  double weight;
};

// Second-order accurate central stencils for d^k/dx^k, k = 1..4.
const std::vector<StencilPoint>& stencil(int order) {
  static const std::vector<StencilPoint> s1{{-1, -0.5}, {1, 0.5}};
  static const std::vector<StencilPoint> s2{{-1, 1.0}, {0, -2.0}, {1, 1.0}};
  static const std::vector<StencilPoint> s3{
      {-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}};
  static const std::vector<StencilPoint> s4{
      {-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}};
  switch (order) {
    case 1: return s1;
    case 2: return s2;
    case 3: return s3;
    default: return s4;
  }
}

double fd_recurse(const ScalarField& f, Eigen::VectorXd& point,
                  MultiIndex alpha, const Eigen::VectorXd& h) {
  int axis = -1;
  for (int d = 0; d < alpha.dim; ++d)
    if (alpha.e[d] > 0) {
      axis = d;
      break;
    }
  if (axis < 0) return f(point);
  const int order = alpha.e[axis];
  alpha.e[axis] = 0;
  const double x0 = point[axis];
  double acc = 0.0;
  for (const auto& sp : stencil(order)) {
    point[axis] = x0 + sp.offset * h[axis];
    acc += sp.weight * fd_recurse(f, point, alpha, h);
  }
  point[axis] = x0;
  return acc / std::pow(h[axis], order);
}

}  // namespace

double fd_partial(const ScalarField& f, const Eigen::VectorXd& point,
                  const MultiIndex& alpha, double step) {
  if (alpha.dim != point.size())
    throw std::invalid_argument("fd_partial: dimension mismatch");
  const int total = alpha.order();
  if (total > kJetOrder)
    throw std::invalid_argument("fd_partial: order exceeds 4");
  double h0 = step;
  if (h0 <= 0.0) h0 = total <= 2 ? 1e-3 : 1e-2;
  Eigen::VectorXd h(point.size());
  for (int a = 0; a < point.size(); ++a)
    h[a] = std::max(1.0, std::abs(point[a])) * h0;
  Eigen::VectorXd p = point;
  return fd_recurse(f, p, alpha, h);
}

}  // namespace gtd
