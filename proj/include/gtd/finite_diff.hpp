#pragma once

#include <Eigen/Core>
#include <functional>

#include "gtd/multi_index.hpp"

namespace gtd {

using ScalarField = std::function<double(const Eigen::VectorXd&)>;

// Central-difference estimate of the raw partial derivative d^alpha f at
// `point`.  Mixed partials use the tensor product of per-axis stencils.
// The per-axis step is max(1, |x_a|) * step; step <= 0 picks the default
// 1e-3 for |alpha| <= 2 and 1e-2 for orders 3 and 4.
double fd_partial(const ScalarField& f, const Eigen::VectorXd& point,
                  const MultiIndex& alpha, double step = 0.0);

}  // namespace gtd
