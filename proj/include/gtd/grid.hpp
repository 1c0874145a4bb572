#pragma once

#include <Eigen/Core>
#include <vector>

namespace gtd {

struct GridAxis {
  double min = 0.0;
  double max = 1.0;
  int count = 1;
  bool log = false;  // geometric spacing; requires positive endpoints
};

// Cartesian product of the axis samples, last axis varying fastest.
// Endpoints are included; count == 1 yields the lower endpoint.
std::vector<Eigen::VectorXd> make_grid(const std::vector<GridAxis>& axes);

}  // namespace gtd
