#include "gtd/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace gtd {

namespace {

std::vector<double> axis_samples(const GridAxis& axis) {
  if (axis.count < 1) throw std::invalid_argument("grid axis needs count >= 1");
  if (axis.max < axis.min)
    throw std::invalid_argument("grid axis has max < min");
  if (axis.log && (axis.min <= 0.0 || axis.max <= 0.0))
    throw std::invalid_argument("log-spaced axis needs positive endpoints");
  std::vector<double> out(axis.count);
  if (axis.count == 1) {
    out[0] = axis.min;
    return out;
  }
  for (int k = 0; k < axis.count; ++k) {
    const double t = static_cast<double>(k) / (axis.count - 1);
    out[k] = axis.log
                 ? std::exp(std::log(axis.min) +
                            t * (std::log(axis.max) - std::log(axis.min)))
                 : axis.min + t * (axis.max - axis.min);
  }
  return out;
}

}  // namespace

std::vector<Eigen::VectorXd> make_grid(const std::vector<GridAxis>& axes) {
  if (axes.empty()) throw std::invalid_argument("grid needs at least one axis");
  std::vector<std::vector<double>> samples;
  std::size_t total = 1;
  for (const auto& axis : axes) {
    samples.push_back(axis_samples(axis));
    total *= samples.back().size();
  }
  std::vector<Eigen::VectorXd> grid;
  grid.reserve(total);
  const int dim = static_cast<int>(axes.size());
  std::vector<std::size_t> idx(dim, 0);
  for (std::size_t p = 0; p < total; ++p) {
    Eigen::VectorXd point(dim);
    for (int a = 0; a < dim; ++a) point(a) = samples[a][idx[a]];
    grid.push_back(std::move(point));
    for (int a = dim - 1; a >= 0; --a) {
      if (++idx[a] < samples[a].size()) break;
      idx[a] = 0;
    }
  }
  return grid;
}

}  // namespace gtd
