#pragma once

#include <Eigen/Core>
#include <vector>

#include "gtd/multi_index.hpp"

namespace gtd {

// Dense truncated Taylor expansion of a scalar function of up to
// kMaxJetDim variables, carried to total order kJetOrder.  Coefficients
// are stored in Taylor normalization: coeff(alpha) = d^alpha f / alpha!.
//
// valid_order() tracks how many leading orders are meaningful; taking a
// derivative loses the top order and arithmetic propagates the minimum.
class Jet4 {
 public:
  explicit Jet4(int dim);
  static Jet4 constant(int dim, double v);
  // Taylor expansion of the coordinate function x_axis around `point`.
  static Jet4 seed(const Eigen::VectorXd& point, int axis);
  static std::vector<Jet4> seeds(const Eigen::VectorXd& point);

  int dim() const { return table_->dim(); }
  int size() const { return table_->size(); }
  int valid_order() const { return valid_order_; }
  const JetTable& table() const { return *table_; }

  double value() const { return c_[0]; }
  double coeff(int pos) const { return c_[pos]; }
  double& coeff(int pos) { return c_[pos]; }
  double coeff(const MultiIndex& alpha) const;
  // Raw partial derivative d^alpha f = coeff(alpha) * alpha!.
  double partial(const MultiIndex& alpha) const;
  double partial1(int axis) const;
  double partial2(int a, int b) const;

  Eigen::VectorXd gradient() const;
  Eigen::MatrixXd hessian() const;

  // Taylor expansion of d f / d x_axis; drops the top valid order.
  Jet4 derivative(int axis) const;

  Jet4 operator-() const;
  Jet4& operator+=(const Jet4& o);
  Jet4& operator-=(const Jet4& o);
  Jet4& operator+=(double s);
  Jet4& operator-=(double s);
  Jet4& operator*=(double s);
  Jet4& operator/=(double s);

  friend Jet4 operator+(Jet4 a, const Jet4& b) { return a += b; }
  friend Jet4 operator-(Jet4 a, const Jet4& b) { return a -= b; }
  friend Jet4 operator+(Jet4 a, double s) { return a += s; }
  friend Jet4 operator+(double s, Jet4 a) { return a += s; }
  friend Jet4 operator-(Jet4 a, double s) { return a -= s; }
  friend Jet4 operator-(double s, const Jet4& a) { return -a + s; }
  friend Jet4 operator*(Jet4 a, double s) { return a *= s; }
  friend Jet4 operator*(double s, Jet4 a) { return a *= s; }
  friend Jet4 operator/(Jet4 a, double s) { return a /= s; }
  friend Jet4 operator/(double s, const Jet4& a);

  friend Jet4 operator*(const Jet4& a, const Jet4& b);
  friend Jet4 operator/(const Jet4& a, const Jet4& b);

  friend Jet4 pow(const Jet4& f, double p);
  friend Jet4 log(const Jet4& f);
  friend Jet4 exp(const Jet4& f);
  friend Jet4 sqrt(const Jet4& f);
  friend Jet4 sin(const Jet4& f);
  friend Jet4 cos(const Jet4& f);

 private:
  void check_same(const Jet4& o) const;
  // Truncated evaluation of sum_k d[k] * (f - f0)^k; the univariate chain
  // rule for smooth h with Taylor coefficients d[k] at f0.
  static Jet4 compose_univariate(const Jet4& f,
                                const std::array<double, kJetOrder + 1>& d);

  const JetTable* table_;
  std::vector<double> c_;
  int valid_order_;
};

}  // namespace gtd
