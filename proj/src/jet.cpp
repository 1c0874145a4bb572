#include "gtd/jet.hpp"

#include <cmath>
#include <stdexcept>

#include "gtd/errors.hpp"

namespace gtd {

Jet4::Jet4(int dim)
    : table_(&JetTable::get(dim)),
      c_(table_->size(), 0.0),
      valid_order_(kJetOrder) {}

Jet4 Jet4::constant(int dim, double v) {
  Jet4 j(dim);
  j.c_[0] = v;
  return j;
}

Jet4 Jet4::seed(const Eigen::VectorXd& point, int axis) {
  const int dim = static_cast<int>(point.size());
  if (axis < 0 || axis >= dim)
    throw std::invalid_argument("seed axis out of range");
  Jet4 j(dim);
  j.c_[0] = point[axis];
  MultiIndex mi;
  mi.dim = dim;
  mi.e[axis] = 1;
  j.c_[j.table_->rank(mi)] = 1.0;
  return j;
}

std::vector<Jet4> Jet4::seeds(const Eigen::VectorXd& point) {
  std::vector<Jet4> out;
  out.reserve(point.size());
  for (int a = 0; a < point.size(); ++a) out.push_back(seed(point, a));
  return out;
}

double Jet4::coeff(const MultiIndex& alpha) const {
  const int pos = table_->rank(alpha);
  if (pos < 0) throw std::invalid_argument("multi-index order exceeds 4");
  return c_[pos];
}

double Jet4::partial(const MultiIndex& alpha) const {
  const int pos = table_->rank(alpha);
  if (pos < 0) throw std::invalid_argument("multi-index order exceeds 4");
  return c_[pos] * table_->factorial(pos);
}

double Jet4::partial1(int axis) const {
  MultiIndex mi;
  mi.dim = dim();
  mi.e[axis] = 1;
  return partial(mi);
}

double Jet4::partial2(int a, int b) const {
  MultiIndex mi;
  mi.dim = dim();
  mi.e[a] += 1;
  mi.e[b] += 1;
  return partial(mi);
}

Eigen::VectorXd Jet4::gradient() const {
  Eigen::VectorXd g(dim());
  for (int a = 0; a < dim(); ++a) g[a] = partial1(a);
  return g;
}

Eigen::MatrixXd Jet4::hessian() const {
  Eigen::MatrixXd h(dim(), dim());
  for (int a = 0; a < dim(); ++a)
    for (int b = 0; b < dim(); ++b) h(a, b) = partial2(a, b);
  return h;
}

Jet4 Jet4::derivative(int axis) const {
  if (axis < 0 || axis >= dim())
    throw std::invalid_argument("derivative axis out of range");
  Jet4 out(dim());
  out.valid_order_ = valid_order_ - 1;
  if (out.valid_order_ < 0) out.valid_order_ = 0;
  for (int pos = 0; pos < size(); ++pos) {
    MultiIndex mi = table_->alpha(pos);
    if (mi.order() >= kJetOrder) continue;  // source order pos+1 not stored
    mi.e[axis] += 1;
    // coeff of d_axis f at gamma = (gamma_axis + 1) * coeff_f(gamma + e_axis)
    out.c_[pos] = c_[table_->rank(mi)] * mi.e[axis];
  }
  return out;
}

void Jet4::check_same(const Jet4& o) const {
  if (table_ != o.table_)
    throw std::invalid_argument("jet dimension mismatch");
}

Jet4 Jet4::operator-() const {
  Jet4 out = *this;
  for (double& v : out.c_) v = -v;
  return out;
}

Jet4& Jet4::operator+=(const Jet4& o) {
  check_same(o);
  for (int i = 0; i < size(); ++i) c_[i] += o.c_[i];
  valid_order_ = std::min(valid_order_, o.valid_order_);
  return *this;
}

Jet4& Jet4::operator-=(const Jet4& o) {
  check_same(o);
  for (int i = 0; i < size(); ++i) c_[i] -= o.c_[i];
  valid_order_ = std::min(valid_order_, o.valid_order_);
  return *this;
}

Jet4& Jet4::operator+=(double s) {
  c_[0] += s;
  return *this;
}

Jet4& Jet4::operator-=(double s) {
  c_[0] -= s;
  return *this;
}

Jet4& Jet4::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Jet4& Jet4::operator/=(double s) {
  if (s == 0.0) throw DomainError("jet division by zero scalar");
  for (double& v : c_) v /= s;
  return *this;
}

Jet4 operator*(const Jet4& a, const Jet4& b) {
  a.check_same(b);
  Jet4 out(a.dim());
  out.valid_order_ = std::min(a.valid_order_, b.valid_order_);
  for (const auto& e : a.table_->mul_plan())
    out.c_[e.out] += a.c_[e.lhs] * b.c_[e.rhs];
  return out;
}

Jet4 operator/(const Jet4& a, const Jet4& b) {
  a.check_same(b);
  if (b.c_[0] == 0.0) throw DomainError("jet division by zero value part");
  Jet4 out(a.dim());
  out.valid_order_ = std::min(a.valid_order_, b.valid_order_);
  // Solve b * out = a for out, one coefficient at a time in graded order.
  for (int pos = 0; pos < a.size(); ++pos) {
    double acc = a.c_[pos];
    const auto [first, last] = a.table_->plan_range(pos);
    for (int k = first; k < last; ++k) {
      const auto& e = a.table_->mul_plan()[k];
      if (e.lhs == 0) continue;  // the b0 * out[pos] term being solved for
      acc -= b.c_[e.lhs] * out.c_[e.rhs];
    }
    out.c_[pos] = acc / b.c_[0];
  }
  return out;
}

Jet4 operator/(double s, const Jet4& a) {
  return Jet4::constant(a.dim(), s) / a;
}

Jet4 Jet4::compose_univariate(const Jet4& f,
                              const std::array<double, kJetOrder + 1>& d) {
  Jet4 u = f;
  u.c_[0] = 0.0;  // u = f - f0 has no constant term
  Jet4 acc = Jet4::constant(f.dim(), d[kJetOrder]);
  acc.valid_order_ = f.valid_order_;
  for (int k = kJetOrder - 1; k >= 0; --k) acc = acc * u + d[k];
  return acc;
}

Jet4 pow(const Jet4& f, double p) {
  const double f0 = f.value();
  const double rounded = std::nearbyint(p);
  const bool integral = p == rounded && std::abs(p) <= 64;
  if (!integral && f0 <= 0.0)
    throw DomainError("jet pow with non-integer exponent needs positive value");
  if (integral && p < 0 && f0 == 0.0)
    throw DomainError("jet pow with negative exponent at zero value");
  std::array<double, kJetOrder + 1> d{};
  // d[k] = h^(k)(f0)/k! with h(x) = x^p; falling factorial / k!.
  double coef = 1.0;
  for (int k = 0; k <= kJetOrder; ++k) {
    if (k > 0) coef *= (p - (k - 1)) / k;
    if (coef == 0.0) {
      d[k] = 0.0;  // integer p >= 0 exhausted; avoids 0^(negative)
      continue;
    }
    d[k] = coef * std::pow(f0, p - k);
  }
  return Jet4::compose_univariate(f, d);
}

Jet4 log(const Jet4& f) {
  const double f0 = f.value();
  if (f0 <= 0.0) throw DomainError("jet log of non-positive value");
  std::array<double, kJetOrder + 1> d{};
  d[0] = std::log(f0);
  double sign = 1.0;
  for (int k = 1; k <= kJetOrder; ++k) {
    d[k] = sign / (k * std::pow(f0, k));
    sign = -sign;
  }
  return Jet4::compose_univariate(f, d);
}

Jet4 exp(const Jet4& f) {
  const double e0 = std::exp(f.value());
  std::array<double, kJetOrder + 1> d{};
  double fct = 1.0;
  for (int k = 0; k <= kJetOrder; ++k) {
    if (k > 0) fct *= k;
    d[k] = e0 / fct;
  }
  return Jet4::compose_univariate(f, d);
}

Jet4 sqrt(const Jet4& f) { return pow(f, 0.5); }

Jet4 sin(const Jet4& f) {
  const double s = std::sin(f.value());
  const double c = std::cos(f.value());
  // cycle sin, cos, -sin, -cos divided by k!
  const std::array<double, kJetOrder + 1> d{s, c, -s / 2.0, -c / 6.0,
                                            s / 24.0};
  return Jet4::compose_univariate(f, d);
}

Jet4 cos(const Jet4& f) {
  const double s = std::sin(f.value());
  const double c = std::cos(f.value());
  const std::array<double, kJetOrder + 1> d{c, -s, -c / 2.0, s / 6.0,
                                            c / 24.0};
  return Jet4::compose_univariate(f, d);
}

}  // namespace gtd
