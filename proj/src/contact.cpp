#include "gtd/contact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gtd/errors.hpp"

namespace gtd {

Eigen::VectorXd PhasePoint::to_vector() const {
  const int nn = n();
  Eigen::VectorXd z(phase_dim(nn));
  z(0) = phi;
  z.segment(1, nn) = E;
  z.segment(1 + nn, nn) = I;
  return z;
}

PhasePoint PhasePoint::from_vector(const Eigen::VectorXd& z) {
  const int size = static_cast<int>(z.size());
  if (size < 3 || size % 2 == 0)
    throw std::invalid_argument("phase vector must have odd length >= 3");
  const int nn = (size - 1) / 2;
  PhasePoint Z;
  Z.phi = z(0);
  Z.E = z.segment(1, nn);
  Z.I = z.segment(1 + nn, nn);
  return Z;
}

PhasePoint lift_to_equilibrium(const FundamentalRelation& rel,
                               const Eigen::VectorXd& E) {
  PhasePoint Z;
  Z.phi = rel.value(E);
  Z.E = E;
  Z.I = rel.gradient(E);
  return Z;
}

OneFormValue gibbs_one_form(const PhasePoint& Z) {
  const int n = Z.n();
  OneFormValue w;
  w.comp = Eigen::VectorXd::Zero(phase_dim(n));
  w.comp(0) = 1.0;
  for (int a = 0; a < n; ++a) w.comp(phase_idx_E(a)) = -Z.I(a);
  return w;
}

Eigen::VectorXd embedding_pullback(const FundamentalRelation& rel,
                                   const Eigen::VectorXd& E,
                                   const OneFormValue& theta) {
  const int n = rel.n;
  if (theta.n() != n)
    throw std::invalid_argument("one-form dimension mismatch");
  const Eigen::VectorXd grad = rel.gradient(E);
  const Eigen::MatrixXd hess = rel.hessian(E);
  Eigen::VectorXd out(n);
  for (int a = 0; a < n; ++a) {
    double s = theta.comp(0) * grad(a) + theta.comp(phase_idx_E(a));
    for (int b = 0; b < n; ++b)
      s += theta.comp(phase_idx_I(b, n)) * hess(b, a);
    out(a) = s;
  }
  return out;
}

namespace {

std::vector<char> subset_mask(int n, const std::vector<int>& subset) {
  std::vector<char> mask(n, 0);
  if (subset.empty())
    throw std::invalid_argument("Legendre subset must be non-empty");
  for (int i : subset) {
    if (i < 0 || i >= n)
      throw std::invalid_argument("Legendre subset index out of range");
    if (mask[i]) throw std::invalid_argument("Legendre subset has duplicates");
    mask[i] = 1;
  }
  return mask;
}

void check_rep_index(const PhasePoint& Z, int i) {
  const int n = Z.n();
  if (i < 0 || i >= n)
    throw std::invalid_argument("representation index out of range");
  const double scale = std::max(1.0, Z.I.cwiseAbs().maxCoeff());
  if (std::abs(Z.I(i)) <= 1e-12 * scale)
    throw SingularRepresentation(
        "representation change undefined where I_(i) vanishes");
}

}  // namespace

PhasePoint legendre_transform(const PhasePoint& Z,
                              const std::vector<int>& subset) {
  const int n = Z.n();
  const auto mask = subset_mask(n, subset);
  PhasePoint out = Z;
  for (int i = 0; i < n; ++i) {
    if (!mask[i]) continue;
    out.phi -= Z.E(i) * Z.I(i);
    out.E(i) = -Z.I(i);
    out.I(i) = Z.E(i);
  }
  return out;
}

PhaseMap legendre_phase_map(int n, const std::vector<int>& subset) {
  const auto mask = subset_mask(n, subset);
  PhaseMap map;
  map.name = "legendre";
  map.n = n;
  map.apply = [subset](const PhasePoint& Z) {
    return legendre_transform(Z, subset);
  };
  map.jacobian = [n, mask](const PhasePoint& Z) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(phase_dim(n), phase_dim(n));
    J(0, 0) = 1.0;
    for (int i = 0; i < n; ++i) {
      if (mask[i]) {
        J(0, phase_idx_E(i)) = -Z.I(i);
        J(0, phase_idx_I(i, n)) = -Z.E(i);
        J(phase_idx_E(i), phase_idx_I(i, n)) = -1.0;
        J(phase_idx_I(i, n), phase_idx_E(i)) = 1.0;
      } else {
        J(phase_idx_E(i), phase_idx_E(i)) = 1.0;
        J(phase_idx_I(i, n), phase_idx_I(i, n)) = 1.0;
      }
    }
    return J;
  };
  return map;
}

PhaseMap total_legendre_map(int n) {
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  PhaseMap map = legendre_phase_map(n, all);
  map.name = "total_legendre";
  return map;
}

PhasePoint representation_transform(const PhasePoint& Z, int i) {
  check_rep_index(Z, i);
  const int n = Z.n();
  PhasePoint out = Z;
  out.phi = Z.E(i);
  out.E(i) = Z.phi;
  out.I(i) = 1.0 / Z.I(i);
  for (int j = 0; j < n; ++j)
    if (j != i) out.I(j) = -Z.I(j) / Z.I(i);
  return out;
}

PhaseMap representation_phase_map(int n, int i) {
  if (i < 0 || i >= n)
    throw std::invalid_argument("representation index out of range");
  PhaseMap map;
  map.name = "representation";
  map.n = n;
  map.apply = [i](const PhasePoint& Z) {
    return representation_transform(Z, i);
  };
  map.jacobian = [n, i](const PhasePoint& Z) {
    check_rep_index(Z, i);
    const double Ii = Z.I(i);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(phase_dim(n), phase_dim(n));
    J(0, phase_idx_E(i)) = 1.0;
    J(phase_idx_E(i), 0) = 1.0;
    J(phase_idx_I(i, n), phase_idx_I(i, n)) = -1.0 / (Ii * Ii);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      J(phase_idx_E(j), phase_idx_E(j)) = 1.0;
      J(phase_idx_I(j, n), phase_idx_I(j, n)) = -1.0 / Ii;
      J(phase_idx_I(j, n), phase_idx_I(i, n)) = Z.I(j) / (Ii * Ii);
    }
    return J;
  };
  return map;
}

PhaseMap identity_phase_map(int n) {
  PhaseMap map;
  map.name = "identity";
  map.n = n;
  map.apply = [](const PhasePoint& Z) { return Z; };
  map.jacobian = [n](const PhasePoint&) {
    return Eigen::MatrixXd::Identity(phase_dim(n), phase_dim(n));
  };
  return map;
}

PhaseMap numeric_phase_map(
    const std::string& name, int n,
    std::function<PhasePoint(const PhasePoint&)> apply) {
  PhaseMap map;
  map.name = name;
  map.n = n;
  map.apply = apply;
  map.jacobian = [apply, n](const PhasePoint& Z) {
    const Eigen::VectorXd z0 = Z.to_vector();
    const int dim = phase_dim(n);
    Eigen::MatrixXd J(dim, dim);
    for (int k = 0; k < dim; ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(z0(k)));
      Eigen::VectorXd zp = z0, zm = z0;
      zp(k) += h;
      zm(k) -= h;
      const Eigen::VectorXd fp = apply(PhasePoint::from_vector(zp)).to_vector();
      const Eigen::VectorXd fm = apply(PhasePoint::from_vector(zm)).to_vector();
      J.col(k) = (fp - fm) / (2.0 * h);
    }
    return J;
  };
  return map;
}

double contactomorphism_factor(const PhaseMap& map, const PhasePoint& Z) {
  const Eigen::MatrixXd J = map.jacobian(Z);
  const Eigen::VectorXd theta_img = gibbs_one_form(map.apply(Z)).comp;
  const Eigen::VectorXd pulled = J.transpose() * theta_img;
  const Eigen::VectorXd theta = gibbs_one_form(Z).comp;
  const double omega = pulled.dot(theta) / theta.dot(theta);
  const double scale = std::max(1.0, pulled.cwiseAbs().maxCoeff());
  const double residual = (pulled - omega * theta).cwiseAbs().maxCoeff();
  if (residual > 1e-9 * scale)
    throw NotAContactomorphism(
        "pullback of the Gibbs form is not proportional to it (map '" +
        map.name + "')");
  return omega;
}

AltForm alt_from_one_form(const OneFormValue& w) {
  AltForm a;
  a.dim = static_cast<int>(w.comp.size());
  a.degree = 1;
  for (int k = 0; k < a.dim; ++k)
    if (w.comp(k) != 0.0) a.terms[{k}] = w.comp(k);
  return a;
}

AltForm wedge(const AltForm& a, const AltForm& b) {
  if (a.dim != b.dim)
    throw std::invalid_argument("wedge of forms over different spaces");
  AltForm out;
  out.dim = a.dim;
  out.degree = a.degree + b.degree;
  if (out.degree > out.dim) return out;
  for (const auto& [ia, ca] : a.terms) {
    for (const auto& [ib, cb] : b.terms) {
      std::vector<int> merged = ia;
      merged.insert(merged.end(), ib.begin(), ib.end());
      // Inversion parity of the concatenation; repeated index kills the term.
      int inversions = 0;
      bool repeated = false;
      for (std::size_t p = 0; p < merged.size() && !repeated; ++p) {
        for (std::size_t q = p + 1; q < merged.size(); ++q) {
          if (merged[p] == merged[q]) {
            repeated = true;
            break;
          }
          if (merged[p] > merged[q]) ++inversions;
        }
      }
      if (repeated) continue;
      std::sort(merged.begin(), merged.end());
      const double sign = (inversions % 2 == 0) ? 1.0 : -1.0;
      out.terms[merged] += sign * ca * cb;
    }
  }
  for (auto it = out.terms.begin(); it != out.terms.end();)
    it = (it->second == 0.0) ? out.terms.erase(it) : std::next(it);
  return out;
}

double top_component(const AltForm& a) {
  if (a.degree != a.dim) return 0.0;
  std::vector<int> full(a.dim);
  for (int k = 0; k < a.dim; ++k) full[k] = k;
  const auto it = a.terms.find(full);
  return it == a.terms.end() ? 0.0 : it->second;
}

AltForm exterior_derivative(const OneFormField& field,
                            const Eigen::VectorXd& z0) {
  const int dim = static_cast<int>(z0.size());
  Eigen::MatrixXd D(dim, dim);  // D(a, b) = d w_b / d z^a
  for (int a = 0; a < dim; ++a) {
    const double h = 1e-6 * std::max(1.0, std::abs(z0(a)));
    Eigen::VectorXd zp = z0, zm = z0;
    zp(a) += h;
    zm(a) -= h;
    D.row(a) = (field(zp).comp - field(zm).comp).transpose() / (2.0 * h);
  }
  AltForm out;
  out.dim = dim;
  out.degree = 2;
  for (int a = 0; a < dim; ++a) {
    for (int b = a + 1; b < dim; ++b) {
      const double c = D(a, b) - D(b, a);
      if (c != 0.0) out.terms[{a, b}] = c;
    }
  }
  return out;
}

double contact_volume_component(const OneFormField& field,
                                const Eigen::VectorXd& z0) {
  const int dim = static_cast<int>(z0.size());
  const int n = (dim - 1) / 2;
  AltForm acc = alt_from_one_form(field(z0));
  const AltForm dtheta = exterior_derivative(field, z0);
  for (int k = 0; k < n; ++k) acc = wedge(acc, dtheta);
  return top_component(acc);
}

namespace {

OneFormField gibbs_field() {
  return [](const Eigen::VectorXd& z) {
    return gibbs_one_form(PhasePoint::from_vector(z));
  };
}

}  // namespace

bool nonintegrability_check(const PhasePoint& Z) {
  return nonintegrability_check(gibbs_field(), Z.to_vector());
}

bool nonintegrability_check(const OneFormField& field,
                            const Eigen::VectorXd& z0) {
  return std::abs(contact_volume_component(field, z0)) > 1e-6;
}

}  // namespace gtd
