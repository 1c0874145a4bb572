#include "gtd/metric.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "gtd/errors.hpp"

namespace gtd {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool value_is_zero(double v) { return v == 0.0; }
bool value_is_zero(const Jet4& j) { return j.value() == 0.0; }

double eval_lambda_expr(const ExprAst& ast, const Eigen::VectorXd& z) {
  return eval_expr(ast, z);
}
Jet4 eval_lambda_expr(const ExprAst& ast, const std::vector<Jet4>& args) {
  return eval_expr(ast, args);
}

int cross_exponent(const MetricSpec& spec) {
  return spec.hessian_limit ? 0 : 2 * spec.k + 1;
}

template <typename T>
T powint(const T& x, int m, const T& unit) {
  if (m == 0) return unit;
  T r = x;
  for (int q = 1; q < std::abs(m); ++q) r = r * x;
  if (m < 0) {
    if (value_is_zero(r))
      throw DomainError("negative power of a vanishing conjugate product");
    r = unit / r;
  }
  return r;
}

// sum_{a != excluded} 1/prod_a; every included product must be nonzero.
template <typename T>
T natural_coefficient(const std::vector<T>& prod, int excluded, const T& unit) {
  const int dim = static_cast<int>(prod.size());
  if (excluded < 0 || excluded >= dim)
    throw std::invalid_argument("excluded index out of range");
  bool first = true;
  T acc = unit;
  for (int a = 0; a < dim; ++a) {
    if (a == excluded) continue;
    if (value_is_zero(prod[a]))
      throw SingularRepresentation(
          "invariant coupling undefined where a conjugate product vanishes");
    const T term = unit / prod[a];
    acc = first ? term : acc + term;
    first = false;
  }
  if (first) throw std::invalid_argument("coupling sum is empty for n = 1");
  return acc;
}

template <typename T>
T trace_sum(const std::vector<double>& xi_ax, const std::vector<T>& prod) {
  T tau = xi_ax[0] * prod[0];
  for (std::size_t a = 1; a < prod.size(); ++a)
    tau = tau + xi_ax[a] * prod[a];
  return tau;
}

template <typename T, typename PhaseArgs>
std::vector<T> resolve_lambda(const MetricSpec& spec, int dim,
                              const std::function<int(int)>& slot_of,
                              const std::vector<T>& prod,
                              const PhaseArgs& phase_args, int natural_excluded,
                              const T& unit) {
  std::vector<T> out;
  out.reserve(dim);
  std::visit(
      overloaded{
          [&](const LambdaConstant& c) {
            for (int a = 0; a < dim; ++a) out.push_back(unit * c.value);
          },
          [&](const LambdaPerComponent& pc) {
            for (int a = 0; a < dim; ++a) {
              const int slot = slot_of(a);
              if (slot < 0 || slot >= pc.values.size())
                throw std::invalid_argument("per-component coupling too short");
              out.push_back(unit * pc.values(slot));
            }
          },
          [&](const LambdaNaturalFormula&) {
            const T c = natural_coefficient(prod, natural_excluded, unit);
            T tau = prod[0];
            for (int a = 1; a < dim; ++a) tau = tau + prod[a];
            if (value_is_zero(tau))
              throw DomainError("coupling undefined at vanishing trace");
            const T lam = c / tau;
            for (int a = 0; a < dim; ++a) out.push_back(lam);
          },
          [&](const LambdaExpression& ex) {
            const T v = eval_lambda_expr(ex.ast, phase_args);
            for (int a = 0; a < dim; ++a) out.push_back(v);
          },
      },
      spec.lambda);
  return out;
}

// Cross-term weight in front of sym(dE^a x dI_a) for the ambient metric.
template <typename T, typename PhaseArgs>
std::vector<T> cross_weights(const MetricSpec& spec, int dim,
                             const std::function<int(int)>& slot_of,
                             const std::vector<double>& xi_ax,
                             const std::vector<double>& chi_ax,
                             const std::vector<T>& prod,
                             const PhaseArgs& phase_args, int natural_excluded,
                             const T& unit) {
  std::vector<T> w;
  w.reserve(dim);
  switch (spec.family) {
    case MetricFamily::GTGeneral: {
      const auto lambda = resolve_lambda(spec, dim, slot_of, prod, phase_args,
                                         natural_excluded, unit);
      const T tau = trace_sum(xi_ax, prod);
      for (int a = 0; a < dim; ++a)
        w.push_back(tau * (lambda[a] * chi_ax[a]));
      break;
    }
    case MetricFamily::GP: {
      const auto lambda = resolve_lambda(spec, dim, slot_of, prod, phase_args,
                                         natural_excluded, unit);
      const int m = cross_exponent(spec);
      for (int a = 0; a < dim; ++a)
        w.push_back(lambda[a] * powint(prod[a], m, unit));
      break;
    }
    case MetricFamily::Natural: {
      const T c = natural_coefficient(prod, natural_excluded, unit);
      for (int a = 0; a < dim; ++a) w.push_back(c);
      break;
    }
  }
  return w;
}

// g_ab = 1/2 (w_a + w_b) H_ab, the equilibrium image of the cross term.
template <typename T>
std::vector<T> weighted_hessian(const std::vector<T>& w,
                                const std::vector<T>& hess, int dim) {
  std::vector<T> g;
  g.reserve(dim * dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      g.push_back((w[a] + w[b]) * 0.5 * hess[a * dim + b]);
  return g;
}

std::vector<double> diag_entries(const Eigen::VectorXd& v, int dim,
                                 const std::function<int(int)>& slot_of,
                                 const char* what) {
  std::vector<double> out(dim);
  for (int a = 0; a < dim; ++a) {
    const int slot = slot_of(a);
    if (slot < 0 || slot >= v.size())
      throw std::invalid_argument(std::string(what) +
                                  " diagonal has the wrong length");
    out[a] = v(slot);
  }
  return out;
}

std::function<int(int)> identity_slots() {
  return [](int a) { return a; };
}

std::function<int(int)> representation_slots(int i) {
  return [i](int a) { return a == 0 ? i : rep_coord_of(i, a); };
}

int representation_excluded_axis(const MetricSpec& spec, int i) {
  return spec.rep_index == i ? 0 : rep_axis_of(i, spec.rep_index);
}

bool needs_xi_chi(const MetricSpec& spec) {
  return spec.family == MetricFamily::GTGeneral;
}

std::vector<std::string> phase_basis(int n) {
  std::vector<std::string> b;
  b.push_back("dPhi");
  for (int a = 0; a < n; ++a) b.push_back("dE" + std::to_string(a + 1));
  for (int a = 0; a < n; ++a) b.push_back("dI" + std::to_string(a + 1));
  return b;
}

std::vector<std::string> canonical_basis(int n) {
  std::vector<std::string> b;
  for (int a = 0; a < n; ++a) b.push_back("dE" + std::to_string(a + 1));
  return b;
}

std::vector<std::string> representation_basis(int n, int i) {
  std::vector<std::string> b;
  b.push_back("dPhi");
  for (int j = 0; j < n; ++j)
    if (j != i) b.push_back("dE" + std::to_string(j + 1));
  return b;
}

MetricSample finish_sample(std::vector<std::string> basis, Eigen::MatrixXd g,
                           Eigen::VectorXd point) {
  MetricSample out;
  out.basis = std::move(basis);
  out.g = std::move(g);
  out.point = std::move(point);
  out.degenerate = is_degenerate(out.g);
  return out;
}

}  // namespace

MetricSpec gt_general(const Eigen::VectorXd& xi, const Eigen::VectorXd& chi,
                      LambdaMode lambda) {
  if (xi.size() != chi.size())
    throw std::invalid_argument("xi and chi must have equal length");
  MetricSpec spec;
  spec.family = MetricFamily::GTGeneral;
  spec.xi = xi;
  spec.chi = chi;
  spec.lambda = std::move(lambda);
  return spec;
}

MetricSpec gp(double lambda, int k) {
  MetricSpec spec;
  spec.family = MetricFamily::GP;
  spec.lambda = LambdaConstant{lambda};
  spec.k = k;
  return spec;
}

MetricSpec gp_hessian_limit(double lambda) {
  MetricSpec spec;
  spec.family = MetricFamily::GP;
  spec.lambda = LambdaConstant{lambda};
  spec.hessian_limit = true;
  return spec;
}

MetricSpec natural(int rep_index) {
  if (rep_index < 0) throw std::invalid_argument("rep_index must be >= 0");
  MetricSpec spec;
  spec.family = MetricFamily::Natural;
  spec.lambda = LambdaNaturalFormula{};
  spec.rep_index = rep_index;
  return spec;
}

bool is_degenerate(const Eigen::MatrixXd& g) {
  const double scale = g.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  const double bound =
      1e-10 * std::pow(scale, static_cast<double>(g.rows()));
  return std::abs(g.determinant()) <= bound;
}

double natural_lambda(const PhasePoint& Z, int i) {
  const int n = Z.n();
  if (i < 0 || i >= n) throw std::invalid_argument("index out of range");
  std::vector<double> prod(n);
  for (int a = 0; a < n; ++a) prod[a] = Z.E(a) * Z.I(a);
  const double c = natural_coefficient(prod, i, 1.0);
  double tau = 0.0;
  for (double p : prod) tau += p;
  if (tau == 0.0) throw DomainError("coupling undefined at vanishing trace");
  return c / tau;
}

MetricSample phase_metric(const MetricSpec& spec, const PhasePoint& Z) {
  const int n = Z.n();
  const auto slots = identity_slots();
  std::vector<double> xi_ax(n, 1.0), chi_ax(n, 1.0);
  if (needs_xi_chi(spec)) {
    xi_ax = diag_entries(spec.xi, n, slots, "xi");
    chi_ax = diag_entries(spec.chi, n, slots, "chi");
  }
  std::vector<double> prod(n);
  for (int a = 0; a < n; ++a) prod[a] = Z.E(a) * Z.I(a);

  const auto w = cross_weights(spec, n, slots, xi_ax, chi_ax, prod,
                               Z.to_vector(), spec.rep_index, 1.0);

  const Eigen::VectorXd theta = gibbs_one_form(Z).comp;
  Eigen::MatrixXd G = theta * theta.transpose();
  for (int a = 0; a < n; ++a) {
    G(phase_idx_E(a), phase_idx_I(a, n)) += 0.5 * w[a];
    G(phase_idx_I(a, n), phase_idx_E(a)) += 0.5 * w[a];
  }
  return finish_sample(phase_basis(n), std::move(G), Z.to_vector());
}

MetricSample induced_metric(const MetricSpec& spec,
                            const FundamentalRelation& rel,
                            const Eigen::VectorXd& E) {
  const int n = rel.n;
  const auto slots = identity_slots();
  std::vector<double> xi_ax(n, 1.0), chi_ax(n, 1.0);
  if (needs_xi_chi(spec)) {
    xi_ax = diag_entries(spec.xi, n, slots, "xi");
    chi_ax = diag_entries(spec.chi, n, slots, "chi");
  }
  const PhasePoint Z = lift_to_equilibrium(rel, E);
  const Eigen::MatrixXd H = rel.hessian(E);
  std::vector<double> prod(n), hess(n * n);
  for (int a = 0; a < n; ++a) {
    prod[a] = Z.E(a) * Z.I(a);
    for (int b = 0; b < n; ++b) hess[a * n + b] = H(a, b);
  }
  const auto w = cross_weights(spec, n, slots, xi_ax, chi_ax, prod,
                               Z.to_vector(), spec.rep_index, 1.0);
  const auto gv = weighted_hessian(w, hess, n);
  Eigen::MatrixXd g(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g(a, b) = gv[a * n + b];
  return finish_sample(canonical_basis(n), std::move(g), E);
}

MetricSample induced_metric_in_representation(const MetricSpec& spec,
                                              const FundamentalRelation& rel,
                                              int i, const Eigen::VectorXd& E) {
  const int n = rel.n;
  const auto slots = representation_slots(i);
  std::vector<double> xi_ax(n, 1.0), chi_ax(n, 1.0);
  if (needs_xi_chi(spec)) {
    xi_ax = diag_entries(spec.xi, n, slots, "xi");
    chi_ax = diag_entries(spec.chi, n, slots, "chi");
  }
  const ImplicitPartials ip = implicit_partials(rel, i, E);
  const Eigen::VectorXd u = rep_point(rel, i, E);

  std::vector<double> prod(n), hess(n * n);
  for (int a = 0; a < n; ++a) {
    prod[a] = u(a) * ip.first(a);
    for (int b = 0; b < n; ++b) hess[a * n + b] = ip.second(a, b);
  }
  const PhasePoint Zp =
      representation_transform(lift_to_equilibrium(rel, E), i);
  const auto w =
      cross_weights(spec, n, slots, xi_ax, chi_ax, prod, Zp.to_vector(),
                    representation_excluded_axis(spec, i), 1.0);
  const auto gv = weighted_hessian(w, hess, n);
  Eigen::MatrixXd g(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g(a, b) = gv[a * n + b];
  return finish_sample(representation_basis(n, i), std::move(g), u);
}

MetricSample pullback_to_canonical(const MetricSample& m,
                                   const FundamentalRelation& rel, int i,
                                   const Eigen::VectorXd& E) {
  const int n = rel.n;
  if (m.g.rows() != n || m.g.cols() != n)
    throw std::invalid_argument("sample dimension does not match the system");
  if (i < 0 || i >= n) throw std::invalid_argument("index out of range");
  const Eigen::VectorXd I = rel.gradient(E);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  J.row(0) = I.transpose();
  for (int a = 1; a < n; ++a) J(a, rep_coord_of(i, a)) = 1.0;
  Eigen::MatrixXd g = J.transpose() * m.g * J;
  return finish_sample(canonical_basis(n), std::move(g), E);
}

std::optional<double> conformal_check(const MetricSample& g1,
                                      const MetricSample& g2, double tol) {
  if (g1.g.rows() != g2.g.rows() || g1.g.cols() != g2.g.cols())
    throw std::invalid_argument("samples have different dimensions");
  if (g1.basis != g2.basis)
    throw std::invalid_argument("samples use different bases");
  const double scale2 = g2.g.cwiseAbs().maxCoeff();
  double num = 0.0, den = 0.0;
  for (int a = 0; a < g2.g.rows(); ++a) {
    for (int b = 0; b < g2.g.cols(); ++b) {
      if (std::abs(g2.g(a, b)) <= 1e-12 * scale2) continue;
      num += g1.g(a, b) * g2.g(a, b);
      den += g2.g(a, b) * g2.g(a, b);
    }
  }
  if (den == 0.0) return std::nullopt;
  const double f = num / den;
  const double scale1 = std::max(1e-300, g1.g.cwiseAbs().maxCoeff());
  const double residual = (g1.g - f * g2.g).cwiseAbs().maxCoeff();
  if (residual > tol * scale1) return std::nullopt;
  return f;
}

double predicted_conformal_factor(const FundamentalRelation& rel,
                                  const MetricSpec& spec, int i,
                                  const Eigen::VectorXd& E) {
  const int n = rel.n;
  if (i < 0 || i >= n) throw std::invalid_argument("index out of range");
  if (spec.family != MetricFamily::GTGeneral)
    throw HypothesisNotMet("conformal factor defined for the trace family");
  if (!rel.beta.has_value())
    throw HypothesisNotMet("conformal factor requires a homogeneous relation");
  const auto slots = identity_slots();
  const auto xi_ax = diag_entries(spec.xi, n, slots, "xi");
  const auto chi_ax = diag_entries(spec.chi, n, slots, "chi");

  const PhasePoint Z = lift_to_equilibrium(rel, E);
  std::vector<double> prod(n);
  for (int a = 0; a < n; ++a) prod[a] = Z.E(a) * Z.I(a);
  const auto lambda = resolve_lambda(spec, n, slots, prod, Z.to_vector(),
                                     spec.rep_index, 1.0);
  double vmax = 0.0;
  for (int a = 0; a < n; ++a)
    vmax = std::max(vmax, std::abs(lambda[a] * chi_ax[a]));
  for (int a = 1; a < n; ++a) {
    if (std::abs(lambda[a] * chi_ax[a] - lambda[0] * chi_ax[0]) >
        1e-12 * std::max(1.0, vmax))
      throw HypothesisNotMet(
          "conformal factor requires equal coupling products");
  }

  const double beta = *rel.beta;
  const double Ii = Z.I(i);
  if (std::abs(Ii) <= 1e-12 * std::max(1.0, Z.I.cwiseAbs().maxCoeff()))
    throw SingularRepresentation("conformal factor undefined at I_(i) = 0");
  const double tau = trace_sum(xi_ax, prod);
  if (tau == 0.0) throw DomainError("conformal factor undefined at zero trace");
  double bracket = xi_ax[i] * Z.E(i);
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    bracket += (xi_ax[i] - xi_ax[j] * beta) * Z.I(j) * Z.E(j) / Ii;
  }
  return -bracket / (beta * Ii * tau);
}

std::vector<Jet4> induced_metric_jets(const MetricSpec& spec,
                                      const FundamentalRelation& rel,
                                      const Eigen::VectorXd& E) {
  const int n = rel.n;
  const auto slots = identity_slots();
  std::vector<double> xi_ax(n, 1.0), chi_ax(n, 1.0);
  if (needs_xi_chi(spec)) {
    xi_ax = diag_entries(spec.xi, n, slots, "xi");
    chi_ax = diag_entries(spec.chi, n, slots, "chi");
  }
  const Jet4 unit = Jet4::constant(n, 1.0);
  const auto seeds = Jet4::seeds(E);
  const Jet4 phi = rel.eval_on(seeds);

  std::vector<Jet4> grad, prod, hess;
  for (int a = 0; a < n; ++a) {
    grad.push_back(phi.derivative(a));
    prod.push_back(seeds[a] * grad[a]);
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) hess.push_back(grad[a].derivative(b));

  std::vector<Jet4> phase_args;
  phase_args.push_back(phi);
  for (int a = 0; a < n; ++a) phase_args.push_back(seeds[a]);
  for (int a = 0; a < n; ++a) phase_args.push_back(grad[a]);

  const auto w = cross_weights(spec, n, slots, xi_ax, chi_ax, prod, phase_args,
                               spec.rep_index, unit);
  return weighted_hessian(w, hess, n);
}

std::vector<Jet4> representation_metric_jets(const MetricSpec& spec,
                                             const FundamentalRelation& rel,
                                             int i, const Eigen::VectorXd& E) {
  const int n = rel.n;
  const auto slots = representation_slots(i);
  std::vector<double> xi_ax(n, 1.0), chi_ax(n, 1.0);
  if (needs_xi_chi(spec)) {
    xi_ax = diag_entries(spec.xi, n, slots, "xi");
    chi_ax = diag_entries(spec.chi, n, slots, "chi");
  }
  const Jet4 unit = Jet4::constant(n, 1.0);
  const RepresentationJet rj = induced_representation_jet(rel, i, E);
  const Eigen::VectorXd u = rep_point(rel, i, E);
  const auto seeds = Jet4::seeds(u);

  std::vector<Jet4> grad, prod, hess;
  for (int a = 0; a < n; ++a) {
    grad.push_back(rj.jet.derivative(a));
    prod.push_back(seeds[a] * grad[a]);
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) hess.push_back(grad[a].derivative(b));

  // Phase coordinates of the transformed point as functions of u: the old
  // potential occupies extensive slot i, the new potential is E^(i).
  std::vector<Jet4> phase_args;
  phase_args.push_back(rj.jet);
  for (int slot = 0; slot < n; ++slot)
    phase_args.push_back(slot == i ? seeds[0] : seeds[rep_axis_of(i, slot)]);
  for (int slot = 0; slot < n; ++slot)
    phase_args.push_back(slot == i ? grad[0] : grad[rep_axis_of(i, slot)]);

  const auto w =
      cross_weights(spec, n, slots, xi_ax, chi_ax, prod, phase_args,
                    representation_excluded_axis(spec, i), unit);
  return weighted_hessian(w, hess, n);
}

}  // namespace gtd
