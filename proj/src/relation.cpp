#include "gtd/relation.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "gtd/errors.hpp"

namespace gtd {

double FundamentalRelation::value(const Eigen::VectorXd& E) const {
  if (E.size() != n) throw std::invalid_argument("relation: wrong point size");
  if (domain && !domain(E))
    throw DomainError("point outside the relation's domain");
  return value_eval(E);
}

Jet4 FundamentalRelation::jet(const Eigen::VectorXd& E) const {
  if (E.size() != n) throw std::invalid_argument("relation: wrong point size");
  if (domain && !domain(E))
    throw DomainError("point outside the relation's domain");
  return jet_eval(Jet4::seeds(E));
}

Jet4 FundamentalRelation::eval_on(const std::vector<Jet4>& args) const {
  if (static_cast<int>(args.size()) != n)
    throw std::invalid_argument("relation: wrong argument count");
  return jet_eval(args);
}

Eigen::VectorXd FundamentalRelation::gradient(const Eigen::VectorXd& E) const {
  return jet(E).gradient();
}

Eigen::MatrixXd FundamentalRelation::hessian(const Eigen::VectorXd& E) const {
  return jet(E).hessian();
}

FundamentalRelation monomial_relation(double c,
                                      const Eigen::VectorXd& exponents) {
  if (c == 0.0) throw DomainError("monomial relation with zero coefficient");
  const int n = static_cast<int>(exponents.size());
  if (n < 1) throw std::invalid_argument("monomial relation needs n >= 1");
  FundamentalRelation rel;
  rel.n = n;
  {
    char buf[64];
    std::snprintf(buf, sizeof buf, "monomial c=%g p=(", c);
    rel.label = buf;
    for (int a = 0; a < n; ++a) {
      std::snprintf(buf, sizeof buf, "%s%g", a ? "," : "", exponents[a]);
      rel.label += buf;
    }
    rel.label += ")";
  }
  rel.beta = exponents.sum();
  Eigen::VectorXd p = exponents;
  rel.domain = [n](const Eigen::VectorXd& E) {
    if (E.size() != n) return false;
    return (E.array() > 0.0).all();
  };
  rel.value_eval = [c, p](const Eigen::VectorXd& E) {
    double v = c;
    for (int a = 0; a < p.size(); ++a) v *= std::pow(E[a], p[a]);
    return v;
  };
  rel.jet_eval = [c, p](const std::vector<Jet4>& args) {
    Jet4 v = Jet4::constant(args[0].dim(), c);
    for (std::size_t a = 0; a < args.size(); ++a)
      if (p[a] != 0.0) v = v * pow(args[a], p[a]);
    return v;
  };
  return rel;
}

FundamentalRelation relation_from_expression(
    const std::string& source, const std::vector<std::string>& variables) {
  if (variables.empty())
    throw std::invalid_argument("expression relation needs variables");
  ExprAst ast = parse_expression(source, variables);
  const int n = static_cast<int>(variables.size());
  FundamentalRelation rel;
  rel.n = n;
  rel.label = source;
  rel.value_eval = [ast](const Eigen::VectorXd& E) {
    return eval_expr(ast, E);
  };
  rel.jet_eval = [ast](const std::vector<Jet4>& args) {
    return eval_expr(ast, args);
  };
  // admissible = evaluates without a domain violation
  rel.domain = [ast, n](const Eigen::VectorXd& E) {
    if (E.size() != n) return false;
    try {
      eval_expr(ast, E);
      return true;
    } catch (const DomainError&) {
      return false;
    }
  };
  return rel;
}

std::optional<double> detect_homogeneity(const FundamentalRelation& rel,
                                         int samples, double tol) {
  if (samples < 8)
    throw std::invalid_argument("detect_homogeneity needs samples >= 8");
  std::mt19937 rng(0x5eed0001u);
  std::uniform_real_distribution<double> log_coord(std::log(0.5),
                                                   std::log(2.0));
  std::vector<double> xs, ys;
  int attempts = 0;
  while (static_cast<int>(xs.size()) < samples && attempts < samples * 50) {
    ++attempts;
    Eigen::VectorXd E(rel.n);
    for (int a = 0; a < rel.n; ++a) E[a] = std::exp(log_coord(rng));
    double lam = std::exp(log_coord(rng));
    if (std::abs(std::log(lam)) < 0.1) continue;  // too close to identity
    try {
      const double f0 = rel.value(E);
      const double f1 = rel.value(lam * E);
      if (f0 == 0.0 || f1 == 0.0) return std::nullopt;
      if ((f0 > 0) != (f1 > 0)) return std::nullopt;
      xs.push_back(std::log(lam));
      ys.push_back(std::log(std::abs(f1)) - std::log(std::abs(f0)));
    } catch (const DomainError&) {
      continue;
    }
  }
  if (static_cast<int>(xs.size()) < samples) return std::nullopt;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += xs[k] * xs[k];
    sxy += xs[k] * ys[k];
  }
  const double beta = sxy / sxx;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double resid = std::abs(ys[k] - beta * xs[k]);
    if (resid > tol * std::max(1.0, std::abs(ys[k]))) return std::nullopt;
  }
  return beta;
}

int rep_axis_of(int i, int j) {
  if (j == i) throw std::invalid_argument("coordinate was swapped out");
  return j < i ? j + 1 : j;
}

int rep_coord_of(int i, int axis) {
  if (axis < 1) throw std::invalid_argument("axis 0 is the potential");
  return axis <= i ? axis - 1 : axis;
}

Eigen::VectorXd rep_point(const FundamentalRelation& rel, int i,
                          const Eigen::VectorXd& E) {
  Eigen::VectorXd u(rel.n);
  u[0] = rel.value(E);
  for (int j = 0; j < rel.n; ++j)
    if (j != i) u[rep_axis_of(i, j)] = E[j];
  return u;
}

namespace {

void check_rep_index(const FundamentalRelation& rel, int i) {
  if (i < 0 || i >= rel.n)
    throw std::invalid_argument("representation index out of range");
}

double conjugate_or_throw(const Eigen::VectorXd& I, int i) {
  const double scale = std::max(1.0, I.cwiseAbs().maxCoeff());
  if (std::abs(I[i]) <= 1e-12 * scale)
    throw SingularRepresentation(
        "conjugate intensive variable vanishes at the requested point");
  return I[i];
}

}  // namespace

RepresentationJet induced_representation_jet(const FundamentalRelation& rel,
                                             int i,
                                             const Eigen::VectorXd& E) {
  check_rep_index(rel, i);
  const Jet4 phi_at_E = rel.jet(E);
  const Eigen::VectorXd I = phi_at_E.gradient();
  const double Ii = conjugate_or_throw(I, i);

  const Eigen::VectorXd u = rep_point(rel, i, E);
  const std::vector<Jet4> su = Jet4::seeds(u);

  // Chord iteration on the jet equation Phi(E(u)) = u_0.  The value part
  // is already exact, and each pass fixes at least one more Taylor order.
  std::vector<Jet4> args(rel.n, Jet4(rel.n));
  for (int j = 0; j < rel.n; ++j)
    if (j != i) args[j] = su[rep_axis_of(i, j)];
  Jet4 x = Jet4::constant(rel.n, E[i]);
  for (int pass = 0; pass <= kJetOrder + 1; ++pass) {
    args[i] = x;
    const Jet4 resid = rel.eval_on(args) - su[0];
    x -= resid / Ii;
  }
  args[i] = x;
  const Jet4 resid = rel.eval_on(args) - su[0];
  double worst = 0.0;
  for (int pos = 0; pos < resid.size(); ++pos)
    worst = std::max(worst, std::abs(resid.coeff(pos)));
  if (worst > 1e-7 * std::max(1.0, std::abs(u[0])))
    throw DomainError("implicit representation jet failed to converge");
  return RepresentationJet(i, std::move(x));
}

ImplicitPartials implicit_partials(const FundamentalRelation& rel, int i,
                                   const Eigen::VectorXd& E) {
  check_rep_index(rel, i);
  const Jet4 phi = rel.jet(E);
  const Eigen::VectorXd I = phi.gradient();
  const Eigen::MatrixXd H = phi.hessian();
  const double Ii = conjugate_or_throw(I, i);

  const int n = rel.n;
  ImplicitPartials out;
  out.value = E[i];
  out.first = Eigen::VectorXd::Zero(n);
  out.second = Eigen::MatrixXd::Zero(n, n);

  // first order: dE^i/dPhi = 1/I_i, dE^i/dE^j = -I_j/I_i
  out.first[0] = 1.0 / Ii;
  for (int j = 0; j < n; ++j)
    if (j != i) out.first[rep_axis_of(i, j)] = -I[j] / Ii;

  // second order, by differentiating the relations above along the graph
  out.second(0, 0) = -H(i, i) / (Ii * Ii * Ii);
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    const int aj = rep_axis_of(i, j);
    const double xj = out.first[aj];
    out.second(0, aj) = out.second(aj, 0) =
        -(H(i, j) + H(i, i) * xj) / (Ii * Ii);
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      const int ak = rep_axis_of(i, k);
      const double xk = out.first[ak];
      out.second(aj, ak) =
          -((H(i, k) + H(i, i) * xk) * xj + H(j, k) + H(j, i) * xk) / Ii;
    }
  }
  return out;
}

double solve_extensive(const FundamentalRelation& rel, int i, double phi,
                       const Eigen::VectorXd& E_template, double guess) {
  check_rep_index(rel, i);
  Eigen::VectorXd E = E_template;
  auto h = [&](double x) {
    E[i] = x;
    return rel.value(E) - phi;
  };
  auto h_safe = [&](double x, bool& ok) {
    try {
      ok = true;
      return h(x);
    } catch (const DomainError&) {
      ok = false;
      return 0.0;
    }
  };

  // expand a bracket multiplicatively around the guess
  double lo = guess, hi = guess;
  bool ok_lo = false, ok_hi = false;
  double flo = h_safe(lo, ok_lo), fhi = flo;
  ok_hi = ok_lo;
  const double grow = 1.25;
  for (int it = 0; it < 200 && !(ok_lo && ok_hi && flo * fhi <= 0.0); ++it) {
    if (guess != 0.0) {
      lo = guess * std::pow(grow, -(it + 1));
      hi = guess * std::pow(grow, it + 1);
    } else {
      lo = -0.5 * std::pow(grow, it);
      hi = 0.5 * std::pow(grow, it);
    }
    const double nlo = h_safe(lo, ok_lo);
    const double nhi = h_safe(hi, ok_hi);
    if (ok_lo) flo = nlo;
    if (ok_hi) fhi = nhi;
  }
  if (!(ok_lo && ok_hi && flo * fhi <= 0.0))
    throw DomainError("solve_extensive: no sign change bracketed");
  if (lo > hi) {
    std::swap(lo, hi);
    std::swap(flo, fhi);
  }

  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    bool ok = false;
    double fx = h_safe(x, ok);
    if (!ok) {
      x = 0.5 * (lo + hi);
      fx = h(x);
    }
    if (std::abs(fx) <= 1e-14 * std::max(1.0, std::abs(phi))) return x;
    if ((flo > 0) != (fx > 0)) {
      hi = x;
      fhi = fx;
    } else {
      lo = x;
      flo = fx;
    }
    // Newton proposal, kept only when it lands inside the bracket
    E[i] = x;
    const double slope = rel.gradient(E)[i];
    double next = slope != 0.0 ? x - fx / slope : x;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-16 * std::max(1.0, std::abs(x))) return next;
    x = next;
  }
  return x;
}

Eigen::VectorXd rep_to_canonical(const FundamentalRelation& rel, int i,
                                 const Eigen::VectorXd& u, double guess) {
  check_rep_index(rel, i);
  Eigen::VectorXd E(rel.n);
  E[i] = guess;
  for (int axis = 1; axis < rel.n; ++axis) E[rep_coord_of(i, axis)] = u[axis];
  E[i] = solve_extensive(rel, i, u[0], E, guess);
  return E;
}

}  // namespace gtd
