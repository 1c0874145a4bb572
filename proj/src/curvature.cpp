#include "gtd/curvature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gtd/errors.hpp"
#include "gtd/finite_diff.hpp"
#include "gtd/multi_index.hpp"

namespace gtd {

std::string to_string(CurvatureBackend backend) {
  return backend == CurvatureBackend::Jets ? "jets" : "finite-diff";
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct MetricDerivs {
  MatrixXd g;
  Tensor3 dg;   // dg(a,b,c)   = d g_ab / dx^c
  Tensor4 ddg;  // ddg(a,b,c,d) = d^2 g_ab / dx^c dx^d
};

MultiIndex unit_index(int n, int c) {
  MultiIndex mi{};
  mi.dim = n;
  mi.e[c] = 1;
  return mi;
}

MultiIndex pair_index(int n, int c, int d) {
  MultiIndex mi{};
  mi.dim = n;
  mi.e[c] += 1;
  mi.e[d] += 1;
  return mi;
}

MetricDerivs derivs_from_jets(const MetricField& field, const VectorXd& x) {
  const int n = field.dim;
  const auto jets = field.components_jets(x);
  if (static_cast<int>(jets.size()) != n * n)
    throw std::invalid_argument("metric field returned a wrong component count");
  MetricDerivs out{MatrixXd(n, n), Tensor3(n), Tensor4(n)};
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Jet4& j = jets[a * n + b];
      if (j.valid_order() < 2)
        throw std::invalid_argument("metric component jet below order 2");
      out.g(a, b) = j.value();
      for (int c = 0; c < n; ++c) {
        out.dg(a, b, c) = j.partial1(c);
        for (int d = 0; d < n; ++d) out.ddg(a, b, c, d) = j.partial2(c, d);
      }
    }
  }
  return out;
}

MetricDerivs derivs_from_fd(const MetricField& field, const VectorXd& x) {
  const int n = field.dim;
  MetricDerivs out{field.components_value(x), Tensor3(n), Tensor4(n)};
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const auto f = [&field, a, b](const VectorXd& p) {
        return field.components_value(p)(a, b);
      };
      for (int c = 0; c < n; ++c) {
        out.dg(a, b, c) = fd_partial(f, x, unit_index(n, c));
        for (int d = c; d < n; ++d) {
          const double s = fd_partial(f, x, pair_index(n, c, d));
          out.ddg(a, b, c, d) = s;
          out.ddg(a, b, d, c) = s;
        }
      }
    }
  }
  return out;
}

void require_regular(const MatrixXd& g, const char* where) {
  if (is_degenerate(g)) {
    std::ostringstream msg;
    msg << where << ": metric is degenerate (det = " << g.determinant()
        << ", scale = " << g.cwiseAbs().maxCoeff() << ")";
    throw DegenerateMetric(msg.str());
  }
}

Tensor3 christoffel_of(const MetricDerivs& md, const MatrixXd& ginv) {
  const int n = md.g.rows();
  Tensor3 gamma(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int d = 0; d < n; ++d)
          s += ginv(a, d) *
               (md.dg(d, b, c) + md.dg(d, c, b) - md.dg(b, c, d));
        gamma(a, b, c) = 0.5 * s;
      }
  return gamma;
}

CurvatureReport assemble_report(const VectorXd& point, const MetricDerivs& md,
                                CurvatureBackend backend) {
  const int n = md.g.rows();
  CurvatureReport rep;
  rep.point = point;
  rep.backend = backend;
  rep.det_g = md.g.determinant();
  rep.degenerate = is_degenerate(md.g);
  require_regular(md.g, "curvature");

  const MatrixXd ginv = Eigen::FullPivLU<MatrixXd>(md.g).inverse();
  rep.gamma = christoffel_of(md, ginv);

  Tensor4 rlow(n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d) {
          double s = 0.5 * (md.ddg(a, d, b, c) + md.ddg(b, c, a, d) -
                            md.ddg(a, c, b, d) - md.ddg(b, d, a, c));
          for (int e = 0; e < n; ++e)
            for (int f = 0; f < n; ++f)
              s += md.g(e, f) * (rep.gamma(e, a, d) * rep.gamma(f, b, c) -
                                 rep.gamma(e, a, c) * rep.gamma(f, b, d));
          rlow(a, b, c, d) = s;
        }
      }
    }
  }

  rep.riemann = Tensor4(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int e = 0; e < n; ++e) s += ginv(a, e) * rlow(e, b, c, d);
          rep.riemann(a, b, c, d) = s;
        }

  rep.ricci = MatrixXd::Zero(n, n);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) s += rep.riemann(a, b, a, d);
      rep.ricci(b, d) = s;
    }

  rep.scalar = 0.0;
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) rep.scalar += ginv(b, d) * rep.ricci(b, d);
  return rep;
}

MetricDerivs derivs_for(const MetricField& field, const VectorXd& x,
                        CurvatureBackend backend) {
  return backend == CurvatureBackend::Jets ? derivs_from_jets(field, x)
                                           : derivs_from_fd(field, x);
}

}  // namespace

MetricField metric_field(const MetricSpec& spec,
                         const FundamentalRelation& rel) {
  MetricField field;
  field.dim = rel.n;
  for (int a = 0; a < rel.n; ++a)
    field.coords.push_back("E" + std::to_string(a + 1));
  field.components_jets = [spec, rel](const VectorXd& E) {
    return induced_metric_jets(spec, rel, E);
  };
  field.components_value = [spec, rel](const VectorXd& E) {
    return induced_metric(spec, rel, E).g;
  };
  field.domain = [rel](const VectorXd& E) {
    return rel.domain ? rel.domain(E) : true;
  };
  return field;
}

MetricField metric_field_in_representation(const MetricSpec& spec,
                                           const FundamentalRelation& rel,
                                           int i, double guess_hint) {
  if (i < 0 || i >= rel.n)
    throw std::invalid_argument("representation index out of range");
  MetricField field;
  field.dim = rel.n;
  field.coords.push_back("Phi");
  for (int j = 0; j < rel.n; ++j)
    if (j != i) field.coords.push_back("E" + std::to_string(j + 1));
  field.components_jets = [spec, rel, i, guess_hint](const VectorXd& u) {
    const VectorXd E = rep_to_canonical(rel, i, u, guess_hint);
    return representation_metric_jets(spec, rel, i, E);
  };
  field.components_value = [spec, rel, i, guess_hint](const VectorXd& u) {
    const VectorXd E = rep_to_canonical(rel, i, u, guess_hint);
    return induced_metric_in_representation(spec, rel, i, E).g;
  };
  field.domain = [rel, i, guess_hint](const VectorXd& u) {
    try {
      rep_to_canonical(rel, i, u, guess_hint);
      return true;
    } catch (const std::exception&) {
      return false;
    }
  };
  return field;
}

Tensor3 christoffel(const MetricField& field, const VectorXd& E) {
  const MetricDerivs md = derivs_from_jets(field, E);
  require_regular(md.g, "christoffel");
  const MatrixXd ginv = Eigen::FullPivLU<MatrixXd>(md.g).inverse();
  return christoffel_of(md, ginv);
}

CurvatureReport scalar_curvature(const MetricField& field, const VectorXd& E,
                                 CurvatureBackend backend,
                                 const CurvatureOptions& options) {
  CurvatureReport rep = assemble_report(E, derivs_for(field, E, backend), backend);
  if (options.cross_check) {
    const CurvatureBackend other = backend == CurvatureBackend::Jets
                                       ? CurvatureBackend::FiniteDiff
                                       : CurvatureBackend::Jets;
    const CurvatureReport check =
        assemble_report(E, derivs_for(field, E, other), other);
    const double resid = std::abs(rep.scalar - check.scalar) /
                         std::max(1.0, std::abs(rep.scalar));
    rep.backend_residual = resid;
    if (resid > options.cross_tol) {
      std::ostringstream msg;
      msg << "scalar curvature backends disagree: " << to_string(backend)
          << " = " << rep.scalar << ", " << to_string(other) << " = "
          << check.scalar << " (relative gap " << resid << ")";
      throw BackendDisagreement(msg.str());
    }
  }
  return rep;
}

std::vector<ScanEntry> curvature_scan(const MetricField& field,
                                      const std::vector<VectorXd>& grid,
                                      CurvatureBackend backend,
                                      const CurvatureOptions& options) {
  std::vector<ScanEntry> out;
  out.reserve(grid.size());
  for (const VectorXd& point : grid) {
    ScanEntry entry;
    entry.point = point;
    try {
      if (field.domain && !field.domain(point))
        throw DomainError("point outside the admissible domain");
      const MatrixXd g = field.components_value(point);
      entry.det_g = g.determinant();
      entry.degenerate = is_degenerate(g);
      entry.report = scalar_curvature(field, point, backend, options);
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace gtd
