#include "gtd/verify.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <random>

#include "gtd/contact.hpp"
#include "gtd/curvature.hpp"
#include "gtd/errors.hpp"
#include "gtd/grid.hpp"

namespace gtd {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string strf(const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

std::string point_str(const VectorXd& E) {
  std::string out = "(";
  for (int a = 0; a < E.size(); ++a) out += strf("%s%.6g", a ? "," : "", E[a]);
  return out + ")";
}

double pick_tol(const VerifyOptions& opts, double fallback) {
  return opts.tolerance_override > 0.0 ? opts.tolerance_override : fallback;
}

// max |A - B| / max(1, max |B|)
double rel_gap(const MatrixXd& A, const MatrixXd& B) {
  return (A - B).cwiseAbs().maxCoeff() /
         std::max(1.0, B.cwiseAbs().maxCoeff());
}

struct Accumulator {
  VerificationReport rep;

  void point(double normalized, const std::string& line) {
    rep.points += 1;
    rep.max_residual = std::max(rep.max_residual, normalized);
    rep.details.push_back(line);
  }
  void tally(const std::string& line) {
    rep.points += 1;
    rep.details.push_back(line);
  }
  void note(const std::string& line) { rep.details.push_back(line); }
  VerificationReport finish() {
    if (rep.points == 0) {
      rep.details.push_back("no evaluable points");
      rep.passed = false;
    } else {
      rep.passed = rep.max_residual <= 1.0;
    }
    return rep;
  }
};

double require_homogeneous(ClaimId claim, const FundamentalRelation& rel) {
  std::optional<double> beta = rel.beta;
  if (!beta) beta = detect_homogeneity(rel);
  if (!beta)
    throw HypothesisNotMet(to_string(claim) +
                           " assumes a homogeneous fundamental relation; '" +
                           rel.label + "' failed the homogeneity fit");
  return *beta;
}

void require_degree_one_two_dof(ClaimId claim, const FundamentalRelation& rel,
                                double beta) {
  if (rel.n != 2 || std::abs(beta - 1.0) > 1e-8)
    throw HypothesisNotMet(
        to_string(claim) +
        strf(" applies to degree-1 homogeneous systems with two degrees of "
             "freedom; '%s' has n=%d, degree %.6g",
             rel.label.c_str(), rel.n, beta));
}

void require_family(ClaimId claim, const MetricSpec& spec, MetricFamily want,
                    const char* name) {
  if (spec.family != want)
    throw HypothesisNotMet(to_string(claim) + " is a statement about the " +
                           name + " family");
}

int check_rep_index(const FundamentalRelation& rel, int i) {
  if (i < 0 || i >= rel.n)
    throw HypothesisNotMet(
        strf("representation index %d out of range for n=%d", i, rel.n));
  return i;
}

// Representation-side sample congruence-transformed to the dE^a basis.
MetricSample rep_pullback(const MetricSpec& spec, const FundamentalRelation& rel,
                          int i, const VectorXd& E) {
  return pullback_to_canonical(
      induced_metric_in_representation(spec, rel, i, E), rel, i, E);
}

void run_lemma1(Accumulator& acc, const FundamentalRelation& rel,
                const MetricSpec& spec, const VerifyOptions& opts,
                const std::vector<VectorXd>& grid) {
  const double t = pick_tol(opts, 1e-10);
  const PhaseMap map = total_legendre_map(rel.n);
  for (const VectorXd& E : grid) {
    if (!rel.domain(E)) {
      acc.note("skipped (outside domain) E=" + point_str(E));
      continue;
    }
    PhasePoint Z = lift_to_equilibrium(rel, E);
    // Deterministic off-shell deformation: the congruence holds on all of
    // phase space, not just on the equilibrium graph.
    Z.phi = 1.1 * Z.phi + 0.1;
    for (int a = 0; a < rel.n; ++a) Z.I[a] *= 1.0 + 0.15 * (a + 1);
    const MatrixXd G = phase_metric(spec, Z).g;
    const MatrixXd J = map.jacobian(Z);
    const MatrixXd G2 = phase_metric(spec, map.apply(Z)).g;
    const double raw = rel_gap(J.transpose() * G2 * J, G);
    acc.point(raw / t,
              strf("E=%s congruence residual=%.3e", point_str(E).c_str(), raw));
  }
}

void run_prop1_forward(Accumulator& acc, const FundamentalRelation& rel,
                       const MetricSpec& spec, const VerifyOptions& opts,
                       const std::vector<VectorXd>& grid) {
  require_family(ClaimId::Prop1_forward, spec, MetricFamily::GTGeneral,
                 "trace");
  require_homogeneous(ClaimId::Prop1_forward, rel);
  const double t = pick_tol(opts, 1e-8);
  const int i = check_rep_index(rel, opts.rep_index);
  for (const VectorXd& E : grid) {
    try {
      const MetricSample g = induced_metric(spec, rel, E);
      const MetricSample pulled = rep_pullback(spec, rel, i, E);
      const double f = predicted_conformal_factor(rel, spec, i, E) *
                       (1.0 + opts.factor_perturbation);
      const MatrixXd target = f * g.g;
      double raw = rel_gap(pulled.g, target);
      const std::optional<double> obs = conformal_check(pulled, g, 1e-6);
      if (obs)
        raw = std::max(raw, std::abs(*obs - f) /
                                std::max(1e-300, std::abs(f)));
      acc.point(raw / t,
                strf("E=%s f_pred=%.9g f_obs=%s residual=%.3e",
                     point_str(E).c_str(), f,
                     obs ? strf("%.9g", *obs).c_str() : "none", raw));
    } catch (const SingularRepresentation& e) {
      acc.note("skipped (singular representation) E=" + point_str(E));
    } catch (const DomainError& e) {
      acc.note(strf("skipped (domain) E=%s: %s", point_str(E).c_str(),
                    e.what()));
    }
  }
}

// Shared by the converse and integer-k claims: count grid points where a
// conformal factor exists when none should.
void run_no_conformal(Accumulator& acc, ClaimId claim,
                      const FundamentalRelation& rel,
                      const std::vector<MetricSpec>& specs,
                      const VerifyOptions& opts,
                      const std::vector<VectorXd>& grid,
                      const std::function<std::string(const MetricSpec&)>&
                          spec_tag) {
  require_homogeneous(claim, rel);
  const double ct = pick_tol(opts, 1e-6);
  int found = 0;
  for (const MetricSpec& spec : specs) {
    const int i = check_rep_index(rel, opts.rep_index);
    for (const VectorXd& E : grid) {
      try {
        const MetricSample g = induced_metric(spec, rel, E);
        const MetricSample pulled = rep_pullback(spec, rel, i, E);
        const std::optional<double> obs = conformal_check(pulled, g, ct);
        if (obs) ++found;
        acc.tally(strf("%sE=%s conformal factor: %s", spec_tag(spec).c_str(),
                       point_str(E).c_str(),
                       obs ? strf("%.9g", *obs).c_str() : "none"));
      } catch (const SingularRepresentation&) {
        acc.note("skipped (singular representation) E=" + point_str(E));
      } catch (const DomainError& e) {
        acc.note(strf("skipped (domain) E=%s: %s", point_str(E).c_str(),
                      e.what()));
      }
    }
  }
  // Structural coincidences are allowed at isolated points only: at most
  // one per 25 evaluated.
  const int allowed = std::max(1, acc.rep.points / 25);
  acc.rep.max_residual = static_cast<double>(found) / allowed;
  acc.note(strf("conformal at %d of %d points (allowed %d)", found,
                acc.rep.points, allowed));
}

void run_prop2(Accumulator& acc, const FundamentalRelation& rel,
               const MetricSpec& spec, const VerifyOptions& opts,
               const std::vector<VectorXd>& grid) {
  require_family(ClaimId::Prop2, spec, MetricFamily::Natural, "invariant");
  require_homogeneous(ClaimId::Prop2, rel);
  const double mt = pick_tol(opts, 1e-10);
  const double ct = pick_tol(opts, 1e-6);
  const int i = check_rep_index(rel, spec.rep_index);
  const MetricField canonical = metric_field(spec, rel);
  const MetricField rep_side = metric_field_in_representation(spec, rel, i);
  CurvatureOptions quiet;
  quiet.cross_check = false;
  for (const VectorXd& E : grid) {
    try {
      const MetricSample g = induced_metric(spec, rel, E);
      const MetricSample pulled = rep_pullback(spec, rel, i, E);
      const double raw_m = rel_gap(pulled.g, g.g);
      double normalized = raw_m / mt;
      std::string line = strf("E=%s metric residual=%.3e",
                              point_str(E).c_str(), raw_m);
      if (g.degenerate) {
        line += " curvature not applicable (degenerate metric)";
      } else {
        try {
          const double sc =
              scalar_curvature(canonical, E, CurvatureBackend::Jets, quiet)
                  .scalar;
          const double sr = scalar_curvature(rep_side, rep_point(rel, i, E),
                                             CurvatureBackend::Jets, quiet)
                                .scalar;
          const double raw_c =
              std::abs(sc - sr) / std::max(1.0, std::abs(sc));
          normalized = std::max(normalized, raw_c / ct);
          line += strf(" scalars=(%.9g,%.9g)", sc, sr);
        } catch (const DegenerateMetric&) {
          line += " curvature not applicable (degenerate metric)";
        }
      }
      acc.point(normalized, line);
    } catch (const SingularRepresentation&) {
      acc.note("skipped (singular representation) E=" + point_str(E));
    } catch (const DomainError& e) {
      acc.note(strf("skipped (domain) E=%s: %s", point_str(E).c_str(),
                    e.what()));
    }
  }
}

void run_corollary(Accumulator& acc, const FundamentalRelation& rel,
                   const VerifyOptions& opts) {
  const double t = pick_tol(opts, 1e-12);
  const int n = rel.n;
  const int i = check_rep_index(rel, opts.rep_index);
  const PhaseMap map = total_legendre_map(n);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int p = 0; p < 100; ++p) {
    PhasePoint Z;
    Z.phi = u(rng);
    Z.E = VectorXd(n);
    Z.I = VectorXd(n);
    for (int a = 0; a < n; ++a) Z.E[a] = u(rng);
    for (int a = 0; a < n; ++a) Z.I[a] = u(rng);
    const double l0 = natural_lambda(Z, i);
    const double l1 = natural_lambda(map.apply(Z), i);
    const double raw = std::abs(l1 - l0) / std::max(1.0, std::abs(l0));
    acc.point(raw / t, strf("point %d lambda=%.9g image residual=%.3e", p,
                            l0, raw));
  }
}

void run_hessian_ratio(Accumulator& acc, ClaimId claim,
                       const FundamentalRelation& rel, const MetricSpec& spec,
                       const VerifyOptions& opts,
                       const std::vector<VectorXd>& grid) {
  require_family(claim, spec, MetricFamily::GP, "partial-invariant");
  if (!spec.hessian_limit)
    throw HypothesisNotMet(to_string(claim) +
                           " concerns the Hessian limit (cross exponent 0)");
  require_homogeneous(claim, rel);
  const double t = pick_tol(opts, 1e-10);
  const int i = check_rep_index(rel, opts.rep_index);
  for (const VectorXd& E : grid) {
    try {
      const MetricSample g = induced_metric(spec, rel, E);
      const MetricSample pulled = rep_pullback(spec, rel, i, E);
      const PhasePoint Z = lift_to_equilibrium(rel, E);
      const double r =
          (-1.0 / Z.I[i]) * (1.0 + opts.factor_perturbation);
      const double raw = rel_gap(pulled.g, r * g.g);
      acc.point(raw / t, strf("E=%s ratio=%.9g residual=%.3e",
                              point_str(E).c_str(), r, raw));
    } catch (const SingularRepresentation&) {
      acc.note("skipped (singular representation) E=" + point_str(E));
    } catch (const DomainError& e) {
      acc.note(strf("skipped (domain) E=%s: %s", point_str(E).c_str(),
                    e.what()));
    }
  }
}

void run_gIconf(Accumulator& acc, const FundamentalRelation& rel,
                const MetricSpec& spec, const VerifyOptions& opts,
                const std::vector<VectorXd>& grid) {
  require_family(ClaimId::Example_gIconf, spec, MetricFamily::GTGeneral,
                 "trace");
  const double beta = require_homogeneous(ClaimId::Example_gIconf, rel);
  require_degree_one_two_dof(ClaimId::Example_gIconf, rel, beta);
  const double t = pick_tol(opts, 1e-8);
  const int i = check_rep_index(rel, opts.rep_index);
  for (const VectorXd& E : grid) {
    try {
      const MetricSample g = induced_metric(spec, rel, E);
      const MetricSample pulled = rep_pullback(spec, rel, i, E);
      const VectorXd I = rel.gradient(E);
      const double ie = I.dot(E);
      // Degree-1 closed form: with S = E^(i), T = I_(i) and the Euler
      // combination ST - PV = I.E, the factor is -S / (T (ST - PV)).
      const double f_closed = -E[i] / (I[i] * ie);
      const double fp = predicted_conformal_factor(rel, spec, i, E);
      const double consistency =
          std::abs(fp - f_closed) / std::max(1.0, std::abs(f_closed));
      const double f = f_closed * (1.0 + opts.factor_perturbation);
      double raw = std::max(consistency, rel_gap(pulled.g, f * g.g));
      const std::optional<double> obs = conformal_check(pulled, g, 1e-6);
      if (obs)
        raw = std::max(raw,
                       std::abs(*obs - f) / std::max(1e-300, std::abs(f)));
      acc.point(raw / t,
                strf("E=%s f_closed=%.9g f_obs=%s residual=%.3e",
                     point_str(E).c_str(), f,
                     obs ? strf("%.9g", *obs).c_str() : "none", raw));
    } catch (const SingularRepresentation&) {
      acc.note("skipped (singular representation) E=" + point_str(E));
    } catch (const DomainError& e) {
      acc.note(strf("skipped (domain) E=%s: %s", point_str(E).c_str(),
                    e.what()));
    }
  }
}

void run_natural_isometry(Accumulator& acc, const FundamentalRelation& rel,
                          const MetricSpec& spec, const VerifyOptions& opts,
                          const std::vector<VectorXd>& grid) {
  require_family(ClaimId::Example_natural_isometry, spec,
                 MetricFamily::Natural, "invariant");
  const double beta =
      require_homogeneous(ClaimId::Example_natural_isometry, rel);
  require_degree_one_two_dof(ClaimId::Example_natural_isometry, rel, beta);
  const double t = pick_tol(opts, 1e-10);
  const int i = check_rep_index(rel, spec.rep_index);
  const int j = 1 - i;
  for (const VectorXd& E : grid) {
    try {
      const MetricSample g = induced_metric(spec, rel, E);
      const MetricSample pulled = rep_pullback(spec, rel, i, E);
      const double iso_raw = rel_gap(pulled.g, g.g);
      // Closed two-DOF form: the coefficient 1/(E^j I_j) times the
      // potential Hessian, assembled from the relation directly.  With
      // S = E^(i) swapped out this is -(1/(PV)) (dS dT - dV dP).
      const VectorXd I = rel.gradient(E);
      const MatrixXd closed = rel.hessian(E) / (E[j] * I[j]);
      const double closed_raw = rel_gap(g.g, closed);
      const double raw = std::max(iso_raw, closed_raw);
      acc.point(raw / t,
                strf("E=%s isometry residual=%.3e closed-form residual=%.3e",
                     point_str(E).c_str(), iso_raw, closed_raw));
    } catch (const SingularRepresentation&) {
      acc.note("skipped (singular representation) E=" + point_str(E));
    } catch (const DomainError& e) {
      acc.note(strf("skipped (domain) E=%s: %s", point_str(E).c_str(),
                    e.what()));
    }
  }
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20)
          out += strf("\\u%04x", c);
        else
          out += c;
    }
  }
  return out;
}

}  // namespace

std::string to_string(ClaimId id) {
  switch (id) {
    case ClaimId::Lemma1: return "Lemma1";
    case ClaimId::Prop1_forward: return "Prop1_forward";
    case ClaimId::Prop1_converse: return "Prop1_converse";
    case ClaimId::Prop2: return "Prop2";
    case ClaimId::Corollary: return "Corollary";
    case ClaimId::Prop3_integer_k: return "Prop3_integer_k";
    case ClaimId::Prop3_hessian: return "Prop3_hessian";
    case ClaimId::Example_gIconf: return "Example_gIconf";
    case ClaimId::Example_natural_isometry: return "Example_natural_isometry";
    case ClaimId::Example_rao: return "Example_rao";
  }
  return "unknown";
}

std::optional<ClaimId> claim_from_string(const std::string& name) {
  for (ClaimId id : all_claims())
    if (to_string(id) == name) return id;
  return std::nullopt;
}

const std::vector<ClaimId>& all_claims() {
  static const std::vector<ClaimId> ids = {
      ClaimId::Lemma1,          ClaimId::Prop1_forward,
      ClaimId::Prop1_converse,  ClaimId::Prop2,
      ClaimId::Corollary,       ClaimId::Prop3_integer_k,
      ClaimId::Prop3_hessian,   ClaimId::Example_gIconf,
      ClaimId::Example_natural_isometry, ClaimId::Example_rao,
  };
  return ids;
}

std::vector<Eigen::VectorXd> default_verification_grid(int n) {
  std::vector<GridAxis> axes(static_cast<std::size_t>(n),
                             GridAxis{0.5, 2.0, 5, true});
  return make_grid(axes);
}

MetricSpec canonical_claim_spec(ClaimId claim, int n, int rep_index) {
  const VectorXd ones = VectorXd::Ones(n);
  switch (claim) {
    case ClaimId::Lemma1:
    case ClaimId::Prop1_forward:
    case ClaimId::Example_gIconf:
      return gt_general(ones, ones, LambdaConstant{1.0});
    case ClaimId::Prop1_converse: {
      VectorXd chi = ones;
      chi[0] = -1.0;
      return gt_general(ones, chi, LambdaConstant{1.0});
    }
    case ClaimId::Prop2:
    case ClaimId::Corollary:
    case ClaimId::Example_natural_isometry:
      return natural(rep_index);
    case ClaimId::Prop3_integer_k:
      return gp(1.0, 0);
    case ClaimId::Prop3_hessian:
    case ClaimId::Example_rao:
      return gp_hessian_limit(1.0);
  }
  throw std::invalid_argument("unknown claim");
}

VerificationReport verify(ClaimId claim, const FundamentalRelation& rel,
                          const MetricSpec& spec, const VerifyOptions& opts) {
  Accumulator acc;
  acc.rep.claim_id = claim;
  acc.rep.system = rel.label;
  const std::vector<VectorXd> grid =
      opts.grid.empty() ? default_verification_grid(rel.n) : opts.grid;
  switch (claim) {
    case ClaimId::Lemma1:
      run_lemma1(acc, rel, spec, opts, grid);
      break;
    case ClaimId::Prop1_forward:
      run_prop1_forward(acc, rel, spec, opts, grid);
      break;
    case ClaimId::Prop1_converse:
      require_family(claim, spec, MetricFamily::GTGeneral, "trace");
      run_no_conformal(acc, claim, rel, {spec}, opts, grid,
                       [](const MetricSpec&) { return std::string(); });
      break;
    case ClaimId::Prop2:
      run_prop2(acc, rel, spec, opts, grid);
      break;
    case ClaimId::Corollary:
      run_corollary(acc, rel, opts);
      break;
    case ClaimId::Prop3_integer_k: {
      require_family(claim, spec, MetricFamily::GP, "partial-invariant");
      if (spec.hessian_limit)
        throw HypothesisNotMet(
            "Prop3_integer_k concerns nonzero cross exponents; use "
            "Prop3_hessian for the limit");
      std::vector<MetricSpec> sweep;
      for (int k : {-1, 0, 1}) {
        MetricSpec s = spec;
        s.k = k;
        sweep.push_back(s);
      }
      run_no_conformal(acc, claim, rel, sweep, opts, grid,
                       [](const MetricSpec& s) { return strf("k=%d ", s.k); });
      break;
    }
    case ClaimId::Prop3_hessian:
    case ClaimId::Example_rao:
      run_hessian_ratio(acc, claim, rel, spec, opts, grid);
      break;
    case ClaimId::Example_gIconf:
      run_gIconf(acc, rel, spec, opts, grid);
      break;
    case ClaimId::Example_natural_isometry:
      run_natural_isometry(acc, rel, spec, opts, grid);
      break;
  }
  return acc.finish();
}

VerificationReport verify(ClaimId claim, const FundamentalRelation& rel,
                          const VerifyOptions& opts) {
  return verify(claim, rel,
                canonical_claim_spec(claim, rel.n, opts.rep_index), opts);
}

std::vector<VerificationReport> verify_all(const FundamentalRelation& rel,
                                           const VerifyOptions& opts) {
  std::vector<VerificationReport> out;
  for (ClaimId claim : all_claims()) {
    try {
      out.push_back(verify(claim, rel, opts));
    } catch (const HypothesisNotMet& e) {
      VerificationReport r;
      r.claim_id = claim;
      r.system = rel.label;
      r.points = 0;
      r.max_residual = 0.0;
      r.passed = true;
      r.details = {std::string("not applicable: ") + e.what()};
      out.push_back(r);
    } catch (const std::exception& e) {
      VerificationReport r;
      r.claim_id = claim;
      r.system = rel.label;
      r.points = 0;
      r.max_residual = std::numeric_limits<double>::infinity();
      r.passed = false;
      r.details = {std::string("error: ") + e.what()};
      out.push_back(r);
    }
  }
  return out;
}

std::string report_json(const VerificationReport& r) {
  std::string out = "{\n";
  out += "  \"claim_id\": \"" + to_string(r.claim_id) + "\",\n";
  out += "  \"system\": \"" + json_escape(r.system) + "\",\n";
  out += strf("  \"points\": %d,\n", r.points);
  out += "  \"max_residual\": ";
  out += std::isfinite(r.max_residual) ? strf("%.17g", r.max_residual)
                                       : std::string("null");
  out += ",\n";
  out += std::string("  \"passed\": ") + (r.passed ? "true" : "false") + ",\n";
  out += "  \"details\": [";
  for (std::size_t k = 0; k < r.details.size(); ++k) {
    out += k ? ",\n    " : "\n    ";
    out += "\"" + json_escape(r.details[k]) + "\"";
  }
  out += r.details.empty() ? "]\n" : "\n  ]\n";
  out += "}";
  return out;
}

std::string reports_json(const std::vector<VerificationReport>& reports) {
  std::string out = "[";
  for (std::size_t k = 0; k < reports.size(); ++k) {
    out += k ? ",\n" : "\n";
    out += report_json(reports[k]);
  }
  out += reports.empty() ? "]\n" : "\n]\n";
  return out;
}

}  // namespace gtd
