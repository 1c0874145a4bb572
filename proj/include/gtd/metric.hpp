#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gtd/contact.hpp"
#include "gtd/expr.hpp"
#include "gtd/jet.hpp"
#include "gtd/relation.hpp"

namespace gtd {

enum class MetricFamily { GTGeneral, GP, Natural };

// How the coupling Lambda is supplied.  NaturalFormula derives it from the
// phase point so the trace-family metric reproduces the invariant one.
struct LambdaConstant {
  double value = 1.0;
};
struct LambdaPerComponent {
  Eigen::VectorXd values;
};
struct LambdaNaturalFormula {};
struct LambdaExpression {
  // Variables: Phi, E1..En, I1..In.
  ExprAst ast;
};
using LambdaMode = std::variant<LambdaConstant, LambdaPerComponent,
                                LambdaNaturalFormula, LambdaExpression>;

struct MetricSpec {
  MetricFamily family = MetricFamily::GTGeneral;
  Eigen::VectorXd xi;   // diagonal entries, length n
  Eigen::VectorXd chi;  // diagonal entries, length n
  LambdaMode lambda = LambdaConstant{1.0};
  int k = 0;                   // GP cross-term exponent is 2k+1
  bool hessian_limit = false;  // GP with exponent 0; breaks Legendre invariance
  int rep_index = 0;           // excluded index of the invariant-family sum
};

MetricSpec gt_general(const Eigen::VectorXd& xi, const Eigen::VectorXd& chi,
                      LambdaMode lambda);
MetricSpec gp(double lambda, int k);
// The exponent-zero variant: induced metric is Lambda times the Hessian.
MetricSpec gp_hessian_limit(double lambda);
MetricSpec natural(int rep_index);

struct MetricSample {
  std::vector<std::string> basis;
  Eigen::MatrixXd g;
  Eigen::VectorXd point;
  bool degenerate = false;
};

// |det g| <= 1e-10 * (max |g_ab|)^n, or an identically zero matrix.
bool is_degenerate(const Eigen::MatrixXd& g);

// Coupling that makes the trace family reproduce the invariant metric:
// [sum_{j != i} 1/(E^j I_j)] / [sum_a E^a I_a].
double natural_lambda(const PhasePoint& Z, int i);

// Full phase-space metric Theta(x)Theta + family cross term at Z,
// dimension 2n+1, basis (dPhi, dE^a, dI_a).
MetricSample phase_metric(const MetricSpec& spec, const PhasePoint& Z);

// Metric induced on the equilibrium manifold, basis dE^a.
MetricSample induced_metric(const MetricSpec& spec,
                            const FundamentalRelation& rel,
                            const Eigen::VectorXd& E);

// Induced metric of the E^(i) representation at (Phi(E), E^{j != i}),
// basis (dPhi, dE^{j != i}); axis 0 inherits the slot-i couplings.
MetricSample induced_metric_in_representation(const MetricSpec& spec,
                                              const FundamentalRelation& rel,
                                              int i, const Eigen::VectorXd& E);

// Congruence transform of a representation-side sample back to the dE^a
// basis through the Jacobian of E -> (Phi(E), E^{j != i}).
MetricSample pullback_to_canonical(const MetricSample& m,
                                   const FundamentalRelation& rel, int i,
                                   const Eigen::VectorXd& E);

// Least-squares f with g1 = f * g2 (components of g2 above
// 1e-12 * max|g2| weigh in); nullopt when any component misses
// tol * max|g1|.
std::optional<double> conformal_check(const MetricSample& g1,
                                      const MetricSample& g2, double tol);

// Factor relating the E^(i)-representation metric to the canonical one for
// a homogeneous relation and a trace-family spec with equal Lambda*chi.
double predicted_conformal_factor(const FundamentalRelation& rel,
                                  const MetricSpec& spec, int i,
                                  const Eigen::VectorXd& E);

// Component jets of the induced metric around E (row-major n*n, valid to
// order 2); feeds curvature.
std::vector<Jet4> induced_metric_jets(const MetricSpec& spec,
                                      const FundamentalRelation& rel,
                                      const Eigen::VectorXd& E);

// Same for the representation-side metric, expanded around
// (Phi(E), E^{j != i}).
std::vector<Jet4> representation_metric_jets(const MetricSpec& spec,
                                             const FundamentalRelation& rel,
                                             int i, const Eigen::VectorXd& E);

}  // namespace gtd
