#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gtd/expr.hpp"
#include "gtd/jet.hpp"

namespace gtd {

// A fundamental relation Phi(E^1..E^n) with a generic jet evaluator, a
// domain predicate, and an optional homogeneity degree beta.  The jet
// evaluator accepts arbitrary coordinate jets, which is what lets the same
// relation be expanded in canonical or representation coordinates.
struct FundamentalRelation {
  int n = 0;
  std::string label;
  std::optional<double> beta;
  std::function<bool(const Eigen::VectorXd&)> domain;
  std::function<double(const Eigen::VectorXd&)> value_eval;
  std::function<Jet4(const std::vector<Jet4>&)> jet_eval;

  // Domain-checked evaluation; throws DomainError outside the domain.
  double value(const Eigen::VectorXd& E) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& E) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& E) const;
  // Full order-4 expansion around E (coordinate seeds as arguments).
  Jet4 jet(const Eigen::VectorXd& E) const;
  // Expansion with arbitrary coordinate jets substituted for E^a.
  Jet4 eval_on(const std::vector<Jet4>& args) const;
};

// Phi = c * prod_a (E^a)^(p_a) on the positive orthant; beta = sum p_a.
FundamentalRelation monomial_relation(double c,
                                      const Eigen::VectorXd& exponents);

// Relation built from expression text over the given variable names
// (one per extensive coordinate, in order).  beta is left unset; use
// detect_homogeneity.
FundamentalRelation relation_from_expression(
    const std::string& source, const std::vector<std::string>& variables);

// Log-log fit of Phi(lambda E) against lambda over random sample pairs.
// Returns beta when the fit residual stays below `tol` everywhere,
// nullopt otherwise.  Requires samples >= 8.
std::optional<double> detect_homogeneity(const FundamentalRelation& rel,
                                         int samples = 16,
                                         double tol = 1e-8);

// --- representation change -------------------------------------------------
//
// The E^(i) representation uses coordinates u = (Phi, E^j : j != i), with
// u axis 0 the old potential and the remaining axes the untouched
// extensive coordinates in ascending order.

// u-axis of canonical coordinate j (j != i); axis 0 is Phi.
int rep_axis_of(int i, int j);
// canonical coordinate of u-axis (axis >= 1).
int rep_coord_of(int i, int axis);
// Image of a canonical point E under u = (Phi(E), E^j).
Eigen::VectorXd rep_point(const FundamentalRelation& rel, int i,
                          const Eigen::VectorXd& E);

// Taylor expansion to order 4 of the implicit function
// E^(i)(Phi, E^j) at the image of E, solved at the jet level (no scalar
// root finding; the expansion point already lies on the graph).
// Throws SingularRepresentation when |I_(i)| <= 1e-12 * scale.
struct RepresentationJet {
  int i = 0;    // swapped coordinate (0-based)
  Jet4 jet;     // expansion of E^(i) in u coordinates

  explicit RepresentationJet(int i_, Jet4 j) : i(i_), jet(std::move(j)) {}
};
RepresentationJet induced_representation_jet(const FundamentalRelation& rel,
                                             int i,
                                             const Eigen::VectorXd& E);

// Closed-form value, first and second partials of the same implicit
// function via the implicit function theorem; an independent route used
// by the finite-difference pipeline and as a cross-check on the jets.
struct ImplicitPartials {
  double value = 0.0;
  Eigen::VectorXd first;    // indexed by u axis
  Eigen::MatrixXd second;
};
ImplicitPartials implicit_partials(const FundamentalRelation& rel, int i,
                                   const Eigen::VectorXd& E);

// Bisection-guarded Newton solve of Phi(E) = phi for E^(i), the other
// coordinates taken from E_template.  Test oracle and preimage solver for
// representation-side fields; throws DomainError if no root is bracketed.
double solve_extensive(const FundamentalRelation& rel, int i, double phi,
                       const Eigen::VectorXd& E_template, double guess);

// Preimage of a representation point: the canonical E with
// rep_point(rel, i, E) == u, found from `guess` for the E^(i) slot.
Eigen::VectorXd rep_to_canonical(const FundamentalRelation& rel, int i,
                                 const Eigen::VectorXd& u, double guess);

}  // namespace gtd
