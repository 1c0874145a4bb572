#pragma once

#include <Eigen/Core>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gtd/relation.hpp"

namespace gtd {

// Point of the (2n+1)-dimensional contact phase space in Darboux
// coordinates, ordered (Phi, E^1..E^n, I_1..I_n).  The same ordering is
// used for flat vectors, one-form components, and Jacobians everywhere.
struct PhasePoint {
  double phi = 0.0;
  Eigen::VectorXd E;
  Eigen::VectorXd I;

  int n() const { return static_cast<int>(E.size()); }
  Eigen::VectorXd to_vector() const;
  static PhasePoint from_vector(const Eigen::VectorXd& z);
};

inline int phase_dim(int n) { return 2 * n + 1; }
inline int phase_idx_phi() { return 0; }
inline int phase_idx_E(int a) { return 1 + a; }
inline int phase_idx_I(int a, int n) { return 1 + n + a; }

// Value of a 1-form at a point, components in the (dPhi, dE^a, dI_a) basis.
struct OneFormValue {
  Eigen::VectorXd comp;

  int n() const { return (static_cast<int>(comp.size()) - 1) / 2; }
};

// Equilibrium embedding E -> (Phi(E), E, dPhi/dE).
PhasePoint lift_to_equilibrium(const FundamentalRelation& rel,
                               const Eigen::VectorXd& E);

// Theta = dPhi - I_a dE^a evaluated at Z.
OneFormValue gibbs_one_form(const PhasePoint& Z);

// Pullback of a phase-space 1-form along the equilibrium embedding of
// `rel` at E; components in the dE^a basis.  Vanishing of the pulled-back
// Gibbs form is the first law.
Eigen::VectorXd embedding_pullback(const FundamentalRelation& rel,
                                   const Eigen::VectorXd& E,
                                   const OneFormValue& theta);

// A smooth map of the phase space with its Jacobian in flat coordinates.
struct PhaseMap {
  std::string name;
  int n = 0;
  std::function<PhasePoint(const PhasePoint&)> apply;
  std::function<Eigen::MatrixXd(const PhasePoint&)> jacobian;
};

// Partial Legendre transformation exchanging (E^i, I_i) for i in `subset`
// (0-based, duplicates rejected).  Applying the map twice flips the signs
// of the transformed pairs and restores Phi.
PhasePoint legendre_transform(const PhasePoint& Z,
                              const std::vector<int>& subset);
PhaseMap legendre_phase_map(int n, const std::vector<int>& subset);
// Total transformation: subset = all of 0..n-1.
PhaseMap total_legendre_map(int n);

// Change to the E^(i) representation: swaps Phi with E^(i) and rescales
// the intensive variables; an involution away from I_(i) = 0.
PhasePoint representation_transform(const PhasePoint& Z, int i);
PhaseMap representation_phase_map(int n, int i);

PhaseMap identity_phase_map(int n);

// Wraps an arbitrary user map with a central-difference Jacobian.
PhaseMap numeric_phase_map(const std::string& name, int n,
                           std::function<PhasePoint(const PhasePoint&)> apply);

// The conformal factor Omega with f*(Theta) = Omega * Theta at Z; throws
// NotAContactomorphism when the pullback is not proportional to Theta
// (componentwise residual above 1e-9 of the pullback's scale).
double contactomorphism_factor(const PhaseMap& map, const PhasePoint& Z);

// --- minimal exterior algebra over constant-coefficient forms -------------

// Alternating form at a point: coefficients on sorted basis index tuples.
struct AltForm {
  int dim = 0;
  int degree = 0;
  std::map<std::vector<int>, double> terms;
};

AltForm alt_from_one_form(const OneFormValue& w);
AltForm wedge(const AltForm& a, const AltForm& b);
// Coefficient of the top-degree basis element (degree == dim).
double top_component(const AltForm& a);

// 1-form field over flat phase coordinates, for exterior derivatives.
using OneFormField = std::function<OneFormValue(const Eigen::VectorXd&)>;

// d(theta) at z0 by central differences of the component functions.
AltForm exterior_derivative(const OneFormField& field,
                            const Eigen::VectorXd& z0);

// Top component of theta ^ (d theta)^n at z0 (n! for the Gibbs form).
double contact_volume_component(const OneFormField& field,
                                const Eigen::VectorXd& z0);

// True iff the Gibbs form satisfies the nonintegrability (contact)
// condition Theta ^ (dTheta)^n != 0 at Z.
bool nonintegrability_check(const PhasePoint& Z);
// Same condition for an arbitrary 1-form field (degenerate forms fail it).
bool nonintegrability_check(const OneFormField& field,
                            const Eigen::VectorXd& z0);

}  // namespace gtd
