#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "gtd/metric.hpp"
#include "gtd/relation.hpp"

namespace gtd {

// One numbered result each; verified numerically at sampled points.
enum class ClaimId {
  Lemma1,
  Prop1_forward,
  Prop1_converse,
  Prop2,
  Corollary,
  Prop3_integer_k,
  Prop3_hessian,
  Example_gIconf,
  Example_natural_isometry,
  Example_rao,
};

// Stable names, identical to the JSON claim_id field.
std::string to_string(ClaimId id);
std::optional<ClaimId> claim_from_string(const std::string& name);
const std::vector<ClaimId>& all_claims();

// max_residual is normalized: the max over sub-checks of raw residual
// divided by that sub-check's tolerance, so passed == (max_residual <= 1)
// uniformly across claims.  details holds one record per evaluated point
// plus notes for skipped points and not-applicable sub-checks.
struct VerificationReport {
  ClaimId claim_id = ClaimId::Lemma1;
  std::string system;
  int points = 0;
  double max_residual = 0.0;
  bool passed = false;
  std::vector<std::string> details;
};

struct VerifyOptions {
  // Evaluation points in E-space; empty selects the default grid below.
  std::vector<Eigen::VectorXd> grid;
  // Representation index for claims that compare representations.
  int rep_index = 0;
  // Seed for the random phase points of phase-space claims.
  unsigned seed = 12345;
  // Negative-control hooks.  A positive tolerance_override replaces every
  // sub-tolerance of the claim; factor_perturbation scales predicted
  // conformal factors and ratios by (1 + p).
  double tolerance_override = 0.0;
  double factor_perturbation = 0.0;
};

// 5 log-uniform samples of (0.5, 2) per axis, n axes.
std::vector<Eigen::VectorXd> default_verification_grid(int n);

// Checks one claim on the given system and metric.  Claims conditioned on
// homogeneity throw HypothesisNotMet on non-homogeneous relations, as do
// metric families incompatible with the claim.  Points where the
// representation is singular are skipped and recorded in details.
// Prop3_integer_k always sweeps k over {-1, 0, 1} with the given Lambda.
VerificationReport verify(ClaimId claim, const FundamentalRelation& rel,
                          const MetricSpec& spec,
                          const VerifyOptions& opts = {});

// Same with the claim's canonical metric spec.
VerificationReport verify(ClaimId claim, const FundamentalRelation& rel,
                          const VerifyOptions& opts = {});

// Every claim with its canonical spec.  Hypothesis mismatches become
// not-applicable reports (passed, zero points, note in details) instead of
// exceptions; other per-claim errors become failed reports.
std::vector<VerificationReport> verify_all(const FundamentalRelation& rel,
                                           const VerifyOptions& opts = {});

// The canonical metric spec a claim is certified with.
MetricSpec canonical_claim_spec(ClaimId claim, int n, int rep_index);

// JSON with fields exactly (claim_id, system, points, max_residual,
// passed, details); floats at 17 significant digits, non-finite residuals
// as null.  reports_json emits a JSON array.
std::string report_json(const VerificationReport& report);
std::string reports_json(const std::vector<VerificationReport>& reports);

}  // namespace gtd
