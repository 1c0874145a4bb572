#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gtd/jet.hpp"
#include "gtd/metric.hpp"
#include "gtd/relation.hpp"

namespace gtd {

enum class CurvatureBackend { Jets, FiniteDiff };
std::string to_string(CurvatureBackend backend);

struct Tensor3 {
  int n = 0;
  std::vector<double> v;

  explicit Tensor3(int dim = 0) : n(dim), v(dim * dim * dim, 0.0) {}
  double& operator()(int a, int b, int c) { return v[(a * n + b) * n + c]; }
  double operator()(int a, int b, int c) const {
    return v[(a * n + b) * n + c];
  }
};

struct Tensor4 {
  int n = 0;
  std::vector<double> v;

  explicit Tensor4(int dim = 0) : n(dim), v(dim * dim * dim * dim, 0.0) {}
  double& operator()(int a, int b, int c, int d) {
    return v[((a * n + b) * n + c) * n + d];
  }
  double operator()(int a, int b, int c, int d) const {
    return v[((a * n + b) * n + c) * n + d];
  }
};

// A metric as a differentiable field over base coordinates.  The jet path
// must deliver every component valid to order 2; the value path must be an
// independent plain evaluation so finite differencing cross-checks it.
struct MetricField {
  int dim = 0;
  std::vector<std::string> coords;
  std::function<std::vector<Jet4>(const Eigen::VectorXd&)> components_jets;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> components_value;
  std::function<bool(const Eigen::VectorXd&)> domain;
};

// Induced metric of spec/rel as a field over E.
MetricField metric_field(const MetricSpec& spec, const FundamentalRelation& rel);

// Representation-side field over (Phi, E^{j != i}); each evaluation solves
// for the preimage extensive variable starting from guess_hint.
MetricField metric_field_in_representation(const MetricSpec& spec,
                                           const FundamentalRelation& rel,
                                           int i, double guess_hint = 1.0);

struct CurvatureOptions {
  bool cross_check = true;   // evaluate the other backend and compare
  double cross_tol = 1e-4;   // relative scalar disagreement allowed
};

struct CurvatureReport {
  Eigen::VectorXd point;
  Tensor3 gamma;     // Gamma^a_{bc}
  Tensor4 riemann;   // R^a_{bcd}
  Eigen::MatrixXd ricci;
  double scalar = 0.0;
  double det_g = 0.0;
  bool degenerate = false;
  CurvatureBackend backend = CurvatureBackend::Jets;
  // |scalar - other backend's scalar| / max(1, |scalar|), when cross-checked.
  std::optional<double> backend_residual;
};

// Levi-Civita connection coefficients from the jet backend.
Tensor3 christoffel(const MetricField& field, const Eigen::VectorXd& E);

CurvatureReport scalar_curvature(const MetricField& field,
                                 const Eigen::VectorXd& E,
                                 CurvatureBackend backend = CurvatureBackend::Jets,
                                 const CurvatureOptions& options = {});

struct ScanEntry {
  Eigen::VectorXd point;
  double det_g = 0.0;
  bool degenerate = false;
  std::optional<CurvatureReport> report;
  std::string error;  // empty on success
};

// Per-point reports; failures are recorded, never fatal to the scan.
std::vector<ScanEntry> curvature_scan(const MetricField& field,
                                      const std::vector<Eigen::VectorXd>& grid,
                                      CurvatureBackend backend = CurvatureBackend::Jets,
                                      const CurvatureOptions& options = {});

}  // namespace gtd
