#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gtd/contact.hpp"
#include "gtd/curvature.hpp"
#include "gtd/errors.hpp"
#include "gtd/grid.hpp"
#include "gtd/metric.hpp"
#include "gtd/relation.hpp"
#include "gtd/verify.hpp"

using gtd::ConfigError;
using json = nlohmann::ordered_json;
using Eigen::VectorXd;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kConfigError = 2;
constexpr int kHypothesisNotMet = 3;
constexpr int kNumericalError = 4;

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// run configuration

struct AxisConfig {
  double min = 0.5;
  double max = 2.0;
  int count = 5;
  bool log = true;
};

struct RunConfig {
  // system
  std::string system_kind;  // "monomial" | "expression"
  double coefficient = 1.0;
  std::vector<double> exponents;
  std::string expr_text;
  std::vector<std::string> variables;
  // metric (optional for verify)
  bool metric_given = false;
  std::string family;  // "gt-general" | "gp" | "natural"
  std::vector<double> xi, chi;  // empty selects ones
  json lambda = 1.0;
  int k = 0;
  bool hessian_limit = false;
  int metric_rep = 1;  // 1-based
  // grid (empty selects the default)
  std::vector<AxisConfig> axes;
  // command options
  int representation = 1;  // 1-based
  bool representation_given = false;
  std::string out_path;
  std::string format;  // empty selects the command default
  std::vector<std::string> claims;  // empty means all
  std::string backend = "jets";
  double tolerance_override = 0.0;
  double factor_perturbation = 0.0;
};

[[noreturn]] void config_fail(const std::string& field,
                              const std::string& what) {
  throw ConfigError("config error at " + field + ": " + what);
}

const json& need(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) config_fail(path + "." + key, "missing");
  return obj.at(key);
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) config_fail(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) config_fail(path, "expected an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) config_fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> as_number_list(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) config_fail(path, "expected a nonempty array");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k)
    out.push_back(as_number(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

void parse_system(const json& j, RunConfig& c) {
  if (!j.is_object()) config_fail("system", "expected an object");
  const std::string type = as_string(need(j, "type", "system"), "system.type");
  if (type == "monomial") {
    c.system_kind = "monomial";
    c.coefficient =
        j.contains("coefficient")
            ? as_number(j.at("coefficient"), "system.coefficient")
            : 1.0;
    c.exponents =
        as_number_list(need(j, "exponents", "system"), "system.exponents");
  } else if (type == "expression") {
    c.system_kind = "expression";
    c.expr_text = as_string(need(j, "text", "system"), "system.text");
    const json& vars = need(j, "variables", "system");
    if (!vars.is_array() || vars.empty())
      config_fail("system.variables", "expected a nonempty array");
    c.variables.clear();
    for (std::size_t k = 0; k < vars.size(); ++k)
      c.variables.push_back(
          as_string(vars[k], "system.variables[" + std::to_string(k) + "]"));
  } else {
    config_fail("system.type", "unknown type '" + type +
                                   "' (monomial | expression)");
  }
}

void parse_metric(const json& j, RunConfig& c) {
  if (!j.is_object()) config_fail("metric", "expected an object");
  c.metric_given = true;
  c.family = as_string(need(j, "family", "metric"), "metric.family");
  if (c.family != "gt-general" && c.family != "gp" && c.family != "natural")
    config_fail("metric.family", "unknown family '" + c.family +
                                     "' (gt-general | gp | natural)");
  if (j.contains("xi")) c.xi = as_number_list(j.at("xi"), "metric.xi");
  if (j.contains("chi")) c.chi = as_number_list(j.at("chi"), "metric.chi");
  if (j.contains("lambda")) {
    const json& l = j.at("lambda");
    const bool ok = l.is_number() || (l.is_array() && !l.empty()) ||
                    (l.is_object() &&
                     (l.contains("expression") ||
                      (l.contains("formula") && l.at("formula") == "natural")));
    if (!ok)
      config_fail("metric.lambda",
                  "expected a number, an array, {\"expression\": text}, or "
                  "{\"formula\": \"natural\"}");
    c.lambda = l;
  }
  if (j.contains("k")) c.k = as_int(j.at("k"), "metric.k");
  if (j.contains("hessian_limit")) {
    if (!j.at("hessian_limit").is_boolean())
      config_fail("metric.hessian_limit", "expected a boolean");
    c.hessian_limit = j.at("hessian_limit").get<bool>();
  }
  if (j.contains("rep_index"))
    c.metric_rep = as_int(j.at("rep_index"), "metric.rep_index");
}

void parse_grid(const json& j, RunConfig& c) {
  if (!j.is_array() || j.empty())
    config_fail("grid", "expected a nonempty array of axis objects");
  c.axes.clear();
  for (std::size_t a = 0; a < j.size(); ++a) {
    const std::string path = "grid[" + std::to_string(a) + "]";
    const json& ax = j[a];
    if (!ax.is_object()) config_fail(path, "expected an axis object");
    AxisConfig axis;
    axis.min = as_number(need(ax, "min", path), path + ".min");
    axis.max = as_number(need(ax, "max", path), path + ".max");
    axis.count = as_int(need(ax, "count", path), path + ".count");
    if (ax.contains("spacing")) {
      const std::string s = as_string(ax.at("spacing"), path + ".spacing");
      if (s != "linear" && s != "log")
        config_fail(path + ".spacing", "expected linear | log");
      axis.log = s == "log";
    }
    if (axis.count < 2)
      config_fail(path + ".count", "need at least 2 points per axis");
    if (!(axis.min < axis.max))
      config_fail(path + ".min", "min must be strictly below max");
    if (axis.log && axis.min <= 0.0)
      config_fail(path + ".min", "log spacing needs positive endpoints");
    c.axes.push_back(axis);
  }
}

RunConfig parse_config(const json& cfg) {
  if (!cfg.is_object()) config_fail("(root)", "expected a JSON object");
  for (const auto& item : cfg.items()) {
    const std::string& key = item.key();
    if (key != "system" && key != "metric" && key != "grid" &&
        key != "representation" && key != "output" && key != "claims" &&
        key != "backend" && key != "tolerance_override" &&
        key != "factor_perturbation")
      config_fail(key, "unknown field");
  }
  RunConfig c;
  parse_system(need(cfg, "system", "(root)"), c);
  if (cfg.contains("metric")) parse_metric(cfg.at("metric"), c);
  if (cfg.contains("grid")) parse_grid(cfg.at("grid"), c);
  if (cfg.contains("representation")) {
    c.representation = as_int(cfg.at("representation"), "representation");
    c.representation_given = true;
  }
  if (cfg.contains("output")) {
    const json& out = cfg.at("output");
    if (!out.is_object()) config_fail("output", "expected an object");
    if (out.contains("path"))
      c.out_path = as_string(out.at("path"), "output.path");
    if (out.contains("format")) {
      c.format = as_string(out.at("format"), "output.format");
      if (c.format != "csv" && c.format != "json")
        config_fail("output.format", "expected csv | json");
    }
  }
  if (cfg.contains("claims")) {
    const json& cl = cfg.at("claims");
    if (cl.is_string() && cl == "all") {
      c.claims.clear();
    } else if (cl.is_array()) {
      for (std::size_t k = 0; k < cl.size(); ++k)
        c.claims.push_back(
            as_string(cl[k], "claims[" + std::to_string(k) + "]"));
    } else {
      config_fail("claims", "expected \"all\" or an array of claim names");
    }
  }
  if (cfg.contains("backend")) {
    c.backend = as_string(cfg.at("backend"), "backend");
    if (c.backend != "jets" && c.backend != "finite-diff")
      config_fail("backend", "expected jets | finite-diff");
  }
  if (cfg.contains("tolerance_override"))
    c.tolerance_override =
        as_number(cfg.at("tolerance_override"), "tolerance_override");
  if (cfg.contains("factor_perturbation"))
    c.factor_perturbation =
        as_number(cfg.at("factor_perturbation"), "factor_perturbation");
  return c;
}

// Canonical form with defaults materialized; parse(serialize(parse(x)))
// reproduces serialize(parse(x)) byte for byte.
json serialize_config(const RunConfig& c, int n) {
  json cfg;
  json sys;
  if (c.system_kind == "monomial") {
    sys["type"] = "monomial";
    sys["coefficient"] = c.coefficient;
    sys["exponents"] = c.exponents;
  } else {
    sys["type"] = "expression";
    sys["text"] = c.expr_text;
    sys["variables"] = c.variables;
  }
  cfg["system"] = sys;
  if (c.metric_given) {
    json m;
    m["family"] = c.family;
    m["xi"] = c.xi.empty() ? std::vector<double>(n, 1.0) : c.xi;
    m["chi"] = c.chi.empty() ? std::vector<double>(n, 1.0) : c.chi;
    m["lambda"] = c.lambda;
    m["k"] = c.k;
    m["hessian_limit"] = c.hessian_limit;
    m["rep_index"] = c.metric_rep;
    cfg["metric"] = m;
  }
  json axes = json::array();
  if (c.axes.empty()) {
    for (int a = 0; a < n; ++a)
      axes.push_back({{"min", 0.5}, {"max", 2.0}, {"count", 5},
                      {"spacing", "log"}});
  } else {
    for (const AxisConfig& ax : c.axes)
      axes.push_back({{"min", ax.min}, {"max", ax.max}, {"count", ax.count},
                      {"spacing", ax.log ? "log" : "linear"}});
  }
  cfg["grid"] = axes;
  cfg["representation"] = c.representation;
  if (!c.out_path.empty() || !c.format.empty()) {
    json out = json::object();
    if (!c.out_path.empty()) out["path"] = c.out_path;
    if (!c.format.empty()) out["format"] = c.format;
    cfg["output"] = out;
  }
  if (c.claims.empty())
    cfg["claims"] = "all";
  else
    cfg["claims"] = c.claims;
  cfg["backend"] = c.backend;
  cfg["tolerance_override"] = c.tolerance_override;
  cfg["factor_perturbation"] = c.factor_perturbation;
  return cfg;
}

// ---------------------------------------------------------------------------
// config -> library objects

gtd::FundamentalRelation build_relation(const RunConfig& c) {
  if (c.system_kind == "monomial") {
    Eigen::Map<const VectorXd> p(c.exponents.data(),
                                 static_cast<long>(c.exponents.size()));
    return gtd::monomial_relation(c.coefficient, p);
  }
  return gtd::relation_from_expression(c.expr_text, c.variables);
}

VectorXd ones_or(const std::vector<double>& v, int n, const char* field) {
  if (v.empty()) return VectorXd::Ones(n);
  if (static_cast<int>(v.size()) != n)
    config_fail(field, "expected " + std::to_string(n) + " entries");
  return Eigen::Map<const VectorXd>(v.data(), n);
}

gtd::LambdaMode build_lambda(const json& l, int n) {
  if (l.is_number()) return gtd::LambdaConstant{l.get<double>()};
  if (l.is_array()) {
    const std::vector<double> v = as_number_list(l, "metric.lambda");
    if (static_cast<int>(v.size()) != n)
      config_fail("metric.lambda", "expected " + std::to_string(n) + " entries");
    return gtd::LambdaPerComponent{Eigen::Map<const VectorXd>(v.data(), n)};
  }
  if (l.contains("formula")) return gtd::LambdaNaturalFormula{};
  const std::string text = as_string(l.at("expression"), "metric.lambda.expression");
  std::vector<std::string> vars = {"Phi"};
  for (int a = 1; a <= n; ++a) vars.push_back("E" + std::to_string(a));
  for (int a = 1; a <= n; ++a) vars.push_back("I" + std::to_string(a));
  try {
    return gtd::LambdaExpression{gtd::parse_expression(text, vars)};
  } catch (const gtd::Error& e) {
    config_fail("metric.lambda.expression", e.what());
  }
}

int to_zero_based(int rep, int n, const char* field) {
  if (rep < 1 || rep > n)
    config_fail(field, "index " + std::to_string(rep) +
                           " out of range for n=" + std::to_string(n) +
                           " (indices are 1-based)");
  return rep - 1;
}

gtd::MetricSpec build_metric(const RunConfig& c, int n) {
  if (!c.metric_given) config_fail("metric", "required for this command");
  if (c.family == "gt-general") {
    gtd::MetricSpec spec = gtd::gt_general(
        ones_or(c.xi, n, "metric.xi"), ones_or(c.chi, n, "metric.chi"),
        build_lambda(c.lambda, n));
    return spec;
  }
  if (c.family == "gp") {
    if (!c.lambda.is_number())
      config_fail("metric.lambda", "the gp family takes a constant lambda");
    if (c.hessian_limit) return gtd::gp_hessian_limit(c.lambda.get<double>());
    return gtd::gp(c.lambda.get<double>(), c.k);
  }
  return gtd::natural(to_zero_based(c.metric_rep, n, "metric.rep_index"));
}

std::vector<VectorXd> build_grid(const RunConfig& c, int n) {
  std::vector<gtd::GridAxis> axes;
  if (c.axes.empty()) {
    axes.assign(static_cast<std::size_t>(n), gtd::GridAxis{0.5, 2.0, 5, true});
  } else {
    if (static_cast<int>(c.axes.size()) != n)
      config_fail("grid", "expected " + std::to_string(n) + " axes");
    for (const AxisConfig& ax : c.axes)
      axes.push_back(gtd::GridAxis{ax.min, ax.max, ax.count, ax.log});
  }
  return gtd::make_grid(axes);
}

gtd::CurvatureBackend build_backend(const RunConfig& c) {
  return c.backend == "jets" ? gtd::CurvatureBackend::Jets
                             : gtd::CurvatureBackend::FiniteDiff;
}

// ---------------------------------------------------------------------------
// output

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  return out + "\"";
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) out += ",";
    out += csv_escape(fields[k]);
  }
  return out + "\r\n";
}

// One report row; `value` empty means missing (empty CSV field, JSON null).
struct Cell {
  std::string name;
  std::string value;
  bool quote = false;  // JSON string vs bare literal
};

std::string emit_table(const std::vector<std::vector<Cell>>& rows,
                       const std::vector<std::string>& header,
                       const std::string& format) {
  if (format == "csv") {
    std::string out = csv_line(header);
    for (const auto& row : rows) {
      std::vector<std::string> fields;
      for (const Cell& cell : row) fields.push_back(cell.value);
      out += csv_line(fields);
    }
    return out;
  }
  std::string out = "[";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out += r ? ",\n" : "\n";
    out += "{";
    for (std::size_t k = 0; k < rows[r].size(); ++k) {
      const Cell& cell = rows[r][k];
      out += k ? ", " : "";
      out += "\"" + cell.name + "\": ";
      if (cell.value.empty())
        out += "null";
      else if (cell.quote)
        out += "\"" + cell.value + "\"";
      else
        out += cell.value;
    }
    out += "}";
  }
  out += rows.empty() ? "]\n" : "\n]\n";
  return out;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) config_fail("output.path", "cannot open '" + path + "' for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) config_fail("output.path", "short write to '" + path + "'");
}

// ---------------------------------------------------------------------------
// commands

// Scans report per-row; only non-degeneracy failures make the run fail.
int cmd_curvature(const RunConfig& c) {
  const gtd::FundamentalRelation rel = build_relation(c);
  const gtd::MetricSpec spec = build_metric(c, rel.n);
  const std::vector<VectorXd> grid = build_grid(c, rel.n);
  gtd::MetricField field;
  std::vector<VectorXd> points;
  if (c.representation_given) {
    const int i = to_zero_based(c.representation, rel.n, "representation");
    field = gtd::metric_field_in_representation(spec, rel, i);
    for (const VectorXd& E : grid) points.push_back(gtd::rep_point(rel, i, E));
  } else {
    field = gtd::metric_field(spec, rel);
    points = grid;
  }
  // Finite differencing of steep power-law components costs a few 1e-4 of
  // scalar accuracy, so the scan cross-check is looser than the library
  // default; residuals still land in the report.
  gtd::CurvatureOptions options;
  options.cross_tol = 1e-3;
  const auto entries =
      gtd::curvature_scan(field, points, build_backend(c), options);

  std::vector<std::string> header = field.coords;
  header.insert(header.end(),
                {"det_g", "scalar_R", "degenerate", "backend_residual"});
  std::vector<std::vector<Cell>> rows;
  bool failed = false;
  for (const auto& e : entries) {
    std::vector<Cell> row;
    for (int a = 0; a < field.dim; ++a)
      row.push_back({field.coords[a], fmt17(e.point[a]), false});
    row.push_back({"det_g", fmt17(e.det_g), false});
    row.push_back({"scalar_R",
                   e.report ? fmt17(e.report->scalar) : std::string(), false});
    row.push_back({"degenerate", e.degenerate ? "true" : "false", false});
    row.push_back({"backend_residual",
                   e.report && e.report->backend_residual
                       ? fmt17(*e.report->backend_residual)
                       : std::string(),
                   false});
    rows.push_back(std::move(row));
    if (!e.error.empty() && !e.degenerate) {
      failed = true;
      std::string at;
      for (int a = 0; a < field.dim; ++a)
        at += (a ? "," : "(") + std::to_string(e.point[a]);
      std::fprintf(stderr, "curvature: point %s): %s\n", at.c_str(),
                   e.error.c_str());
    }
  }
  write_output(c.out_path,
               emit_table(rows, header, c.format.empty() ? "csv" : c.format));
  return failed ? kNumericalError : kOk;
}

int cmd_compare(const RunConfig& c) {
  const gtd::FundamentalRelation rel = build_relation(c);
  const gtd::MetricSpec spec = build_metric(c, rel.n);
  const int i = to_zero_based(c.representation, rel.n, "representation");
  const std::vector<VectorXd> grid = build_grid(c, rel.n);
  const gtd::MetricField canonical = gtd::metric_field(spec, rel);
  const gtd::MetricField rep_side =
      gtd::metric_field_in_representation(spec, rel, i);
  gtd::CurvatureOptions quiet;
  quiet.cross_check = false;
  const gtd::CurvatureBackend backend = build_backend(c);

  std::vector<std::string> header;
  for (int a = 1; a <= rel.n; ++a) header.push_back("E" + std::to_string(a));
  header.insert(header.end(),
                {"factor_found", "factor_predicted", "scalar_R_canonical",
                 "scalar_R_representation", "scalar_rel_diff"});
  std::vector<std::vector<Cell>> rows;
  bool failed = false;
  for (const VectorXd& E : grid) {
    std::vector<Cell> row;
    for (int a = 0; a < rel.n; ++a)
      row.push_back({header[a], fmt17(E[a]), false});
    std::string found, predicted, sc_s, sr_s, diff_s;
    try {
      const gtd::MetricSample g = gtd::induced_metric(spec, rel, E);
      const gtd::MetricSample pulled = gtd::pullback_to_canonical(
          gtd::induced_metric_in_representation(spec, rel, i, E), rel, i, E);
      if (const auto obs = gtd::conformal_check(pulled, g, 1e-6))
        found = fmt17(*obs);
      if (spec.family == gtd::MetricFamily::Natural) {
        predicted = fmt17(1.0);
      } else if (spec.family == gtd::MetricFamily::GTGeneral) {
        try {
          predicted = fmt17(gtd::predicted_conformal_factor(rel, spec, i, E));
        } catch (const gtd::HypothesisNotMet&) {
        }
      } else if (spec.hessian_limit) {
        predicted = fmt17(-1.0 / gtd::lift_to_equilibrium(rel, E).I[i]);
      }
      if (!g.degenerate) {
        const double sc =
            gtd::scalar_curvature(canonical, E, backend, quiet).scalar;
        const double sr = gtd::scalar_curvature(
                              rep_side, gtd::rep_point(rel, i, E), backend,
                              quiet)
                              .scalar;
        sc_s = fmt17(sc);
        sr_s = fmt17(sr);
        diff_s = fmt17(std::abs(sc - sr) / std::max(1.0, std::abs(sc)));
      }
    } catch (const gtd::SingularRepresentation& e) {
      std::fprintf(stderr, "compare-representations: skipped a point: %s\n",
                   e.what());
    } catch (const gtd::DegenerateMetric&) {
      // curvature columns stay empty
    } catch (const gtd::Error& e) {
      failed = true;
      std::fprintf(stderr, "compare-representations: %s\n", e.what());
    }
    row.push_back({"factor_found", found, false});
    row.push_back({"factor_predicted", predicted, false});
    row.push_back({"scalar_R_canonical", sc_s, false});
    row.push_back({"scalar_R_representation", sr_s, false});
    row.push_back({"scalar_rel_diff", diff_s, false});
    rows.push_back(std::move(row));
  }
  write_output(c.out_path,
               emit_table(rows, header, c.format.empty() ? "csv" : c.format));
  return failed ? kNumericalError : kOk;
}

int cmd_verify(const RunConfig& c) {
  if (!c.format.empty() && c.format != "json")
    config_fail("output.format", "verify emits JSON reports");
  const gtd::FundamentalRelation rel = build_relation(c);
  gtd::VerifyOptions opts;
  if (!c.axes.empty()) opts.grid = build_grid(c, rel.n);
  opts.rep_index = to_zero_based(c.representation, rel.n, "representation");
  opts.tolerance_override = c.tolerance_override;
  opts.factor_perturbation = c.factor_perturbation;

  std::vector<gtd::VerificationReport> reports;
  if (c.claims.empty()) {
    if (c.metric_given)
      config_fail("metric", "cannot combine a fixed metric with claims=all; "
                            "pick explicit claims");
    reports = gtd::verify_all(rel, opts);
  } else {
    for (const std::string& name : c.claims) {
      const auto claim = gtd::claim_from_string(name);
      if (!claim) config_fail("claims", "unknown claim '" + name + "'");
      reports.push_back(c.metric_given
                            ? gtd::verify(*claim, rel, build_metric(c, rel.n),
                                          opts)
                            : gtd::verify(*claim, rel, opts));
    }
  }
  write_output(c.out_path, gtd::reports_json(reports));
  for (const auto& r : reports)
    if (!r.passed) return kVerifyFailed;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Thermodynamic metric toolkit: curvature scans, representation "
      "comparisons, and claim verification over contact phase space"};
  app.require_subcommand(1);

  std::string config_path, system_json, metric_json, grid_json;
  std::string out_path, format, claims_csv, backend;
  int rep = 0;
  double tolerance = 0.0, perturb = 0.0;
  bool dump_config = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--system", system_json, "system JSON (overrides config)");
    cmd->add_option("--metric", metric_json, "metric JSON (overrides config)");
    cmd->add_option("--grid", grid_json, "grid JSON (overrides config)");
    cmd->add_option("--rep", rep, "representation index (1-based)");
    cmd->add_option("--out", out_path, "output path (default stdout)");
    cmd->add_option("--format", format, "csv | json");
    cmd->add_option("--claims", claims_csv, "all or comma-separated claims");
    cmd->add_option("--backend", backend, "jets | finite-diff");
    cmd->add_option("--tolerance", tolerance,
                    "override claim tolerances (verify)");
    cmd->add_option("--perturb-factor", perturb,
                    "perturb predicted factors by this fraction (verify)");
    cmd->add_flag("--dump-config", dump_config,
                  "print the canonical config and exit");
  };
  CLI::App* curvature = app.add_subcommand("curvature", "scan scalar curvature");
  CLI::App* compare = app.add_subcommand("compare-representations",
                                         "conformal factors and curvature "
                                         "across a representation change");
  CLI::App* verify_cmd = app.add_subcommand("verify", "check named claims");
  add_common(curvature);
  add_common(compare);
  add_common(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    json cfg = json::object();
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) config_fail("config", "cannot read '" + config_path + "'");
      try {
        cfg = json::parse(f);
      } catch (const nlohmann::json::parse_error& e) {
        config_fail("config", e.what());
      }
    }
    auto overlay = [&](const char* key, const std::string& text) {
      if (text.empty()) return;
      try {
        cfg[key] = json::parse(text);
      } catch (const nlohmann::json::parse_error& e) {
        config_fail(key, e.what());
      }
    };
    overlay("system", system_json);
    overlay("metric", metric_json);
    overlay("grid", grid_json);
    if (rep > 0) cfg["representation"] = rep;
    if (!out_path.empty()) cfg["output"]["path"] = out_path;
    if (!format.empty()) cfg["output"]["format"] = format;
    if (!claims_csv.empty()) {
      if (claims_csv == "all") {
        cfg["claims"] = "all";
      } else {
        json list = json::array();
        std::size_t start = 0;
        while (start <= claims_csv.size()) {
          const std::size_t comma = claims_csv.find(',', start);
          const std::size_t end =
              comma == std::string::npos ? claims_csv.size() : comma;
          if (end > start) list.push_back(claims_csv.substr(start, end - start));
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
        cfg["claims"] = list;
      }
    }
    if (!backend.empty()) cfg["backend"] = backend;
    if (tolerance > 0.0) cfg["tolerance_override"] = tolerance;
    if (perturb != 0.0) cfg["factor_perturbation"] = perturb;

    const RunConfig run = parse_config(cfg);
    if (dump_config) {
      const gtd::FundamentalRelation rel = build_relation(run);
      std::cout << serialize_config(run, rel.n).dump(2) << "\n";
      return kOk;
    }
    if (app.got_subcommand(curvature)) return cmd_curvature(run);
    if (app.got_subcommand(compare)) return cmd_compare(run);
    return cmd_verify(run);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kConfigError;
  } catch (const gtd::HypothesisNotMet& e) {
    std::fprintf(stderr, "hypothesis not met: %s\n", e.what());
    return kHypothesisNotMet;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumericalError;
  }
}
