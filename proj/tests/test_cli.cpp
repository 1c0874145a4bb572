#include <doctest.h>
#include <json.hpp>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

// Runs the CLI through the shell; stderr is dropped.
RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(GTDCLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  REQUIRE(WIFEXITED(status));
  r.exit_code = WEXITSTATUS(status);
  return r;
}

std::vector<std::string> crlf_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find("\r\n", start);
    if (pos == std::string::npos) break;
    lines.push_back(text.substr(start, pos - start));
    start = pos + 2;
  }
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) fields.push_back(f);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

const char* kMonomial34 = "'{\"type\":\"monomial\",\"exponents\":[0.75,0.75]}'";
const char* kMonomial12 = "'{\"type\":\"monomial\",\"exponents\":[0.5,0.5]}'";

}  // namespace

TEST_CASE("curvature scan emits one row per grid point") {
  const auto r = run_cli(std::string("curvature --system ") + kMonomial34 +
                         " --metric '{\"family\":\"natural\"}'");
  CHECK(r.exit_code == 0);
  const auto lines = crlf_lines(r.out);
  REQUIRE(lines.size() == 26);
  CHECK(lines[0] == "E1,E2,det_g,scalar_R,degenerate,backend_residual");
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto fields = split_fields(lines[k]);
    REQUIRE(fields.size() == 6);
    CHECK(fields[4] == "false");
    CHECK_FALSE(fields[3].empty());
  }
}

TEST_CASE("degenerate systems scan cleanly with empty scalar columns") {
  const auto r = run_cli(std::string("curvature --system ") + kMonomial12 +
                         " --metric '{\"family\":\"gt-general\"}'");
  CHECK(r.exit_code == 0);
  const auto lines = crlf_lines(r.out);
  REQUIRE(lines.size() == 26);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto fields = split_fields(lines[k]);
    REQUIRE(fields.size() == 6);
    CHECK(fields[3].empty());
    CHECK(fields[4] == "true");
  }
}

TEST_CASE("grid violations exit with the config code") {
  const auto r = run_cli(
      std::string("curvature --system ") + kMonomial34 +
      " --metric '{\"family\":\"natural\"}'"
      " --grid '[{\"min\":0.5,\"max\":2,\"count\":1},"
      "{\"min\":0.5,\"max\":2,\"count\":5}]'");
  CHECK(r.exit_code == 2);
  CHECK(r.out.empty());
}

TEST_CASE("verify rejects csv output with the config code") {
  const auto r = run_cli(std::string("verify --system ") + kMonomial34 +
                         " --format csv");
  CHECK(r.exit_code == 2);
}

TEST_CASE("unsatisfied hypotheses exit with their own code") {
  const auto r = run_cli(
      "verify --system '{\"type\":\"expression\",\"text\":\"E1^2 + E2\","
      "\"variables\":[\"E1\",\"E2\"]}' --claims Prop2");
  CHECK(r.exit_code == 3);
}

TEST_CASE("tolerances below the noise floor fail verification") {
  const auto r = run_cli(std::string("verify --system ") + kMonomial34 +
                         " --claims Prop1_forward --tolerance 1e-20");
  CHECK(r.exit_code == 1);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.size() == 1);
  CHECK(j[0].at("passed") == false);
}

TEST_CASE("the full claim suite passes end to end") {
  const auto r = run_cli(std::string("verify --system ") + kMonomial34);
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.size() == 10);
  for (const auto& report : j) {
    CHECK(report.at("passed") == true);
    CHECK(report.at("system") == "monomial c=1 p=(0.75,0.75)");
  }
}

TEST_CASE("representation comparison reproduces the unit-point factor") {
  const auto r = run_cli(std::string("compare-representations --system ") +
                         kMonomial34 + " --metric '{\"family\":\"gt-general\"}'");
  CHECK(r.exit_code == 0);
  const auto lines = crlf_lines(r.out);
  REQUIRE(lines.size() == 26);
  CHECK(lines[0] ==
        "E1,E2,factor_found,factor_predicted,scalar_R_canonical,"
        "scalar_R_representation,scalar_rel_diff");
  bool saw_unit = false;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto fields = split_fields(lines[k]);
    REQUIRE(fields.size() == 7);
    if (fields[0] == "1" && fields[1] == "1") {
      saw_unit = true;
      CHECK(std::stod(fields[2]) == doctest::Approx(-8.0 / 27).epsilon(1e-9));
      CHECK(std::stod(fields[3]) == doctest::Approx(-8.0 / 27).epsilon(1e-9));
      CHECK(std::stod(fields[6]) < 1e-6);
    }
  }
  CHECK(saw_unit);
}

TEST_CASE("partial-family metrics report no conformal factor") {
  const auto r = run_cli(std::string("compare-representations --system ") +
                         kMonomial34 +
                         " --metric '{\"family\":\"gp\",\"k\":0}'");
  CHECK(r.exit_code == 0);
  const auto lines = crlf_lines(r.out);
  REQUIRE(lines.size() == 26);
  for (std::size_t k = 1; k < lines.size(); ++k)
    CHECK(split_fields(lines[k])[2].empty());
}

TEST_CASE("outputs are byte-for-byte deterministic") {
  const std::string out1 = temp_path("gtdcli_det_1.csv");
  const std::string out2 = temp_path("gtdcli_det_2.csv");
  const std::string args = std::string("curvature --system ") + kMonomial34 +
                           " --metric '{\"family\":\"natural\"}' --out ";
  CHECK(run_cli(args + out1).exit_code == 0);
  CHECK(run_cli(args + out2).exit_code == 0);
  std::ifstream f1(out1, std::ios::binary), f2(out2, std::ios::binary);
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  REQUIRE(s1.str().size() > 0);
  CHECK(s1.str() == s2.str());
}

TEST_CASE("config files merge with flag overrides") {
  const std::string path = temp_path("gtdcli_cfg.json");
  {
    std::ofstream f(path);
    f << "{\"system\":{\"type\":\"monomial\",\"exponents\":[0.75,0.75]},"
         "\"metric\":{\"family\":\"natural\"}}";
  }
  const auto r = run_cli("curvature --config " + path +
                         " --grid '[{\"min\":0.8,\"max\":1.2,\"count\":3},"
                         "{\"min\":0.8,\"max\":1.2,\"count\":3}]'");
  CHECK(r.exit_code == 0);
  CHECK(crlf_lines(r.out).size() == 10);
}

TEST_CASE("canonical configs are a serialization fixed point") {
  const std::string path = temp_path("gtdcli_dump.json");
  const auto first = run_cli(std::string("verify --system ") + kMonomial34 +
                             " --dump-config");
  CHECK(first.exit_code == 0);
  {
    std::ofstream f(path);
    f << first.out;
  }
  const auto second = run_cli("verify --config " + path + " --dump-config");
  CHECK(second.exit_code == 0);
  CHECK(first.out == second.out);
}

TEST_CASE("per-point evaluation failures exit with the numerical code") {
  const auto r = run_cli(
      "curvature --system '{\"type\":\"expression\",\"text\":\"E1^2 - E2^2\","
      "\"variables\":[\"E1\",\"E2\"]}' --metric '{\"family\":\"natural\"}'"
      " --grid '[{\"min\":1,\"max\":2,\"count\":2,\"spacing\":\"linear\"},"
      "{\"min\":-0.5,\"max\":0.5,\"count\":3,\"spacing\":\"linear\"}]'");
  CHECK(r.exit_code == 4);
  // The report still carries every row.
  CHECK(crlf_lines(r.out).size() == 7);
}
