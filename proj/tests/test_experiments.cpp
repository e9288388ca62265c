#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "bregvi/experiments.hpp"

using namespace bregvi;
using nlohmann::json;

namespace {

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::stringstream ss(s);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

std::vector<double> parse_row(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell.empty() ? NAN : std::stod(cell));
  return out;
}

const std::string* find_csv(const ExperimentResult& r, const std::string& name) {
  for (const auto& [n, content] : r.csv_files) {
    if (n == name) return &content;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("spec parsing rejects unknown keys and bad values") {
  CHECK_THROWS_AS(ExperimentSpec::from_json(json{{"bogus", 1}}), SpecError);
  CHECK_THROWS_AS(ExperimentSpec::from_json(json{{"model", {{"famly", "x"}}}}), SpecError);
  CHECK_THROWS_AS(ExperimentSpec::from_json(json{{"interval", {3.0, 1.0}}}), SpecError);

  ExperimentSpec s = ExperimentSpec::from_json(json::object());
  s.grid = 256;
  CHECK_THROWS_AS(s.validate(), SpecError);
  s.grid = 257;
  s.panels = 7;
  CHECK_THROWS_AS(s.validate(), SpecError);
  s.panels = 2048;
  s.schedule_value = 2.0;
  CHECK_THROWS_AS(s.validate(), SpecError);
  s.schedule_value = 0.5;
  s.schedule_kind = "diminishing";
  s.schedule_value = 1.0;
  CHECK_THROWS_AS(s.validate(), SpecError);
  s.schedule_value = 0.5;
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("landscape rows match the reference values") {
  ExperimentSpec spec;
  spec.name = "landscape";
  spec.points = 601;  // nodes at integer phi values
  const ExperimentResult r = cmd_landscape(spec);
  CHECK(r.checks_passed);
  const std::string* csv = find_csv(r, "landscape_curve.csv");
  REQUIRE(csv != nullptr);
  const auto lines = split_lines(*csv);
  CHECK(lines[0] == "phi,L,monotonicity_bound_from_phi0,slack");
  REQUIRE(lines.size() == 602);

  bool saw_min = false, saw_anchor = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto row = parse_row(lines[i]);
    REQUIRE(row.size() == 4);
    CHECK(row[3] >= -1e-12);  // slack nonnegative everywhere
    if (std::fabs(row[0] - 1.0) < 1e-9) {
      CHECK(row[1] == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(row[2] <= 1e-12);
      saw_min = true;
    }
    if (std::fabs(row[0] + 1.0) < 1e-9) {
      CHECK(row[1] == doctest::Approx(0.4621171572600098).epsilon(1e-9));
      CHECK(std::fabs(row[3]) <= 1e-12);  // bound tight at the anchor
      saw_anchor = true;
    }
  }
  CHECK(saw_min);
  CHECK(saw_anchor);

  spec.model.dim = 2;
  CHECK_THROWS_AS(cmd_landscape(spec), SpecError);
}

TEST_CASE("envelope output sandwiches L everywhere") {
  ExperimentSpec spec;
  spec.name = "envelope";
  spec.points = 121;
  const ExperimentResult r = cmd_envelope(spec);
  CHECK(r.checks_passed);
  const std::string* csv = find_csv(r, "envelope_curve.csv");
  REQUIRE(csv != nullptr);
  const auto lines = split_lines(*csv);
  CHECK(lines[0] == "phi,L,alpha,beta,lower,upper,sandwich_ok");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto row = parse_row(lines[i]);
    CHECK(row[6] == 1.0);
    if (std::fabs(row[0] + 1.0) < 1e-9) {
      CHECK(row[4] == doctest::Approx(0.3932238664829637).epsilon(1e-7));
      CHECK(row[1] == doctest::Approx(0.4621171572600098).epsilon(1e-9));
      CHECK(row[5] == doctest::Approx(0.5).epsilon(1e-12));
    }
  }
  const std::string* samples = find_csv(r, "envelope_samples.csv");
  REQUIRE(samples != nullptr);
  CHECK(split_lines(*samples)[0] == "s,lam_min,lam_max");

  const json summary = json::parse(r.summary_json);
  CHECK(summary["kappa_at_phi0"].get<double>() ==
        doctest::Approx(0.25 / 0.19661193324148185).epsilon(1e-6));
}

TEST_CASE("trajectory experiment reproduces the qualitative picture") {
  ExperimentSpec spec;
  spec.name = "trajectory";
  spec.model.family = "bernoulli";
  spec.model.dim = 2;
  spec.phi_star = {1.0, 1.0};
  spec.phi0 = {-3.0, 3.0};
  spec.points = 41;
  const ExperimentResult r = cmd_trajectory(spec);
  const json summary = json::parse(r.summary_json);
  CHECK(summary["ngd_eta10_iters"].get<int>() == 1);
  CHECK(summary["ngd_eta10_final_dist"].get<double>() <= 1e-12);
  CHECK(summary["gd_max_collinearity"].get<double>() > 1e-3);
  CHECK(summary["ngd_max_collinearity"].get<double>() <= 1e-10 * 4.5);

  // NGD eta=0.5 halves the distance each step.
  const std::string* csv = find_csv(r, "trajectory_ngd_eta05.csv");
  REQUIRE(csv != nullptr);
  const auto lines = split_lines(*csv);
  const auto r0 = parse_row(lines[1]);
  const auto r1 = parse_row(lines[2]);
  CHECK(r1[3] == doctest::Approx(0.5 * r0[3]).epsilon(1e-12));

  spec.model.dim = 3;
  CHECK_THROWS_AS(cmd_trajectory(spec), SpecError);
}

TEST_CASE("sweep determinism and summary structure") {
  ExperimentSpec spec;
  spec.name = "sweep";
  spec.model.family = "quadratic";
  spec.model.dim = 20;
  spec.max_iters = 5000;

  const ExperimentResult a = cmd_sweep(spec);
  const ExperimentResult b = cmd_sweep(spec);
  REQUIRE(a.csv_files.size() == b.csv_files.size());
  for (std::size_t i = 0; i < a.csv_files.size(); ++i) {
    CHECK(a.csv_files[i].first == b.csv_files[i].first);
    CHECK(a.csv_files[i].second == b.csv_files[i].second);  // byte-identical
  }
  CHECK(a.summary_json == b.summary_json);

  const json summary = json::parse(a.summary_json);
  const auto& cells = summary["cells"];
  REQUIRE(cells.size() == 5);
  long ngd_iters = cells[0]["ngd_iters_to_1e6"].get<long>();
  for (const auto& cell : cells) {
    CHECK(cell["ngd_iters_to_1e6"].get<long>() == ngd_iters);
    CHECK(cell["gd_bound_violations"].get<long>() == 0);
  }

  // Bad gamma is rejected without the override.
  spec.gamma_override = 2.5;
  CHECK_THROWS_AS(cmd_sweep(spec), SpecError);
  spec.allow_divergent = true;
  CHECK_THROWS_AS(cmd_sweep(spec), std::runtime_error);  // actually diverges
}

TEST_CASE("worst-case sweep attains the theoretical contraction") {
  ExperimentSpec spec;
  spec.name = "sweep";
  spec.model.family = "quadratic";
  spec.model.dim = 20;
  spec.worst_case = true;
  spec.ratios = {0.02, 0.30};
  spec.max_iters = 2000;
  const json summary = json::parse(cmd_sweep(spec).summary_json);
  const auto& cells = summary["cells"];
  CHECK(cells[0]["gd_contraction_empirical"].get<double>() ==
        doctest::Approx(0.98 / 1.02).epsilon(1e-6));
  CHECK(cells[1]["gd_contraction_empirical"].get<double>() ==
        doctest::Approx(0.70 / 1.30).epsilon(1e-6));
}

TEST_CASE("verify passes clean and fails the negative control") {
  ExperimentSpec spec;
  spec.name = "verify";
  spec.seed = 1;
  const ExperimentResult clean = cmd_verify(spec);
  CHECK(clean.checks_passed);
  const json report = json::parse(clean.summary_json);
  CHECK(report["all_pass"].get<bool>());
  for (const auto& entry : report["checks"]) {
    CHECK(entry.contains("check"));
    CHECK(entry.contains("max_rel_err"));
    CHECK(entry.contains("tolerance"));
    CHECK(entry["pass"].get<bool>());
  }

  spec.inject_fault = true;
  const ExperimentResult faulty = cmd_verify(spec);
  CHECK_FALSE(faulty.checks_passed);
  bool gradient_check_failed = false;
  const json faulty_report = json::parse(faulty.summary_json);
  for (const auto& entry : faulty_report["checks"]) {
    if (entry["check"] == "grad_identity_vs_fd" && !entry["pass"].get<bool>()) {
      gradient_check_failed = true;
    }
  }
  CHECK(gradient_check_failed);
}

TEST_CASE("run_experiment dispatch") {
  ExperimentSpec spec;
  spec.name = "nonsense";
  CHECK_THROWS_AS(run_experiment(spec), SpecError);
}
