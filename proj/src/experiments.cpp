#include "bregvi/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "bregvi/expfam.hpp"
#include "bregvi/objective.hpp"
#include "bregvi/optimizers.hpp"
#include "bregvi/raygeom.hpp"
#include "bregvi/verify.hpp"

namespace bregvi {

namespace {

using nlohmann::json;

Vector to_vector(const std::vector<double>& v) {
  Vector out(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = v[i];
  return out;
}

ExpFamModel build_model(const ModelDescriptor& d) {
  if (d.dim < 1) throw SpecError("model dim must be >= 1");
  if (d.family == "bernoulli") return make_bernoulli_product(d.dim);
  if (d.family == "quadratic") {
    Vector diag;
    if (d.spectrum.empty()) {
      diag = Vector::Ones(d.dim);
    } else if (static_cast<int>(d.spectrum.size()) == d.dim) {
      diag = to_vector(d.spectrum);
    } else {
      throw SpecError("quadratic spectrum length must equal dim");
    }
    try {
      return make_quadratic(Matrix(diag.asDiagonal()));
    } catch (const std::invalid_argument& e) {
      throw SpecError(e.what());
    }
  }
  throw SpecError("unknown model family: " + d.family);
}

Vector spec_point(const std::vector<double>& raw, int dim, double fallback) {
  if (raw.empty()) return Vector::Constant(dim, fallback);
  if (static_cast<int>(raw.size()) != dim) {
    throw SpecError("parameter vector length must equal model dim");
  }
  return to_vector(raw);
}

struct CsvWriter {
  std::string content;

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) content += ',';
      content += cells[i];
    }
    content += '\n';
  }
  void numeric_row(const std::vector<double>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) content += ',';
      content += format_double(cells[i]);
    }
    content += '\n';
  }
};

double linspace_at(double lo, double hi, int points, int i) {
  return points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ExperimentSpec ExperimentSpec::from_json(const json& j) {
  static const std::set<std::string> known = {
      "name",     "model",     "phi_star",  "phi_0",          "schedule",
      "grid",     "panels",    "max_iters", "tol",            "interval",
      "points",   "ratios",    "worst_case", "gamma",          "allow_divergent",
      "inject_fault", "seed",  "out"};
  if (!j.is_object()) throw SpecError("config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) throw SpecError("unknown config key: " + it.key());
  }
  ExperimentSpec s;
  try {
    s.name = j.value("name", std::string());
    if (j.contains("model")) {
      const json& m = j.at("model");
      static const std::set<std::string> mkeys = {"family", "dim", "spectrum"};
      for (auto it = m.begin(); it != m.end(); ++it) {
        if (!mkeys.count(it.key())) throw SpecError("unknown model key: " + it.key());
      }
      s.model.family = m.value("family", s.model.family);
      s.model.dim = m.value("dim", s.model.dim);
      s.model.spectrum = m.value("spectrum", s.model.spectrum);
    }
    s.phi_star = j.value("phi_star", s.phi_star);
    s.phi0 = j.value("phi_0", s.phi0);
    if (j.contains("schedule")) {
      const json& sc = j.at("schedule");
      static const std::set<std::string> skeys = {"kind", "value"};
      for (auto it = sc.begin(); it != sc.end(); ++it) {
        if (!skeys.count(it.key())) throw SpecError("unknown schedule key: " + it.key());
      }
      s.schedule_kind = sc.value("kind", s.schedule_kind);
      s.schedule_value = sc.value("value", s.schedule_value);
    }
    s.grid = j.value("grid", s.grid);
    s.panels = j.value("panels", s.panels);
    s.max_iters = j.value("max_iters", s.max_iters);
    s.tol = j.value("tol", s.tol);
    if (j.contains("interval")) {
      const auto iv = j.at("interval").get<std::vector<double>>();
      if (iv.size() != 2 || !(iv[0] < iv[1])) throw SpecError("interval must be [lo, hi]");
      s.interval_lo = iv[0];
      s.interval_hi = iv[1];
    }
    s.points = j.value("points", s.points);
    s.ratios = j.value("ratios", s.ratios);
    s.worst_case = j.value("worst_case", s.worst_case);
    s.gamma_override = j.value("gamma", s.gamma_override);
    s.allow_divergent = j.value("allow_divergent", s.allow_divergent);
    s.inject_fault = j.value("inject_fault", s.inject_fault);
    s.seed = j.value("seed", s.seed);
    s.out_dir = j.value("out", s.out_dir);
  } catch (const json::exception& e) {
    throw SpecError(std::string("config parse error: ") + e.what());
  }
  return s;
}

void ExperimentSpec::validate() const {
  if (grid < 3 || grid % 2 == 0) throw SpecError("grid size must be odd and >= 3");
  if (panels < 2 || panels % 2 != 0) throw SpecError("panel count must be even and >= 2");
  if (max_iters < 1) throw SpecError("max_iters must be >= 1");
  if (points < 2) throw SpecError("points must be >= 2");
  if (!(tol >= 0.0)) throw SpecError("tol must be non-negative");
  if (schedule_kind == "constant") {
    if (!(schedule_value > 0.0 && schedule_value < 2.0)) {
      throw SpecError("constant NGD step must satisfy 0 < eta < 2");
    }
  } else if (schedule_kind == "diminishing") {
    if (!(schedule_value > 0.0 && schedule_value < 1.0)) {
      throw SpecError("diminishing schedule requires 0 < c < 1");
    }
  } else {
    throw SpecError("unknown schedule kind: " + schedule_kind);
  }
  for (double r : ratios) {
    if (!(r > 0.0 && r <= 1.0)) throw SpecError("ratios must lie in (0, 1]");
  }
}

ExperimentResult cmd_landscape(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.model.family != "bernoulli" || spec.model.dim != 1) {
    throw SpecError("landscape requires a 1-d Bernoulli model");
  }
  const ExpFamModel model = build_model(spec.model);
  const Vector phi_star = spec_point(spec.phi_star, 1, 1.0);
  const Vector phi0 = spec_point(spec.phi0, 1, -1.0);
  const BregmanObjective obj(model, phi_star);

  CsvWriter csv;
  csv.row({"phi", "L", "monotonicity_bound_from_phi0", "slack"});
  double min_slack = 0.0;
  for (int i = 0; i < spec.points; ++i) {
    Vector phi(1);
    phi[0] = linspace_at(spec.interval_lo, spec.interval_hi, spec.points, i);
    const MonotonicityCheck c = monotonicity_check(obj, phi0, phi);
    csv.numeric_row({phi[0], c.lhs, c.rhs, c.slack});
    min_slack = std::fmin(min_slack, c.slack);
  }

  json summary;
  summary["experiment"] = "landscape";
  summary["phi_star"] = phi_star[0];
  summary["phi_0"] = phi0[0];
  summary["points"] = spec.points;
  summary["L_at_phi0"] = obj.neg_elbo(phi0);
  summary["min_slack"] = min_slack;
  summary["slack_nonnegative"] = min_slack >= -1e-12;

  ExperimentResult r;
  r.csv_files.emplace_back("landscape_curve.csv", csv.content);
  r.summary_json = summary.dump(2) + "\n";
  r.checks_passed = min_slack >= -1e-12;
  return r;
}

ExperimentResult cmd_envelope(const ExperimentSpec& spec) {
  spec.validate();
  const ExpFamModel model = build_model(spec.model);
  const int d = model.dim;
  const Vector phi_star = spec_point(spec.phi_star, d, 1.0);
  const Vector phi0 = spec_point(spec.phi0, d, -1.0);
  const BregmanObjective obj(model, phi_star);

  // Sweep direction: the phi axis itself in 1-d, otherwise the unit vector
  // toward phi_0 with the sweep variable as signed distance from phi*.
  Vector dir;
  if (d == 1) {
    dir = Vector::Ones(1);
  } else {
    dir = phi0 - phi_star;
    if (dir.norm() == 0.0) throw SpecError("envelope sweep needs phi_0 != phi_star");
    dir /= dir.norm();
  }

  CsvWriter curve;
  curve.row({"phi", "L", "alpha", "beta", "lower", "upper", "sandwich_ok"});
  bool all_ok = true;
  for (int i = 0; i < spec.points; ++i) {
    const double t = linspace_at(spec.interval_lo, spec.interval_hi, spec.points, i);
    const Vector phi = d == 1 ? Vector(Vector::Constant(1, t)) : Vector(phi_star + t * dir);
    const RayEnvelope env = spectral_envelope(obj, phi, spec.grid);
    const double L = obj.neg_elbo(phi);
    const auto [lower, upper] = quadratic_bounds(obj, phi, env);
    const double tol_grid = env.grid_tolerance();
    const bool ok = lower <= L + tol_grid * (1.0 + std::fabs(L)) &&
                    L <= upper + tol_grid * (1.0 + std::fabs(L));
    all_ok = all_ok && ok;
    curve.numeric_row({d == 1 ? phi[0] : t, L, env.alpha, env.beta, lower, upper,
                       ok ? 1.0 : 0.0});
  }

  // Per-sample spectra for the phi_0 ray, with a trailing summary row.
  const RayEnvelope env0 = spectral_envelope(obj, phi0, spec.grid);
  CsvWriter samples;
  samples.row({"s", "lam_min", "lam_max"});
  for (const RaySample& smp : env0.samples) {
    samples.numeric_row({smp.s, smp.lam_min, smp.lam_max});
  }
  samples.row({"alpha", "beta", "kappa"});
  samples.numeric_row({env0.alpha, env0.beta, condition_number(env0)});

  json summary;
  summary["experiment"] = "envelope";
  summary["alpha_at_phi0"] = env0.alpha;
  summary["beta_at_phi0"] = env0.beta;
  summary["kappa_at_phi0"] = condition_number(env0);
  summary["grid"] = spec.grid;
  summary["sandwich_ok_everywhere"] = all_ok;

  ExperimentResult r;
  r.csv_files.emplace_back("envelope_curve.csv", curve.content);
  r.csv_files.emplace_back("envelope_samples.csv", samples.content);
  r.summary_json = summary.dump(2) + "\n";
  r.checks_passed = all_ok;
  return r;
}

namespace {

std::string trajectory_csv(const Trajectory& traj, int d) {
  CsvWriter csv;
  std::vector<std::string> header = {"k"};
  for (int i = 0; i < d && i < 3; ++i) header.push_back("phi_" + std::to_string(i));
  header.insert(header.end(), {"dist", "loss", "contraction", "collinearity"});
  csv.row(header);
  for (std::size_t k = 0; k < traj.iterates.size(); ++k) {
    std::vector<std::string> cells = {std::to_string(k)};
    for (int i = 0; i < d && i < 3; ++i) cells.push_back(format_double(traj.iterates[k][i]));
    cells.push_back(format_double(traj.dist[k]));
    cells.push_back(format_double(traj.loss[k]));
    if (k >= 1 && traj.contraction[k - 1].has_value()) {
      cells.push_back(format_double(*traj.contraction[k - 1]));
    } else {
      cells.push_back("");
    }
    cells.push_back(format_double(traj.collinearity[k]));
    csv.row(cells);
  }
  return csv.content;
}

}  // namespace

ExperimentResult cmd_trajectory(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.model.dim != 2) throw SpecError("trajectory requires a 2-d model");
  const ExpFamModel model = build_model(spec.model);
  const Vector phi_star = spec_point(spec.phi_star, 2, 1.0);
  Vector phi0;
  if (spec.phi0.empty()) {
    phi0 = Vector(2);
    phi0 << -3.0, 3.0;
  } else {
    phi0 = spec_point(spec.phi0, 2, 0.0);
  }
  const BregmanObjective obj(model, phi_star);

  RunOptions opts;
  opts.max_iters = spec.max_iters;
  opts.dist_tol = spec.tol;
  opts.envelope_grid = spec.grid;

  const Trajectory ngd_half = run(obj, phi0, Method::ngd, StepSchedule::constant(0.5), opts);
  const Trajectory ngd_full = run(obj, phi0, Method::ngd, StepSchedule::constant(1.0), opts);

  const RayEnvelope env0 = spectral_envelope(obj, phi0, spec.grid);
  const double gamma_star = optimal_gd_step(env0.alpha, env0.beta);
  const Trajectory gd_opt =
      run(obj, phi0, Method::gd, StepSchedule::constant(gamma_star), opts);

  CsvWriter contour;
  contour.row({"phi_0", "phi_1", "L"});
  const int n = spec.points;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Vector phi(2);
      phi[0] = linspace_at(spec.interval_lo, spec.interval_hi, n, i);
      phi[1] = linspace_at(spec.interval_lo, spec.interval_hi, n, j);
      contour.numeric_row({phi[0], phi[1], obj.neg_elbo(phi)});
    }
  }

  json summary;
  summary["experiment"] = "trajectory";
  summary["gamma_star"] = gamma_star;
  summary["ngd_eta05_iters"] = ngd_half.iterates.size() - 1;
  summary["ngd_eta10_iters"] = ngd_full.iterates.size() - 1;
  summary["gd_opt_iters"] = gd_opt.iterates.size() - 1;
  summary["ngd_eta10_final_dist"] = ngd_full.dist.back();
  summary["gd_max_collinearity"] =
      *std::max_element(gd_opt.collinearity.begin(), gd_opt.collinearity.end());
  summary["ngd_max_collinearity"] =
      *std::max_element(ngd_half.collinearity.begin(), ngd_half.collinearity.end());

  ExperimentResult r;
  r.csv_files.emplace_back("trajectory_ngd_eta05.csv", trajectory_csv(ngd_half, 2));
  r.csv_files.emplace_back("trajectory_ngd_eta10.csv", trajectory_csv(ngd_full, 2));
  r.csv_files.emplace_back("trajectory_gd_opt.csv", trajectory_csv(gd_opt, 2));
  r.csv_files.emplace_back("trajectory_contour.csv", contour.content);
  r.summary_json = summary.dump(2) + "\n";
  return r;
}

ExperimentResult cmd_sweep(const ExperimentSpec& spec) {
  spec.validate();
  const int d = spec.model.family == "quadratic" ? spec.model.dim : 20;
  if (spec.model.family != "quadratic" && !spec.model.spectrum.empty()) {
    throw SpecError("sweep requires a quadratic model");
  }
  if (d < 2) throw SpecError("sweep requires dim >= 2");

  ExperimentResult r;
  json summary;
  summary["experiment"] = "sweep";
  summary["dim"] = d;
  json per_ratio = json::array();

  for (double ratio : spec.ratios) {
    const double alpha = ratio;  // beta fixed at 1
    Vector diag(d);
    for (int i = 0; i < d; ++i) diag[i] = linspace_at(alpha, 1.0, d, i);
    const BregmanObjective obj(make_quadratic(Matrix(diag.asDiagonal())),
                               Vector::Zero(d));

    Vector delta0;
    if (spec.worst_case) {
      // Mass only on the extreme eigendirections realizes rho* exactly.
      delta0 = Vector::Zero(d);
      delta0[0] = 10.0 / std::sqrt(2.0);
      delta0[d - 1] = 10.0 / std::sqrt(2.0);
    } else {
      delta0 = Vector::Constant(d, 10.0 / std::sqrt(static_cast<double>(d)));
    }
    const Vector phi0 = obj.optimum() + delta0;

    double gamma = optimal_gd_step(alpha, 1.0);
    if (spec.gamma_override > 0.0) {
      if (spec.gamma_override >= 2.0 && !spec.allow_divergent) {
        throw SpecError("gamma >= 2/beta diverges; pass allow_divergent to force");
      }
      gamma = spec.gamma_override;
    }
    const double rho_star = gd_contraction_factor(alpha, 1.0, gamma);

    RunOptions opts;
    opts.max_iters = spec.max_iters;
    opts.dist_tol = spec.tol;

    const Trajectory gd =
        run(obj, phi0, Method::gd, StepSchedule::constant(gamma), opts);
    const Trajectory ngd =
        run(obj, phi0, Method::ngd, StepSchedule::constant(spec.schedule_value), opts);

    auto iters_to = [](const Trajectory& t, double target) {
      for (std::size_t k = 0; k < t.dist.size(); ++k) {
        if (t.dist[k] <= target) return static_cast<long>(k);
      }
      return -1L;
    };
    auto last_contraction = [](const Trajectory& t) {
      for (auto it = t.contraction.rbegin(); it != t.contraction.rend(); ++it) {
        if (it->has_value()) return **it;
      }
      return 0.0;
    };
    long violations = 0;
    for (std::size_t k = 0; k + 1 < gd.dist.size(); ++k) {
      if (gd.dist[k + 1] > rho_star * gd.dist[k] + 1e-12) ++violations;
    }

    auto curve_csv = [](const Trajectory& t) {
      CsvWriter csv;
      csv.row({"k", "dist", "loss"});
      for (std::size_t k = 0; k < t.dist.size(); ++k) {
        csv.content += std::to_string(k);
        csv.content += ',';
        csv.content += format_double(t.dist[k]);
        csv.content += ',';
        csv.content += format_double(t.loss[k]);
        csv.content += '\n';
      }
      return csv.content;
    };
    char tag[16];
    std::snprintf(tag, sizeof(tag), "%.2f", ratio);
    r.csv_files.emplace_back(std::string("sweep_gd_r") + tag + ".csv", curve_csv(gd));
    r.csv_files.emplace_back(std::string("sweep_ngd_r") + tag + ".csv", curve_csv(ngd));

    json cell;
    cell["ratio"] = ratio;
    cell["gamma"] = gamma;
    cell["rho_star_theoretical"] = rho_star;
    cell["gd_contraction_empirical"] = last_contraction(gd);
    cell["ngd_contraction_empirical"] = last_contraction(ngd);
    cell["gd_iters_to_1e6"] = iters_to(gd, 1e-6);
    cell["ngd_iters_to_1e6"] = iters_to(ngd, 1e-6);
    cell["gd_bound_violations"] = violations;
    per_ratio.push_back(cell);
  }

  summary["cells"] = per_ratio;
  r.summary_json = summary.dump(2) + "\n";
  return r;
}

namespace {

struct CheckAccumulator {
  json entries = json::array();
  bool all_pass = true;

  void add(const std::string& name, double max_rel_err, double tolerance) {
    const bool pass = max_rel_err <= tolerance;
    entries.push_back({{"check", name},
                       {"max_rel_err", max_rel_err},
                       {"tolerance", tolerance},
                       {"pass", pass}});
    all_pass = all_pass && pass;
  }
};

double rel_err(double got, double want) {
  return std::fabs(got - want) / (1.0 + std::fabs(want));
}

}  // namespace

ExperimentResult cmd_verify(const ExperimentSpec& spec) {
  CheckAccumulator acc;
  CounterRng rng(spec.seed);

  // Closed-form mean/Fisher vs finite differences, both families.
  for (const auto& [label, dims] :
       std::vector<std::pair<std::string, std::vector<int>>>{
           {"bernoulli", {1, 2, 20}}, {"quadratic", {1, 2, 20}}}) {
    double mean_err = 0.0, fisher_err = 0.0, convexity_gap = 0.0;
    for (int d : dims) {
      ExpFamModel model;
      if (label == "bernoulli") {
        model = make_bernoulli_product(d);
      } else {
        Vector diag(d);
        for (int i = 0; i < d; ++i) diag[i] = linspace_at(0.2, 1.0, d, i);
        model = make_quadratic(Matrix(diag.asDiagonal()));
      }
      const int sweep = 200 / static_cast<int>(dims.size());
      for (int t = 0; t < sweep; ++t) {
        const Vector phi = rng.vector(d, -5.0, 5.0);
        const Vector mu = model.mean(phi);
        const Vector g = fd_gradient(model.log_partition, phi, 1e-5);
        mean_err = std::fmax(mean_err, (mu - g).norm() / (1.0 + mu.norm()));
        const Matrix h = model.fisher(phi);
        const Matrix hfd = fd_hessian(model.log_partition, phi, 1e-4);
        for (int i = 0; i < d; ++i) {
          for (int j = 0; j < d; ++j) {
            fisher_err = std::fmax(
                fisher_err, std::fabs(h(i, j) - hfd(i, j)) / (1.0 + std::fabs(h(i, j))));
          }
        }
        const Vector psi = rng.vector(d, -5.0, 5.0);
        const double mid = model.log_partition(0.5 * (phi + psi));
        convexity_gap = std::fmax(
            convexity_gap,
            mid - 0.5 * model.log_partition(phi) - 0.5 * model.log_partition(psi));
      }
    }
    acc.add(label + "_mean_vs_fd_gradient", mean_err, 1e-6);
    acc.add(label + "_fisher_vs_fd_hessian", fisher_err, 1e-4);
    acc.add(label + "_log_partition_midpoint_convexity", convexity_gap, 1e-12);
  }

  // Gradient identity and the solve-based natural gradient, Bernoulli d=2.
  {
    const BregmanObjective obj(make_bernoulli_product(2), to_vector({1.0, -0.5}));
    double grad_err = 0.0, natgrad_err = 0.0;
    for (int t = 0; t < 100; ++t) {
      const Vector phi = rng.vector(2, -5.0, 5.0);
      Vector g = obj.grad(phi);
      if (spec.inject_fault) g.array() += 1e-3;
      const Vector gfd =
          fd_gradient([&](const Vector& x) { return obj.neg_elbo(x); }, phi, 1e-5);
      grad_err = std::fmax(grad_err, (g - gfd).norm() / (1.0 + gfd.norm()));
      const Vector ng = solve_spd(obj.model().fisher(phi), obj.grad(phi));
      natgrad_err =
          std::fmax(natgrad_err, (ng - obj.nat_grad(phi)).norm() /
                                     (1.0 + obj.nat_grad(phi).norm()));
    }
    acc.add("grad_identity_vs_fd", grad_err, 1e-6);
    acc.add("nat_grad_vs_spd_solve", natgrad_err, 1e-10);
  }

  // Three-point identity and monotonicity, both families.
  {
    const BregmanObjective bern(make_bernoulli_product(2), to_vector({1.0, 1.0}));
    Vector diag(2);
    diag << 0.2, 1.0;
    const BregmanObjective quad(make_quadratic(Matrix(diag.asDiagonal())),
                                Vector::Zero(2));
    double tp_err = 0.0, mono_neg = 0.0, mono_breg_err = 0.0;
    for (const BregmanObjective* obj : {&bern, &quad}) {
      for (int t = 0; t < 1000; ++t) {
        const Vector u = rng.vector(2, -5.0, 5.0);
        const Vector v = rng.vector(2, -5.0, 5.0);
        const Vector w = rng.vector(2, -5.0, 5.0);
        const auto [lhs, rhs] = three_point_gap(obj->model(), u, v, w);
        tp_err = std::fmax(tp_err, std::fabs(lhs - rhs) / (1.0 + std::fabs(rhs)));
        const MonotonicityCheck c = monotonicity_check(*obj, u, v);
        mono_neg = std::fmax(mono_neg, -c.slack / (1.0 + std::fabs(c.lhs)));
        const double breg = bregman_div(obj->model(), u, v);
        mono_breg_err =
            std::fmax(mono_breg_err, std::fabs(c.slack - breg) / (1.0 + std::fabs(breg)));
      }
    }
    acc.add("three_point_identity", tp_err, 1e-10);
    acc.add("monotonicity_slack_nonnegative", mono_neg, 1e-12);
    acc.add("monotonicity_slack_equals_bregman", mono_breg_err, 1e-10);
  }

  // Bernoulli KL oracle.
  {
    const Vector phi_star = to_vector({1.0, -2.0});
    const BregmanObjective obj(make_bernoulli_product(2), phi_star);
    double kl_err = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const Vector phi = rng.vector(2, -6.0, 6.0);
      kl_err = std::fmax(kl_err, rel_err(obj.neg_elbo(phi),
                                         kl_oracle_bernoulli(phi_star, phi)));
    }
    acc.add("neg_elbo_vs_kl_oracle", kl_err, 1e-10);
  }

  // Integral representation via Simpson quadrature.
  {
    const BregmanObjective bern(make_bernoulli_product(1), Vector::Constant(1, 1.0));
    double int_err = 0.0;
    for (int t = 0; t < 50; ++t) {
      const Vector phi = rng.vector(1, -6.0, 6.0);
      int_err = std::fmax(
          int_err, rel_err(integral_neg_elbo(bern, phi, spec.panels), bern.neg_elbo(phi)));
    }
    acc.add("integral_representation_bernoulli", int_err, 1e-8);

    Vector diag(2);
    diag << 0.2, 1.0;
    const BregmanObjective quad(make_quadratic(Matrix(diag.asDiagonal())),
                                Vector::Zero(2));
    double quad_err = 0.0;
    for (int t = 0; t < 50; ++t) {
      const Vector phi = rng.vector(2, -6.0, 6.0);
      quad_err = std::fmax(quad_err,
                           rel_err(integral_neg_elbo(quad, phi, 2), quad.neg_elbo(phi)));
    }
    acc.add("integral_representation_quadratic_exact", quad_err, 1e-13);
  }

  // Eigenvalue recovery on seeded random SPD matrices.
  {
    double eig_err = 0.0;
    for (int d : {2, 5, 20}) {
      for (int t = 0; t < 10; ++t) {
        Matrix g(d, d);
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) g(i, j) = rng.next(-1.0, 1.0);
        const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
        Vector lam(d);
        for (int i = 0; i < d; ++i) lam[i] = rng.next(0.1, 10.0);
        const Matrix m = q * lam.asDiagonal() * q.transpose();
        const auto [lmin, lmax] = eig_extremes(0.5 * (m + m.transpose()));
        eig_err = std::fmax(eig_err, rel_err(lmin, lam.minCoeff()));
        eig_err = std::fmax(eig_err, rel_err(lmax, lam.maxCoeff()));
      }
    }
    acc.add("eig_extremes_recovery", eig_err, 1e-10);
  }

  json summary;
  summary["experiment"] = "verify";
  summary["seed"] = spec.seed;
  summary["inject_fault"] = spec.inject_fault;
  summary["checks"] = acc.entries;
  summary["all_pass"] = acc.all_pass;

  ExperimentResult r;
  r.summary_json = summary.dump(2) + "\n";
  r.checks_passed = acc.all_pass;
  return r;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.name == "landscape") return cmd_landscape(spec);
  if (spec.name == "envelope") return cmd_envelope(spec);
  if (spec.name == "trajectory") return cmd_trajectory(spec);
  if (spec.name == "sweep") return cmd_sweep(spec);
  if (spec.name == "verify") return cmd_verify(spec);
  throw SpecError("unknown experiment: " + spec.name);
}

void write_result(const ExperimentResult& result, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const auto& [name, content] : result.csv_files) {
    std::ofstream f(std::filesystem::path(out_dir) / name, std::ios::binary);
    f << content;
  }
  std::ofstream f(std::filesystem::path(out_dir) / "summary.json", std::ios::binary);
  f << result.summary_json;
}

}  // namespace bregvi
