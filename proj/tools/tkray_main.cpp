// tkray command line: scenario runner, verification suites, zoo listing.
//
// Exit codes: 0 all checks pass, 1 invariant failure, 2 input error.

#include <CLI11.hpp>
#include <json.hpp>

#include "tkray/verify.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tkray;

namespace {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double jget(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ScenarioError("field '" + key + "' must be a number");
  return j[key].get<double>();
}

int jget_int(const json& j, const std::string& key, int fallback) {
  double v = jget(j, key, fallback);
  return static_cast<int>(v);
}

ToricPotential parse_potential(const json& j, const std::string& field,
                               std::shared_ptr<const ToricGeometry> geom) {
  if (!j.contains(field))
    throw ScenarioError("missing potential spec 'potentials." + field + "'");
  const json& p = j[field];
  if (!p.contains("kind"))
    throw ScenarioError("potential '" + field + "' needs a 'kind'");
  std::string kind = p["kind"].get<std::string>();
  if (kind == "dual_table") {
    if (!p.contains("values") || !p["values"].is_array())
      throw ScenarioError("dual_table potential needs a 'values' array");
    Array v(geom->polytope.nodes());
    const auto& arr = p["values"];
    if (static_cast<int>(arr.size()) != geom->polytope.nodes())
      throw ScenarioError("dual_table size must equal n + 1 nodes");
    for (int i = 0; i < v.size(); ++i) {
      if (arr[i].is_null())
        v[i] = kInf;
      else
        v[i] = arr[i].get<double>();
    }
    return ToricPotential(geom, ExtGridFn(geom->polytope, std::move(v)));
  }
  double param = jget(p, "c", jget(p, "nu", 0.0));
  std::uint64_t seed = static_cast<std::uint64_t>(jget(p, "seed", 1.0));
  return zoo_make(geom, kind, param, seed);
}

struct TaskOutcome {
  bool pass = true;
  std::vector<std::string> lines;  // summary lines

  void check(const std::string& name, double residual, double tol) {
    bool ok = residual <= tol && std::isfinite(residual);
    pass = pass && ok;
    lines.push_back((ok ? "pass " : "FAIL ") + name + "  residual=" +
                    format_double(residual) + "  tol=" + format_double(tol));
  }
  void info(const std::string& s) { lines.push_back(s); }
};

void emit(const fs::path& dir, const Artifacts& artifacts, const TaskOutcome& outcome,
          long long wall_ms) {
  fs::create_directories(dir);
  for (const auto& [name, table] : artifacts)
    write_file((dir / name).string(), to_csv(table));
  std::string summary;
  for (const auto& l : outcome.lines) summary += l + "\n";
  summary += std::string("result: ") + (outcome.pass ? "pass" : "fail") + "\n";
  summary += "wall_ms: " + std::to_string(wall_ms) + "\n";
  write_file((dir / "summary.txt").string(), summary);
  std::cout << summary;
}

int run_scenario(const std::string& path) {
  std::ifstream is(path);
  if (!is) {
    std::cerr << "cannot open scenario file: " << path << "\n";
    return 2;
  }
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    std::cerr << "scenario parse error: " << e.what() << "\n";
    return 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  Artifacts artifacts;
  TaskOutcome outcome;
  fs::path out_dir = "out";
  try {
    if (jget_int(j, "schema_version", 1) != 1)
      throw ScenarioError("unsupported schema_version (expected 1)");
    if (!j.contains("task")) throw ScenarioError("missing 'task'");
    std::string task = j["task"].get<std::string>();
    json geo = j.value("geometry", json::object());
    int n = jget_int(geo, "n", 1024);
    double L = jget(geo, "window_l", 40.0);
    int m = jget_int(geo, "window_m", 4 * n);
    if (jget_int(geo, "dim", 1) != 1 && task != "verify_all")
      throw ScenarioError("scenario tasks run the dim-1 model");
    if (j.contains("out_dir")) out_dir = j["out_dir"].get<std::string>();

    json sched = j.value("schedules", json::object());
    json pots = j.value("potentials", json::object());
    json tols = j.value("tolerances", json::object());

    auto geom = ToricGeometry::make_dim1(n);
    Grid1D window = log_window(L, m);
    double tol_primal = jget(tols, "primal", kConstancyFactor * window.h());

    if (task == "segment") {
      ToricPotential a = parse_potential(pots, "phi0", geom);
      ToricPotential b = parse_potential(pots, "phi1", geom);
      std::vector<double> ts = uniform_samples(0.0, 1.0, jget_int(sched, "t_count", 33));
      GeodesicPath path = segment(a, b, ts, window);
      std::vector<double> prof = energy_profile(path);
      Table ep{{"t", "am", "am_chord_dev"}, {}, {}};
      for (std::size_t k = 0; k < ts.size(); ++k) {
        double lam = (ts[k] - ts.front()) / (ts.back() - ts.front());
        double chord = (1 - lam) * prof.front() + lam * prof.back();
        ep.rows.push_back({ts[k], prof[k], prof[k] - chord});
      }
      artifacts["energy_profile.csv"] = std::move(ep);
      Table q{{"a", "b", "inf_q", "sup_q"}, {}, {}};
      for (std::size_t ia = 0; ia < ts.size(); ++ia)
        for (std::size_t ib = ia + 1; ib < ts.size(); ++ib) {
          DiffQuotients dq = diff_quotients(path, ts[ib], ts[ia]);
          q.rows.push_back({ts[ib], ts[ia], dq.inf, dq.sup});
        }
      artifacts["quotients.csv"] = std::move(q);
      outcome.check("energy_linearity", max_chord_deviation(ts, prof),
                    jget(tols, "affinity", 5e-3));
      outcome.info("m=" + format_double(path.m) + " M=" + format_double(path.M));
    } else if (task == "ray") {
      ToricPotential phi = parse_potential(pots, "phi", geom);
      ToricPotential psi = parse_potential(pots, "psi", geom);
      std::vector<double> ts =
          uniform_samples(0.0, jget(sched, "t_max", 8.0), jget_int(sched, "t_count", 33));
      std::vector<double> ls = dyadic_schedule(1.0, jget(sched, "l_max", 1048576.0));
      RayApprox ray = build_ray(phi, psi, ls, ts, window, tol_primal);
      EnergyReport cr = c_of(psi, CMethod::energy_slope, phi, ls, window);
      double cpsi = *cr.c_energy_slope;
      double aphi = am(phi);
      Table ep{{"t", "am", "am_chord_dev"}, {}, {}};
      double law = 0.0;
      for (std::size_t k = 0; k < ts.size(); ++k) {
        double dev = ray.am_profile[k] - (aphi + cpsi * ts[k]);
        law = std::max(law, std::abs(dev));
        ep.rows.push_back({ts[k], ray.am_profile[k], dev});
      }
      artifacts["energy_profile.csv"] = std::move(ep);
      outcome.check("ray_monotone_family", ray.monotone_violation, kTolMonotone);
      outcome.check("ray_energy_law", law, jget(tols, "energy_law", 1e-2));
      outcome.info(std::string("constant: ") + (ray_constant(ray) ? "yes" : "no"));
      outcome.info("c_psi=" + format_double(cpsi) +
                   " monotone_gap=" + format_double(ray.monotone_gap));
    } else if (task == "envelope") {
      ToricPotential psi = parse_potential(pots, "psi", geom);
      ToricPotential phi = parse_potential(pots, "phi", geom);
      std::vector<double> cs = dyadic_schedule(1.0, jget(sched, "c_max", 64.0));
      EnvelopeResult env = p_bracket(psi, phi, cs, window);
      Table t{{"c", "gap_to_closed_form"}, {}, {}};
      for (double C : cs) {
        ToricPotential it = p_pair(psi, C, phi, window);
        t.rows.push_back({C, sup_dist(it, env.result, window)});
      }
      artifacts["envelope.csv"] = std::move(t);
      outcome.check("bracket_two_path", env.closed_form_gap, tol_primal);
      outcome.info("stabilization_c=" +
                   (env.stabilization_c ? format_double(*env.stabilization_c)
                                        : std::string("none")));
    } else if (task == "e_check") {
      ToricPotential psi = parse_potential(pots, "psi", geom);
      ToricPotential phi = pots.contains("phi") ? parse_potential(pots, "phi", geom)
                                                : zoo_zero(geom);
      ECheckReport r = e_check(psi, phi, window);
      outcome.check("envelope_characterization", r.verdict_ok ? 0.0 : 1.0, 0.5);
      outcome.info(std::string("in_E: ") + (r.in_e ? "yes" : "no") +
                   "  gap=" + format_double(r.gap));
    } else if (task == "rwn_compare") {
      ToricPotential phi = parse_potential(pots, "phi", geom);
      ToricPotential psi = parse_potential(pots, "psi", geom);
      std::vector<double> ts =
          uniform_samples(0.0, jget(sched, "t_max", 8.0), jget_int(sched, "t_count", 33));
      std::vector<double> ls = dyadic_schedule(1.0, jget(sched, "l_max", 1048576.0));
      std::vector<double> taus =
          uniform_samples(jget(sched, "tau_lo", -1.5), jget(sched, "tau_hi", 0.25),
                          jget_int(sched, "tau_count", std::max(65, n / 4 + 1)));
      RayApprox build = build_ray(phi, psi, ls, ts, window, tol_primal);
      RwnRay rwn = rwn_ray(phi, psi, taus, ts, window, dyadic_schedule(1.0, 64.0));
      RayDistance d = compare_rays(build.path, rwn.path);
      Table t{{"t", "gap"}, {}, {}};
      for (std::size_t k = 0; k < ts.size(); ++k)
        t.rows.push_back(
            {ts[k], (build.path.primals[k].v - rwn.path.primals[k].v).abs().maxCoeff()});
      artifacts["compare.csv"] = std::move(t);
      outcome.check("ray_equality", d.primal_gap, jget(tols, "compare", 2 * tol_primal));
    } else if (task == "verify_all") {
      VerifyParams vp;
      vp.n = n;
      vp.window_half = L;
      vp.window_cells = m;
      VerifyOutput vo = run_verify("all", vp);
      artifacts = std::move(vo.artifacts);
      for (const CheckResult& cr : vo.checks)
        outcome.check(cr.id, cr.residual, cr.tol);
    } else {
      throw ScenarioError("unknown task '" + task + "'");
    }
  } catch (const ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    // numeric non-convergence is a task failure, not a crash
    outcome.pass = false;
    outcome.info(std::string("task error: ") + e.what());
  }

  auto t1 = std::chrono::steady_clock::now();
  long long ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  emit(out_dir, artifacts, outcome, ms);
  return outcome.pass ? 0 : 1;
}

int run_verify_cmd(const std::string& suite, int n, double L, int m,
                   const std::string& out_dir) {
  if (suite != "all") {
    auto suites = verify_suites();
    if (std::find(suites.begin(), suites.end(), suite) == suites.end()) {
      std::cerr << "unknown suite '" << suite << "'\n";
      return 2;
    }
  }
  auto t0 = std::chrono::steady_clock::now();
  VerifyParams vp;
  vp.n = n;
  vp.window_half = L;
  vp.window_cells = m > 0 ? m : 4 * n;
  VerifyOutput vo = run_verify(suite, vp);
  auto t1 = std::chrono::steady_clock::now();
  long long ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();

  TaskOutcome outcome;
  for (const CheckResult& cr : vo.checks) {
    outcome.check(cr.id, cr.residual, cr.tol);
    if (!cr.note.empty()) outcome.info("  " + cr.id + ": " + cr.note);
  }
  emit(out_dir, vo.artifacts, outcome, ms);
  return vo.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toric pluripotential workbench"};
  app.require_subcommand(1);

  std::string scenario_path;
  CLI::App* run = app.add_subcommand("run", "run a JSON scenario file");
  run->add_option("file", scenario_path, "scenario file")->required();

  std::string suite = "all";
  int n = 1024;
  double L = 40.0;
  int m = 0;
  std::string out_dir = "out";
  CLI::App* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--suite", suite, "suite name or 'all'");
  verify->add_option("--n", n, "polytope cells");
  verify->add_option("--window", L, "window half-width");
  verify->add_option("--window-cells", m, "window cells (default 4n)");
  verify->add_option("--out", out_dir, "output directory");

  CLI::App* zoo = app.add_subcommand("zoo", "zoo utilities");
  CLI::App* zoo_list = zoo->add_subcommand("list", "list canonical potentials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return run_scenario(scenario_path);
    if (verify->parsed()) return run_verify_cmd(suite, n, L, m, out_dir);
    if (zoo->parsed() && zoo_list->parsed()) {
      for (const ZooEntry& e : zoo_catalog())
        std::cout << e.name << "  " << e.description << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
