#include "heun/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "heun/elliptic.hpp"
#include "heun/errors.hpp"
#include "heun/models.hpp"

namespace heun {

namespace {

using ordered_json = nlohmann::ordered_json;

const std::vector<std::string> kCheckNames{
    "algebra", "conservation", "quartic", "invariant_match", "elementary", "closed_form"};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_real(const std::string& field, const std::string& text) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(field, "'" + text + "' is not a real number");
  }
  return v;
}

std::vector<double> parse_reals(const std::string& field, const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : split(text, ',')) out.push_back(parse_real(field, item));
  return out;
}

std::uint64_t parse_seed(const std::string& field, const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(field, "'" + text + "' is not a non-negative integer");
  }
  return v;
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

ordered_json tau_json(const PencilCoefficients& tau) {
  ordered_json arr = ordered_json::array();
  for (double t : tau.as_array()) arr.push_back(t);
  return arr;
}

bool wants(const RunConfig& cfg, const std::string& check) {
  return std::find(cfg.checks.begin(), cfg.checks.end(), "all") != cfg.checks.end() ||
         std::find(cfg.checks.begin(), cfg.checks.end(), check) != cfg.checks.end();
}

void ensure_out_dir(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw ConfigError("out_dir", "cannot create " + cfg.out_dir.string());
}

void check_initial_admissible(const ModelSpec& model, const PhasePoint& x0) {
  if (model.guard) {
    const std::string violation = model.guard(x0);
    if (!violation.empty()) throw ConfigError("initial", violation);
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  bool have_model = false;
  bool have_tau = false;
  bool have_initial = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::string stripped = trim(line.substr(0, line.find('#')));
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(stripped, "expected key=value");
    }
    std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.starts_with("params.")) key = key.substr(7);

    if (key == "model") {
      cfg.model = value;
      have_model = true;
    } else if (key == "beta" || key == "beta0" || key == "beta1" || key == "beta2") {
      cfg.params[key] = parse_real(key, value);
    } else if (key == "tau") {
      const std::vector<double> t = parse_reals(key, value);
      if (t.size() != 5) {
        throw ConfigError("tau", "expected 5 entries [tau0,tau1,tau2,tau3,tau4], got " +
                                     std::to_string(t.size()));
      }
      cfg.tau = PencilCoefficients::from_array({t[0], t[1], t[2], t[3], t[4]});
      have_tau = true;
    } else if (key == "initial") {
      cfg.initial = parse_reals(key, value);
      have_initial = true;
    } else if (key == "t_end") {
      cfg.integrator.t_end = parse_real(key, value);
    } else if (key == "dt_out") {
      cfg.integrator.dt_out = parse_real(key, value);
    } else if (key == "rtol") {
      cfg.integrator.rtol = parse_real(key, value);
    } else if (key == "atol") {
      cfg.integrator.atol = parse_real(key, value);
    } else if (key == "max_steps") {
      cfg.integrator.max_steps = static_cast<std::int64_t>(parse_seed(key, value));
    } else if (key == "seed") {
      cfg.seed = parse_seed(key, value);
    } else if (key == "n_points") {
      cfg.n_points = static_cast<int>(parse_seed(key, value));
    } else if (key == "checks") {
      cfg.checks = split(value, ',');
      for (const std::string& c : cfg.checks) {
        if (c != "all" &&
            std::find(kCheckNames.begin(), kCheckNames.end(), c) == kCheckNames.end()) {
          throw ConfigError("checks", "unknown check '" + c + "'");
        }
      }
    } else if (key == "out_dir") {
      cfg.out_dir = value;
    } else if (key == "corrupt_alpha00") {
      cfg.corrupt_alpha00 = parse_real(key, value);
    } else if (key.starts_with("tol.")) {
      const std::string which = key.substr(4);
      Tolerances& t = cfg.tolerances;
      double* slot = which == "algebra"        ? &t.algebra
                     : which == "trajectory"   ? &t.trajectory
                     : which == "fit"          ? &t.fit
                     : which == "invariant"    ? &t.invariant
                     : which == "closed_form"  ? &t.closed_form
                     : which == "elementary"   ? &t.elementary
                     : which == "conservation" ? &t.conservation
                                               : nullptr;
      if (slot == nullptr) throw ConfigError(key, "unknown tolerance");
      *slot = parse_real(key, value);
    } else {
      throw ConfigError(key, "unknown key");
    }
  }

  if (!have_model) throw ConfigError("model", "missing");
  if (cfg.model != kPoeschlTeller && cfg.model != kGyrostat && cfg.model != kA1) {
    throw ConfigError("model", "unknown model '" + cfg.model +
                                   "' (expected poeschl_teller, zv_gyrostat or a1)");
  }
  if (!have_tau) throw ConfigError("tau", "missing");
  if (!have_initial) throw ConfigError("initial", "missing");
  const std::size_t dim = cfg.model == kGyrostat ? 3 : 2;
  if (cfg.initial.size() != dim) {
    throw ConfigError("initial", "expected " + std::to_string(dim) +
                                     " coordinates for " + cfg.model + ", got " +
                                     std::to_string(cfg.initial.size()));
  }
  if (cfg.model == kGyrostat && cfg.params.count("beta") == 0) {
    throw ConfigError("beta", "missing for zv_gyrostat");
  }
  try {
    cfg.integrator.validate();
  } catch (const PreconditionError& e) {
    const std::string msg = e.what();
    throw ConfigError(msg.substr(0, msg.find(':')), msg.substr(msg.find(':') + 2));
  }
  try {
    cfg.tau.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError("tau", e.what());
  }
  if (cfg.n_points < 1) throw ConfigError("n_points", "must be >= 1");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void apply_environment(RunConfig& cfg) {
  if (const char* env = std::getenv("HEUN_PENCIL_SEED"); env != nullptr && *env != '\0') {
    cfg.seed = parse_seed("HEUN_PENCIL_SEED", env);
  }
}

PhasePoint initial_point(const RunConfig& cfg) {
  try {
    if (cfg.model == kGyrostat) {
      return PhasePoint::su2(cfg.initial.at(0), cfg.initial.at(1), cfg.initial.at(2));
    }
    return PhasePoint::canonical(cfg.initial.at(0), cfg.initial.at(1));
  } catch (const std::exception& e) {
    throw ConfigError("initial", e.what());
  }
}

ModelSpec model_from_config(const RunConfig& cfg) {
  const PhasePoint x0 = initial_point(cfg);
  ModelSpec model;
  try {
    model = build_model(cfg.model, cfg.params, cfg.tau, x0);
  } catch (const PreconditionError& e) {
    throw ConfigError("model", e.what());
  }
  model.phi.alpha[0][0] += cfg.corrupt_alpha00;
  check_initial_admissible(model, x0);
  return model;
}

Trajectory run_simulate(const RunConfig& cfg) {
  const ModelSpec model = model_from_config(cfg);
  const PhasePoint x0 = initial_point(cfg);
  ensure_out_dir(cfg);
  const Trajectory traj = integrate_flow(model, x0, cfg.integrator);

  std::string csv;
  const bool su2 = model.kind == PhaseKind::SU2;
  csv += su2 ? "t,s1,s2,s3,X,Y,Z,W,Q,S2\n" : "t,q,p,X,Y,Z,W,Q\n";
  const std::vector<const std::vector<double>*> columns{
      &traj.at("X"), &traj.at("Y"), &traj.at("Z"), &traj.at("W"), &traj.at("Q")};
  for (std::size_t i = 0; i < traj.size(); ++i) {
    csv += format_double(traj.times[i]);
    for (std::size_t k = 0; k < traj.states[i].dim(); ++k) {
      csv += ',';
      csv += format_double(traj.states[i][k]);
    }
    for (const auto* col : columns) {
      csv += ',';
      csv += format_double((*col)[i]);
    }
    if (su2) {
      csv += ',';
      csv += format_double(traj.at("S2")[i]);
    }
    csv += '\n';
  }
  write_atomically(cfg.out_dir / "trajectory.csv", csv);

  const double w0 = traj.at("W").front();
  const DynamicsClass cls = classify_dynamics(
      assemble_quartic(pi_polynomials(model.tau, model.phi, Variable::X), w0));
  ordered_json summary;
  summary["model"] = model.name;
  summary["tau"] = tau_json(model.tau);
  summary["w0"] = w0;
  ordered_json drift = ordered_json::object();
  for (const auto& [label, value] : traj.drift) drift[label] = value;
  summary["conservation_drift"] = drift;
  summary["classification"] = to_string(cls.kind);
  write_atomically(cfg.out_dir / "summary.json", summary.dump(2) + "\n");
  return traj;
}

VerificationReport run_verify(const RunConfig& cfg) {
  const ModelSpec model = model_from_config(cfg);
  const PhasePoint x0 = initial_point(cfg);
  ensure_out_dir(cfg);
  const Tolerances& tol = cfg.tolerances;

  VerificationReport report;
  report.model = model.name;
  report.tau = model.tau;
  report.seed = cfg.seed;
  auto append = [&report](const std::vector<CheckResult>& more) {
    report.checks.insert(report.checks.end(), more.begin(), more.end());
  };

  if (wants(cfg, "algebra")) append(check_algebra(model, cfg.n_points, cfg.seed, tol));

  const bool need_flow = wants(cfg, "conservation") || wants(cfg, "quartic") ||
                         wants(cfg, "elementary") || wants(cfg, "closed_form") ||
                         wants(cfg, "invariant_match");
  if (need_flow) {
    const Trajectory traj = integrate_flow(model, x0, cfg.integrator);
    const double w0 = traj.at("W").front();
    if (wants(cfg, "conservation")) append(check_conservation(traj, tol));
    if (wants(cfg, "quartic")) {
      for (Variable v : {Variable::X, Variable::Y}) {
        const QuarticTrajectoryCheck qc = check_quartic_trajectory(traj, model, v, tol);
        append({qc.residual, qc.fit});
      }
    }
    if (wants(cfg, "invariant_match")) append({check_invariant_match(model, w0, tol)});
    if (wants(cfg, "elementary")) {
      for (Variable v : {Variable::X, Variable::Y}) {
        const std::string name = std::string("elementary_") + (v == Variable::X ? "x" : "y");
        const DynamicsClass cls = classify_dynamics(
            assemble_quartic(pi_polynomials(model.tau, model.phi, v), w0));
        if (cls.kind != DynamicsClass::Kind::Elementary) {
          append({skipped_check(name, tol.elementary, "not-elementary")});
          continue;
        }
        try {
          append({make_check(name, fit_elementary(traj, model, v).residual,
                             tol.elementary)});
        } catch (const FitError&) {
          append({make_check(name, std::numeric_limits<double>::infinity(),
                             tol.elementary)});
        }
      }
    }
    if (wants(cfg, "closed_form")) {
      for (Variable v : {Variable::X, Variable::Y}) {
        append({compare_closed_form(traj, model, v, cfg.integrator, tol)});
      }
    }
  }

  ordered_json out;
  out["model"] = report.model;
  out["tau"] = tau_json(report.tau);
  out["seed"] = report.seed;
  ordered_json checks = ordered_json::array();
  for (const CheckResult& c : report.checks) {
    ordered_json entry;
    entry["name"] = c.name;
    entry["max_residual"] = c.max_residual;
    entry["tolerance"] = c.tolerance;
    entry["pass"] = c.pass;
    entry["status"] = c.status;
    checks.push_back(entry);
  }
  out["checks"] = checks;
  write_atomically(cfg.out_dir / "report.json", out.dump(2) + "\n");
  return report;
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Classical Leonard pairs, Heun pencils and their elliptic flows"};
  app.require_subcommand(1);
  std::string sim_config;
  std::string verify_config;
  auto* simulate = app.add_subcommand("simulate", "integrate the flow of W and write trajectory.csv");
  simulate->add_option("--config", sim_config, "key=value run configuration")->required();
  auto* verify = app.add_subcommand("verify", "run the verification checks and write report.json");
  verify->add_option("--config", verify_config, "key=value run configuration")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) {
      RunConfig cfg = load_config(sim_config);
      apply_environment(cfg);
      const Trajectory traj = run_simulate(cfg);
      std::cout << "wrote " << traj.size() << " samples to "
                << (cfg.out_dir / "trajectory.csv").string() << "\n";
      for (const auto& [label, drift] : traj.drift) {
        std::cout << "  drift " << label << " = " << format_double(drift) << "\n";
      }
      return 0;
    }
    RunConfig cfg = load_config(verify_config);
    apply_environment(cfg);
    const VerificationReport report = run_verify(cfg);
    for (const CheckResult& c : report.checks) {
      std::cout << (c.skipped() ? "SKIP" : c.pass ? "PASS" : "FAIL") << "  " << c.name
                << "  residual=" << format_double(c.max_residual)
                << "  tol=" << format_double(c.tolerance);
      if (c.skipped()) std::cout << "  (" << c.status << ")";
      std::cout << "\n";
    }
    return report.passed() ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const IntegrationError& e) {
    std::cerr << "integration failed at t = " << format_double(e.time()) << ": "
              << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace heun
