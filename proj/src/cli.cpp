#include "cavgrover/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cavgrover/experiments.hpp"
#include "cavgrover/propagator.hpp"
#include "cavgrover/pulse.hpp"
#include "cavgrover/text_format.hpp"

namespace cavgrover::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

void validate(const RunConfig& c) {
  const auto fail = [](const std::string& msg) { throw UsageError(msg); };
  if (c.n_atoms.empty()) fail("--n: at least one atom count required");
  for (int n : c.n_atoms)
    if (n < 2) fail("--n: atom count must be >= 2, got " + std::to_string(n));
  if (c.command != Command::Sweep && c.n_atoms.size() != 1)
    fail("--n: command " + std::string(command_name(c.command)) + " takes a single atom count");
  if (c.command == Command::Sweep) {
    if (c.n_atoms.size() < 2) fail("--n: sweep needs at least two atom counts");
    const auto [lo, hi] = std::minmax_element(c.n_atoms.begin(), c.n_atoms.end());
    if (*hi < 16 * *lo) fail("--n: sweep must span at least four octaves (max >= 16 * min)");
  }
  if (!(c.epsilon > 0.0 && c.epsilon <= 0.2))
    fail("--epsilon: " + format_real(c.epsilon) + " outside the admissible range (0, 0.2]");
  if (!(c.coupling_g >= 0.0)) fail("--g: must be >= 0 (0 selects 100 * Omega_peak / N)");
  if (!(c.delta >= 0.0)) fail("--delta: must be >= 0 (0 selects delta * duration = 1000)");
  if (c.steps < 0) fail("--steps: must be >= 0 (0 selects the automatic step count)");
  if (c.samples < 100) fail("--samples: schedule needs at least 100 samples");
  if (!(c.cutoff >= 3.0)) fail("--cutoff-c: must be >= 3");
  if (!(c.width > 0.0)) fail("--width: must be > 0");
  if (c.out_dir.empty()) fail("--out: empty output directory");
  if (c.initial != "uniform" && c.initial != "marked") fail("--initial: expected 'uniform' or 'marked'");
  if (c.omega_prime != "designed" && c.omega_prime != "off")
    fail("--omega-prime: expected 'designed' or 'off'");
  if (c.level == Level::Adiabatic3 && c.initial == "marked")
    fail("--initial: the marked state has no fixed adiabatic-basis representation");
}

// ---------------------------------------------------------------------------
// Output helpers

class OutputDir {
public:
  explicit OutputDir(const RunConfig& config) : config_(config), root_(config.out_dir) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec || !fs::is_directory(root_)) throw IoError("cannot create output directory '" + root_.string() + "'");
  }

  template <typename Writer>
  void text(const std::string& name, Writer&& writer) {
    std::ostringstream os;
    writer(os);
    put(name, os.str());
  }

  void json(const std::string& name, const ordered_json& body) {
    ordered_json doc;
    doc["config"] = config_json();
    for (const auto& [k, v] : body.items()) doc[k] = v;
    put(name, doc.dump(2) + "\n");
  }

  std::vector<std::string> header() const {
    std::vector<std::string> lines;
    for (const auto& l : config_.echo()) lines.push_back("config " + l);
    return lines;
  }

  ordered_json config_json() const {
    ordered_json c;
    for (const auto& l : config_.echo()) {
      const auto eq = l.find(" = ");
      c[l.substr(0, eq)] = l.substr(eq + 3);
    }
    return c;
  }

  const std::vector<std::string>& written() const { return written_; }

private:
  void put(const std::string& name, const std::string& content) {
    const auto path = root_ / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << content;
    f.close();
    if (!f) throw IoError("cannot write '" + path.string() + "'");
    written_.push_back(path.string());
  }

  const RunConfig& config_;
  fs::path root_;
  std::vector<std::string> written_;
};

ordered_json schedule_json(const PulseSchedule& s) {
  return {{"N", s.n_atoms},     {"epsilon", s.epsilon}, {"pulse", s.pulse_name}, {"omega_peak", s.peak},
          {"T", s.width},       {"c", s.cutoff},        {"t", s.grid},           {"omega", s.omega},
          {"omega_prime", s.omega_prime}, {"area", s.area}, {"theta", s.theta()}};
}

ordered_json trajectory_json(const Trajectory& traj, const PulseSchedule& schedule) {
  ordered_json j;
  j["level"] = std::string(level_name(traj.level));
  j["N"] = traj.n_atoms;
  j["steps"] = traj.steps;
  j["norm_drift"] = traj.norm_drift;
  j["t"] = traj.times;
  std::vector<double> om, omp, norms;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto s = schedule.at(traj.times[i]);
    om.push_back(s.omega);
    omp.push_back(s.omega_prime);
    norms.push_back(traj.states[i].norm());
  }
  j["omega"] = om;
  j["omega_prime"] = omp;
  ordered_json pops;
  for (const auto& l : traj.labels) pops[label_name(l)] = traj.population_series(l);
  j["populations"] = pops;
  j["norm"] = norms;
  if (!traj.adiabatic.empty()) {
    std::vector<double> p, z, m;
    for (const auto& a : traj.adiabatic) {
      p.push_back(a.plus);
      z.push_back(a.zero);
      m.push_back(a.minus);
    }
    j["adiabatic"] = {{"+", p}, {"0", z}, {"-", m}};
  }
  return j;
}

void write_summary(OutputDir& dir, const RunConfig& config, const std::vector<std::pair<std::string, std::string>>& kv,
                   const std::vector<std::string>& failures) {
  if (config.format == OutputFormat::Text) {
    dir.text("summary.txt", [&](std::ostream& os) {
      os << "# cavgrover " << command_name(config.command) << " summary\n";
      for (const auto& l : dir.header()) os << "# " << l << '\n';
      for (const auto& [k, v] : kv) os << k << " = " << v << '\n';
      os << "passed = " << (failures.empty() ? "true" : "false") << '\n';
      for (const auto& f : failures) os << "failure = " << f << '\n';
    });
  } else {
    ordered_json s;
    for (const auto& [k, v] : kv) s[k] = v;
    dir.json("summary.json", {{"summary", s}, {"passed", failures.empty()}, {"failures", failures}});
  }
}

void emit_schedule(OutputDir& dir, const RunConfig& config, const PulseSchedule& s) {
  if (config.format == OutputFormat::Text)
    dir.text("schedule.dat", [&](std::ostream& os) { write_schedule(os, s, dir.header()); });
  else
    dir.json("schedule.json", {{"schedule", schedule_json(s)}});
}

void emit_trajectory(OutputDir& dir, const RunConfig& config, const Trajectory& t, const PulseSchedule& s) {
  if (config.format == OutputFormat::Text)
    dir.text("trajectory.dat", [&](std::ostream& os) { write_trajectory(os, t, s, dir.header()); });
  else
    dir.json("trajectory.json", {{"trajectory", trajectory_json(t, s)}});
}

GaussianPulse base_pulse(const RunConfig& c) { return {1.0, c.width, 0.0, c.cutoff}; }

// ---------------------------------------------------------------------------
// Commands

int run_design(const RunConfig& c, OutputDir& dir) {
  const int n = c.n_atoms.front();
  const auto schedule = design_schedule(n, c.epsilon, base_pulse(c), c.samples);
  const auto adiabaticity = verify_adiabaticity(schedule, SystemParams<double>{n, 1.0, 0.0, true});
  std::vector<std::string> failures;
  const double closure = c.epsilon * schedule.total_area() - std::sqrt(n - 1.0);
  if (!(std::abs(closure) <= 1e-9)) failures.push_back("epsilon * area(T) differs from sqrt(N-1)");
  emit_schedule(dir, c, schedule);
  write_summary(dir, c,
                {{"duration", format_real(schedule.duration())},
                 {"omega_peak", format_real(schedule.peak)},
                 {"mean_amplitude_x_duration", format_real(schedule.total_area())},
                 {"eps_int_omega_prime", format_real(c.epsilon * schedule.omega_prime_area())},
                 {"max_adiabaticity_deviation", format_real(adiabaticity.max_deviation)}},
                failures);
  return failures.empty() ? kSuccess : kAssertionFailed;
}

int run_simulate(const RunConfig& c, OutputDir& dir) {
  const int n = c.n_atoms.front();
  auto schedule = design_schedule(n, c.epsilon, base_pulse(c), c.samples);
  if (c.omega_prime == "off") {
    auto designed = schedule;
    schedule = PulseSchedule::from_samples(n, c.epsilon, designed.grid, designed.omega,
                                           std::vector<double>(designed.size(), 0.0));
    schedule.pulse_name = designed.pulse_name;
    schedule.width = designed.width;
    schedule.cutoff = designed.cutoff;
  }
  SystemParams<double> params;
  params.n_atoms = n;
  params.coupling_g = c.coupling_g > 0.0 ? c.coupling_g : 100.0 * schedule.peak / n;
  params.delta = c.delta > 0.0 ? c.delta : 1e3 / schedule.duration();
  params.rwa = c.rwa;
  const auto psi0 = c.initial == "marked" ? marked_state<double>(c.level, n)
                                          : uniform_superposition<double>(c.level, n);
  const auto traj = c.steps > 0 ? propagate(c.level, params, schedule, psi0, c.steps)
                                : propagate_converged(c.level, params, schedule, psi0);
  std::vector<std::string> failures;
  if (!(traj.norm_drift <= 1e-9)) failures.push_back("norm drift " + format_real(traj.norm_drift) + " above 1e-9");
  emit_schedule(dir, c, schedule);
  emit_trajectory(dir, c, traj, schedule);
  std::vector<std::pair<std::string, std::string>> kv{{"level", std::string(level_name(c.level))},
                                                      {"G", format_real(params.coupling_g)},
                                                      {"delta", format_real(params.delta)},
                                                      {"steps", std::to_string(traj.steps)},
                                                      {"norm_drift", format_real(traj.norm_drift)}};
  for (std::size_t i = 0; i < traj.labels.size(); ++i)
    kv.emplace_back("final P[" + label_name(traj.labels[i]) + "]", format_real(traj.populations.back()[i]));
  write_summary(dir, c, kv, failures);
  return failures.empty() ? kSuccess : kAssertionFailed;
}

int run_figure3_command(const RunConfig& c, OutputDir& dir) {
  Figure3Options opt;
  opt.n_atoms = c.n_atoms.front();
  opt.epsilon = c.epsilon;
  opt.width = c.width;
  opt.cutoff = c.cutoff;
  opt.n_samples = c.samples;
  opt.steps = c.steps;
  const auto res = run_figure3(opt);
  emit_schedule(dir, c, res.schedule);
  emit_trajectory(dir, c, res.trajectory, res.schedule);
  write_summary(dir, c,
                {{"initial P_N", format_real(res.initial_marked)},
                 {"initial P_u", format_real(res.initial_unmarked)},
                 {"final P_N", format_real(res.final_marked)},
                 {"final P_u", format_real(res.final_unmarked)},
                 {"threshold 1-eps^2", format_real(res.threshold)},
                 {"omega_peak x T", format_real(res.schedule.peak * res.schedule.width)},
                 {"steps", std::to_string(res.trajectory.steps)}},
                res.failures);
  return res.passed ? kSuccess : kAssertionFailed;
}

int run_sweep(const RunConfig& c, OutputDir& dir) {
  SweepOptions opt;
  opt.n_samples = c.samples;
  const auto report = sweep_scaling(c.n_atoms, c.epsilon, gaussian_shape(c.cutoff), opt);
  if (c.format == OutputFormat::Text)
    dir.text("scaling.dat", [&](std::ostream& os) { write_scaling_table(os, report, dir.header()); });
  else
    dir.json("scaling.json", {{"scaling", to_json(report)}});
  write_summary(dir, c,
                {{"slope", format_real(report.fit.slope)},
                 {"intercept", format_real(report.fit.intercept)},
                 {"residual", format_real(report.fit.residual)}},
                report.failures);
  return report.passed ? kSuccess : kAssertionFailed;
}

int run_compare(const RunConfig& c, OutputDir& dir) {
  CompareOptions opt;
  opt.n_atoms = c.n_atoms.front();
  opt.epsilon = c.epsilon;
  opt.coupling_g = c.coupling_g;
  opt.delta = c.delta;
  opt.pulse = base_pulse(c);
  opt.n_samples = c.samples;
  opt.steps = c.steps;
  const auto report = compare_models(opt);
  std::vector<std::string> failures;
  if (!std::isnan(report.collective_vs_full) && !(report.collective_vs_full <= 1e-8))
    failures.push_back("full and collective trajectories differ by " + format_real(report.collective_vs_full));
  if (c.format == OutputFormat::Text)
    dir.text("compare.dat", [&](std::ostream& os) { write_comparison(os, report, dir.header()); });
  else
    dir.json("compare.json", {{"comparison", to_json(report)}});
  write_summary(dir, c,
                {{"effective_vs_collective", format_real(report.effective_vs_collective)},
                 {"rwa_fidelity_difference", format_real(report.rwa_fidelity_difference)},
                 {"collective_vs_full", format_real(report.collective_vs_full)}},
                failures);
  return failures.empty() ? kSuccess : kAssertionFailed;
}

}  // namespace

std::string_view command_name(Command command) {
  switch (command) {
    case Command::Design: return "design";
    case Command::Simulate: return "simulate";
    case Command::Sweep: return "sweep";
    case Command::Compare: return "compare";
    case Command::Figure3: return "figure3";
  }
  return "?";
}

std::vector<std::string> RunConfig::echo() const {
  std::vector<std::string> e{
      "command = " + std::string(command_name(command)),
      "n = " + join_ints(n_atoms),
      "epsilon = " + format_real(epsilon),
      "g = " + format_real(coupling_g),
      "delta = " + format_real(delta),
      std::string("rwa = ") + (rwa ? "true" : "false"),
      "steps = " + std::to_string(steps),
      "samples = " + std::to_string(samples),
      "cutoff-c = " + format_real(cutoff),
      "width = " + format_real(width),
      std::string("format = ") + (format == OutputFormat::Text ? "text" : "structured"),
  };
  if (command == Command::Simulate) {
    e.push_back("level = " + std::string(level_name(level)));
    e.push_back("initial = " + initial);
    e.push_back("omega-prime = " + omega_prime);
  }
  return e;
}

ParseOutcome parse_config(const std::vector<std::string>& args) {
  RunConfig cfg;
  std::vector<int> n_list;
  std::string format = "text";
  std::string level = "effective3";

  CLI::App app{"Adiabatic search with atoms in a cavity: pulse design and dynamics", "cavgrover"};
  app.set_config("--config", "", "Read options from an INI/TOML file (command-line flags take precedence)");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1, 1);
  app.fallthrough();

  app.add_option("--n", n_list, "Atom count N (comma-separated list for sweep)")->delimiter(',');
  app.add_option("--epsilon", cfg.epsilon, "Adiabaticity ratio epsilon in (0, 0.2]");
  app.add_option("--g", cfg.coupling_g, "Cavity coupling G (0: 100 * Omega_peak / N)");
  app.add_option("--delta", cfg.delta, "Marked-state shift delta (0: delta * duration = 1000)");
  app.add_flag("--rwa,!--no-rwa", cfg.rwa, "Resonant approximation on/off (default on)");
  app.add_option("--steps", cfg.steps, "Integration steps (0: automatic)");
  app.add_option("--samples", cfg.samples, "Schedule samples");
  app.add_option("--cutoff-c", cfg.cutoff, "Gaussian window half-width in units of T");
  app.add_option("--width", cfg.width, "Gaussian width T");
  app.add_option("--out", cfg.out_dir, "Output directory")->envname(kOutputEnv);
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--level", level, "Model for simulate")
      ->check(CLI::IsMember({"full", "collective5", "effective3", "adiabatic3"}));
  app.add_option("--initial", cfg.initial, "Initial state for simulate: uniform | marked");
  app.add_option("--omega-prime", cfg.omega_prime, "Omega' for simulate: designed | off");

  const std::pair<const char*, Command> commands[] = {
      {"design", Command::Design},   {"simulate", Command::Simulate}, {"sweep", Command::Sweep},
      {"compare", Command::Compare}, {"figure3", Command::Figure3},
  };
  const char* descriptions[] = {"Design the pulse pair and export the schedule",
                                "Propagate one model under the designed schedule",
                                "Duration-scaling sweep over N with a power-law fit",
                                "Compare the effective, collective and full models",
                                "Effective-model run with N = 8, epsilon = 0.05"};
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) subs.push_back(app.add_subcommand(commands[i].first, descriptions[i]));

  std::vector<std::string> argv_storage{"cavgrover"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  ParseOutcome outcome;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    outcome.message = app.help();
    outcome.exit_code = kSuccess;
    return outcome;
  } catch (const CLI::FileError& e) {
    outcome.message = std::string("config: ") + e.what();
    outcome.exit_code = kIoError;
    return outcome;
  } catch (const CLI::ParseError& e) {
    outcome.message = e.what();
    outcome.exit_code = kUsage;
    return outcome;
  }

  for (std::size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed()) cfg.command = commands[i].second;
  if (!n_list.empty())
    cfg.n_atoms = n_list;
  else if (cfg.command == Command::Sweep)
    cfg.n_atoms = {2, 8, 32, 128, 512, 2048};
  cfg.format = format == "structured" ? OutputFormat::Structured : OutputFormat::Text;
  cfg.level = parse_level(level);

  try {
    validate(cfg);
  } catch (const UsageError& e) {
    outcome.message = e.what();
    outcome.exit_code = kUsage;
    return outcome;
  }
  outcome.config = cfg;
  return outcome;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    OutputDir dir(config);
    dir.text("config.ini", [&](std::ostream& os) {
      for (const auto& l : config.echo()) os << l << '\n';
    });
    int code = kSuccess;
    switch (config.command) {
      case Command::Design: code = run_design(config, dir); break;
      case Command::Simulate: code = run_simulate(config, dir); break;
      case Command::Sweep: code = run_sweep(config, dir); break;
      case Command::Compare: code = run_compare(config, dir); break;
      case Command::Figure3: code = run_figure3_command(config, dir); break;
    }
    for (const auto& path : dir.written()) out << "wrote " << path << '\n';
    if (code == kAssertionFailed) {
      err << "cavgrover: " << command_name(config.command) << ": embedded check failed (see summary)\n";
    }
    return code;
  } catch (const UsageError& e) {
    err << "cavgrover: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "cavgrover: " << e.what() << '\n';
    return kIoError;
  } catch (const Error& e) {
    err << "cavgrover: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace cavgrover::cli
