#ifndef SHELLS_TOOLS_CLI_APP_HPP_
#define SHELLS_TOOLS_CLI_APP_HPP_

#include "shells/shells.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace shells::cli {

namespace fs = std::filesystem;

enum exit_code : int { success = 0, usage_or_io = 1, validation_failed = 2 };

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(fs::path const& path, std::string const& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write " + path.string());
  out << content;
  if (!out) throw io_error("write failed for " + path.string());
}

inline problem_spec load_problem(std::string const& path) { return parse_problem(read_file(path)); }

/// Rows of a CSV evaluated under `p`.
inline std::vector<candidate_solution> load_points(std::string const& path, problem_spec const& p) {
  std::istringstream in(read_file(path));
  std::vector<candidate_solution> out;
  for (auto const& x : read_csv_points(in, p.n)) out.push_back(evaluate(p, x));
  return out;
}

/**
 * "a:b" sets every interval to [a,b]; "a:b,c:d,..." gives one interval per
 * variable; a plain number widens every interval by that factor.
 */
inline std::vector<interval> parse_box_relaxation(std::string const& text, problem_spec const& p) {
  if (text.find(':') == std::string::npos) {
    double factor = 0.0;
    try {
      factor = std::stod(text);
    } catch (std::exception const&) {
      throw std::invalid_argument("--relax-box expects a factor or lo:hi pairs, got '" + text + "'");
    }
    return scaled_relaxation(p, factor, 1.0).box;
  }
  std::vector<interval> box;
  std::istringstream s(text);
  std::string part;
  while (std::getline(s, part, ',')) {
    auto const colon = part.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("malformed interval '" + part + "'");
    box.push_back({std::stod(part.substr(0, colon)), std::stod(part.substr(colon + 1)), false, false});
  }
  if (box.size() == 1) box.assign(p.n, box.front());
  if (box.size() != p.n) throw dimension_error(p.n, box.size());
  return box;
}

inline fs::path output_dir(std::string const& flag) {
  fs::path dir = flag;
  if (dir.empty()) {
    auto const* env = std::getenv("SHELLS_OUT_DIR");
    dir = env && *env ? env : "shells_out";
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw io_error("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

inline std::string dump(nlohmann::json const& j) { return j.dump(2) + "\n"; }

/// The arguments after the subcommand, without --out, for run.json.
inline std::vector<std::string> replay_args(std::vector<std::string> const& args) {
  std::vector<std::string> out;
  for (std::size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--out") {
      ++i;
      continue;
    }
    if (args[i].rfind("--out=", 0) == 0) continue;
    out.push_back(args[i]);
  }
  return out;
}

inline void write_descriptor(fs::path const& dir, std::vector<std::string> const& args) {
  nlohmann::json d;
  d["command"] = args.size() > 1 ? args[1] : "";
  d["args"] = replay_args(args);
  write_file(dir / "run.json", dump(d));
}

inline sampler_mode parse_mode(std::string const& m) {
  if (m == "evolutionary") return sampler_mode::evolutionary;
  if (m == "pure_random") return sampler_mode::pure_random;
  throw std::invalid_argument("unknown sampler mode '" + m + "'");
}

struct options {
  std::string problem;
  std::string out;
  std::uint64_t seed = 42;
  std::size_t jobs = 1;

  // derive / construct
  std::string relax_box = "1.5";
  double relax_constraints = 1.2;
  std::size_t budget = 100000;
  std::size_t population = 100;
  double mutation = 0.1;
  std::string sampler = "evolutionary";

  // validate
  std::string role;
  std::string set;
  std::string lower;
  bool strict_nadir = false;

  // construct
  std::string mode = "budget";
  std::size_t trials = 10000;
  std::string seeds;

  // oracle
  double step = 0.05;
  bool step_given = false;
  bool certify = false;
  double max_points = 1e7;
  bool relax_given = false;

  // invariance
  std::string replace;

  // bench
  std::size_t v = 100;
  double a = 3.0;
  std::size_t evaluations = 20000;

  // rerun
  std::string descriptor;
};

inline sampler_config sampler_from(options const& o) {
  sampler_config c;
  c.budget = o.budget;
  c.population = std::min(o.population, o.budget);
  c.mutation_scale = o.mutation;
  c.seed = o.seed;
  c.mode = parse_mode(o.sampler);
  return c;
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_derive(options const& o, std::vector<std::string> const& args, std::ostream& out) {
  auto const p = load_problem(o.problem);
  relaxation_descriptor r;
  r.box = parse_box_relaxation(o.relax_box, p);
  r.constraint_scale.assign(p.constraints.size(), o.relax_constraints);
  auto const cfg = sampler_from(o);
  auto const result = run_two_sided(p, r, cfg, o.jobs);

  auto const dir = output_dir(o.out);
  write_file(dir / "S_L.csv", to_csv(result.shell, p.n, p.k));
  write_file(dir / "S_L_relaxed.csv", to_csv(result.relaxed_shell, p.n, p.k));
  write_file(dir / "theta.csv", to_csv(result.theta.theta, p.n, p.k));
  nlohmann::json report;
  report["problem"] = p.name;
  report["relaxed_problem"] = to_json(result.relaxed);
  report["sampler"] = cfg.to_json();
  report["metrics"] = result.metrics_json();
  report["validation"] = result.report ? result.report->to_json() : nlohmann::json(nullptr);
  report["pass"] = result.pass();
  write_file(dir / "report.json", dump(report));
  write_descriptor(dir, args);

  out << "derive: |S_L| = " << result.shell.size() << ", |theta| = " << result.theta.theta.size() << ", "
      << (result.report ? (result.report->pass() ? "upper approximation valid" : "VALIDATION FAILED")
                        : "theta empty")
      << "\n";
  return result.pass() ? success : validation_failed;
}

inline int cmd_validate(options const& o, std::vector<std::string> const& args, std::ostream& out) {
  auto const p = load_problem(o.problem);
  auto const role = parse_role(o.role);
  auto const set = load_points(o.set, p);
  check_options opt;
  opt.strict_nadir = o.strict_nadir;
  nlohmann::json report;
  bool pass = false;
  switch (role) {
    case shell_role::lower_shell: {
      auto r = check_lower_shell(set, p, opt);
      report = r.to_json();
      pass = r.pass();
      break;
    }
    case shell_role::upper_approximation: {
      if (o.lower.empty()) throw std::invalid_argument("--lower is required for upper_approximation");
      auto const lower = load_points(o.lower, p);
      auto r = check_upper_approximation(set, lower, p, opt);
      report = r.to_json();
      pass = r.pass();
      break;
    }
    case shell_role::upper_shell: {
      auto const oracle = grid_enumerate(p, o.step, o.max_points);
      opt.tolerance = oracle.tau;
      auto r = check_upper_shell_oracle(set, oracle.efficient_set, p, opt);
      report = r.to_json();
      report["oracle"] = oracle.to_json();
      pass = r.pass();
      break;
    }
  }
  auto const dir = output_dir(o.out);
  write_file(dir / "report.json", dump(report));
  write_descriptor(dir, args);
  out << "validate " << o.role << ": " << (pass ? "pass" : "FAIL") << " (" << set.size() << " elements)\n";
  return pass ? success : validation_failed;
}

inline std::vector<candidate_solution> construction_seeds(options const& o, problem_spec const& p,
                                                          std::optional<grid_oracle> const& oracle) {
  if (!o.seeds.empty()) return load_points(o.seeds, p);
  if (oracle) return oracle->efficient_set;
  return sample_lower_shell(p, sampler_from(o));
}

inline int cmd_construct(options const& o, std::vector<std::string> const& args, std::ostream& out) {
  auto const p = load_problem(o.problem);
  shift_schedule schedule;
  std::optional<grid_oracle> oracle;
  if (p.binary || o.step_given) oracle = grid_enumerate(p, o.step, o.max_points);
  auto const seeds = construction_seeds(o, p, oracle);

  auto const dir = output_dir(o.out);
  nlohmann::json report;
  report["problem"] = p.name;
  report["mode"] = o.mode;
  report["seeds"] = seeds.size();
  report["seed_source"] = !o.seeds.empty() ? "file" : oracle ? "oracle_efficient_set" : "sampler";
  std::vector<candidate_solution> shell;
  bool refused = false;

  if (o.mode == "budget") {
    auto c = construct_upper_shell_budget(p, seeds, schedule, o.seed, o.trials);
    report["generated"] = c.generated;
    if (c.refused()) {
      refused = true;
      report["refusal"] = c.refusal->to_json();
    } else {
      shell = c.candidates();
    }
  } else if (o.mode == "shift") {
    try {
      auto candidates = shift_candidates(seeds, p, schedule, o.seed, o.trials);
      report["generated"] = candidates.size();
      dominator_index<candidate_solution> const dominators(seeds);
      auto const nad = nadir(seeds);
      std::vector<candidate_solution> kept;
      for (auto& c : candidates) {
        auto y = objective_span(c.candidate);
        if (!dominators.find(y) && dominated_by(nad.values(), y)) kept.push_back(std::move(c.candidate));
      }
      shell = prune_to_antichain(std::move(kept));
    } catch (precondition_error const& e) {
      refused = true;
      report["refusal"] = {{"reason", e.what()}, {"subject", "objectives"}, {"witness", nullptr}};
    }
  } else {
    throw std::invalid_argument("--mode must be budget or shift");
  }

  bool pass = !refused;
  if (!refused && !shell.empty()) {
    if (oracle) {
      check_options opt;
      opt.tolerance = oracle->tau;
      auto r = check_upper_shell_oracle(shell, oracle->efficient_set, p, opt);
      auto s = check_strict_outer<candidate_solution, objective_vector>(shell, oracle->front, oracle->tau);
      report["validation"] = r.to_json();
      report["strict_outer"] = s.to_json();
      report["oracle"] = oracle->to_json();
      pass = r.pass();
    } else {
      auto r = check_upper_approximation(shell, seeds, p);
      report["validation"] = r.to_json();
      pass = r.pass();
    }
  }
  report["size"] = shell.size();
  report["pass"] = pass;
  write_file(dir / (o.mode == "budget" ? "S_U.csv" : "candidates.csv"), to_csv(shell, p.n, p.k));
  write_file(dir / "report.json", dump(report));
  write_descriptor(dir, args);
  if (refused) {
    out << "construct: refused (" << report["refusal"]["reason"].get<std::string>() << ")\n";
  } else {
    out << "construct: " << shell.size() << " elements, " << (pass ? "valid" : "VALIDATION FAILED") << "\n";
  }
  return pass ? success : validation_failed;
}

inline int cmd_oracle(options const& o, std::vector<std::string> const& args, std::ostream& out) {
  auto const p = load_problem(o.problem);
  auto const oracle = grid_enumerate(p, o.step, o.max_points);
  auto const dir = output_dir(o.out);
  write_file(dir / "front.csv", to_csv(oracle.efficient_set, p.n, p.k));
  write_file(dir / "oracle.json", dump(oracle.to_json()));
  int code = success;
  if (o.certify) {
    relaxation_descriptor r;
    if (o.relax_given) r.box = parse_box_relaxation(o.relax_box, p);
    r.constraint_scale.assign(p.constraints.size(), o.relax_constraints);
    auto const cert = certify_no_upper_shell(p, r, o.step, o.max_points);
    write_file(dir / "certificate.json", dump(cert.to_json()));
    out << "oracle: |N_grid| = " << oracle.efficient_set.size() << "; certificate "
        << (cert.granted() ? "granted" : "refused") << " (" << cert.outside_points << " outside points, "
        << cert.survivor_count << " survivors)\n";
    if (!cert.granted()) code = validation_failed;
  } else {
    out << "oracle: |N_grid| = " << oracle.efficient_set.size() << " of " << oracle.lattice_points
        << " lattice points\n";
  }
  write_descriptor(dir, args);
  return code;
}

inline int cmd_invariance(options const& o, std::vector<std::string> const& args, std::ostream& out) {
  auto const p = load_problem(o.problem);
  auto const eq = o.replace.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("--replace expects l=EXPR");
  auto const l = std::stoul(o.replace.substr(0, eq));
  if (l < 1 || l > p.k) throw std::invalid_argument("--replace objective index out of range");
  auto const q = replace_objective(p, l - 1, expression::parse(o.replace.substr(eq + 1), p.n));

  auto const order = expression_order_probe(p.objectives[l - 1], q.objectives[l - 1], p.box, o.trials, o.seed);
  auto const agreement = dominance_agreement(p, q, o.trials, o.seed + 1);
  nlohmann::json report;
  report["objective"] = l;
  report["replacement"] = q.objectives[l - 1].to_string();
  report["order_probe"] = order.to_json();
  report["dominance_agreement"] = agreement.to_json();
  bool pass = order.same_order() && agreement.disagreements == 0;
  if (!o.set.empty()) {
    auto const role = parse_role(o.role.empty() ? "lower_shell" : o.role);
    auto const set = load_points(o.set, p);
    std::vector<candidate_solution> reference;
    if (!o.lower.empty()) reference = load_points(o.lower, p);
    auto const inv = check_invariance(set, role, p, q, reference);
    report["shell_invariance"] = inv.to_json();
    pass = pass && inv.pass();
  }
  report["pass"] = pass;
  auto const dir = output_dir(o.out);
  write_file(dir / "report.json", dump(report));
  write_descriptor(dir, args);
  out << "invariance: order agreement " << order.agreement() << ", dominance agreement " << agreement.agreement()
      << (pass ? ", pass" : ", FAIL") << "\n";
  return pass ? success : validation_failed;
}

inline int cmd_bench(options const& o, std::vector<std::string> const& args, std::ostream& out) {
  auto const timing = geud_timing(o.v, o.a, o.evaluations, o.seed);
  auto const order = geud_order_probe(o.v, o.a, o.trials, o.seed);
  nlohmann::json report;
  report["timing"] = timing.to_json();
  report["order_probe"] = order.to_json();
  report["note"] = "informational; timings depend on hardware";
  auto const dir = output_dir(o.out);
  write_file(dir / "bench.json", dump(report));
  write_descriptor(dir, args);
  out << "bench: power/linear time ratio " << timing.ratio() << " (reference 23), order agreement "
      << order.agreement() << "\n";
  return success;
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

inline int cmd_rerun(options const& o, std::ostream& out, std::ostream& err) {
  auto const d = nlohmann::json::parse(read_file(o.descriptor));
  std::vector<std::string> args{"shells", d.at("command").get<std::string>()};
  for (auto const& a : d.at("args")) args.push_back(a.get<std::string>());
  if (!o.out.empty()) {
    args.push_back("--out");
    args.push_back(o.out);
  }
  return run(args, out, err);
}

// ---------------------------------------------------------------------------

/// Entry point; `args[0]` is the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-sided Pareto front approximations: lower shells, upper shells and oracles"};
  app.require_subcommand(1);
  options o;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--out", o.out, "Output directory (default: $SHELLS_OUT_DIR or ./shells_out)");
    c->add_option("--seed", o.seed, "Random seed");
  };
  auto add_sampler = [&](CLI::App* c) {
    c->add_option("--budget", o.budget, "Sampler evaluation budget");
    c->add_option("--population", o.population, "Sampler population size");
    c->add_option("--mutation-scale", o.mutation, "Mutation scale as a fraction of box width");
    c->add_option("--sampler", o.sampler, "evolutionary or pure_random");
  };

  auto* derive = app.add_subcommand("derive", "Lower shell plus upper approximation via relaxation");
  derive->add_option("--problem", o.problem, "Problem document")->required();
  derive->add_option("--relax-box", o.relax_box, "Box widening factor, or lo:hi[,lo:hi...]");
  derive->add_option("--relax-constraints", o.relax_constraints, "Constraint bound scale rho >= 1");
  derive->add_option("--jobs", o.jobs, "Worker threads");
  add_sampler(derive);
  add_common(derive);

  auto* validate = app.add_subcommand("validate", "Check a point set against a shell definition");
  validate->add_option("--problem", o.problem, "Problem document")->required();
  validate->add_option("--role", o.role, "lower_shell, upper_shell or upper_approximation")->required();
  validate->add_option("--set", o.set, "CSV with x1..xn columns")->required();
  validate->add_option("--lower", o.lower, "Lower shell CSV (upper_approximation)");
  validate->add_option("--step", o.step, "Oracle grid step (upper_shell)");
  validate->add_option("--max-points", o.max_points, "Oracle lattice size guard");
  validate->add_flag("--strict-nadir", o.strict_nadir, "Require f(a) above the nadir in every component");
  add_common(validate);

  auto* construct = app.add_subcommand("construct", "Upper shell by upward shifts of feasible seeds");
  construct->add_option("--problem", o.problem, "Problem document")->required();
  construct->add_option("--mode", o.mode, "budget or shift");
  construct->add_option("--trials", o.trials, "Monotonicity probe trials");
  construct->add_option("--seeds", o.seeds, "Seed CSV (default: exact efficient set for binary problems, else sampler)");
  construct->add_option("--step", o.step, "Grid oracle step for validation")->each([&](std::string const&) {
    o.step_given = true;
  });
  construct->add_option("--max-points", o.max_points, "Oracle lattice size guard");
  add_sampler(construct);
  add_common(construct);

  auto* oracle = app.add_subcommand("oracle", "Grid or exhaustive enumeration of the efficient set");
  oracle->add_option("--problem", o.problem, "Problem document")->required();
  oracle->add_option("--step", o.step, "Grid step");
  oracle->add_option("--relax-box", o.relax_box, "Relaxed box for the certificate: factor or lo:hi[,lo:hi...]")
      ->each([&](std::string const&) { o.relax_given = true; });
  oracle->add_option("--relax-constraints", o.relax_constraints, "Constraint bound scale for the certificate");
  oracle->add_flag("--certify-no-upper-shell", o.certify, "Test every outside lattice point against US-4/US-5");
  oracle->add_option("--max-points", o.max_points, "Lattice size guard");
  add_common(oracle);

  auto* invariance = app.add_subcommand("invariance", "Order-preserving objective replacement");
  invariance->add_option("--problem", o.problem, "Problem document")->required();
  invariance->add_option("--replace", o.replace, "l=EXPR, 1-based, in maximization sense")->required();
  invariance->add_option("--trials", o.trials, "Sampled pairs");
  invariance->add_option("--set", o.set, "Optional shell CSV to validate under both problems");
  invariance->add_option("--role", o.role, "Role of --set (default lower_shell)");
  invariance->add_option("--lower", o.lower, "Reference set for upper roles");
  add_common(invariance);

  auto* bench = app.add_subcommand("bench", "Time the power-mean gEUD against the arithmetic mean");
  bench->add_option("--v", o.v, "Dose vector length");
  bench->add_option("--a", o.a, "gEUD exponent");
  bench->add_option("--evaluations", o.evaluations, "Evaluations per form");
  bench->add_option("--trials", o.trials, "Order probe pairs");
  add_common(bench);

  auto* rerun = app.add_subcommand("rerun", "Repeat a run from its run.json");
  rerun->add_option("--descriptor", o.descriptor, "run.json")->required();
  rerun->add_option("--out", o.out, "Output directory");

  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (CLI::ParseError const& e) {
    return app.exit(e, out, err) == 0 ? success : usage_or_io;
  }

  try {
    if (*derive) return cmd_derive(o, args, out);
    if (*validate) return cmd_validate(o, args, out);
    if (*construct) return cmd_construct(o, args, out);
    if (*oracle) return cmd_oracle(o, args, out);
    if (*invariance) return cmd_invariance(o, args, out);
    if (*bench) return cmd_bench(o, args, out);
    if (*rerun) return cmd_rerun(o, out, err);
  } catch (std::exception const& e) {
    err << "error: " << e.what() << "\n";
    return usage_or_io;
  }
  return usage_or_io;
}

}  // namespace shells::cli

#endif  // SHELLS_TOOLS_CLI_APP_HPP_
