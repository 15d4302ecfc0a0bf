#include "conrap/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "conrap/bench.hpp"
#include "conrap/generators.hpp"
#include "conrap/instance_io.hpp"
#include "conrap/kkt.hpp"

namespace conrap {

namespace {

nlohmann::json real_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  for (const auto& item : split_list(text)) {
    // Accept 2e6 style sizes as well as plain integers.
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size() || !(v >= 1) || v != std::floor(v) || v > 1e12) {
      throw std::invalid_argument("--n: bad size '" + item + "'");
    }
    sizes.push_back(static_cast<std::size_t>(v));
  }
  if (sizes.empty()) throw std::invalid_argument("--n: no sizes given");
  return sizes;
}

std::vector<Family> parse_families(const std::string& text) {
  if (text == "all") return all_families();
  std::vector<Family> families;
  for (const auto& item : split_list(text)) families.push_back(family_from_string(item));
  if (families.empty()) throw std::invalid_argument("--family: no family given");
  return families;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to --out when given, else to `out`.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
  file << text;
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct Options {
  std::string family;
  std::string n = "1000";
  std::uint64_t seed = 1;
  double b_fraction = 0.5;
  std::string algorithm = "auto";
  double gamma = 0.2;
  double eps = 1e-10;
  double feas_tol = 1e-9;
  int reps = 1;
  double timeout_s = 60.0;
  std::string out_path;
  std::string format = "json";
  std::string instance_path;
  std::string solution_path;
  std::string in_path;
  double tol = 1e-6;
  unsigned parallel = 1;
};

SolverConfig solver_config(const Options& o) {
  SolverConfig cfg;
  cfg.gamma = o.gamma;
  cfg.eps = o.eps;
  cfg.feas_tol = o.feas_tol;
  cfg.validate();
  return cfg;
}

ProblemInstance instance_from(const Options& o) {
  if (!o.instance_path.empty()) return load_instance(o.instance_path);
  if (o.family.empty()) throw std::invalid_argument("either --instance or --family is required");
  const auto sizes = parse_sizes(o.n);
  if (sizes.size() != 1) throw std::invalid_argument("--n: expected a single size");
  GeneratorSpec spec{family_from_string(o.family), sizes.front(), o.seed, o.b_fraction};
  spec.validate();
  return generate(spec);
}

int run_generate(const Options& o, std::ostream& out) {
  if (o.family.empty()) throw std::invalid_argument("--family is required");
  emit(instance_to_json(instance_from(o), 1) + "\n", o.out_path, out);
  return kExitOk;
}

int run_solve(const Options& o, std::ostream& out) {
  const auto instance = instance_from(o);
  const Method method = o.algorithm == "auto" ? primary_method_for(instance.constraint_kind())
                                              : method_from_string(o.algorithm);
  const auto report = solve_with(method, instance, solver_config(o));
  if (o.format == "csv") {
    std::ostringstream ss;
    ss << "i,x\n";
    for (std::size_t i = 0; i < report.x.size(); ++i) {
      ss << i << ',' << nlohmann::json(report.x[i]).dump() << '\n';
    }
    emit(ss.str(), o.out_path, out);
  } else {
    emit(report_to_json(report).dump(1) + "\n", o.out_path, out);
  }
  return report.status == SolveStatus::Infeasible ? kExitInfeasible : kExitOk;
}

int run_verify(const Options& o, std::ostream& out) {
  if (o.instance_path.empty() || o.solution_path.empty()) {
    throw std::invalid_argument("verify needs --instance and --solution");
  }
  const auto instance = load_instance(o.instance_path);
  const auto solution = nlohmann::json::parse(read_file(o.solution_path));
  const auto x = solution.at("x").get<std::vector<double>>();
  if (x.size() != instance.size()) throw std::invalid_argument("solution size does not match instance");
  // λ refers to the canonical (positive-coefficient) form that load_instance
  // returns, which is also what `solve --instance` reports.
  const double lambda = solution.at("lambda").get<double>();
  const auto kkt = kkt_check(instance, x, lambda, o.tol);
  emit(kkt_to_json(kkt).dump(1) + "\n", o.out_path, out);
  return kkt.pass ? kExitOk : kExitInfeasible;
}

int run_bench_cmd(const Options& o, std::ostream& out, std::ostream& err) {
  BenchOptions bo;
  bo.families = parse_families(o.family.empty() ? "all" : o.family);
  bo.sizes = parse_sizes(o.n);
  bo.reps = o.reps;
  bo.seed0 = o.seed;
  bo.timeout_s = o.timeout_s;
  bo.b_fraction = o.b_fraction;
  bo.kkt_tol = o.tol;
  bo.solver = solver_config(o);
  bo.parallel = o.parallel;
  const auto records = run_bench(bo);

  std::ostringstream ss;
  if (o.format == "csv") {
    write_bench_csv(ss, records);
  } else {
    ss << bench_to_json(records, 1) << '\n';
  }
  emit(ss.str(), o.out_path, out);

  err << "group,method,geomean_seconds,solved,total\n";
  for (const auto& row : timing_table(records, o.timeout_s)) {
    err << row.group << ',' << row.method << ',' << row.geometric_mean_seconds << ','
        << row.solved << ',' << row.total << '\n';
  }
  return kExitOk;
}

int run_profile(const Options& o, std::ostream& out) {
  if (o.in_path.empty()) throw std::invalid_argument("profile needs --in <bench file>");
  const auto text = read_file(o.in_path);
  std::vector<BenchRecord> records;
  if (ends_with(o.in_path, ".json")) {
    records = bench_from_json(text);
  } else {
    std::istringstream in(text);
    records = read_bench_csv(in);
  }
  const auto profile = performance_profile(records);
  if (o.format == "csv") {
    std::ostringstream ss;
    write_profile_csv(ss, profile);
    emit(ss.str(), o.out_path, out);
  } else {
    emit(profile_to_json(profile, 1) + "\n", o.out_path, out);
  }
  return kExitOk;
}

}  // namespace

nlohmann::json kkt_to_json(const KktResiduals& kkt) {
  return {{"stationarity", kkt.stationarity}, {"primal", kkt.primal},
          {"comp_slack", kkt.comp_slack},     {"box", kkt.box},
          {"mult_sign", kkt.mult_sign},       {"v_max", kkt.v_max},
          {"w_max", kkt.w_max},               {"scale", kkt.scale},
          {"pass", kkt.pass}};
}

nlohmann::json report_to_json(const SolveReport& report) {
  return {{"x", report.x},
          {"lambda", real_or_null(report.lambda)},
          {"status", to_string(report.status)},
          {"branch", to_string(report.branch)},
          {"iterations", report.iterations},
          {"objective", real_or_null(report.objective)},
          {"kkt", kkt_to_json(report.kkt)},
          {"wall_seconds", report.wall_seconds}};
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Separable convex resource allocation solver", "conrap"};
  app.require_subcommand(1);
  Options o;

  auto add_generator = [&](CLI::App* cmd) {
    cmd->add_option("--family", o.family, "commodity|quad_quad|portfolio|sampling|target_search|neg_entropy");
    cmd->add_option("--n", o.n, "number of variables (bench: comma list)");
    cmd->add_option("--seed", o.seed, "generator seed (bench: first seed)");
    cmd->add_option("--b-fraction", o.b_fraction, "placement of b inside its feasible range")
        ->check(CLI::Range(0.0, 1.0));
  };
  auto add_solver = [&](CLI::App* cmd) {
    cmd->add_option("--gamma", o.gamma, "safeguard constant in (0, 1/2)");
    cmd->add_option("--eps", o.eps, "angle interval tolerance");
    cmd->add_option("--feas-tol", o.feas_tol, "relative feasibility band");
  };
  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--out", o.out_path, "output file (default stdout)");
    cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* gen = app.add_subcommand("generate", "write a random instance as JSON");
  add_generator(gen);
  add_output(gen);

  auto* solve_cmd = app.add_subcommand("solve", "solve an instance and print the report");
  add_generator(solve_cmd);
  add_solver(solve_cmd);
  add_output(solve_cmd);
  solve_cmd->add_option("--instance", o.instance_path, "instance JSON file");
  solve_cmd->add_option("--algorithm", o.algorithm, "auto|algorithm1|algorithm2|dual_bisection_baseline")
      ->check(CLI::IsMember({"auto", "algorithm1", "algorithm2", "dual_bisection_baseline"}));

  auto* verify = app.add_subcommand("verify", "check a solution against the KKT system");
  verify->add_option("--instance", o.instance_path, "instance JSON file")->required();
  verify->add_option("--solution", o.solution_path, "JSON with fields x and lambda")->required();
  verify->add_option("--tol", o.tol, "residual tolerance");
  verify->add_option("--out", o.out_path, "output file (default stdout)");

  auto* bench = app.add_subcommand("bench", "time both methods on generated instances");
  add_generator(bench);
  add_solver(bench);
  add_output(bench);
  bench->add_option("--reps", o.reps, "instances per (family, n)")->check(CLI::PositiveNumber);
  bench->add_option("--timeout-s", o.timeout_s, "per-solve time cap")->check(CLI::PositiveNumber);
  bench->add_option("--tol", o.tol, "KKT tolerance for Optimal records");
  bench->add_option("--parallel", o.parallel, "worker threads over distinct instances")
      ->check(CLI::PositiveNumber);

  auto* profile = app.add_subcommand("profile", "performance profile of bench records");
  profile->add_option("--in", o.in_path, "bench output (.csv or .json)")->required();
  add_output(profile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitError;
  }

  try {
    if (gen->parsed()) return run_generate(o, out);
    if (solve_cmd->parsed()) return run_solve(o, out);
    if (verify->parsed()) return run_verify(o, out);
    if (bench->parsed()) return run_bench_cmd(o, out, err);
    if (profile->parsed()) return run_profile(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace conrap
