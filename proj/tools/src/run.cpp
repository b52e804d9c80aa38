#include "socv_cli/run.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "socv/csv_io.hpp"
#include "socv/errors.hpp"
#include "socv/problem_io.hpp"
#include "socv/registry.hpp"
#include "socv/report.hpp"

namespace socv::cli {
namespace {

constexpr int kUsage = 3;

struct Config {
  std::string problem;
  std::string trajectory;
  int grid = 1000;
  std::optional<double> T;
  double tol = 1e-8;
  double feas_tol = 1e-6;
  std::string mode = "full";
  std::string sufficiency = "subspace";
  int samples = 1000;
  std::uint64_t seed = 1;
  std::string out;
  std::string csv;
  bool text = false;
};

bool is_registry_name(const std::string& s) {
  for (const auto& n : registry_names()) {
    if (n == s) return true;
  }
  return false;
}

void write_csv_series(const std::string& dir, const Trajectory& traj, const ConditionReport& r) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  write_trajectory_csv((fs::path(dir) / "trajectory.csv").string(), traj);
  for (std::size_t i = 0; i < r.vertices.size(); ++i) {
    write_multiplier_files((fs::path(dir) / ("multiplier_" + std::to_string(i) + ".csv")).string(), traj.grid,
                           r.vertices[i].lambda);
  }
  auto dump = [&](const std::string& name, const GohDirection& d) {
    std::ofstream os(fs::path(dir) / name);
    if (!os) throw std::runtime_error("cannot write " + name);
    write_goh_direction_csv(os, traj.grid, d);
  };
  if (r.sufficiency && r.sufficiency->worst_direction.xi0.size()) dump("worst_direction.csv", r.sufficiency->worst_direction);
  if (r.necessity && r.necessity->witness.xi0.size()) dump("witness.csv", r.necessity->witness);
}

int execute(const Config& c, std::ostream& out, std::ostream& err) {
  if (c.grid < 2) {
    err << "error: --grid must be at least 2\n";
    return kUsage;
  }
  if (!(c.tol > 0.0) || !(c.feas_tol > 0.0)) {
    err << "error: tolerances must be positive\n";
    return kUsage;
  }
  if (c.samples < 0) {
    err << "error: --samples must be non-negative\n";
    return kUsage;
  }
  ReportOptions opt;
  opt.stage = parse_stage(c.mode);
  if (c.sufficiency == "cone") {
    opt.mode = SufficiencyMode::cone;
  } else if (c.sufficiency != "subspace") {
    err << "error: --sufficiency must be subspace or cone\n";
    return kUsage;
  }
  opt.tol = c.tol;
  opt.feas_tol = c.feas_tol;
  opt.samples = c.samples;
  opt.seed = c.seed;

  ProblemDef p;
  std::optional<Trajectory> reference;
  if (is_registry_name(c.problem)) {
    RegistryEntry e = registry(c.problem, c.grid, c.T);
    p = std::move(e.problem);
    reference = std::move(e.reference);
  } else if (std::filesystem::exists(c.problem)) {
    p = load_problem_file(c.problem);
    if (c.T) p.T = *c.T;
    p.validate();
  } else {
    err << "error: '" << c.problem << "' is neither a file nor a built-in problem (";
    const auto names = registry_names();
    for (std::size_t i = 0; i < names.size(); ++i) err << (i ? ", " : "") << names[i];
    err << ")\n";
    return kUsage;
  }

  Trajectory traj;
  if (!c.trajectory.empty()) {
    traj = read_trajectory_csv(c.trajectory, p);
  } else if (reference) {
    traj = *reference;
  } else {
    traj = reference_trajectory(p, Grid::make(p.T, c.grid));
  }

  const ConditionReport r = full_report(p, traj, opt);
  const std::string json = report_json(r);
  if (!c.out.empty()) {
    std::ofstream os(c.out);
    if (!os) {
      err << "error: cannot write " << c.out << "\n";
      return kUsage;
    }
    os << json << "\n";
    out << report_text(r);
  } else if (c.text) {
    out << report_text(r);
  } else {
    out << json << "\n";
  }
  if (!c.csv.empty()) write_csv_series(c.csv, traj, r);
  return r.exit_code();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Second-order optimality checks for partially-affine optimal control problems", "socv"};
  app.require_subcommand(1);
  Config c;
  CLI::App* check = app.add_subcommand("check", "Run a verification stage on a problem and candidate");
  check->add_option("--problem", c.problem, "Built-in name or problem JSON file")->required();
  check->add_option("--trajectory", c.trajectory, "Candidate trajectory CSV (default: built-in reference)");
  check->add_option("--grid", c.grid, "Number of grid nodes N")->capture_default_str();
  check->add_option("--T", c.T, "Horizon override");
  check->add_option("--tol", c.tol, "Null-space and pointwise tolerance")->capture_default_str();
  check->add_option("--feas-tol", c.feas_tol, "Feasibility tolerance")->capture_default_str();
  check->add_option("--mode", c.mode,
                    "simulate | multipliers | check-pointwise | check-necessary | check-sufficient | full")
      ->capture_default_str();
  check->add_option("--sufficiency", c.sufficiency, "subspace | cone")->capture_default_str();
  check->add_option("--samples", c.samples, "Random directions for the necessity scan")->capture_default_str();
  check->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  check->add_option("--out", c.out, "Write the JSON report here (text summary goes to stdout)");
  check->add_option("--csv", c.csv, "Directory for CSV series");
  check->add_flag("--text", c.text, "Print the text summary instead of JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    return execute(c, out, err);
  } catch (const UnknownProblem& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const DimensionError& e) {
    err << "dimension error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IntegrationDiverged& e) {
    err << "integration diverged at node " << e.node() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace socv::cli
