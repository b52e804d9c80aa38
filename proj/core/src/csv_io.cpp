#include "socv/csv_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "socv/errors.hpp"

namespace socv {

namespace {

void header(std::ostream& os, const char* a, int na, const char* b, int nb, const char* c, int nc) {
  os << "t";
  for (int i = 1; i <= na; ++i) os << ',' << a << i;
  for (int i = 1; i <= nb; ++i) os << ',' << b << i;
  for (int i = 1; i <= nc; ++i) os << ',' << c << i;
  os << '\n';
}

void rows(std::ostream& os, const Grid& grid, const MatrixXd& A, const MatrixXd& B, const MatrixXd& C) {
  os << std::setprecision(17);
  for (int k = 0; k < grid.nodes(); ++k) {
    os << grid.t(k);
    for (Eigen::Index i = 0; i < A.cols(); ++i) os << ',' << A(k, i);
    for (Eigen::Index i = 0; i < B.cols(); ++i) os << ',' << B(k, i);
    for (Eigen::Index i = 0; i < C.cols(); ++i) os << ',' << C(k, i);
    os << '\n';
  }
}

std::vector<std::vector<double>> read_table(std::istream& is, std::vector<std::string>& names) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("csv: empty input");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      names.push_back(cell);
    }
  }
  std::vector<std::vector<double>> table;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw ParseError("csv line " + std::to_string(lineno) + ": not a number: '" + cell + "'");
      }
    }
    if (row.size() != names.size()) {
      throw DimensionError("csv line " + std::to_string(lineno) + ": expected " +
                           std::to_string(names.size()) + " columns, got " + std::to_string(row.size()));
    }
    table.push_back(std::move(row));
  }
  return table;
}

Grid grid_from_times(const std::vector<std::vector<double>>& table) {
  if (table.size() < 3) throw DomainError("csv: need at least 3 nodes");
  const int N = static_cast<int>(table.size()) - 1;
  const double T = table.back()[0];
  Grid g = Grid::make(T, N);
  for (int k = 0; k <= N; ++k) {
    if (std::abs(table[static_cast<std::size_t>(k)][0] - g.t(k)) > 1e-9 * std::max(1.0, T)) {
      throw DomainError("csv: time column is not a uniform grid starting at 0 (row " + std::to_string(k) + ")");
    }
  }
  return g;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  header(os, "x", static_cast<int>(traj.x.cols()), "u", static_cast<int>(traj.u.cols()), "v",
         static_cast<int>(traj.v.cols()));
  rows(os, traj.grid, traj.x, traj.u, traj.v);
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream os(path);
  if (!os) throw ParseError("cannot write '" + path + "'");
  write_trajectory_csv(os, traj);
}

Trajectory read_trajectory_csv(std::istream& is, const ProblemDef& p) {
  std::vector<std::string> names;
  const auto table = read_table(is, names);
  const std::size_t expected = static_cast<std::size_t>(1 + p.n + p.l + p.m);
  if (names.size() != expected) {
    throw DimensionError("trajectory csv: expected " + std::to_string(expected) + " columns (t,x,u,v), got " +
                         std::to_string(names.size()));
  }
  Trajectory tr;
  tr.grid = grid_from_times(table);
  const int nodes = tr.grid.nodes();
  tr.x.resize(nodes, p.n);
  tr.u.resize(nodes, p.l);
  tr.v.resize(nodes, p.m);
  for (int k = 0; k < nodes; ++k) {
    const auto& r = table[static_cast<std::size_t>(k)];
    for (int i = 0; i < p.n; ++i) tr.x(k, i) = r[static_cast<std::size_t>(1 + i)];
    for (int i = 0; i < p.l; ++i) tr.u(k, i) = r[static_cast<std::size_t>(1 + p.n + i)];
    for (int i = 0; i < p.m; ++i) tr.v(k, i) = r[static_cast<std::size_t>(1 + p.n + p.l + i)];
  }
  if (!tr.x.allFinite() || !tr.u.allFinite() || !tr.v.allFinite()) {
    throw DomainError("trajectory csv: non-finite entries");
  }
  return tr;
}

Trajectory read_trajectory_csv(const std::string& path, const ProblemDef& p) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open trajectory file '" + path + "'");
  return read_trajectory_csv(is, p);
}

void write_direction_csv(std::ostream& os, const Grid& grid, const Direction& d) {
  header(os, "x", static_cast<int>(d.x.cols()), "u", static_cast<int>(d.u.cols()), "v",
         static_cast<int>(d.v.cols()));
  rows(os, grid, d.x, d.u, d.v);
}

void write_goh_direction_csv(std::ostream& os, const Grid& grid, const GohDirection& d) {
  header(os, "xi", static_cast<int>(d.xi.cols()), "u", static_cast<int>(d.u.cols()), "y",
         static_cast<int>(d.y.cols()));
  rows(os, grid, d.xi, d.u, d.y);
}

void write_multiplier_csv(std::ostream& os, const Grid& grid, const Multiplier& m) {
  header(os, "p", static_cast<int>(m.p.cols()), "", 0, "", 0);
  rows(os, grid, m.p, MatrixXd(grid.nodes(), 0), MatrixXd(grid.nodes(), 0));
}

std::string multiplier_sidecar_json(const Multiplier& m) {
  nlohmann::json j;
  j["alpha"] = std::vector<double>(m.alpha.data(), m.alpha.data() + m.alpha.size());
  j["beta"] = std::vector<double>(m.beta.data(), m.beta.data() + m.beta.size());
  j["normalized"] = m.normalized;
  j["normalization"] = "l1";
  return j.dump(2);
}

void write_multiplier_files(const std::string& csv_path, const Grid& grid, const Multiplier& m) {
  std::ofstream os(csv_path);
  if (!os) throw ParseError("cannot write '" + csv_path + "'");
  write_multiplier_csv(os, grid, m);
  std::ofstream side(csv_path + ".json");
  if (!side) throw ParseError("cannot write '" + csv_path + ".json'");
  side << multiplier_sidecar_json(m) << '\n';
}

Multiplier read_multiplier(std::istream& csv, const std::string& sidecar_json, int n) {
  std::vector<std::string> names;
  const auto table = read_table(csv, names);
  if (names.size() != static_cast<std::size_t>(1 + n)) throw DimensionError("multiplier csv: expected t,p1..pn");
  grid_from_times(table);
  Multiplier m;
  m.p.resize(static_cast<Eigen::Index>(table.size()), n);
  for (std::size_t k = 0; k < table.size(); ++k) {
    for (int i = 0; i < n; ++i) m.p(static_cast<Eigen::Index>(k), i) = table[k][static_cast<std::size_t>(1 + i)];
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(sidecar_json);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("multiplier sidecar: ") + e.what());
  }
  const auto alpha = j.at("alpha").get<std::vector<double>>();
  const auto beta = j.at("beta").get<std::vector<double>>();
  m.alpha = Eigen::Map<const VectorXd>(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
  m.beta = Eigen::Map<const VectorXd>(beta.data(), static_cast<Eigen::Index>(beta.size()));
  m.normalized = j.value("normalized", false);
  return m;
}

}  // namespace socv
