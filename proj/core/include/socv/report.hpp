#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "socv/conditions.hpp"
#include "socv/multipliers.hpp"
#include "socv/problem.hpp"
#include "socv/trajectory.hpp"

namespace socv {

enum class Stage { simulate, multipliers, check_pointwise, check_necessary, check_sufficient, full };
const char* to_string(Stage s);
/// Throws std::invalid_argument on unknown names.
Stage parse_stage(const std::string& s);

struct ReportOptions {
  Stage stage = Stage::full;
  double tol = 1e-8;          // null-space threshold and pointwise tolerance
  double feas_tol = 1e-6;     // dynamics defect and endpoint residuals
  double active_tol = 1e-8;   // active inequality detection
  double rho_rel_tol = 1e-6;  // positivity threshold relative to the form scale
  int samples = 1000;
  std::uint64_t seed = 1;
  SufficiencyMode mode = SufficiencyMode::subspace;
};

struct VertexSummary {
  Multiplier lambda;
  MultiplierResiduals residuals;
  ClassFlags flags;
};

struct ConditionReport {
  ProblemDef problem;
  Grid grid;
  ReportOptions options;
  FeasibilityReport feasibility;
  std::optional<MultiplierSet> multipliers;
  std::vector<VertexSummary> vertices;
  int g_class_count = 0;
  bool zero_in_g_class_hull = false;
  std::vector<ConditionEntry> conditions;
  std::optional<NecessityResult> necessity;
  std::optional<SufficiencyResult> sufficiency;
  std::vector<std::string> notes;

  /// blocked > violated > everything else.
  Verdict overall() const;
  /// 0 completed without a violated verdict, 1 violated, 2 blocked.
  int exit_code() const;
};

/// Runs feasibility, multipliers, classification, then the checks the stage
/// asks for. Earlier failures mark later stages blocked; never throws for
/// verdict reasons.
ConditionReport full_report(const ProblemDef& p, const Trajectory& traj, const ReportOptions& opt = {});

/// Versioned JSON ("schema": 1) with stable key order.
std::string report_json(const ConditionReport& r, int indent = 2);

/// Human-readable rendering of the same content.
std::string report_text(const ConditionReport& r);

}  // namespace socv
