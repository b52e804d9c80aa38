#include "socv/report.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "socv/cone.hpp"
#include "socv/goh.hpp"

namespace socv {

using nlohmann::json;

const char* to_string(Stage s) {
  switch (s) {
    case Stage::simulate: return "simulate";
    case Stage::multipliers: return "multipliers";
    case Stage::check_pointwise: return "check-pointwise";
    case Stage::check_necessary: return "check-necessary";
    case Stage::check_sufficient: return "check-sufficient";
    case Stage::full: return "full";
  }
  return "unknown";
}

Stage parse_stage(const std::string& s) {
  for (Stage st : {Stage::simulate, Stage::multipliers, Stage::check_pointwise, Stage::check_necessary,
                   Stage::check_sufficient, Stage::full}) {
    if (s == to_string(st)) return st;
  }
  throw std::invalid_argument("unknown mode '" + s + "'");
}

Verdict ConditionReport::overall() const {
  bool violated = false;
  for (const auto& c : conditions) {
    if (c.verdict == Verdict::blocked) return Verdict::blocked;
    if (c.verdict == Verdict::violated) violated = true;
  }
  return violated ? Verdict::violated : Verdict::satisfied;
}

int ConditionReport::exit_code() const {
  switch (overall()) {
    case Verdict::blocked: return 2;
    case Verdict::violated: return 1;
    default: return 0;
  }
}

namespace {

bool wants(Stage have, Stage need) {
  if (have == Stage::full) return true;
  if (need == Stage::simulate) return true;
  if (need == Stage::multipliers) return have != Stage::simulate;
  return have == need;
}

ConditionEntry blocked_entry(const std::string& name, const std::string& why) {
  ConditionEntry e;
  e.name = name;
  e.locus = "not evaluated";
  e.verdict = Verdict::blocked;
  e.source = "full_report";
  e.note = why;
  return e;
}

std::vector<std::string> remaining_checks(Stage s) {
  std::vector<std::string> out;
  if (wants(s, Stage::multipliers)) out.push_back("first_order");
  if (wants(s, Stage::check_pointwise)) {
    for (const char* n : {"legendre_clebsch", "goh_symmetry", "goh_block", "uniform_positivity"}) out.push_back(n);
  }
  if (wants(s, Stage::check_necessary)) out.push_back("integral_necessary");
  if (wants(s, Stage::check_sufficient)) out.push_back("integral_sufficient");
  return out;
}

}  // namespace

ConditionReport full_report(const ProblemDef& p, const Trajectory& traj, const ReportOptions& opt) {
  ConditionReport r;
  r.problem = p;
  r.grid = traj.grid;
  r.options = opt;
  r.notes.push_back("pointwise and almost-everywhere conditions are checked at grid nodes only");
  r.notes.push_back("multipliers are normalized with sum(alpha) + sum(|beta|) = 1");

  r.feasibility = feasibility_report(p, traj, opt.feas_tol);
  {
    ConditionEntry e;
    e.name = "feasibility";
    e.locus = "dynamics defect and endpoint constraints of the candidate";
    e.verdict = r.feasibility.feasible ? Verdict::satisfied : Verdict::violated;
    e.margin = std::max({r.feasibility.max_defect, r.feasibility.max_eta, r.feasibility.max_phi});
    e.values = {{"max_defect", r.feasibility.max_defect},
                {"max_eta", r.feasibility.max_eta},
                {"max_phi", r.feasibility.max_phi},
                {"cost", r.feasibility.cost}};
    e.source = "feasibility_report";
    r.conditions.push_back(e);
  }
  if (opt.stage == Stage::simulate) return r;
  if (!r.feasibility.feasible) {
    for (const auto& n : remaining_checks(opt.stage)) r.conditions.push_back(blocked_entry(n, "candidate is infeasible"));
    return r;
  }

  const LinearizedSystem lin = linearize(p, traj);
  MultiplierOptions mo;
  mo.feasibility_tol = opt.feas_tol;
  mo.active_tol = opt.active_tol;
  mo.seed = opt.seed;
  r.multipliers = find_multipliers(p, traj, opt.tol, mo);
  const MultiplierSet& set = *r.multipliers;
  {
    ConditionEntry e;
    e.name = "first_order";
    e.locus = "costate, transversality and stationarity system";
    e.source = "find_multipliers";
    e.values = {{"dimension", set.dimension()},
                {"vertices", static_cast<double>(set.vertices.size())},
                {"threshold", set.threshold},
                {"certificate_bound", set.certificate_bound},
                {"equality_rank", set.equality_rank}};
    e.margin = set.max_residual;
    e.note = set.note;
    if (set.status == MultiplierStatus::found) {
      e.verdict = Verdict::satisfied;
    } else {
      e.verdict = Verdict::blocked;
      if (e.note.empty()) e.note = std::string("status ") + to_string(set.status);
    }
    r.conditions.push_back(e);
  }
  if (!set.equality_qualified) {
    r.notes.push_back("endpoint equality constraints are not qualified (rank " + std::to_string(set.equality_rank) +
                      " < " + std::to_string(p.d_eta()) + ")");
  }
  if (!set.exhaustive) r.notes.push_back("multiplier vertices were sampled, not enumerated");
  if (set.status != MultiplierStatus::found) {
    for (const auto& n : remaining_checks(opt.stage)) {
      if (n != "first_order") r.conditions.push_back(blocked_entry(n, "no Lagrange multiplier"));
    }
    return r;
  }

  std::vector<GohMatrices> vertex_gm;
  for (const auto& lam : set.vertices) {
    VertexSummary vs{lam, multiplier_residuals(p, lin, traj, lam), classify_multiplier(p, lin, traj, lam, opt.tol)};
    r.vertices.push_back(vs);
  }
  const auto g_class = g_class_vertices(p, traj, lin, set, opt.tol);
  r.g_class_count = static_cast<int>(g_class.size());
  {
    std::vector<VectorXd> pts;
    for (const auto& v : g_class) pts.push_back(v.lambda.coefficients());
    r.zero_in_g_class_hull = zero_in_convex_hull(pts, 1e-9);
    if (r.zero_in_g_class_hull) {
      r.notes.push_back("0 lies in the convex hull of the G-class multipliers; the second-order conditions are uninformative");
    }
  }
  if (!wants(opt.stage, Stage::check_pointwise) && !wants(opt.stage, Stage::check_necessary) &&
      !wants(opt.stage, Stage::check_sufficient)) {
    return r;
  }

  if (wants(opt.stage, Stage::check_pointwise)) {
    std::vector<ConditionEntry> best;
    for (std::size_t i = 0; i < set.vertices.size(); ++i) {
      const GohMatrices gm = goh_matrices(p, lin, traj, set.vertices[i]);
      auto entries = pointwise_report(gm, opt.tol);
      for (auto& e : entries) e.values["vertex"] = static_cast<double>(i);
      if (best.empty()) {
        best = entries;
        continue;
      }
      for (std::size_t c = 0; c < entries.size(); ++c) {
        const bool smaller_is_better = entries[c].name == "goh_symmetry";
        const bool better = smaller_is_better ? entries[c].margin < best[c].margin : entries[c].margin > best[c].margin;
        if (better) best[c] = entries[c];
      }
    }
    for (auto& e : best) r.conditions.push_back(e);

    ConditionEntry rc;
    rc.name = "r_cross_check";
    rc.locus = "R from the matrix formula against the bracket formula";
    rc.source = "r_cross_check";
    rc.verdict = Verdict::not_applicable;
    rc.note = "no vertex with G = 0";
    for (const auto& v : g_class) {
      const RCrossCheck chk = r_cross_check(p, traj, v.lambda, v.gm, opt.tol);
      double rscale = 1.0;
      for (const auto& R : v.gm.R) if (R.size()) rscale = std::max(rscale, R.cwiseAbs().maxCoeff());
      rc.margin = chk.max_deviation;
      rc.values = {{"max_deviation", chk.max_deviation}, {"scale", rscale}, {"vertex", v.vertex_index}};
      rc.verdict = chk.max_deviation <= 1e-6 * rscale ? Verdict::satisfied : Verdict::inconclusive;
      rc.note = rc.verdict == Verdict::satisfied ? "" : "formulas disagree beyond 1e-6; check smoothness of the controls";
      break;
    }
    r.conditions.push_back(rc);
  }

  const bool need_nec = wants(opt.stage, Stage::check_necessary);
  const bool need_suf = wants(opt.stage, Stage::check_sufficient);
  if (!need_nec && !need_suf) return r;
  const DiscretizedCone cone = build_cone(p, traj, lin, opt.active_tol);

  if (need_nec) {
    r.necessity = necessity_scan(cone, g_class, set.exhaustive, opt.samples, opt.seed, opt.tol);
    const NecessityResult& n = *r.necessity;
    ConditionEntry e;
    e.name = "integral_necessary";
    e.locus = "max over G-class multipliers of Omega_P2 >= 0 on the transformed cone";
    e.verdict = n.verdict;
    e.margin = n.min_ratio;
    e.values = {{"samples_requested", n.samples_requested},
                {"samples_accepted", n.samples_accepted},
                {"sampled_min_ratio", n.sampled_min_ratio},
                {"min_ratio", n.min_ratio},
                {"witness_value", n.witness_value},
                {"witness_gamma", n.witness_gamma},
                {"witness_check", n.witness_check},
                {"refined", n.refined ? 1.0 : 0.0},
                {"seed", static_cast<double>(n.seed)}};
    e.source = "necessity_scan";
    e.note = n.note;
    r.conditions.push_back(e);
  }
  if (need_suf) {
    SufficiencyOptions so;
    so.mode = opt.mode;
    so.rel_tol = opt.rho_rel_tol;
    so.samples = opt.samples;
    so.seed = opt.seed;
    r.sufficiency = sufficiency_check(cone, g_class, set.exhaustive, so);
    const SufficiencyResult& s = *r.sufficiency;
    ConditionEntry e;
    e.name = "integral_sufficient";
    e.locus = "max over G-class multipliers of Omega_P2 >= rho gamma_P on the transformed cone";
    e.verdict = s.verdict;
    e.margin = s.rho_hat;
    e.values = {{"rho_hat", s.rho_hat},
                {"threshold", s.threshold},
                {"form_scale", s.form_scale},
                {"reduced_dim", s.reduced_dim},
                {"best_vertex", s.best_vertex},
                {"worst_value", s.worst_value},
                {"worst_gamma", s.worst_gamma},
                {"direct_ratio", s.direct_ratio},
                {"subspace_is_cone", s.subspace_is_cone ? 1.0 : 0.0}};
    if (s.has_cone_probe) e.values["cone_sampled_min"] = s.cone_sampled_min;
    e.source = "sufficiency_check";
    e.note = s.note;
    r.conditions.push_back(e);
  }
  if (p.name == "pe") {
    r.notes.push_back(
        "the transformed form keeps the boundary cross term -2 xi1(T) h produced by the endpoint Hessian");
  }
  return r;
}

namespace {

json vec_json(const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json entry_json(const ConditionEntry& e) {
  json j;
  j["name"] = e.name;
  j["locus"] = e.locus;
  j["verdict"] = to_string(e.verdict);
  j["margin"] = e.margin;
  j["values"] = e.values;
  j["source"] = e.source;
  if (!e.note.empty()) j["note"] = e.note;
  return j;
}

json direction_json(const GohDirection& g) {
  json j;
  j["xi0"] = vec_json(g.xi0);
  j["h"] = vec_json(g.h);
  if (g.xi.rows()) j["xi_T"] = vec_json(g.xi.row(g.xi.rows() - 1).transpose());
  return j;
}

}  // namespace

std::string report_json(const ConditionReport& r, int indent) {
  json j;
  j["schema"] = 1;
  j["problem"] = {{"name", r.problem.name}, {"n", r.problem.n}, {"l", r.problem.l}, {"m", r.problem.m},
                  {"T", r.problem.T}, {"d_phi", r.problem.d_phi()}, {"d_eta", r.problem.d_eta()}};
  j["environment"] = {{"N", r.grid.N},
                      {"mode", to_string(r.options.stage)},
                      {"tol", r.options.tol},
                      {"feas_tol", r.options.feas_tol},
                      {"active_tol", r.options.active_tol},
                      {"rho_rel_tol", r.options.rho_rel_tol},
                      {"samples", r.options.samples},
                      {"seed", r.options.seed},
                      {"sufficiency_mode", to_string(r.options.mode)},
                      {"normalization", "l1"}};
  const FeasibilityReport& f = r.feasibility;
  json active = json::array();
  for (bool a : f.active) active.push_back(a);
  j["feasibility"] = {{"feasible", f.feasible}, {"max_defect", f.max_defect}, {"worst_step", f.worst_step},
                      {"cost", f.cost}, {"eta", vec_json(f.eta)}, {"phi", vec_json(f.phi)}, {"active", active}};
  if (r.multipliers) {
    const MultiplierSet& s = *r.multipliers;
    json verts = json::array();
    for (const auto& v : r.vertices) {
      verts.push_back({{"alpha", vec_json(v.lambda.alpha)},
                       {"beta", vec_json(v.lambda.beta)},
                       {"p0", vec_json(v.lambda.p.row(0).transpose())},
                       {"pT", vec_json(v.lambda.p.row(v.lambda.p.rows() - 1).transpose())},
                       {"residuals", {{"transv0", v.residuals.transv0}, {"Hu", v.residuals.Hu}, {"Hv", v.residuals.Hv}}},
                       {"class", {{"co_lambda_sharp", v.flags.in_co_lambda_sharp},
                                  {"G_co_lambda_sharp", v.flags.in_G_co_lambda_sharp},
                                  {"min_eig_Huu", v.flags.min_eig_Huu},
                                  {"max_abs_Hvu", v.flags.max_abs_Hvu},
                                  {"max_abs_G", v.flags.max_abs_G}}}});
    }
    j["multipliers"] = {{"status", to_string(s.status)},
                        {"dimension", s.dimension()},
                        {"singular_values", vec_json(s.singular_values)},
                        {"threshold", s.threshold},
                        {"exhaustive", s.exhaustive},
                        {"certificate_bound", s.certificate_bound},
                        {"max_residual", s.max_residual},
                        {"equality_rank", s.equality_rank},
                        {"equality_qualified", s.equality_qualified},
                        {"g_class_count", r.g_class_count},
                        {"zero_in_g_class_hull", r.zero_in_g_class_hull},
                        {"vertices", verts}};
  }
  json conds = json::array();
  for (const auto& c : r.conditions) conds.push_back(entry_json(c));
  j["conditions"] = conds;
  if (r.necessity && r.necessity->witness.xi0.size()) j["necessity_witness"] = direction_json(r.necessity->witness);
  if (r.sufficiency && r.sufficiency->worst_direction.xi0.size()) {
    j["sufficiency_worst_direction"] = direction_json(r.sufficiency->worst_direction);
  }
  j["notes"] = r.notes;
  j["overall"] = to_string(r.overall());
  j["exit_code"] = r.exit_code();
  return j.dump(indent);
}

std::string report_text(const ConditionReport& r) {
  std::ostringstream os;
  os.precision(6);
  os << "problem " << r.problem.name << "  n=" << r.problem.n << " l=" << r.problem.l << " m=" << r.problem.m
     << " T=" << r.problem.T << "  N=" << r.grid.N << "\n";
  if (r.multipliers) {
    os << "multipliers: " << to_string(r.multipliers->status) << ", dimension " << r.multipliers->dimension() << ", "
       << r.vertices.size() << " vertices, " << r.g_class_count << " in the G class\n";
    for (const auto& v : r.vertices) {
      os << "  alpha=" << v.lambda.alpha.transpose() << "  beta=" << v.lambda.beta.transpose()
         << "  residual=" << v.residuals.max() << "\n";
    }
  }
  for (const auto& c : r.conditions) {
    os << "  " << c.name << ": " << to_string(c.verdict) << "  margin=" << c.margin;
    if (!c.note.empty()) os << "  (" << c.note << ")";
    os << "\n";
  }
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  os << "overall: " << to_string(r.overall()) << " (exit " << r.exit_code() << ")\n";
  return os.str();
}

}  // namespace socv
