#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "socv/cone.hpp"
#include "socv/forms.hpp"
#include "socv/goh.hpp"
#include "socv/multipliers.hpp"

namespace socv {

enum class Verdict { satisfied, violated, inconclusive, not_applicable, blocked };
const char* to_string(Verdict v);

struct ConditionEntry {
  std::string name;
  std::string locus;   // which condition, in words
  Verdict verdict = Verdict::inconclusive;
  double margin = 0.0;
  std::map<std::string, double> values;
  std::string source;  // operation that produced the margin
  std::string note;
};

/// Legendre-Clebsch (a), Goh symmetry (b), Goh block (c) and uniform positivity (d)
/// over all nodes for the multiplier behind gm.
std::vector<ConditionEntry> pointwise_report(const GohMatrices& gm, double tol);

/// A vertex of co Lambda with its classification and transformed matrices.
struct VertexForm {
  Multiplier lambda;
  ClassFlags flags;
  GohMatrices gm;
  int vertex_index = 0;
};

/// Vertices of the set that satisfy the G-class flags, with their matrices.
std::vector<VertexForm> g_class_vertices(const ProblemDef& p, const Trajectory& traj,
                                         const LinearizedSystem& lin, const MultiplierSet& set,
                                         double tol);

struct NecessityResult {
  Verdict verdict = Verdict::not_applicable;
  int samples_requested = 0;
  int samples_accepted = 0;
  double sampled_min_ratio = 0.0;  // min over samples of max_lambda Omega_P2 / gamma_P
  double min_ratio = 0.0;          // after refinement of the best sample
  bool refined = false;
  GohDirection witness;
  double witness_value = 0.0;      // max_lambda Omega_P2 at the witness
  double witness_gamma = 0.0;
  double witness_check = 0.0;      // same value through the direct form evaluation
  bool vacuous = false;
  std::uint64_t seed = 0;
  std::string note;
};

NecessityResult necessity_scan(const DiscretizedCone& cone, const std::vector<VertexForm>& vertices,
                               bool vertex_set_exact, int sample_count, std::uint64_t seed, double tol);

enum class SufficiencyMode { subspace, cone };
const char* to_string(SufficiencyMode m);

struct SufficiencyResult {
  Verdict verdict = Verdict::not_applicable;
  SufficiencyMode mode = SufficiencyMode::subspace;
  double rho_hat = 0.0;
  double threshold = 0.0;
  double form_scale = 0.0;
  int reduced_dim = 0;
  int best_vertex = -1;
  std::vector<double> vertex_min;    // min generalized eigenvalue per vertex
  GohDirection worst_direction;
  double worst_value = 0.0;          // max_lambda Omega_P2 at the worst direction
  double worst_gamma = 0.0;
  double direct_ratio = 0.0;         // Omega_P2 / gamma_P of the worst direction for the best vertex
  bool vacuous = false;
  bool subspace_is_cone = false;     // inequality rows vanish identically
  bool has_cone_probe = false;
  double cone_sampled_min = 0.0;     // cone mode only
  std::string note;
};

struct SufficiencyOptions {
  SufficiencyMode mode = SufficiencyMode::subspace;
  double rel_tol = 1e-6;
  int samples = 1000;
  std::uint64_t seed = 1;
};

SufficiencyResult sufficiency_check(const DiscretizedCone& cone, const std::vector<VertexForm>& vertices,
                                    bool vertex_set_exact, const SufficiencyOptions& opt = {});

/// Smallest eigenvalue of Q restricted to null(C) in the metric diag(gamma),
/// by dense reduction. Exposed for tests and benchmarks.
struct ReducedSpectrum {
  double min_eig = 0.0;
  double norm = 0.0;
  int reduced_dim = 0;
  VectorXd min_vector;  // in z coordinates; empty unless requested
};
ReducedSpectrum reduced_min_eig(const MatrixXd& Q, const VectorXd& gamma_diag, const MatrixXd& C,
                                bool want_vector, std::uint64_t seed = 1);

}  // namespace socv
