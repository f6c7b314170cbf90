#pragma once

#include "sdbc/analysis.hpp"
#include "sdbc/optimizer.hpp"

#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace sdbc {

/// Closed-form problem data of one of the three studies: target velocity,
/// optional volume source (handled through the target shift), domain and
/// default regularization weight.
struct TargetField {
  VelocityField y_d;
  VelocityField f;
  bool has_source = false;
  Domain domain;
  double default_alpha = 1.0;
};

TargetField example_target(int example);

struct ExperimentConfig {
  int example = 2;
  Regularization reg = Regularization::EnergyH12;
  ElementKind element = ElementKind::Mini;
  double alpha = -1.0;       // <= 0 resolves to the per-example default
  int level_min = 2;
  int level_max = -1;        // < 0 resolves to reference_level - 2
  int reference_level = -1;  // < 0 resolves to 7 (square) / 6 (L-shape)
  std::string out_dir;       // empty: compute only, write nothing
  double cg_tol = 1e-10;
  int cg_max_iterations = 5000;
  bool use_big = false;   // direct big-system solve on the study levels
  bool table2 = false;    // Taylor-Hood state/adjoint error study (example 1)
  bool write_fields = true;
  int threads = 1;
};

ExperimentConfig resolve_config(ExperimentConfig cfg);

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct LevelRecord {
  int level = 0;
  double h = 0.0;
  double F = 0.0, J = 0.0, lambda = 0.0;
  double lambda0 = kNaN;
  std::vector<double> corner_residuals;  // L2 mode only
  int cg_iterations = 0;

  double err_l2 = kNaN, rate_l2 = kNaN;
  double err_h12 = kNaN, rate_h12 = kNaN;
  double err_state = kNaN, rate_state = kNaN;      // table2
  double err_adjoint = kNaN, rate_adjoint = kNaN;  // table2
};

struct ConvergenceReport {
  ExperimentConfig config;
  LevelRecord reference;
  std::vector<LevelRecord> levels;
};

/// Mesh, space, operators and the saddle factorization of one level; the
/// expensive immutable state shared by every solve on that level.
class LevelWorkspace {
 public:
  LevelWorkspace(const Domain& domain, int level, const ElementFamily& family);
  LevelWorkspace(const LevelWorkspace&) = delete;
  LevelWorkspace& operator=(const LevelWorkspace&) = delete;

  Mesh mesh;
  FeSpace space;
  AssembledSystem sys;
  std::unique_ptr<SaddleSolver> solver;
};

struct LevelSolve {
  Eigen::VectorXd y_dh;  // target interpolant, source-shifted if needed
  OptimalSolution solution;
};

/// Target interpolation (+ Remark-1 shift), data functional, and the
/// optimal-control solve on one level.
LevelSolve solve_control_problem(const LevelWorkspace& ws, const TargetField& target,
                                 Regularization reg, double alpha, bool use_big,
                                 const ReducedOptions& opts);

ConvergenceReport run_experiment(const ExperimentConfig& cfg);

void write_report(const ConvergenceReport& report);

}  // namespace sdbc
