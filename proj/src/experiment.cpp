#include "sdbc/experiment.hpp"

#include "sdbc/io.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <deque>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace sdbc {

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string csv_field(double v) { return std::isnan(v) ? std::string() : format_double(v); }

nlohmann::ordered_json json_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

}  // namespace

TargetField example_target(int example) {
  TargetField t;
  switch (example) {
    case 1:
      t.domain = Domain::unit_square();
      t.default_alpha = 1e-3;
      t.has_source = true;
      t.f = [](const Eigen::Vector2d&) { return Eigen::Vector2d(1.0, 1.0); };
      t.y_d = [](const Eigen::Vector2d& x) {
        const double x1 = x.x(), x2 = x.y();
        return Eigen::Vector2d(
            200.0 * x1 * x1 * (1 - x1) * (1 - x1) * x2 * (1 - x2) * (1 - 2 * x2),
            -200.0 * x1 * (1 - x1) * (1 - 2 * x1) * x2 * x2 * (1 - x2) * (1 - x2));
      };
      break;
    case 2:
    case 3:
      t.domain = example == 2 ? Domain::unit_square() : Domain::l_shape();
      t.default_alpha = 1.0;
      t.has_source = false;
      t.y_d = [](const Eigen::Vector2d& x) {
        return Eigen::Vector2d(x.x(), x.y() - x.x());
      };
      break;
    default: throw std::invalid_argument("example must be 1, 2 or 3");
  }
  return t;
}

ExperimentConfig resolve_config(ExperimentConfig cfg) {
  const TargetField target = example_target(cfg.example);
  if (cfg.alpha <= 0.0) cfg.alpha = target.default_alpha;
  if (cfg.reference_level < 0)
    cfg.reference_level = target.domain.kind == DomainKind::UnitSquare ? 7 : 6;
  if (cfg.level_max < 0) cfg.level_max = cfg.reference_level - 2;
  if (cfg.level_min < 0 || cfg.level_min > cfg.level_max)
    throw std::invalid_argument("config: need 0 <= level_min <= level_max");
  if (cfg.reference_level < cfg.level_max + 2)
    throw std::invalid_argument("config: reference_level must be at least level_max + 2");
  if (cfg.table2 && cfg.example != 1)
    throw std::invalid_argument("config: the table2 study is defined for example 1");
  if (cfg.table2 && cfg.element == ElementKind::Mini)
    throw std::invalid_argument("config: the table2 study needs th2 or th3");
  if (cfg.threads < 1) cfg.threads = 1;
  return cfg;
}

LevelWorkspace::LevelWorkspace(const Domain& domain, int level, const ElementFamily& family) {
  mesh = build_mesh(domain, level);
  space = build_space(mesh, family);
  sys = assemble(space);
  solver = std::make_unique<SaddleSolver>(sys);
}

LevelSolve solve_control_problem(const LevelWorkspace& ws, const TargetField& target,
                                 Regularization reg, double alpha, bool use_big,
                                 const ReducedOptions& opts) {
  LevelSolve out;
  out.y_dh = interpolate_velocity(ws.space, target.y_d);
  if (target.has_source) out.y_dh = shift_target(*ws.solver, target.f, out.y_dh);

  const ControlOperator op(*ws.solver, reg, alpha);
  if (use_big) {
    out.solution = solve_big(op, out.y_dh);
  } else {
    const Eigen::VectorXd w = op.compute_w(out.y_dh);
    out.solution = solve_reduced(op, w, out.y_dh, opts);
  }
  return out;
}

namespace {

LevelRecord make_record(const LevelWorkspace& ws, const LevelSolve& ls, Regularization reg) {
  LevelRecord rec;
  rec.level = ws.mesh.level;
  rec.h = ws.mesh.h;
  rec.F = ls.solution.F;
  rec.J = ls.solution.J;
  rec.lambda = ls.solution.lambda;
  rec.lambda0 = ls.solution.lambda0;
  rec.cg_iterations = ls.solution.cg_iterations;
  if (reg == Regularization::L2)
    rec.corner_residuals =
        corner_residuals(ws.sys, ls.solution.adjoint_pressure, ls.solution.lambda0);
  return rec;
}

void write_summary_json(const ConvergenceReport& rep, const std::string& path) {
  using json = nlohmann::ordered_json;
  const ExperimentConfig& cfg = rep.config;

  json j;
  j["config"] = {{"example", cfg.example},
                 {"reg", regularization_name(cfg.reg)},
                 {"element", ElementFamily::make(cfg.element).name()},
                 {"alpha", cfg.alpha},
                 {"levels", {cfg.level_min, cfg.level_max}},
                 {"reference_level", cfg.reference_level},
                 {"cg_tol", cfg.cg_tol},
                 {"cg_max_iterations", cfg.cg_max_iterations},
                 {"use_big", cfg.use_big},
                 {"table2", cfg.table2}};

  auto level_json = [](const LevelRecord& r, bool with_errors) {
    json o;
    o["level"] = r.level;
    o["h"] = r.h;
    o["F"] = r.F;
    o["J"] = r.J;
    o["lambda"] = r.lambda;
    o["lambda0"] = json_or_null(r.lambda0);
    o["corner_residuals"] = r.corner_residuals;
    o["cg_iterations"] = r.cg_iterations;
    if (with_errors) {
      o["err_l2_gamma"] = json_or_null(r.err_l2);
      o["rate_l2"] = json_or_null(r.rate_l2);
      o["err_h12_gamma"] = json_or_null(r.err_h12);
      o["rate_h12"] = json_or_null(r.rate_h12);
    }
    return o;
  };

  j["reference"] = level_json(rep.reference, false);
  j["levels"] = json::array();
  for (const auto& r : rep.levels) j["levels"].push_back(level_json(r, true));

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

void write_convergence_csv(const ConvergenceReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "level,h,err_l2_gamma,rate_l2,err_h12,rate_h12\n";
  for (const auto& r : rep.levels) {
    out << r.level << "," << format_double(r.h) << "," << csv_field(r.err_l2) << ","
        << csv_field(r.rate_l2) << "," << csv_field(r.err_h12) << "," << csv_field(r.rate_h12)
        << "\n";
  }
}

void write_table2_csv(const ConvergenceReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "level,h,err_state_l2,rate_state,err_control_h12,rate_control,err_adjoint_l2,"
         "rate_adjoint\n";
  for (const auto& r : rep.levels) {
    out << r.level << "," << format_double(r.h) << "," << csv_field(r.err_state) << ","
        << csv_field(r.rate_state) << "," << csv_field(r.err_h12) << ","
        << csv_field(r.rate_h12) << "," << csv_field(r.err_adjoint) << ","
        << csv_field(r.rate_adjoint) << "\n";
  }
}

struct LevelOutcome {
  std::unique_ptr<LevelWorkspace> ws;
  LevelSolve solve;
};

}  // namespace

ConvergenceReport run_experiment(const ExperimentConfig& raw) {
  const ExperimentConfig cfg = resolve_config(raw);
  const TargetField target = example_target(cfg.example);
  const ElementFamily family = ElementFamily::make(cfg.element);
  const ReducedOptions opts{cfg.cg_tol, cfg.cg_max_iterations};

  ConvergenceReport rep;
  rep.config = cfg;

  const bool writing = !cfg.out_dir.empty();
  if (writing) std::filesystem::create_directories(cfg.out_dir);
  auto out_path = [&](const std::string& name) { return cfg.out_dir + "/" + name; };

  // Reference level: always the reduced (CG) path.
  double t0 = now_seconds();
  auto ref_ws = std::make_unique<LevelWorkspace>(target.domain, cfg.reference_level, family);
  std::cout << "[sdbc] reference level " << cfg.reference_level << " ready in "
            << now_seconds() - t0 << " s\n";
  t0 = now_seconds();
  LevelSolve ref;
  try {
    ref = solve_control_problem(*ref_ws, target, cfg.reg, cfg.alpha, false, opts);
  } catch (const std::exception& e) {
    throw std::runtime_error("reference level " + std::to_string(cfg.reference_level) +
                             " solve: " + e.what());
  }
  std::cout << "[sdbc] reference solve: " << ref.solution.cg_iterations << " cg iterations, "
            << now_seconds() - t0 << " s\n";
  rep.reference = make_record(*ref_ws, ref, cfg.reg);
  const ControlOperator ref_op(*ref_ws->solver, cfg.reg, cfg.alpha);
  if (writing && cfg.write_fields) {
    const Eigen::VectorXd q0 = zero_mean_pressure(ref_ws->sys, ref.solution.pressure);
    write_fields_vtk(ref_ws->space, ref.solution.velocity, q0,
                     out_path("fields_reference.vtk"));
    write_control_csv(ref_ws->space, ref.solution.control, out_path("control_reference.csv"));
  }

  // Study levels, mildly pipelined; results are consumed in level order so
  // the outputs do not depend on scheduling.
  const int nlevels = cfg.level_max - cfg.level_min + 1;
  std::deque<std::future<LevelOutcome>> pending;
  int next = 0;
  auto launch = [&](int idx) {
    const int level = cfg.level_min + idx;
    const auto policy = cfg.threads > 1 ? std::launch::async : std::launch::deferred;
    pending.push_back(std::async(policy, [&, level]() {
      LevelOutcome o;
      o.ws = std::make_unique<LevelWorkspace>(target.domain, level, family);
      try {
        o.solve = solve_control_problem(*o.ws, target, cfg.reg, cfg.alpha, cfg.use_big, opts);
      } catch (const std::exception& e) {
        throw std::runtime_error("level " + std::to_string(level) + " solve: " + e.what());
      }
      return o;
    }));
  };

  std::vector<double> errs_l2, errs_h12, errs_state, errs_adjoint;
  for (int done = 0; done < nlevels; ++done) {
    while (next < nlevels && static_cast<int>(pending.size()) < std::max(1, cfg.threads))
      launch(next++);
    t0 = now_seconds();
    LevelOutcome o = pending.front().get();
    pending.pop_front();

    LevelRecord rec = make_record(*o.ws, o.solve, cfg.reg);
    const Eigen::VectorXd u_prol =
        prolong_trace(o.ws->space, o.solve.solution.control, ref_ws->space);
    const Eigen::VectorXd e = u_prol - ref.solution.control;
    rec.err_l2 = error_l2_gamma(ref_ws->sys, e);
    rec.err_h12 = error_h12_gamma(ref_op, e);
    errs_l2.push_back(rec.err_l2);
    errs_h12.push_back(rec.err_h12);

    if (cfg.table2) {
      const Eigen::VectorXd ey =
          prolong_velocity(o.ws->space, o.solve.solution.velocity, ref_ws->space) -
          ref.solution.velocity;
      rec.err_state = std::sqrt(std::max(0.0, ey.dot(ref_ws->sys.M * ey)));
      const Eigen::VectorXd z_full = o.ws->space.scatter(
          o.solve.solution.adjoint, Eigen::VectorXd::Zero(o.ws->space.NGamma()));
      const Eigen::VectorXd z_ref = ref_ws->space.scatter(
          ref.solution.adjoint, Eigen::VectorXd::Zero(ref_ws->space.NGamma()));
      const Eigen::VectorXd ez = prolong_velocity(o.ws->space, z_full, ref_ws->space) - z_ref;
      rec.err_adjoint = std::sqrt(std::max(0.0, ez.dot(ref_ws->sys.M * ez)));
      errs_state.push_back(rec.err_state);
      errs_adjoint.push_back(rec.err_adjoint);
    }

    if (writing && cfg.write_fields) {
      const std::string tag = "level" + std::to_string(rec.level);
      const Eigen::VectorXd q0 = zero_mean_pressure(o.ws->sys, o.solve.solution.pressure);
      write_fields_vtk(o.ws->space, o.solve.solution.velocity, q0,
                       out_path("fields_" + tag + ".vtk"));
      write_control_csv(o.ws->space, o.solve.solution.control, out_path("control_" + tag + ".csv"));
    }
    std::cout << "[sdbc] level " << rec.level << ": F=" << rec.F << ", "
              << rec.cg_iterations << " cg iterations, " << now_seconds() - t0 << " s\n";
    rep.levels.push_back(std::move(rec));
  }

  const std::vector<double> r_l2 = convergence_rates(errs_l2);
  const std::vector<double> r_h12 = convergence_rates(errs_h12);
  const std::vector<double> r_st = convergence_rates(errs_state);
  const std::vector<double> r_ad = convergence_rates(errs_adjoint);
  for (std::size_t i = 0; i < rep.levels.size(); ++i) {
    rep.levels[i].rate_l2 = r_l2[i];
    rep.levels[i].rate_h12 = r_h12[i];
    if (cfg.table2) {
      rep.levels[i].rate_state = r_st[i];
      rep.levels[i].rate_adjoint = r_ad[i];
    }
  }

  if (writing) write_report(rep);
  return rep;
}

void write_report(const ConvergenceReport& rep) {
  if (rep.config.out_dir.empty()) throw std::invalid_argument("write_report: no out_dir set");
  const std::string dir = rep.config.out_dir;
  std::filesystem::create_directories(dir);
  write_convergence_csv(rep, dir + "/convergence.csv");
  write_summary_json(rep, dir + "/summary.json");
  if (rep.config.table2) write_table2_csv(rep, dir + "/table2.csv");
}

}  // namespace sdbc
