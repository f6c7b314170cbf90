#include "sdbc/experiment.hpp"
#include "sdbc/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

namespace {

int env_threads() {
  const char* v = std::getenv("SDBC_THREADS");
  if (!v) return 1;
  const int n = std::atoi(v);
  return n > 0 ? n : 1;
}

// "a..b" (or a single level) -> [a, b]
std::pair<int, int> parse_levels(const std::string& s) {
  const auto pos = s.find("..");
  if (pos == std::string::npos) {
    const int a = std::stoi(s);
    return {a, a};
  }
  return {std::stoi(s.substr(0, pos)), std::stoi(s.substr(pos + 2))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet boundary control of Stokes flow on polygonal domains"};
  app.require_subcommand(1);

  // --- run ---------------------------------------------------------------
  auto* run = app.add_subcommand("run", "solve one control study and report convergence");
  sdbc::ExperimentConfig cfg;
  std::string reg_name = "h12", element_name = "mini", levels_arg;
  run->add_option("--example", cfg.example, "study number (1, 2 or 3)")
      ->check(CLI::Range(1, 3));
  run->add_option("--reg", reg_name, "regularization: h12 or l2")
      ->check(CLI::IsMember({"h12", "l2"}));
  run->add_option("--element", element_name, "element family: mini, th2 or th3")
      ->check(CLI::IsMember({"mini", "th2", "th3"}));
  run->add_option("--alpha", cfg.alpha, "regularization weight (default per example)");
  run->add_option("--levels", levels_arg, "study levels as a..b (default 2..reference-2)");
  run->add_option("--reference", cfg.reference_level,
                  "reference level (default 7 square, 6 L-shape)");
  run->add_option("--out", cfg.out_dir, "output directory for csv/json/vtk artifacts");
  run->add_option("--cg-tol", cfg.cg_tol, "relative CG tolerance");
  run->add_option("--cg-max-iterations", cfg.cg_max_iterations, "CG iteration cap");
  run->add_flag("--use-big", cfg.use_big, "solve study levels via the big optimality system");
  run->add_flag("--table2", cfg.table2, "also report state/adjoint errors (example 1, th2/th3)");
  run->add_flag("!--no-fields", cfg.write_fields, "skip per-level VTK/CSV field dumps");

  // --- mesh --------------------------------------------------------------
  auto* meshcmd = app.add_subcommand("mesh", "export a mesh as legacy VTK");
  std::string domain_name = "square", mesh_out = "mesh.vtk";
  int mesh_level = 3;
  meshcmd->add_option("--domain", domain_name, "square or lshape")
      ->check(CLI::IsMember({"square", "lshape"}));
  meshcmd->add_option("--level", mesh_level, "refinement level")->check(CLI::NonNegativeNumber);
  meshcmd->add_option("--out", mesh_out, "output path");

  // --- xi ----------------------------------------------------------------
  auto* xicmd = app.add_subcommand("xi", "singular exponent of a corner angle");
  double omega = M_PI / 2.0;
  xicmd->add_option("--omega", omega, "interior angle in radians")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      cfg.reg = reg_name == "h12" ? sdbc::Regularization::EnergyH12 : sdbc::Regularization::L2;
      const std::map<std::string, sdbc::ElementKind> elements = {
          {"mini", sdbc::ElementKind::Mini},
          {"th2", sdbc::ElementKind::TH2},
          {"th3", sdbc::ElementKind::TH3}};
      cfg.element = elements.at(element_name);
      if (!levels_arg.empty()) {
        const auto [a, b] = parse_levels(levels_arg);
        cfg.level_min = a;
        cfg.level_max = b;
      }
      cfg.threads = env_threads();
      const sdbc::ConvergenceReport rep = sdbc::run_experiment(cfg);
      std::cout << "[sdbc] F(u) = " << rep.reference.F << " at reference level "
                << rep.reference.level << "\n";
      for (const auto& r : rep.levels) {
        std::cout << "[sdbc] level " << r.level << ": err_l2=" << r.err_l2
                  << " rate=" << r.rate_l2 << " err_h12=" << r.err_h12
                  << " rate=" << r.rate_h12 << "\n";
      }
      if (!cfg.out_dir.empty()) std::cout << "[sdbc] artifacts written to " << cfg.out_dir << "\n";
    } else if (*meshcmd) {
      const sdbc::Domain dom =
          domain_name == "square" ? sdbc::Domain::unit_square() : sdbc::Domain::l_shape();
      const sdbc::Mesh mesh = sdbc::build_mesh(dom, mesh_level);
      sdbc::write_mesh_vtk(mesh, mesh_out);
      std::cout << "[sdbc] " << mesh.n_triangles() << " triangles -> " << mesh_out << "\n";
    } else if (*xicmd) {
      const sdbc::SingularExponent se = sdbc::singular_exponent(omega);
      std::cout << "omega = " << omega << "\nxi = " << se.xi << "\ns_star = " << se.s_star
                << "\nrate = " << se.rate << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "[sdbc] error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
