#include "ovoid/cap.hpp"
#include "ovoid/extension.hpp"
#include "ovoid/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <optional>

namespace {

using namespace ovoid;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitHypothesisViolated = 2;

struct CommonOpts {
  RunConfig cfg;
  std::string coefficients = "const:1";
  double cap_radius = 0.8;
};

// Shared flags; every option can also come from the environment with the
// OVOID_ prefix (e.g. OVOID_GRID_L).
void add_common(CLI::App* cmd, CommonOpts& o, bool needs_body2) {
  cmd->add_option("--grid-L", o.cfg.grid_L, "spherical-harmonic band limit")
      ->envname("OVOID_GRID_L");
  cmd->add_option("--functional", o.cfg.functional,
                  "curvature functional: mean | gauss | weighted:a,b | power:p")
      ->envname("OVOID_FUNCTIONAL");
  auto* b1 = cmd->add_option("--body1", o.cfg.body1,
                             "body preset (ball:r | ellipsoid:a,b,c | "
                             "harmonic:r,l,m,amp, each with optional ,cx,cy,cz) "
                             "or path to a body JSON file")
                 ->envname("OVOID_BODY1");
  auto* b2 = cmd->add_option("--body2", o.cfg.body2, "second body (same syntax)")
                 ->envname("OVOID_BODY2");
  cmd->add_option("--tol-condition", o.cfg.tol_condition,
                  "max allowed curvature-condition residual")
      ->envname("OVOID_TOL_CONDITION");
  cmd->add_option("--tol-witness", o.cfg.tol_witness, "translation witness tolerance")
      ->envname("OVOID_TOL_WITNESS");
  cmd->add_option("--out", o.cfg.out_dir, "output directory for reports")
      ->envname("OVOID_OUT");
  cmd->add_option("--seed", o.cfg.seed, "seed recorded in reports")
      ->envname("OVOID_SEED");
  if (needs_body2) b2->needs(b1);
}

json with_config(const CommonOpts& o, json j) {
  j["config"] = run_config_to_json(o.cfg);
  return j;
}

void emit(const CommonOpts& o, const std::string& name, const json& j) {
  std::printf("%s\n", j.dump(2).c_str());
  if (!o.cfg.out_dir.empty()) {
    std::filesystem::path dir(o.cfg.out_dir);
    std::filesystem::create_directories(dir);
    write_json_atomic(dir / name, j);
  }
}

CoefficientField coefficients_for(const CommonOpts& o, GridPtr g) {
  if (!o.cfg.body1.empty() && !o.cfg.body2.empty()) {
    CurvatureFunctional f = functional_by_name(o.cfg.functional);
    SupportBody b1 = body_from_spec(o.cfg.body1, g);
    SupportBody b2 = body_from_spec(o.cfg.body2, g);
    return coefficient_field_secant(f, spherical_hessian(b1.u), spherical_hessian(b2.u));
  }
  return coefficient_field_by_name(g, o.coefficients);
}

int cmd_body(const CommonOpts& o) {
  GridPtr g = build_grid(o.cfg.grid_L);
  SupportBody b = body_from_spec(o.cfg.body1, g);
  ConvexityReport conv = check_convexity(b.u);
  json j = with_config(o, body_to_json(b));
  j["convex"] = conv.pass;
  j["min_eig"] = conv.min_eig;
  emit(o, "body.json", j);
  if (!o.cfg.out_dir.empty()) {
    std::filesystem::path dir(o.cfg.out_dir);
    write_boundary_csv(dir / "boundary.csv", b);
    write_field_csv(dir / "support.csv", b.u);
  }
  return kExitOk;
}

int cmd_curvature(const CommonOpts& o) {
  GridPtr g = build_grid(o.cfg.grid_L);
  SupportBody b = body_from_spec(o.cfg.body1, g);
  CurvatureFunctional f = functional_by_name(o.cfg.functional);
  SymMatrixField W = spherical_hessian(b.u);
  Eigen::VectorXd vals(g->size());
  for (int n = 0; n < g->size(); ++n) vals[n] = evaluate_functional(f, W.at(n));
  json j = with_config(o, json{{"functional", f.name},
                               {"min", vals.minCoeff()},
                               {"max", vals.maxCoeff()}});
  emit(o, "curvature.json", j);
  if (!o.cfg.out_dir.empty())
    write_field_csv(std::filesystem::path(o.cfg.out_dir) / "curvature.csv",
                    make_field(g, std::move(vals)));
  return kExitOk;
}

int cmd_condition(const CommonOpts& o) {
  GridPtr g = build_grid(o.cfg.grid_L);
  CurvatureFunctional f = functional_by_name(o.cfg.functional);
  SupportBody b1 = body_from_spec(o.cfg.body1, g);
  SupportBody b2 = body_from_spec(o.cfg.body2, g);
  ConditionReport rep = check_condition(f, b1, b2);
  const bool ok = rep.max_abs <= o.cfg.tol_condition;
  json j = with_config(o, json{{"residual_max", rep.max_abs},
                               {"within_tolerance", ok}});
  emit(o, "condition.json", j);
  if (!o.cfg.out_dir.empty())
    write_field_csv(std::filesystem::path(o.cfg.out_dir) / "condition.csv", rep.residual);
  return ok ? kExitOk : kExitHypothesisViolated;
}

int cmd_kernel(const CommonOpts& o) {
  GridPtr g = build_grid(o.cfg.grid_L);
  CoefficientField F = coefficients_for(o, g);
  KernelReport rep = kernel_analysis(assemble_global(F));
  json j = with_config(o, kernel_report_to_json(rep));
  j["coefficients"] = F.provenance;
  emit(o, "kernel.json", j);
  return kExitOk;
}

int cmd_cap(const CommonOpts& o) {
  GridPtr g = build_grid(o.cfg.grid_L);
  SupportBody b = body_from_spec(o.cfg.body1, g);
  HomogeneousExtension ext = homogeneous_extension(b.u);
  CapProblem p;
  p.grid = g;
  p.radius = o.cap_radius;
  p.coeff = coefficient_field_by_name(g, o.coefficients);
  p.boundary_u = [&ext](const Vec3& x) { return ext(x); };
  CapSolution sol = solve_cap_dirichlet(p);
  json j = with_config(o, json{{"radius", sol.radius},
                               {"interior_rings", sol.n_rings},
                               {"interior_nodes", sol.interior_nodes.size()},
                               {"reduced_residual_max", sol.reduced_residual_max},
                               {"pde_residual_max", sol.pde_residual_max},
                               {"coefficients", p.coeff.provenance}});
  emit(o, "cap.json", j);
  return kExitOk;
}

int cmd_maxprin(const CommonOpts& o) {
  GridPtr g = build_grid(o.cfg.grid_L);
  SupportBody b1 = body_from_spec(o.cfg.body1, g);
  ScalarField u = b1.u;
  if (!o.cfg.body2.empty()) {
    SupportBody b2 = body_from_spec(o.cfg.body2, g);
    u = make_field_from_coeffs(g, coeffs_of(b1.u) - coeffs_of(b2.u));
  }
  CoefficientField F = coefficient_field_by_name(g, o.coefficients);
  ScalarField rho = rho_field(u);
  MaxSetReport ms = max_set(rho);
  RhoIdentityReport ri = identity_check_rho(u, F);
  const Vec3 E = Vec3::UnitZ();
  PhiIdentityReport pi = identity_check_phi(u, F, E);
  json j = with_config(o, json{{"rho_max", ms.max_value},
                               {"max_set_components", ms.component_count},
                               {"max_set_isolated", ms.has_isolated_point},
                               {"identity_rho_residual", ri.max_abs},
                               {"identity_rho_gradient_residual", ri.gradient_max_abs},
                               {"identity_phi_residual", pi.max_abs_a},
                               {"coefficients", F.provenance}});
  emit(o, "maxprin.json", j);
  if (!o.cfg.out_dir.empty()) {
    std::filesystem::path dir(o.cfg.out_dir);
    write_field_csv(dir / "rho.csv", rho);
    write_field_csv(dir / "phi.csv", phi_field(u, E));
  }
  return kExitOk;
}

int cmd_integrals(const CommonOpts& o) {
  GridPtr g = build_grid(o.cfg.grid_L);
  SupportBody b1 = body_from_spec(o.cfg.body1, g);
  json j = with_config(o, integral_report_to_json(integral_report(b1)));
  if (!o.cfg.body2.empty()) {
    SupportBody b2 = body_from_spec(o.cfg.body2, g);
    j["mixed"] = mixed_discriminant_integral(b1, b2);
  }
  emit(o, "integrals.json", j);
  return kExitOk;
}

int cmd_uniqueness(const CommonOpts& o) {
  UniquenessResult res = run_uniqueness(o.cfg);
  std::printf("%s\n", res.report.dump(2).c_str());
  return res.verdict == UniquenessVerdict::hypothesis_violated ? kExitHypothesisViolated
                                                               : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"support-function calculus and uniqueness diagnostics for convex "
               "bodies on the sphere"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* desc;
    bool needs_body1;
    bool needs_body2;
    int (*run)(const CommonOpts&);
  };
  const Sub subs[] = {
      {"body", "build a body and export its support data", true, false, cmd_body},
      {"curvature", "evaluate the curvature functional on a body", true, false,
       cmd_curvature},
      {"condition", "residual of the shared curvature condition", true, true,
       cmd_condition},
      {"kernel", "assemble the linearized operator and analyze its kernel", false,
       false, cmd_kernel},
      {"cap", "solve the geodesic-cap Dirichlet problem", true, false, cmd_cap},
      {"maxprin", "maximum-principle diagnostics for a body or a difference", true,
       false, cmd_maxprin},
      {"integrals", "area, volume and mixed discriminant integrals", true, false,
       cmd_integrals},
      {"uniqueness", "full uniqueness pipeline with verdict", true, true,
       cmd_uniqueness},
  };

  std::vector<std::unique_ptr<CommonOpts>> opts;
  std::vector<std::pair<CLI::App*, const Sub*>> cmds;
  for (const Sub& s : subs) {
    auto o = std::make_unique<CommonOpts>();
    CLI::App* cmd = app.add_subcommand(s.name, s.desc);
    add_common(cmd, *o, s.needs_body2);
    if (std::string(s.name) == "kernel" || std::string(s.name) == "cap" ||
        std::string(s.name) == "maxprin") {
      cmd->add_option("--coefficients", o->coefficients,
                      "coefficient field: const:c | scalar:p | tangent:g")
          ->envname("OVOID_COEFFICIENTS");
    }
    if (std::string(s.name) == "cap")
      cmd->add_option("--radius", o->cap_radius, "cap radius in radians (< pi/2)")
          ->envname("OVOID_CAP_RADIUS");
    cmds.emplace_back(cmd, &s);
    opts.push_back(std::move(o));
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < cmds.size(); ++i) {
    if (!cmds[i].first->parsed()) continue;
    const Sub& s = *cmds[i].second;
    CommonOpts& o = *opts[i];
    try {
      if (s.needs_body1 && o.cfg.body1.empty()) {
        std::fprintf(stderr, "error: %s requires --body1\n", s.name);
        return kExitError;
      }
      if (s.needs_body2 && o.cfg.body2.empty()) {
        std::fprintf(stderr, "error: %s requires --body2\n", s.name);
        return kExitError;
      }
      return s.run(o);
    } catch (const std::exception& e) {
      const std::string what = e.what();
      std::fprintf(stderr, "error: %s\n", what.c_str());
      return what.find("hypothesis violated") != std::string::npos
                 ? kExitHypothesisViolated
                 : kExitError;
    }
  }
  return kExitError;
}
