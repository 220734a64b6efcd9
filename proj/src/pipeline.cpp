#include "ovoid/pipeline.hpp"

#include <stdexcept>

namespace ovoid {

void RunConfig::validate() const {
  if (grid_L < kMinGridL || grid_L > kMaxGridL)
    throw std::invalid_argument("grid_L out of range [" + std::to_string(kMinGridL) +
                                ", " + std::to_string(kMaxGridL) + "]");
  if (!(tol_condition > 0.0) || !(tol_witness > 0.0))
    throw std::invalid_argument("tolerances must be positive");
  functional_by_name(functional); // throws for unknown names
  if (body1.empty()) throw std::invalid_argument("body1 is required");
}

json run_config_to_json(const RunConfig& cfg) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["grid_L"] = cfg.grid_L;
  j["functional"] = cfg.functional;
  j["body1"] = cfg.body1;
  j["body2"] = cfg.body2;
  j["tol_condition"] = cfg.tol_condition;
  j["tol_witness"] = cfg.tol_witness;
  j["seed"] = cfg.seed;
  return j;
}

UniquenessResult run_uniqueness(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.body2.empty())
    throw std::invalid_argument("run_uniqueness: body2 is required");
  GridPtr g = build_grid(cfg.grid_L);
  CurvatureFunctional f = functional_by_name(cfg.functional);
  SupportBody b1 = body_from_spec(cfg.body1, g);
  SupportBody b2 = body_from_spec(cfg.body2, g);
  for (const SupportBody* b : {&b1, &b2}) {
    ConvexityReport conv = check_convexity(b->u);
    if (!conv.pass)
      throw std::runtime_error("body '" + b->provenance +
                               "' is not convex at the grid resolution (min eig " +
                               std::to_string(conv.min_eig) + ")");
  }

  std::optional<DirectoryLock> lock;
  if (!cfg.out_dir.empty()) lock.emplace(cfg.out_dir);

  UniquenessResult res;
  res.report["config"] = run_config_to_json(cfg);

  ConditionReport cond = check_condition(f, b1, b2);
  res.condition_residual = cond.max_abs;
  res.report["condition_residual"] = cond.max_abs;

  if (cond.max_abs > cfg.tol_condition) {
    res.verdict = UniquenessVerdict::hypothesis_violated;
    res.report["verdict"] = to_string(res.verdict);
  } else {
    SymMatrixField W1 = spherical_hessian(b1.u);
    SymMatrixField W2 = spherical_hessian(b2.u);
    CoefficientField F = coefficient_field_secant(f, W1, W2);
    res.lambda = F.lambda;
    res.Lambda = F.Lambda;
    res.report["ellipticity"] = {{"lambda", F.lambda}, {"Lambda", F.Lambda},
                                 {"uniformly_elliptic", F.uniformly_elliptic}};
    if (!F.uniformly_elliptic)
      throw std::runtime_error(
          "secant coefficients are not uniformly elliptic (lambda = " +
          std::to_string(F.lambda) + "); degenerate problems are out of scope");

    res.certificate = w22_certificate(b1, b2, f, cfg.tol_condition);
    res.report["certificate"] = certificate_to_json(*res.certificate);

    AssembledOperator op = assemble_global(F);
    res.kernel = kernel_analysis(op);
    res.report["kernel"] = kernel_report_to_json(*res.kernel);

    res.witness = translation_witness(b1, b2, f, cfg.tol_condition, cfg.tol_witness);
    res.report["witness"] = witness_to_json(*res.witness);
    res.verdict = res.witness->verdict;
    res.translation = res.witness->translation;
    res.report["verdict"] = to_string(res.verdict);
  }

  if (!cfg.out_dir.empty()) {
    const std::filesystem::path dir(cfg.out_dir);
    write_json_atomic(dir / "report.json", res.report);
    if (res.kernel) write_json_atomic(dir / "kernel.json", kernel_report_to_json(*res.kernel));
    if (res.witness) {
      write_json_atomic(dir / "witness.json", witness_to_json(*res.witness));
      Eigen::VectorXd dc = coeffs_of(b1.u) - coeffs_of(b2.u);
      write_field_csv(dir / "rho.csv",
                      rho_field(make_field_from_coeffs(g, std::move(dc))));
    }
    if (res.certificate)
      write_json_atomic(dir / "certificate.json", certificate_to_json(*res.certificate));
  }
  return res;
}

} // namespace ovoid
