#pragma once

#include "ovoid/io.hpp"

#include <optional>

namespace ovoid {

/// Everything a run needs to be reproducible; serialized into every report.
struct RunConfig {
  int grid_L = 16;
  std::string functional = "mean";
  std::string body1;
  std::string body2;
  double tol_condition = 1e-8;
  double tol_witness = 1e-6;
  std::uint64_t seed = 0;
  std::string out_dir; // empty: no artifacts written

  void validate() const; // throws std::invalid_argument
};

json run_config_to_json(const RunConfig& cfg);

/// Aggregated outcome of the uniqueness pipeline.
struct UniquenessResult {
  UniquenessVerdict verdict = UniquenessVerdict::inconclusive;
  double condition_residual = 0.0;
  double lambda = 0.0, Lambda = 0.0;
  std::optional<W22Certificate> certificate;
  std::optional<KernelReport> kernel;
  std::optional<TranslationWitness> witness;
  Vec3 translation = Vec3::Zero();
  json report; // full deterministic report (config + every stage)
};

/// check_condition -> secant coefficients -> ellipticity -> w22 certificate
/// -> operator kernel -> translation witness.  Convexity failures throw;
/// a condition residual above tol_condition yields hypothesis_violated (no
/// throw) with the later stages skipped.  When cfg.out_dir is set, stage
/// artifacts are written there (report.json, kernel.json, witness.json,
/// certificate.json, rho.csv).
UniquenessResult run_uniqueness(const RunConfig& cfg);

} // namespace ovoid
