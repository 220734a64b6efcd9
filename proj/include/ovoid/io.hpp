#pragma once

#include "ovoid/body.hpp"
#include "ovoid/elliptic.hpp"
#include "ovoid/integrals.hpp"
#include "ovoid/maxprin.hpp"

#include <json.hpp>

#include <filesystem>

namespace ovoid {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

/// Field schema: {"grid": {"kind": "gl-equiangular", "L": ...},
///                "values": [...], "coeffs": [...] (optional)}.
json field_to_json(const ScalarField& u);
ScalarField field_from_json(const json& j);

/// Body schema: {"kind": "ball"|"ellipsoid"|"harmonic_perturbed_ball"|"field", ...}.
json body_to_json(const SupportBody& b);
SupportBody body_from_json(const json& j, GridPtr grid);

/// Preset strings: "ball:r[,cx,cy,cz]", "ellipsoid:a,b,c[,cx,cy,cz]",
/// "harmonic:r,l,m,amp[,cx,cy,cz]".  Anything else is treated as the path of
/// a body JSON file.
SupportBody body_from_spec(const std::string& spec, GridPtr grid);

json kernel_report_to_json(const KernelReport& rep);
json witness_to_json(const TranslationWitness& w);
json certificate_to_json(const W22Certificate& cert);
json integral_report_to_json(const IntegralReport& rep);

/// Atomic write: serialize to <path>.tmp, then rename over <path>.
void write_json_atomic(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

/// CSV of nodal values, columns x,y,z,value.
void write_field_csv(const std::filesystem::path& path, const ScalarField& u);
/// CSV point cloud of the gradient-map boundary, columns x,y,z.
void write_boundary_csv(const std::filesystem::path& path, const SupportBody& b);

/// Exclusive-creation lock file held for the lifetime of the object; throws
/// if another process holds the same output directory.
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path& dir);
  ~DirectoryLock();
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  std::filesystem::path lock_path_;
};

} // namespace ovoid
