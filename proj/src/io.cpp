#include "ovoid/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ovoid {

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vector_from_json(const json& a) {
  Eigen::VectorXd v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<int>(i)] = a[i].get<double>();
  return v;
}

std::vector<double> split_params(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

Vec3 center_from(const std::vector<double>& p, std::size_t offset) {
  if (p.size() == offset) return Vec3::Zero();
  if (p.size() == offset + 3) return Vec3(p[offset], p[offset + 1], p[offset + 2]);
  throw std::invalid_argument("body preset: wrong parameter count");
}

} // namespace

json field_to_json(const ScalarField& u) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["grid"] = {{"kind", "gl-equiangular"}, {"L", u.grid->L}};
  j["values"] = vector_to_json(u.values);
  if (u.has_coeffs()) j["coeffs"] = vector_to_json(*u.coeffs);
  return j;
}

ScalarField field_from_json(const json& j) {
  const json& jg = j.at("grid");
  if (jg.at("kind").get<std::string>() != "gl-equiangular")
    throw std::invalid_argument("field_from_json: unknown grid kind");
  GridPtr g = build_grid(jg.at("L").get<int>());
  if (j.contains("coeffs")) {
    Eigen::VectorXd c = vector_from_json(j["coeffs"]);
    if (c.size() != g->n_coeff())
      throw std::invalid_argument("field_from_json: coefficient count mismatch");
    return make_field_from_coeffs(g, std::move(c));
  }
  Eigen::VectorXd v = vector_from_json(j.at("values"));
  if (v.size() != g->size())
    throw std::invalid_argument("field_from_json: value count mismatch");
  return make_field(g, std::move(v));
}

json body_to_json(const SupportBody& b) {
  json j;
  j["kind"] = "field";
  j["provenance"] = b.provenance;
  j["alias_error"] = b.alias_error;
  j["field"] = field_to_json(b.u);
  return j;
}

SupportBody body_from_json(const json& j, GridPtr grid) {
  const std::string kind = j.at("kind").get<std::string>();
  auto center = [&j]() {
    if (!j.contains("center")) return Vec3(0, 0, 0);
    const json& c = j["center"];
    return Vec3(c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>());
  };
  if (kind == "ball")
    return make_ball(grid, {j.at("radius").get<double>(), center()});
  if (kind == "ellipsoid")
    return make_ellipsoid(grid, {j.at("a").get<double>(), j.at("b").get<double>(),
                                 j.at("c").get<double>(), center()});
  if (kind == "harmonic_perturbed_ball")
    return make_harmonic_ball(grid, {j.at("radius").get<double>(),
                                     j.at("degree").get<int>(), j.at("order").get<int>(),
                                     j.at("amplitude").get<double>(), center()});
  if (kind == "field") {
    ScalarField u = field_from_json(j.at("field"));
    if (u.grid->L != grid->L)
      throw std::invalid_argument("body_from_json: field grid L " +
                                  std::to_string(u.grid->L) + " does not match requested " +
                                  std::to_string(grid->L));
    SupportBody b{with_coeffs(std::move(u)),
                  j.value("provenance", std::string("external field")),
                  j.value("alias_error", 0.0)};
    return b;
  }
  throw std::invalid_argument("body_from_json: unknown kind '" + kind + "'");
}

SupportBody body_from_spec(const std::string& spec, GridPtr grid) {
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string head = spec.substr(0, colon);
    const std::string tail = spec.substr(colon + 1);
    if (head == "ball") {
      auto p = split_params(tail);
      if (p.empty()) throw std::invalid_argument("ball preset needs a radius");
      return make_ball(grid, {p[0], center_from(p, 1)});
    }
    if (head == "ellipsoid") {
      auto p = split_params(tail);
      if (p.size() < 3) throw std::invalid_argument("ellipsoid preset needs a,b,c");
      return make_ellipsoid(grid, {p[0], p[1], p[2], center_from(p, 3)});
    }
    if (head == "harmonic") {
      auto p = split_params(tail);
      if (p.size() < 4) throw std::invalid_argument("harmonic preset needs r,l,m,amp");
      return make_harmonic_ball(grid, {p[0], static_cast<int>(p[1]),
                                       static_cast<int>(p[2]), p[3], center_from(p, 4)});
    }
  }
  return body_from_json(read_json(spec), grid);
}

json kernel_report_to_json(const KernelReport& rep) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["grid_L"] = rep.grid_L;
  j["kernel_dim"] = rep.kernel_dim;
  j["sigma_max"] = rep.sigma_max;
  j["threshold"] = rep.threshold;
  j["policy_C"] = rep.policy_C;
  j["smallest_singular_values"] = rep.smallest_singular_values;
  j["linear_projection_residual"] = rep.linear_projection_residual;
  return j;
}

json witness_to_json(const TranslationWitness& w) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["verdict"] = to_string(w.verdict);
  j["rho_max"] = w.rho_max;
  j["p0"] = {w.p0[0], w.p0[1], w.p0[2]};
  j["E"] = {w.E[0], w.E[1], w.E[2]};
  j["translation"] = {w.translation[0], w.translation[1], w.translation[2]};
  j["witness_residual"] = w.witness_residual;
  j["u_tilde_max"] = w.u_tilde_max;
  j["grad_norm_on_max_set"] = w.grad_norm_on_max_set;
  return j;
}

json certificate_to_json(const W22Certificate& cert) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["condition_residual"] = cert.condition_residual;
  j["lambda"] = cert.lambda;
  j["Lambda"] = cert.Lambda;
  j["margin_quadratic"] = cert.margin1;
  j["margin_det_sum"] = cert.margin2;
  j["margin_det_sum_literal"] = cert.margin2_literal;
  j["integral_w2"] = cert.integral_w2;
  j["integral_det_sum"] = cert.integral_det_sum;
  j["integral_margin"] = cert.integral_margin;
  j["pass_pointwise"] = cert.pass_pointwise;
  j["pass_integral"] = cert.pass_integral;
  return j;
}

json integral_report_to_json(const IntegralReport& rep) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["area"] = rep.area;
  j["volume"] = rep.volume;
  j["grid_L"] = rep.grid_L;
  return j;
}

void write_json_atomic(const std::filesystem::path& path, const json& j) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return json::parse(in);
}

void write_field_csv(const std::filesystem::path& path, const ScalarField& u) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << "x,y,z,value\n";
    char buf[128];
    for (int n = 0; n < u.grid->size(); ++n) {
      const Vec3& p = u.grid->nodes[n];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p[0], p[1], p[2],
                    u.values[n]);
      out << buf;
    }
  }
  std::filesystem::rename(tmp, path);
}

void write_boundary_csv(const std::filesystem::path& path, const SupportBody& b) {
  GradientMapField X = gradient_map(b.u);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << "x,y,z\n";
    char buf[96];
    for (const Vec3& p : X.points) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p[0], p[1], p[2]);
      out << buf;
    }
  }
  std::filesystem::rename(tmp, path);
}

DirectoryLock::DirectoryLock(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  lock_path_ = dir / ".lock";
  // O_EXCL-style exclusive creation via fopen "x" mode.
  std::FILE* f = std::fopen(lock_path_.c_str(), "wx");
  if (!f)
    throw std::runtime_error("output directory " + dir.string() +
                             " is locked by another run (" + lock_path_.string() +
                             " exists)");
  std::fclose(f);
}

DirectoryLock::~DirectoryLock() {
  std::error_code ec;
  std::filesystem::remove(lock_path_, ec);
}

} // namespace ovoid
