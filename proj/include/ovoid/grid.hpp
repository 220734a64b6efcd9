#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

namespace ovoid {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Gauss-Legendre x equiangular discretization of the unit sphere.
///
/// Rings are colatitudes theta_0 < ... < theta_{n_theta-1}, the Gauss-Legendre
/// nodes in cos(theta); each ring carries n_phi = 2*(L+1) equally spaced
/// longitudes.  Quadrature is exact for band-limited integrands up to
/// degree 2L+1 and the analysis/synthesis pair is exact up to degree L.
/// The tangent frame is (theta-hat, phi-hat) optionally rotated in the
/// tangent plane by a fixed angle (the second frame convention used by the
/// frame-invariance tests).  Poles are never grid nodes.
struct Grid {
  int L = 0;        // band limit
  int n_theta = 0;  // L + 1 rings
  int n_phi = 0;    // 2*(L+1) longitudes

  std::vector<double> theta;       // per ring, ascending colatitude
  std::vector<double> sin_theta;   // per ring
  std::vector<double> cos_theta;   // per ring
  std::vector<double> ring_weight; // Gauss-Legendre weight per ring (sums to 2)
  std::vector<double> phi;         // per longitude

  std::vector<Vec3> nodes;     // ring-major: index = i*n_phi + j
  std::vector<double> weights; // per node, sums to 4*pi

  double frame_alpha = 0.0; // in-plane rotation of the frame convention
  std::string frame_id;     // "theta-phi" or "theta-phi:rot=<alpha>"

  int size() const { return n_theta * n_phi; }
  int index(int ring, int lon) const { return ring * n_phi + lon; }
  int ring_of(int node) const { return node / n_phi; }
  int lon_of(int node) const { return node % n_phi; }
  int n_coeff() const { return (L + 1) * (L + 1); }

  /// Frame vectors at a node (unit, orthogonal, tangent).
  Vec3 e1(int node) const;
  Vec3 e2(int node) const;

  /// Node on the same ring shifted by half a turn in phi (across-pole partner).
  int antipodal_lon(int node) const {
    return ring_of(node) * n_phi + (lon_of(node) + n_phi / 2) % n_phi;
  }
};

using GridPtr = std::shared_ptr<const Grid>;

inline constexpr int kMinGridL = 2;
inline constexpr int kMaxGridL = 128;

/// Builds the grid.  Throws std::invalid_argument outside [kMinGridL, kMaxGridL].
GridPtr build_grid(int L, double frame_alpha = 0.0);

/// Fixed-order quadrature sum of nodal values (deterministic reduction:
/// ring sums first, then rings in ascending order).
double integrate(const Grid& grid, const Eigen::VectorXd& values);

/// Average grid spacing sqrt(4*pi / N); drives kernel threshold policies.
double grid_spacing(const Grid& grid);

/// Nodal values of the coordinate function x_k, k in {0,1,2}.
Eigen::VectorXd coordinate_values(const Grid& grid, int k);

} // namespace ovoid
