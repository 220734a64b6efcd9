#pragma once

#include "ovoid/grid.hpp"

#include <Eigen/Dense>

namespace ovoid {

/// Real spherical-harmonic basis, fully normalized, no Condon-Shortley phase:
///   Y_{l,0}  = Pbar_{l,0}(theta)
///   Y_{l,m}  = sqrt(2) Pbar_{l,m}(theta) cos(m phi),  m > 0
///   Y_{l,-m} = sqrt(2) Pbar_{l,m}(theta) sin(m phi),  m > 0
/// Coefficient index: k(l,m) = l*l + l + m.
inline int coeff_index(int l, int m) { return l * l + l + m; }

/// Partial-derivative slots for synthesize_partials.
enum PartialSlot {
  D_V = 0,  // value
  D_T,      // d/dtheta
  D_P,      // d/dphi
  D_TT,
  D_TP,
  D_PP,
  D_TTT,
  D_TTP,
  D_TPP,
  D_PPP,
  kNumPartialSlots
};

/// Number of slots populated for a given derivative order (0..3).
inline int partial_slot_count(int order) {
  static constexpr int counts[4] = {1, 3, 6, 10};
  return counts[order];
}

struct Partials {
  int order = 0;
  Eigen::VectorXd d[kNumPartialSlots]; // nodal arrays, slots < partial_slot_count(order)
};

/// Nodal values -> coefficients up to the grid band limit.  Exact for
/// band-limited inputs.  The parallel path splits over rings and accumulates
/// ring contributions in a fixed order, so results are bit-identical to the
/// serial reference.
Eigen::VectorXd analyze(const Grid& grid, const Eigen::VectorXd& values);
Eigen::VectorXd analyze_serial(const Grid& grid, const Eigen::VectorXd& values);

/// Coefficients -> nodal values.
Eigen::VectorXd synthesize(const Grid& grid, const Eigen::VectorXd& coeffs);
Eigen::VectorXd synthesize_serial(const Grid& grid, const Eigen::VectorXd& coeffs);

/// Coefficients -> nodal partial derivatives in (theta, phi) up to `order` (<= 3).
/// All theta-derivatives are evaluated per mode in closed form, so the result
/// is spectrally exact for band-limited fields.
Partials synthesize_partials(const Grid& grid, const Eigen::VectorXd& coeffs, int order);
Partials synthesize_partials_serial(const Grid& grid, const Eigen::VectorXd& coeffs,
                                    int order);

/// Evaluate a coefficient vector (and optionally its theta/phi partials up to
/// `order`) at an arbitrary point.  out must hold partial_slot_count(order) slots.
void evaluate_point(int L, const Eigen::VectorXd& coeffs, double theta, double phi,
                    int order, double* out);

/// Associated Legendre row: fills Pbar (and theta-derivative rows if requested)
/// for all (l, m), 0 <= m <= l <= L, at one colatitude.  Row layout:
/// t(l,m) = l*(l+1)/2 + m.  Each of P0..P3 may be null when not needed.
void legendre_row(int L, double theta, double* P0, double* P1, double* P2, double* P3);

inline int legendre_index(int l, int m) { return l * (l + 1) / 2 + m; }
inline int legendre_count(int L) { return (L + 1) * (L + 2) / 2; }

} // namespace ovoid
