#include "ovoid/sht.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ovoid {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

void check_sizes(const Grid& grid, const Eigen::VectorXd& v, int expect, const char* who) {
  if (v.size() != expect)
    throw std::invalid_argument(std::string(who) + ": size mismatch with grid L=" +
                                std::to_string(grid.L));
}

// Derivatives of cos(m phi) and sin(m phi) of order b (0..3).
inline double cos_deriv(int b, int m, double c, double s) {
  switch (b) {
    case 0: return c;
    case 1: return -m * s;
    case 2: return -double(m) * m * c;
    default: return double(m) * m * m * s;
  }
}
inline double sin_deriv(int b, int m, double c, double s) {
  switch (b) {
    case 0: return s;
    case 1: return m * c;
    case 2: return -double(m) * m * s;
    default: return -double(m) * m * m * c;
  }
}

// theta-order and phi-order of each partial slot.
constexpr int kThetaOrder[kNumPartialSlots] = {0, 1, 0, 2, 1, 0, 3, 2, 1, 0};
constexpr int kPhiOrder[kNumPartialSlots] = {0, 0, 1, 0, 1, 2, 0, 1, 2, 3};

struct RingWork {
  // Per-m accumulated theta-profiles: A[d][m] (cos part), B[d][m] (sin part).
  std::vector<double> A[4], B[4];
};

void synth_ring(const Grid& grid, const Eigen::VectorXd& coeffs, int order,
                const double* P0, const double* P1, const double* P2, const double* P3,
                int ring, Partials& out, RingWork& work) {
  const int L = grid.L;
  const int nslots = partial_slot_count(order);
  const double* P[4] = {P0, P1, P2, P3};
  for (int d = 0; d <= order; ++d) {
    work.A[d].assign(L + 1, 0.0);
    work.B[d].assign(L + 1, 0.0);
  }
  for (int m = 0; m <= L; ++m) {
    const double scale = (m == 0) ? 1.0 : kSqrt2;
    for (int l = m; l <= L; ++l) {
      const int t = legendre_index(l, m);
      const double a = scale * coeffs[coeff_index(l, m)];
      const double b = (m == 0) ? 0.0 : scale * coeffs[coeff_index(l, -m)];
      for (int d = 0; d <= order; ++d) {
        const double p = P[d][t];
        work.A[d][m] += a * p;
        if (m > 0) work.B[d][m] += b * p;
      }
    }
  }
  for (int j = 0; j < grid.n_phi; ++j) {
    const int node = grid.index(ring, j);
    double acc[kNumPartialSlots] = {0.0};
    for (int m = 0; m <= L; ++m) {
      const double c = std::cos(m * grid.phi[j]);
      const double s = std::sin(m * grid.phi[j]);
      for (int slot = 0; slot < nslots; ++slot) {
        const int dt = kThetaOrder[slot], dp = kPhiOrder[slot];
        acc[slot] += work.A[dt][m] * cos_deriv(dp, m, c, s);
        if (m > 0) acc[slot] += work.B[dt][m] * sin_deriv(dp, m, c, s);
      }
    }
    for (int slot = 0; slot < nslots; ++slot) out.d[slot][node] = acc[slot];
  }
}

Partials synth_impl(const Grid& grid, const Eigen::VectorXd& coeffs, int order,
                    bool parallel) {
  if (order < 0 || order > 3) throw std::invalid_argument("synthesize_partials: order");
  check_sizes(grid, coeffs, grid.n_coeff(), "synthesize_partials");
  Partials out;
  out.order = order;
  const int nslots = partial_slot_count(order);
  for (int slot = 0; slot < nslots; ++slot) out.d[slot].resize(grid.size());

  const int nt = grid.n_theta;
  const int nleg = legendre_count(grid.L);
  (void)parallel;
#ifdef _OPENMP
#pragma omp parallel if (parallel)
#endif
  {
    std::vector<double> P0(nleg), P1, P2, P3;
    if (order >= 1) P1.resize(nleg);
    if (order >= 2) P2.resize(nleg);
    if (order >= 3) P3.resize(nleg);
    RingWork work;
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (int i = 0; i < nt; ++i) {
      legendre_row(grid.L, grid.theta[i], P0.data(),
                   order >= 1 ? P1.data() : nullptr, order >= 2 ? P2.data() : nullptr,
                   order >= 3 ? P3.data() : nullptr);
      synth_ring(grid, coeffs, order, P0.data(), P1.data(), P2.data(), P3.data(), i, out,
                 work);
    }
  }
  return out;
}

Eigen::VectorXd analyze_impl(const Grid& grid, const Eigen::VectorXd& values,
                             bool parallel) {
  check_sizes(grid, values, grid.size(), "analyze");
  const int L = grid.L;
  const int nt = grid.n_theta, np = grid.n_phi;
  // Stage 1 (parallel over rings): longitudinal cosine/sine moments.
  Eigen::MatrixXd Fc(nt, L + 1), Fs(nt, L + 1);
  (void)parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (int i = 0; i < nt; ++i) {
    for (int m = 0; m <= L; ++m) {
      double sc = 0.0, ss = 0.0;
      for (int j = 0; j < np; ++j) {
        const double v = values[grid.index(i, j)];
        sc += v * std::cos(m * grid.phi[j]);
        ss += v * std::sin(m * grid.phi[j]);
      }
      Fc(i, m) = sc;
      Fs(i, m) = ss;
    }
  }
  // Stage 2 (fixed ring order): Legendre projection.
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(grid.n_coeff());
  const double wphi = 2.0 * std::numbers::pi / np;
  std::vector<double> P0(legendre_count(L));
  for (int i = 0; i < nt; ++i) {
    legendre_row(L, grid.theta[i], P0.data(), nullptr, nullptr, nullptr);
    const double w = grid.ring_weight[i] * wphi;
    for (int m = 0; m <= L; ++m) {
      const double scale = (m == 0) ? 1.0 : kSqrt2;
      for (int l = m; l <= L; ++l) {
        const double wp = w * scale * P0[legendre_index(l, m)];
        coeffs[coeff_index(l, m)] += wp * Fc(i, m);
        if (m > 0) coeffs[coeff_index(l, -m)] += wp * Fs(i, m);
      }
    }
  }
  return coeffs;
}

} // namespace

void legendre_row(int L, double theta, double* P0, double* P1, double* P2, double* P3) {
  const double s = std::sin(theta), c = std::cos(theta);
  if (s <= 0.0) throw std::invalid_argument("legendre_row: polar colatitude");
  const double inv_s = 1.0 / s;
  const double cot = c * inv_s;
  // Values: stable three-term recurrence in l for each m.
  double pmm = 1.0 / std::sqrt(4.0 * std::numbers::pi);
  for (int m = 0; m <= L; ++m) {
    if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
    P0[legendre_index(m, m)] = pmm;
    if (m + 1 <= L)
      P0[legendre_index(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * c * pmm;
    for (int l = m + 2; l <= L; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
      const double b =
          std::sqrt((double(l - 1) * (l - 1) - double(m) * m) / (4.0 * double(l - 1) * (l - 1) - 1.0));
      P0[legendre_index(l, m)] =
          a * (c * P0[legendre_index(l - 1, m)] - b * P0[legendre_index(l - 2, m)]);
    }
  }
  if (!P1) return;
  for (int m = 0; m <= L; ++m) {
    for (int l = m; l <= L; ++l) {
      const int t = legendre_index(l, m);
      double beta = 0.0;
      if (l > m)
        beta = std::sqrt((2.0 * l + 1.0) * (double(l) * l - double(m) * m) / (2.0 * l - 1.0));
      const double below = (l > m) ? P0[legendre_index(l - 1, m)] : 0.0;
      P1[t] = (l * c * P0[t] - beta * below) * inv_s;
    }
  }
  if (!P2) return;
  for (int m = 0; m <= L; ++m) {
    const double m2s = double(m) * m * inv_s * inv_s;
    for (int l = m; l <= L; ++l) {
      const int t = legendre_index(l, m);
      P2[t] = -cot * P1[t] - (l * (l + 1.0) - m2s) * P0[t];
    }
  }
  if (!P3) return;
  for (int m = 0; m <= L; ++m) {
    const double m2s = double(m) * m * inv_s * inv_s;
    for (int l = m; l <= L; ++l) {
      const int t = legendre_index(l, m);
      P3[t] = -cot * P2[t] + inv_s * inv_s * P1[t] - (l * (l + 1.0) - m2s) * P1[t] -
              2.0 * double(m) * m * c * inv_s * inv_s * inv_s * P0[t];
    }
  }
}

Eigen::VectorXd analyze(const Grid& grid, const Eigen::VectorXd& values) {
  return analyze_impl(grid, values, true);
}
Eigen::VectorXd analyze_serial(const Grid& grid, const Eigen::VectorXd& values) {
  return analyze_impl(grid, values, false);
}

Eigen::VectorXd synthesize(const Grid& grid, const Eigen::VectorXd& coeffs) {
  return synth_impl(grid, coeffs, 0, true).d[D_V];
}
Eigen::VectorXd synthesize_serial(const Grid& grid, const Eigen::VectorXd& coeffs) {
  return synth_impl(grid, coeffs, 0, false).d[D_V];
}

Partials synthesize_partials(const Grid& grid, const Eigen::VectorXd& coeffs, int order) {
  return synth_impl(grid, coeffs, order, true);
}
Partials synthesize_partials_serial(const Grid& grid, const Eigen::VectorXd& coeffs,
                                    int order) {
  return synth_impl(grid, coeffs, order, false);
}

void evaluate_point(int L, const Eigen::VectorXd& coeffs, double theta, double phi,
                    int order, double* out) {
  if (order < 0 || order > 3) throw std::invalid_argument("evaluate_point: order");
  const int nleg = legendre_count(L);
  std::vector<double> P0(nleg), P1, P2, P3;
  double* p1 = nullptr;
  double* p2 = nullptr;
  double* p3 = nullptr;
  if (order >= 1) { P1.resize(nleg); p1 = P1.data(); }
  if (order >= 2) { P2.resize(nleg); p2 = P2.data(); }
  if (order >= 3) { P3.resize(nleg); p3 = P3.data(); }
  legendre_row(L, theta, P0.data(), p1, p2, p3);
  const double* P[4] = {P0.data(), p1, p2, p3};
  const int nslots = partial_slot_count(order);
  for (int slot = 0; slot < nslots; ++slot) out[slot] = 0.0;
  for (int m = 0; m <= L; ++m) {
    const double scale = (m == 0) ? 1.0 : kSqrt2;
    double A[4] = {0, 0, 0, 0}, B[4] = {0, 0, 0, 0};
    for (int l = m; l <= L; ++l) {
      const int t = legendre_index(l, m);
      const double a = scale * coeffs[coeff_index(l, m)];
      const double b = (m == 0) ? 0.0 : scale * coeffs[coeff_index(l, -m)];
      for (int d = 0; d <= order; ++d) {
        A[d] += a * P[d][t];
        if (m > 0) B[d] += b * P[d][t];
      }
    }
    const double cm = std::cos(m * phi), sm = std::sin(m * phi);
    for (int slot = 0; slot < nslots; ++slot) {
      const int dt = kThetaOrder[slot], dp = kPhiOrder[slot];
      out[slot] += A[dt] * cos_deriv(dp, m, cm, sm);
      if (m > 0) out[slot] += B[dt] * sin_deriv(dp, m, cm, sm);
    }
  }
}

} // namespace ovoid
