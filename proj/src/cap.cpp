#include "ovoid/cap.hpp"

#include <Eigen/LU>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ovoid {

namespace {

// Barycentric weights for polynomial interpolation on arbitrary nodes.
Eigen::VectorXd bary_weights(const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i) w[i] /= (x[i] - x[j]);
  return w;
}

// First-derivative collocation matrix on the nodes.
Eigen::MatrixXd diff_matrix(const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  Eigen::VectorXd w = bary_weights(x);
  Eigen::MatrixXd D(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      D(i, j) = (w[j] / w[i]) / (x[i] - x[j]);
      diag -= D(i, j);
    }
    D(i, i) = diag;
  }
  return D;
}

double bary_eval(const Eigen::VectorXd& x, const Eigen::VectorXd& w,
                 const Eigen::VectorXd& f, double t) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    const double d = t - x[i];
    if (std::abs(d) < 1e-14) return f[i];
    const double q = w[i] / d;
    num += q * f[i];
    den += q;
  }
  return num / den;
}

// Trigonometric differentiation matrices for an even number of equispaced
// longitudes, built from the modal basis.
void trig_diff_matrices(int n, Eigen::MatrixXd& D1, Eigen::MatrixXd& D2) {
  Eigen::MatrixXd B(n, n), B1(n, n), B2(n, n);
  const double h = 2.0 * std::numbers::pi / n;
  for (int j = 0; j < n; ++j) {
    const double p = j * h;
    int col = 0;
    B(j, col) = 1.0;
    B1(j, col) = 0.0;
    B2(j, col) = 0.0;
    ++col;
    for (int k = 1; k < n / 2; ++k) {
      B(j, col) = std::cos(k * p);
      B1(j, col) = -k * std::sin(k * p);
      B2(j, col) = -double(k) * k * std::cos(k * p);
      ++col;
      B(j, col) = std::sin(k * p);
      B1(j, col) = k * std::cos(k * p);
      B2(j, col) = -double(k) * k * std::sin(k * p);
      ++col;
    }
    B(j, col) = std::cos((n / 2) * p); // Nyquist cosine
    B1(j, col) = -(n / 2) * std::sin((n / 2) * p);
    B2(j, col) = -double(n / 2) * (n / 2) * std::cos((n / 2) * p);
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(B.transpose());
  D1 = lu.solve(B1.transpose()).transpose();
  D2 = lu.solve(B2.transpose()).transpose();
}

inline void canonical_entries(const Grid& g, const CoefficientField& F, int n,
                              double& f11, double& f12, double& f22) {
  f11 = F.f11[n];
  f12 = F.f12[n];
  f22 = F.f22[n];
  if (g.frame_alpha == 0.0) return;
  const double ca = std::cos(g.frame_alpha), sa = std::sin(g.frame_alpha);
  const double a = f11, b = f12, c = f22;
  f11 = ca * ca * a - 2 * ca * sa * b + sa * sa * c;
  f12 = ca * sa * (a - c) + (ca * ca - sa * sa) * b;
  f22 = sa * sa * a + 2 * ca * sa * b + ca * ca * c;
}

} // namespace

CapSolution solve_cap_dirichlet(const CapProblem& p) {
  const Grid& g = *p.grid;
  if ((p.center - Vec3(0, 0, 1)).norm() > 1e-12)
    throw std::invalid_argument(
        "solve_cap_dirichlet: caps are supported in standard position only "
        "(center = north pole); rotate the problem data first");
  if (!(p.radius > 0.0) || p.radius >= std::numbers::pi / 2.0 - 1e-9)
    throw std::invalid_argument("solve_cap_dirichlet: cap touches the equator");
  if (!p.boundary_u) throw std::invalid_argument("solve_cap_dirichlet: no boundary data");
  require_same_grid(p.grid, p.coeff.grid, "solve_cap_dirichlet");
  if (!p.coeff.uniformly_elliptic)
    throw std::invalid_argument("solve_cap_dirichlet: coefficients not uniformly elliptic");

  const int np = g.n_phi, half = np / 2;
  int k = 0;
  while (k < g.n_theta && g.theta[k] < p.radius) ++k;
  if (k < 2)
    throw std::invalid_argument("solve_cap_dirichlet: fewer than two rings inside the cap; "
                                "increase the grid band limit or the radius");
  const int nint = k * np;
  const int ncol = nint + np; // interior unknowns + boundary circle values

  CapSolution sol;
  sol.grid = p.grid;
  sol.radius = p.radius;
  sol.n_rings = k;
  sol.ring_theta.assign(g.theta.begin(), g.theta.begin() + k);
  sol.interior_nodes.resize(nint);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < np; ++j) sol.interior_nodes[i * np + j] = g.index(i, j);

  // Boundary data at collocation points (r, phi_j).
  const double sr = std::sin(p.radius), cr = std::cos(p.radius);
  sol.boundary_u_vals.resize(np);
  sol.boundary_v.resize(np);
  for (int j = 0; j < np; ++j) {
    const Vec3 x(sr * std::cos(g.phi[j]), sr * std::sin(g.phi[j]), cr);
    sol.boundary_u_vals[j] = p.boundary_u(x);
    sol.boundary_v[j] = sol.boundary_u_vals[j] / cr;
  }

  // theta-line differentiation: per meridian pair, nodes at tau = -r,
  // -theta_{k-1}..-theta_0 (on phi + pi), theta_0..theta_{k-1}, r.
  Eigen::MatrixXd Gt = Eigen::MatrixXd::Zero(nint, ncol);
  Eigen::MatrixXd Gtt = Eigen::MatrixXd::Zero(nint, ncol);
  {
    const int m = 2 * k + 2;
    Eigen::VectorXd tau(m);
    std::vector<int> cols(m);
    for (int i = 0; i < k; ++i) tau[i] = -g.theta[k - 1 - i];
    for (int i = 0; i < k; ++i) tau[k + i] = g.theta[i];
    tau[2 * k] = -p.radius;
    tau[2 * k + 1] = p.radius;
    Eigen::MatrixXd D1 = diff_matrix(tau);
    Eigen::MatrixXd D2 = D1 * D1;
    for (int j = 0; j < half; ++j) {
      const int jo = j + half;
      for (int i = 0; i < k; ++i) {
        cols[i] = (k - 1 - i) * np + jo;   // negative tau side
        cols[k + i] = i * np + j;          // positive tau side
      }
      cols[2 * k] = nint + jo;
      cols[2 * k + 1] = nint + j;
      for (int i = 0; i < k; ++i) {
        // node (i, j) sits at tau = +theta_i: d/dtheta = +d/dtau
        const int rp = k + i, rowp = i * np + j;
        for (int c = 0; c < m; ++c) {
          Gt(rowp, cols[c]) += D1(rp, c);
          Gtt(rowp, cols[c]) += D2(rp, c);
        }
        // node (i, jo) sits at tau = -theta_i: d/dtheta = -d/dtau
        const int rowm = i * np + jo, rm = k - 1 - i;
        for (int c = 0; c < m; ++c) {
          Gt(rowm, cols[c]) -= D1(rm, c);
          Gtt(rowm, cols[c]) += D2(rm, c);
        }
      }
    }
  }

  // phi differentiation per ring (interior rings only touch interior columns).
  Eigen::MatrixXd Dphi1, Dphi2;
  trig_diff_matrices(np, Dphi1, Dphi2);

  // Mixed derivative rows: vthetaphi(i, j) = sum_j' Dphi1(j, j') * vtheta(i, j').
  Eigen::MatrixXd Gtp = Eigen::MatrixXd::Zero(nint, ncol);
  for (int i = 0; i < k; ++i)
    Gtp.middleRows(i * np, np) = Dphi1 * Gt.middleRows(i * np, np);

  // Assemble the reduced drift equation row by row.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nint, nint);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nint);
  auto scatter = [&](int row, int col, double val) {
    if (col < nint)
      A(row, col) += val;
    else
      rhs[row] -= val * sol.boundary_v[col - nint];
  };
  for (int i = 0; i < k; ++i) {
    const double s = g.sin_theta[i], c = g.cos_theta[i];
    const double is = 1.0 / s, is2 = is * is, cot = c * is;
    for (int j = 0; j < np; ++j) {
      const int row = i * np + j;
      const int node = g.index(i, j);
      double f11, f12, f22;
      canonical_entries(g, p.coeff, node, f11, f12, f22);
      const double b1 = -2.0 * s / c * f11;
      const double b2 = -2.0 * s / c * f12;
      // theta-line contributions
      for (int col = 0; col < ncol; ++col) {
        const double gt = Gt(row, col), gtt = Gtt(row, col), gtp = Gtp(row, col);
        if (gt == 0.0 && gtt == 0.0 && gtp == 0.0) continue;
        double val = f11 * gtt;                    // v_;11
        val += 2.0 * f12 * (is * gtp);             // v_;12 (theta-phi part)
        val += f22 * (cot * gt);                   // v_;22 (cot * vtheta part)
        val += b1 * gt;                            // drift
        scatter(row, col, val);
      }
      // pure phi contributions on the same ring
      for (int jj = 0; jj < np; ++jj) {
        const int col = i * np + jj;
        double val = 2.0 * f12 * (-c * is2) * Dphi1(j, jj); // v_;12 (vphi part)
        val += f22 * is2 * Dphi2(j, jj);                    // v_;22 (vphiphi part)
        val += b2 * is * Dphi1(j, jj);                      // drift
        scatter(row, col, val);
      }
    }
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  sol.v = lu.solve(rhs);
  const double solve_residual = (A * sol.v - rhs).cwiseAbs().maxCoeff();
  if (!sol.v.allFinite())
    throw std::runtime_error("solve_cap_dirichlet: linear solve failed");

  sol.u.resize(nint);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < np; ++j) sol.u[i * np + j] = g.cos_theta[i] * sol.v[i * np + j];
  sol.boundary_max_error = 0.0; // boundary values are imposed exactly

  // Residual of the reduced equation (should match the solve residual).
  sol.reduced_residual_max = solve_residual;

  // Independent residual of the original u-equation, using the same discrete
  // derivative operators applied to u = x3 * v.  This exercises the
  // substitution identity rather than the solved system.
  {
    Eigen::VectorXd full(ncol);
    full.head(nint) = sol.u;
    for (int j = 0; j < np; ++j) full[nint + j] = sol.boundary_u_vals[j];
    Eigen::VectorXd ut = Gt * full, utt = Gtt * full, utp = Gtp * full;
    double worst = 0.0;
    for (int i = 0; i < k; ++i) {
      const double s = g.sin_theta[i], c = g.cos_theta[i];
      const double is = 1.0 / s, is2 = is * is, cot = c * is;
      Eigen::VectorXd ring = sol.u.segment(i * np, np);
      Eigen::VectorXd up = Dphi1 * ring, upp = Dphi2 * ring;
      for (int j = 0; j < np; ++j) {
        const int row = i * np + j;
        const int node = g.index(i, j);
        double f11, f12, f22;
        canonical_entries(g, p.coeff, node, f11, f12, f22);
        const double h11 = utt[row];
        const double h12 = utp[row] * is - c * is2 * up[j];
        const double h22 = upp[j] * is2 + cot * ut[row];
        const double uval = sol.u[row];
        const double res = f11 * (h11 + uval) + 2.0 * f12 * h12 + f22 * (h22 + uval);
        worst = std::max(worst, std::abs(res));
      }
    }
    sol.pde_residual_max = worst;
  }
  return sol;
}

double CapSolution::evaluate_v(double theta, double phi) const {
  const Grid& g = *grid;
  if (theta < 0.0 || theta >= radius)
    throw std::invalid_argument("CapSolution::evaluate: point outside the cap");
  const int k = n_rings, np = g.n_phi;
  // Values along the meridian line through (theta, phi): trig interpolation of
  // each ring at phi and phi + pi, then polynomial interpolation in tau.
  auto ring_at = [&](int i, double ph) {
    // trig interpolation of an even equispaced grid (values at interior ring i)
    double num = 0.0;
    for (int j = 0; j < np; ++j) {
      double d = ph - g.phi[j];
      // normalized Dirichlet-like cardinal function for even n
      double w;
      const double sd = std::sin(0.5 * d);
      if (std::abs(sd) < 1e-14) return v[i * np + j];
      w = std::sin(0.5 * np * d) / (np * std::tan(0.5 * d));
      num += v[i * np + j] * w;
    }
    return num;
  };
  auto boundary_at = [&](double ph) {
    double num = 0.0;
    for (int j = 0; j < np; ++j) {
      double d = ph - g.phi[j];
      const double sd = std::sin(0.5 * d);
      if (std::abs(sd) < 1e-14) return boundary_v[j];
      num += boundary_v[j] * std::sin(0.5 * np * d) / (np * std::tan(0.5 * d));
    }
    return num;
  };
  const int m = 2 * k + 2;
  Eigen::VectorXd tau(m), fv(m);
  for (int i = 0; i < k; ++i) {
    tau[i] = -ring_theta[k - 1 - i];
    fv[i] = ring_at(k - 1 - i, phi + std::numbers::pi);
    tau[k + i] = ring_theta[i];
    fv[k + i] = ring_at(i, phi);
  }
  tau[2 * k] = -radius;
  fv[2 * k] = boundary_at(phi + std::numbers::pi);
  tau[2 * k + 1] = radius;
  fv[2 * k + 1] = boundary_at(phi);
  Eigen::VectorXd w = bary_weights(tau);
  return bary_eval(tau, w, fv, theta);
}

double CapSolution::evaluate_u(double theta, double phi) const {
  return std::cos(theta) * evaluate_v(theta, phi);
}

double substitution_identity_residual(const CoefficientField& F, const ScalarField& v,
                                      double x3_min) {
  const Grid& g = *v.grid;
  require_same_grid(v.grid, F.grid, "substitution_identity_residual");
  // x3 * v raises the degree by one, so v must leave headroom at the top of
  // the band for the comparison to be exact.
  Eigen::VectorXd vc = coeffs_of(v);
  double top = 0.0;
  for (int m = -g.L; m <= g.L; ++m) top = std::max(top, std::abs(vc[coeff_index(g.L, m)]));
  if (top > 1e-12 * (1.0 + vc.norm()))
    throw std::invalid_argument(
        "substitution_identity_residual: v must be band-limited below the grid's "
        "top degree so that x3 * v is exactly representable");
  Eigen::VectorXd x3v = v.values.cwiseProduct(coordinate_values(g, 2));

  // Two independent routes: LHS differentiates u = x3 * v spectrally after a
  // fresh analysis of the nodal product; RHS uses only derivatives of v.
  double worst = 0.0;
  Partials pv = synthesize_partials(g, vc, 2);
  Eigen::VectorXd uc = analyze(g, x3v);
  Partials pu = synthesize_partials(g, uc, 2);
  for (int i = 0; i < g.n_theta; ++i) {
    const double s = g.sin_theta[i], c = g.cos_theta[i];
    if (c < x3_min) continue;
    const double is = 1.0 / s, is2 = is * is, cot = c * is;
    for (int j = 0; j < g.n_phi; ++j) {
      const int n = g.index(i, j);
      double f11, f12, f22;
      canonical_entries(g, F, n, f11, f12, f22);
      const double uval = pu.d[D_V][n];
      const double h11u = pu.d[D_TT][n];
      const double h12u = pu.d[D_TP][n] * is - c * is2 * pu.d[D_P][n];
      const double h22u = pu.d[D_PP][n] * is2 + cot * pu.d[D_T][n];
      // lhs: original operator on u; rhs: x3 times the reduced drift operator.
      const double lhs = f11 * (h11u + uval) + 2.0 * f12 * h12u + f22 * (h22u + uval);

      const double h11v = pv.d[D_TT][n];
      const double h12v = pv.d[D_TP][n] * is - c * is2 * pv.d[D_P][n];
      const double h22v = pv.d[D_PP][n] * is2 + cot * pv.d[D_T][n];
      const double v1 = pv.d[D_T][n], v2 = pv.d[D_P][n] * is;
      const double b1 = -2.0 * s / c * f11;
      const double b2 = -2.0 * s / c * f12;
      const double rhs = c * (f11 * h11v + 2.0 * f12 * h12v + f22 * h22v + b1 * v1 + b2 * v2);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

} // namespace ovoid
