#include "ovoid/elliptic.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace ovoid {

namespace {

// F entries rotated from the grid's declared frame back to (theta-hat, phi-hat).
inline void canonical_entries(const Grid& g, const CoefficientField& F, int n,
                              double& f11, double& f12, double& f22) {
  f11 = F.f11[n];
  f12 = F.f12[n];
  f22 = F.f22[n];
  if (g.frame_alpha == 0.0) return;
  const double ca = std::cos(g.frame_alpha), sa = std::sin(g.frame_alpha);
  // Components transform with R(alpha) when going canonical -> declared;
  // invert: M_can = R^T M_decl R with R = [[ca, sa], [-sa, ca]].
  const double a = f11, b = f12, c = f22;
  f11 = ca * ca * a - 2 * ca * sa * b + sa * sa * c;
  f12 = ca * sa * (a - c) + (ca * ca - sa * sa) * b;
  f22 = sa * sa * a + 2 * ca * sa * b + ca * ca * c;
}

AssembledOperator assemble_impl(const CoefficientField& F, bool parallel) {
  if (!F.uniformly_elliptic)
    throw std::invalid_argument(
        "assemble_global: coefficient field is not uniformly elliptic (lambda = " +
        std::to_string(F.lambda) + "); degenerate problems are out of scope");
  const Grid& g = *F.grid;
  const int N = g.size(), K = g.n_coeff(), L = g.L;
  AssembledOperator op;
  op.grid = F.grid;
  op.provenance = F.provenance;
  op.weighted.resize(N, K);
  (void)parallel;
#ifdef _OPENMP
#pragma omp parallel if (parallel)
#endif
  {
    std::vector<double> P0(legendre_count(L)), P1(legendre_count(L)), P2(legendre_count(L));
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (int i = 0; i < g.n_theta; ++i) {
      legendre_row(L, g.theta[i], P0.data(), P1.data(), P2.data(), nullptr);
      const double s = g.sin_theta[i], c = g.cos_theta[i];
      const double is = 1.0 / s, is2 = is * is, cot = c * is;
      for (int j = 0; j < g.n_phi; ++j) {
        const int n = g.index(i, j);
        double f11, f12, f22;
        canonical_entries(g, F, n, f11, f12, f22);
        const double trF = f11 + f22;
        const double sw = std::sqrt(g.weights[n]);
        for (int m = 0; m <= L; ++m) {
          const double scale = (m == 0) ? 1.0 : std::numbers::sqrt2;
          const double cm = std::cos(m * g.phi[j]), sm = std::sin(m * g.phi[j]);
          for (int l = m; l <= L; ++l) {
            const int t = legendre_index(l, m);
            const double p0 = scale * P0[t], p1 = scale * P1[t], p2 = scale * P2[t];
            // cos branch (m >= 0): value p0*cm, d/dphi -> -m*sm, etc.
            {
              const double v = p0 * cm;
              const double ut = p1 * cm, up = -m * p0 * sm;
              const double utt = p2 * cm, utp = -m * p1 * sm, upp = -double(m) * m * p0 * cm;
              const double h11 = utt;
              const double h12 = utp * is - c * is2 * up;
              const double h22 = upp * is2 + cot * ut;
              op.weighted(n, coeff_index(l, m)) =
                  sw * (f11 * h11 + 2.0 * f12 * h12 + f22 * h22 + trF * v);
            }
            if (m > 0) {
              const double v = p0 * sm;
              const double ut = p1 * sm, up = m * p0 * cm;
              const double utt = p2 * sm, utp = m * p1 * cm, upp = -double(m) * m * p0 * sm;
              const double h11 = utt;
              const double h12 = utp * is - c * is2 * up;
              const double h22 = upp * is2 + cot * ut;
              op.weighted(n, coeff_index(l, -m)) =
                  sw * (f11 * h11 + 2.0 * f12 * h12 + f22 * h22 + trF * v);
            }
          }
        }
      }
    }
  }
  return op;
}

} // namespace

Eigen::VectorXd AssembledOperator::apply_values(const Eigen::VectorXd& coeffs) const {
  if (coeffs.size() != grid->n_coeff())
    throw std::invalid_argument("AssembledOperator::apply_values: coefficient count");
  Eigen::VectorXd wv = weighted * coeffs;
  for (int n = 0; n < grid->size(); ++n) wv[n] /= std::sqrt(grid->weights[n]);
  return wv;
}

AssembledOperator assemble_global(const CoefficientField& F) {
  return assemble_impl(F, true);
}
AssembledOperator assemble_global_serial(const CoefficientField& F) {
  return assemble_impl(F, false);
}

KernelReport kernel_analysis(const AssembledOperator& op,
                             const KernelThresholdPolicy& policy) {
  const Grid& g = *op.grid;
  const int K = g.n_coeff();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(op.weighted, Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw std::runtime_error("kernel_analysis: SVD did not converge");
  const Eigen::VectorXd& sv = svd.singularValues(); // descending
  KernelReport rep;
  rep.grid_L = g.L;
  rep.sigma_max = sv[0];
  const double h = grid_spacing(g);
  rep.policy_C = policy.C;
  rep.threshold = policy.C * h * h * rep.sigma_max;
  const int nsv = static_cast<int>(sv.size());
  for (int i = 0; i < std::min(8, nsv); ++i)
    rep.smallest_singular_values.push_back(sv[nsv - 1 - i]);
  int dim = 0;
  while (dim < nsv && sv[nsv - 1 - dim] < rep.threshold) ++dim;
  rep.kernel_dim = dim;
  // Projection of the kernel basis onto the coefficient span of x1, x2, x3.
  double worst = 0.0;
  for (int i = 0; i < dim; ++i) {
    Eigen::VectorXd v = svd.matrixV().col(nsv - 1 - i);
    v.normalize(); // unit L2 norm (coefficients are an orthonormal basis)
    rep.kernel_coeffs.push_back(v);
    Eigen::VectorXd proj = Eigen::VectorXd::Zero(K);
    for (int m = -1; m <= 1; ++m) {
      const int k = coeff_index(1, m);
      proj[k] = v[k];
    }
    worst = std::max(worst, (v - proj).norm());
  }
  rep.linear_projection_residual = worst;
  return rep;
}

MollifyReport mollify_coefficients(const CoefficientField& F, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("mollify_coefficients: eps must be positive");
  const Grid& g = *F.grid;
  CoefficientField out = F;
  out.derivative = nullptr; // analytic derivative does not survive filtering
  const Eigen::VectorXd* entries[3] = {&F.f11, &F.f12, &F.f22};
  Eigen::VectorXd* smoothed[3] = {&out.f11, &out.f12, &out.f22};
  for (int e = 0; e < 3; ++e) {
    Eigen::VectorXd c = analyze(g, *entries[e]);
    for (int l = 0; l <= g.L; ++l) {
      const double damp = std::exp(-0.5 * l * (l + 1.0) * eps * eps);
      for (int m = -l; m <= l; ++m) c[coeff_index(l, m)] *= damp;
    }
    *smoothed[e] = synthesize(g, c);
  }
  // Positivity floor at lambda_min(F)/2.
  const double floor_eig = 0.5 * F.lambda;
  for (int n = 0; n < g.size(); ++n) {
    Mat2 m = out.at(n);
    Eigen::SelfAdjointEigenSolver<Mat2> es(m);
    Eigen::Vector2d ev = es.eigenvalues();
    bool clipped = false;
    for (int k = 0; k < 2; ++k)
      if (ev[k] < floor_eig) {
        ev[k] = floor_eig;
        clipped = true;
      }
    if (clipped) {
      Mat2 r = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
      out.f11[n] = r(0, 0);
      out.f12[n] = 0.5 * (r(0, 1) + r(1, 0));
      out.f22[n] = r(1, 1);
    }
  }
  MollifyReport rep;
  rep.sup_distance = std::max({(out.f11 - F.f11).cwiseAbs().maxCoeff(),
                               (out.f12 - F.f12).cwiseAbs().maxCoeff(),
                               (out.f22 - F.f22).cwiseAbs().maxCoeff()});
  auto [lam, Lam] = ellipticity_constants(out);
  out.lambda = lam;
  out.Lambda = Lam;
  out.uniformly_elliptic = lam > 0.0;
  out.provenance = F.provenance + " mollified(eps=" + std::to_string(eps) + ")";
  rep.field = std::move(out);
  return rep;
}

} // namespace ovoid
