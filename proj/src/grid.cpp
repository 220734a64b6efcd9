#include "ovoid/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ovoid {

namespace {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  const double pi = std::numbers::pi;
  for (int k = 0; k < n; ++k) {
    // Tricomi-type initial guess, k-th root counted from x = +1.
    double t = std::cos(pi * (k + 0.75) / (n + 0.5));
    double p0 = 0.0, p1 = 0.0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = t;
      for (int l = 2; l <= n; ++l) {
        double p2 = ((2 * l - 1) * t * p1 - (l - 1) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = t;
    for (int l = 2; l <= n; ++l) {
      double p2 = ((2 * l - 1) * t * p1 - (l - 1) * p0) / l;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (t * p1 - p0) / (t * t - 1.0);
    x[k] = t;
    w[k] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

} // namespace

Vec3 Grid::e1(int node) const {
  int i = ring_of(node), j = lon_of(node);
  double st = sin_theta[i], ct = cos_theta[i];
  double cp = std::cos(phi[j]), sp = std::sin(phi[j]);
  Vec3 th(ct * cp, ct * sp, -st);
  Vec3 ph(-sp, cp, 0.0);
  double ca = std::cos(frame_alpha), sa = std::sin(frame_alpha);
  return ca * th + sa * ph;
}

Vec3 Grid::e2(int node) const {
  int i = ring_of(node), j = lon_of(node);
  double st = sin_theta[i], ct = cos_theta[i];
  double cp = std::cos(phi[j]), sp = std::sin(phi[j]);
  Vec3 th(ct * cp, ct * sp, -st);
  Vec3 ph(-sp, cp, 0.0);
  double ca = std::cos(frame_alpha), sa = std::sin(frame_alpha);
  return -sa * th + ca * ph;
}

GridPtr build_grid(int L, double frame_alpha) {
  if (L < kMinGridL || L > kMaxGridL)
    throw std::invalid_argument("build_grid: band limit " + std::to_string(L) +
                                " outside supported range [" + std::to_string(kMinGridL) +
                                ", " + std::to_string(kMaxGridL) + "]");
  auto g = std::make_shared<Grid>();
  g->L = L;
  g->n_theta = L + 1;
  g->n_phi = 2 * (L + 1);
  g->frame_alpha = frame_alpha;
  g->frame_id = frame_alpha == 0.0 ? "theta-phi"
                                   : "theta-phi:rot=" + std::to_string(frame_alpha);

  std::vector<double> x, w;
  gauss_legendre(g->n_theta, x, w);
  // gauss_legendre returns x descending in cos => theta ascending already.
  g->theta.resize(g->n_theta);
  g->ring_weight.resize(g->n_theta);
  g->sin_theta.resize(g->n_theta);
  g->cos_theta.resize(g->n_theta);
  for (int i = 0; i < g->n_theta; ++i) {
    g->theta[i] = std::acos(x[i]);
    g->cos_theta[i] = x[i];
    g->sin_theta[i] = std::sin(g->theta[i]);
    g->ring_weight[i] = w[i];
  }
  // acos of descending x gives ascending theta; enforce it.
  for (int i = 1; i < g->n_theta; ++i) {
    if (g->theta[i] <= g->theta[i - 1]) throw std::logic_error("build_grid: ring order");
  }

  const double pi = std::numbers::pi;
  g->phi.resize(g->n_phi);
  for (int j = 0; j < g->n_phi; ++j) g->phi[j] = 2.0 * pi * j / g->n_phi;

  g->nodes.resize(g->size());
  g->weights.resize(g->size());
  const double wphi = 2.0 * pi / g->n_phi;
  for (int i = 0; i < g->n_theta; ++i) {
    for (int j = 0; j < g->n_phi; ++j) {
      int p = g->index(i, j);
      g->nodes[p] = Vec3(g->sin_theta[i] * std::cos(g->phi[j]),
                         g->sin_theta[i] * std::sin(g->phi[j]), g->cos_theta[i]);
      g->weights[p] = g->ring_weight[i] * wphi;
    }
  }
  return g;
}

double integrate(const Grid& grid, const Eigen::VectorXd& values) {
  if (values.size() != grid.size())
    throw std::invalid_argument("integrate: value/grid size mismatch");
  double total = 0.0;
  const double wphi = 2.0 * std::numbers::pi / grid.n_phi;
  for (int i = 0; i < grid.n_theta; ++i) {
    double ring = 0.0;
    for (int j = 0; j < grid.n_phi; ++j) ring += values[grid.index(i, j)];
    total += grid.ring_weight[i] * wphi * ring;
  }
  return total;
}

double grid_spacing(const Grid& grid) {
  return std::sqrt(4.0 * std::numbers::pi / grid.size());
}

Eigen::VectorXd coordinate_values(const Grid& grid, int k) {
  Eigen::VectorXd v(grid.size());
  for (int p = 0; p < grid.size(); ++p) v[p] = grid.nodes[p][k];
  return v;
}

} // namespace ovoid
