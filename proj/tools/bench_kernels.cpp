#include "ovoid/elliptic.hpp"

#include <chrono>
#include <cstdio>
#include <random>

using namespace ovoid;

namespace {

template <typename F>
double time_best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

} // namespace

int main(int argc, char** argv) {
  int L = (argc > 1) ? std::atoi(argv[1]) : 48;
  int reps = (argc > 2) ? std::atoi(argv[2]) : 5;
  GridPtr g = build_grid(L);
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd;
  Eigen::VectorXd values(g->size());
  for (int n = 0; n < g->size(); ++n) values[n] = nd(rng);
  Eigen::VectorXd coeffs = analyze(*g, values);
  CoefficientField F = coefficient_field_by_name(g, "tangent:0.5");

  std::printf("L = %d, nodes = %d, coeffs = %d, best of %d runs\n", L, g->size(),
              g->n_coeff(), reps);

  struct Row {
    const char* name;
    double serial, parallel;
  };
  Row rows[] = {
      {"analyze",
       time_best_of(reps, [&] { analyze_serial(*g, values); }),
       time_best_of(reps, [&] { analyze(*g, values); })},
      {"synthesize_partials(3)",
       time_best_of(reps, [&] { synthesize_partials_serial(*g, coeffs, 3); }),
       time_best_of(reps, [&] { synthesize_partials(*g, coeffs, 3); })},
      {"assemble_global",
       time_best_of(reps, [&] { assemble_global_serial(F); }),
       time_best_of(reps, [&] { assemble_global(F); })},
  };
  std::printf("%-24s %12s %12s %9s\n", "kernel", "serial [s]", "parallel [s]",
              "speedup");
  for (const Row& r : rows)
    std::printf("%-24s %12.4f %12.4f %8.2fx\n", r.name, r.serial, r.parallel,
                r.serial / r.parallel);

  // bit-identical check while we are here
  Eigen::VectorXd cs = analyze_serial(*g, values);
  Eigen::VectorXd cp = analyze(*g, values);
  std::printf("serial/parallel analyze identical: %s\n",
              (cs - cp).cwiseAbs().maxCoeff() == 0.0 ? "yes" : "NO");
  return 0;
}
