// Walk one parameter pair from the marginal up to its extreme value law:
// evaluate the cdf, read off the tail functional, compare the exact block
// maximum law with a simulated one, and estimate the extremal index.
//
//   ./tail_walk [beta] [p]      defaults: 1/3 1/2

#include <cstdio>
#include <cstdlib>

#include <semistable/evt.hpp>
#include <semistable/exactlaw.hpp>
#include <semistable/marginal.hpp>
#include <semistable/simulate.hpp>

using namespace semistable;

int main(int argc, char** argv) {
  const double beta = argc > 1 ? std::atof(argv[1]) : 1.0 / 3.0;
  const double p = argc > 2 ? std::atof(argv[2]) : 0.5;
  const Params P(beta, p);
  std::printf("pair: beta = %g, p = %g, q = %g\n", P.beta, P.p, P.q);

  std::printf("\nstationary cdf (digit descent, certified error bound):\n");
  for (double x : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const auto v = marginal::cdf(P, x);
    std::printf("  F(%.2f) = %.12f  (+/- %.1e)\n", x, v.value, v.error_bound);
  }

  const int n = 6;
  const exactlaw::LevelSet L = exactlaw::make_levels(P, -1.0, n);
  std::printf("\nlevel u_%d = %.12f, blocks k_%d = %llu, psi(-1) = %g\n", n,
              L.u_n, n, static_cast<unsigned long long>(L.k_n), L.psi);
  std::printf("exact law    P(M_k <= u_n) = %.6f\n",
              exactlaw::run_automaton_law(P, n, static_cast<std::int64_t>(L.k_n)));

  sim::MonteCarloConfig cfg;
  cfg.replications = 20000;
  const auto mc = sim::empirical_max_law(P, {-1.0}, n, cfg, true);
  std::printf("simulated    P(M_k <= u_n) = %.6f  [%.6f, %.6f]\n",
              mc.estimate[0], mc.ci_lo[0], mc.ci_hi[0]);
  std::printf("limit        exp(-p psi)   = %.6f\n",
              evt::limit_law_dependent(P, -1.0));

  const auto theta =
      sim::estimate_extremal_index(P, n, cfg, sim::ThetaMethod::runs);
  std::printf("\nextremal index (runs): %.4f  [%.4f, %.4f], true theta = p = %g\n",
              theta.theta, theta.ci_lo, theta.ci_hi, P.p);
  return 0;
}
