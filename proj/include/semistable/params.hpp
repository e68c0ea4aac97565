#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace semistable {

// Digit truncation used by default throughout: values carry certified error
// bounds of max{p,q}^depth (cdf) or beta^depth (points), both below 2^-64.
inline constexpr int kDefaultDepth = 64;

// Parameters of the two-valued autoregression X_{k+1} = beta*X_k + eps_{k+1},
// P(eps = 0) = p, P(eps = 1-beta) = q = 1-p.  Requires 0 < beta <= 1/2 and
// 0 < p < 1.  (beta, p) = (1/2, 1/2) is the uniform-marginal corner; it is
// valid here and rejected only where a caller needs a non-degenerate law.
struct Params {
  double beta;
  double p;
  double q;  // 1 - p, fixed at construction

  Params(double beta_, double p_) : beta(beta_), p(p_), q(1.0 - p_) {
    if (!std::isfinite(beta) || !(beta > 0.0) || !(beta <= 0.5))
      throw std::domain_error("Params: beta must lie in (0, 1/2]");
    if (!std::isfinite(p) || !(p > 0.0) || !(p < 1.0))
      throw std::domain_error("Params: p must lie in (0, 1)");
  }

  // Uniform marginal; no extreme-value theory applies there.
  bool degenerate() const { return beta == 0.5 && p == 0.5; }

  // Same beta with the digit probabilities swapped: the marginal of 1 - X.
  Params swapped() const { return Params(beta, q); }

  // Contraction factor of the distributional fixed-point iteration.
  double tau() const { return p > q ? p : q; }
};

// Block count k_n = floor(q^-n), the subsequence along which maxima are
// renormalized.  Evaluated in extended precision so the floor is the floor
// of the mathematical power of the given double q.
inline std::uint64_t block_count(double q, int n) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("block_count: q in (0,1)");
  if (n < 0) throw std::invalid_argument("block_count: n must be >= 0");
  const long double k = std::floor(std::pow(1.0L / static_cast<long double>(q),
                                            static_cast<long double>(n)));
  if (!(k < 9.0e18L))
    throw std::overflow_error("block_count: k_n exceeds 64-bit range");
  return static_cast<std::uint64_t>(k);
}

}  // namespace semistable
