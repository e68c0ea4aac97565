#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "semistable/params.hpp"
#include "semistable/rng.hpp"

// Stationary marginal of the two-valued autoregression.  The law is the
// unique cdf fixed point of
//
//     F(x) = p F(x/beta) + q F(x/beta + 1 - 1/beta),
//
// supported on the attractor of x -> beta x and x -> beta x + 1 - beta
// (a Cantor set for beta < 1/2, all of [0,1] for beta = 1/2).  On (0,1] it
// factors as F(x) = x^{log p / log beta} * nu(log x) with nu positive,
// bounded, and |log beta|-periodic.

namespace semistable::marginal {

struct CdfValue {
  double value;
  double error_bound;  // certified: |value - F(x)| <= error_bound
  bool exact() const { return error_bound == 0.0; }
};

// Evaluates F by digit descent.  Each step strips one digit of x and one
// factor p or q; the loop exits exactly at the endpoints and on the central
// gap (beta, 1-beta), where F is locally constant.  If `depth` digits are
// consumed without an exact exit, the uniform profile closes the tail, which
// makes the returned value precisely the depth-th iterate of the fixed-point
// recursion started from F_0(x) = x; the remaining factor bounds the error.
// Ties: x = beta descends left, x = 1-beta descends right.
inline CdfValue cdf(const Params& P, double x, int depth = kDefaultDepth) {
  if (!std::isfinite(x)) throw std::domain_error("cdf: x must be finite");
  if (depth < 1) throw std::invalid_argument("cdf: depth must be positive");
  if (x <= 0.0) return {0.0, 0.0};
  if (x >= 1.0) return {1.0, 0.0};

  const double beta = P.beta;
  const double gap_hi = 1.0 - beta;
  double acc = 0.0;   // weight of digit words already decided below x
  double fac = 1.0;   // product of digit probabilities along the path
  for (int step = 0; step < depth; ++step) {
    if (x <= 0.0) return {acc, 0.0};
    if (x >= 1.0) return {std::min(acc + fac, 1.0), 0.0};
    if (x <= beta) {
      fac *= P.p;
      x /= beta;
    } else if (x >= gap_hi) {
      acc += fac * P.p;
      fac *= P.q;
      x = (x - 1.0) / beta + 1.0;
    } else {
      return {acc + fac * P.p, 0.0};  // central gap: F constant, equal to the
                                      // left-branch mass at this scale
    }
  }
  const double v = acc + fac * std::clamp(x, 0.0, 1.0);
  return {std::clamp(v, 0.0, 1.0), fac};
}

// Worst-case cdf increment over any interval of length beta^k.
inline double cdf_modulus(const Params& P, int k) {
  if (k < 0) throw std::invalid_argument("cdf_modulus: k must be >= 0");
  return std::pow(P.tau(), k);
}

// Periodic factor nu(t) = (e^t)^{-log p / log beta} F(e^t), reduced to the
// fundamental period (log beta, 0].  nu(0) = 1.
inline double nu(const Params& P, double t, int depth = kDefaultDepth) {
  const double logb = std::log(P.beta);  // < 0
  const double period = -logb;
  double tr = t + std::floor(-t / period) * period;
  if (tr > 0.0) tr -= period;          // fp guards; tr must land in (logb, 0]
  if (tr <= logb) tr += period;
  const double ex = std::exp(tr);      // in (beta, 1]
  const double f = cdf(P, ex, depth).value;
  return std::pow(ex, -std::log(P.p) / logb) * f;
}

// Tail factor of the maximum laws: psi(x) = (-x)^{log q / log beta} *
// nu_swapped(log(-x)) for x < 0, so that F(1 + beta^n x) = 1 - q^n psi(x)
// whenever 1 + beta^n x lies in (0, 1).  psi(-1) = 1, psi(-beta) = q.
inline double psi(const Params& P, double x, int depth = kDefaultDepth) {
  if (!std::isfinite(x) || !(x < 0.0))
    throw std::domain_error("psi: requires finite x < 0");
  const double a = std::log(P.q) / std::log(P.beta);  // > 0
  return std::pow(-x, a) * nu(P.swapped(), std::log(-x), depth);
}

// Finite word of digits b_0..b_{K-1}; represents (1-beta) * sum b_j beta^j,
// which undershoots the infinite word by at most beta^K.
struct DigitStream {
  std::vector<std::uint8_t> digits;

  double value(double beta) const {
    double h = 0.0;
    for (std::size_t j = digits.size(); j-- > 0;)
      h = digits[j] + beta * h;
    return (1.0 - beta) * h;
  }
};

// Generalized inverse: smallest x with F(x) >= alpha, to within beta^depth.
// The dual descent emits digit 0 while alpha <= p (the left subtree holds
// mass p; equality must go left to reach the infimum) and renormalizes the
// residual.  Any residual mass left after `depth` digits closes upward, so
// F(result) >= alpha always holds and the overshoot is at most
// cdf_modulus(depth).
inline double quantile(const Params& P, double alpha, int depth = kDefaultDepth) {
  if (!std::isfinite(alpha) || alpha < 0.0 || alpha > 1.0)
    throw std::domain_error("quantile: alpha must lie in [0, 1]");
  if (depth < 1) throw std::invalid_argument("quantile: depth must be positive");
  if (alpha == 0.0) return 0.0;
  if (alpha == 1.0) return 1.0;

  double a = alpha;
  double x = 0.0;
  double pw = 1.0 - P.beta;  // (1-beta) * beta^j
  for (int j = 0; j < depth; ++j) {
    if (a <= P.p) {
      a /= P.p;
    } else {
      x += pw;
      a = (a - P.p) / P.q;
    }
    pw *= P.beta;
  }
  if (a > 0.0) x += pw / (1.0 - P.beta);  // + beta^depth
  return std::min(x, 1.0);
}

// One draw from the stationary law, truncated to `depth` digits
// (i.i.d. Bernoulli(q) digits; error at most beta^depth).
inline DigitStream sample_digits(const Params& P, SplitMix64& rng,
                                 int depth = kDefaultDepth) {
  if (depth < 1) throw std::invalid_argument("sample_digits: depth must be positive");
  DigitStream s;
  s.digits.resize(static_cast<std::size_t>(depth));
  for (auto& d : s.digits) d = rng.next_double() < P.q ? 1 : 0;
  return s;
}

inline double sample_stationary(const Params& P, SplitMix64& rng,
                                int depth = kDefaultDepth) {
  return sample_digits(P, rng, depth).value(P.beta);
}

// Max defect of 1 - F_{beta,p}(1 - x) = F_{beta,q}(x) over the given points.
inline double symmetry_check(const Params& P, const std::vector<double>& xs,
                             int depth = kDefaultDepth) {
  const Params Q = P.swapped();
  double worst = 0.0;
  for (double x : xs) {
    const double lhs = 1.0 - cdf(P, 1.0 - x, depth).value;
    const double rhs = cdf(Q, x, depth).value;
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  return worst;
}

}  // namespace semistable::marginal
