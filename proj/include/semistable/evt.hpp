#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include "semistable/marginal.hpp"
#include "semistable/params.hpp"

// Closed-form limit laws of normalized maxima along k_n = floor(q^-n), and
// the wider family they belong to: distributions of the form
// exp{-t(x) nu(log t(x))} with t the usual shape-xi tail transform and nu a
// positive bounded log-periodic factor.  Constant nu recovers the classical
// max-stable laws; here nu oscillates with period log(1/q).

namespace semistable::evt {

// One member of the family: tail shape xi, modulation nu_fn with period
// log(c), geometric ratio c > 1.
struct MssLaw {
  double xi = 0.0;
  double c = 2.0;
  std::function<double(double)> nu_fn;
};

namespace detail {

inline void require_nondegenerate(const Params& P, const char* who) {
  if (P.degenerate())
    throw std::invalid_argument(std::string(who) +
                                ": the uniform corner beta = p = 1/2 has no "
                                "geometric extreme value limit");
}

inline void require_negative(double x, const char* who) {
  if (!std::isfinite(x) || !(x < 0.0))
    throw std::domain_error(std::string(who) + ": requires finite x < 0");
}

// The modulation must be positive, finite, and log(c)-periodic; verified on
// a one-period grid before each evaluation batch.
inline void validate_law(const MssLaw& law) {
  if (!(law.c > 1.0) || !std::isfinite(law.c))
    throw std::invalid_argument("MssLaw: c must be finite and > 1");
  if (!law.nu_fn) throw std::invalid_argument("MssLaw: missing nu_fn");
  const double period = std::log(law.c);
  const int grid = 64;
  for (int i = 0; i < grid; ++i) {
    const double t = period * (static_cast<double>(i) / grid - 0.5);
    const double v = law.nu_fn(t);
    const double w = law.nu_fn(t + period);
    if (!std::isfinite(v) || !(v > 0.0))
      throw std::invalid_argument("MssLaw: nu_fn must be positive and finite");
    if (std::fabs(v - w) > 1e-8 * std::max(1.0, std::fabs(v)))
      throw std::invalid_argument("MssLaw: nu_fn is not log(c)-periodic");
  }
}

}  // namespace detail

// G(x) = exp{-t nu(log t)} with t = (1+xi x)^(-1/xi) (xi != 0) or e^{-x}
// (xi = 0); outside the support, 0 on the lower tail side, 1 on the upper.
inline double msstable_general(const MssLaw& law, double x) {
  detail::validate_law(law);
  if (!std::isfinite(x)) throw std::domain_error("msstable_general: x finite");
  double t = 0.0;
  if (law.xi == 0.0) {
    t = std::exp(-x);
  } else {
    const double w = 1.0 + law.xi * x;
    if (w <= 0.0) return law.xi < 0.0 ? 1.0 : 0.0;
    t = std::pow(w, -1.0 / law.xi);
  }
  return std::exp(-t * law.nu_fn(std::log(t)));
}

// Limit of F(u_n)^{k_n}: the maximum of k_n independent stationary draws,
// normalized by a_n = beta^-n, b_n = 1.
inline double limit_law_iid(const Params& P, double x,
                            int depth = kDefaultDepth) {
  detail::require_nondegenerate(P, "limit_law_iid");
  detail::require_negative(x, "limit_law_iid");
  return std::exp(-marginal::psi(P, x, depth));
}

// Limit of P(M_{k_n} <= u_n) for the dependent chain: the i.i.d. law raised
// to the extremal index p.
inline double limit_law_dependent(const Params& P, double x,
                                  int depth = kDefaultDepth) {
  detail::require_nondegenerate(P, "limit_law_dependent");
  detail::require_negative(x, "limit_law_dependent");
  return std::exp(-P.p * marginal::psi(P, x, depth));
}

// Unique root in (0,1) of q^m + q = 1: the geometric ratios c = 1/q for
// which a dependent law with theta = c^-m is of the same type as its
// i.i.d. counterpart.
inline double same_type_q(int m) {
  if (m < 1) throw std::invalid_argument("same_type_q: m must be >= 1");
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g = std::pow(mid, m) + mid - 1.0;  // strictly increasing
    (g < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct NormingSequences {
  double a_n = 0.0;        // beta^-n
  double b_n = 1.0;
  std::uint64_t k_n = 0;   // floor(q^-n)
  double c = 0.0;          // lim k_{n+1}/k_n = 1/q
};

inline NormingSequences norming_sequences(const Params& P, int n) {
  if (n < 1) throw std::invalid_argument("norming_sequences: n must be >= 1");
  NormingSequences s;
  s.a_n = std::pow(P.beta, -n);
  s.b_n = 1.0;
  s.k_n = block_count(P.q, n);
  s.c = 1.0 / P.q;
  return s;
}

// The dependent law written as a member of the general family: with
// a = log q / log beta, the map y = a(x + 1) and the rescaled modulation
// nu~(u) = p nu_{beta,q}(u/a) satisfy
//   limit_law_dependent(x) = msstable_general(law, a x + a).
// The family parameters are computed here, not assumed: xi = -1/a (negative:
// maxima are bounded above), period log(1/q).
struct FamilyEmbedding {
  MssLaw law;
  double scale = 0.0;     // a
  double location = 0.0;  // a
};

inline FamilyEmbedding dependent_family_embedding(const Params& P,
                                                  int depth = kDefaultDepth) {
  detail::require_nondegenerate(P, "dependent_family_embedding");
  const double a = std::log(P.q) / std::log(P.beta);
  FamilyEmbedding e;
  e.scale = a;
  e.location = a;
  e.law.xi = -1.0 / a;
  e.law.c = 1.0 / P.q;
  const Params tail = P.swapped();
  const double p = P.p;
  e.law.nu_fn = [tail, a, p, depth](double u) {
    return p * marginal::nu(tail, u / a, depth);
  };
  return e;
}

}  // namespace semistable::evt
