#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "semistable/marginal.hpp"
#include "semistable/rng.hpp"
#include "support/grid_oracle.hpp"
#include "support/stats.hpp"

using Catch::Approx;
using namespace semistable;
using namespace semistable::marginal;

namespace {

// k-th iterate of the cdf map from the uniform start, by unrolling the
// recursion.  Exponential in k; keep k small.
double iterate_cdf(const Params& P, double x, int k) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (k == 0) return x;
  return P.p * iterate_cdf(P, x / P.beta, k - 1) +
         P.q * iterate_cdf(P, (x - 1.0) / P.beta + 1.0, k - 1);
}

const std::vector<Params> kPairs = {Params(1.0 / 3.0, 0.5), Params(0.4, 0.7),
                                    Params(0.3, 0.25)};

// Continuity modulus at a few dozen ulps.  Identities stated at points that
// are not exactly representable (the mirror 1-x, the tie 1-beta, a rounded
// digit expansion) see the descent amplify that offset by 1/beta per level
// until the paths split; the resulting defect is bounded by (2^-46)^alpha
// with alpha = log tau / log beta, not by the truncation modulus.
double ulp_holder_slack(const Params& P) {
  const double alpha = std::log(std::max(P.p, P.q)) / std::log(P.beta);
  return std::pow(0x1.0p-46, alpha);
}

}  // namespace

TEST_CASE("parameter domain is enforced at construction", "[marginal]") {
  CHECK_THROWS_AS(Params(0.6, 0.5), std::domain_error);
  CHECK_THROWS_AS(Params(0.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(Params(-0.1, 0.5), std::domain_error);
  CHECK_THROWS_AS(Params(0.3, 0.0), std::domain_error);
  CHECK_THROWS_AS(Params(0.3, 1.0), std::domain_error);
  CHECK(Params(0.5, 0.5).degenerate());
  CHECK_FALSE(Params(0.5, 0.25).degenerate());
  CHECK(Params(0.4, 0.7).swapped().p == Approx(0.3));
}

TEST_CASE("cdf hits the pinned anchor values exactly", "[marginal]") {
  const Params P(1.0 / 3.0, 0.5);
  auto at_third = cdf(P, 1.0 / 3.0);
  CHECK(at_third.value == 0.5);
  CHECK(at_third.exact());

  auto below = cdf(P, -0.2);
  CHECK(below.value == 0.0);
  CHECK(below.exact());
  CHECK(cdf(P, 0.0).value == 0.0);
  CHECK(cdf(P, 1.0).value == 1.0);
  CHECK(cdf(P, 1.7).value == 1.0);

  // Central gap: locally constant, no truncation error.
  const Params Q(0.3, 0.25);
  auto gap = cdf(Q, 0.5);
  CHECK(gap.value == 0.25);
  CHECK(gap.exact());
  for (double x : {0.31, 0.45, 0.60, 0.69}) {
    auto v = cdf(Q, x);
    CHECK(v.value == 0.25);
    CHECK(v.exact());
  }
}

TEST_CASE("cdf takes the stated branch at the tie points", "[marginal]") {
  // x = beta descends left (factor p, child 1); x = 1-beta descends right
  // (child 0).  Both give F = p exactly.
  for (const auto& P : kPairs) {
    auto lo = cdf(P, P.beta);
    CHECK(lo.value == P.p);
    CHECK(lo.exact());
    // 1 - beta is representable only to half an ulp, so the right-branch
    // child restarts the descent next to 0 instead of at it.
    auto hi = cdf(P, 1.0 - P.beta);
    CHECK(std::fabs(hi.value - P.p) <= ulp_holder_slack(P));
  }
  // beta = 1/2: the two ties coincide; the left rule wins.
  const Params H(0.5, 0.3);
  CHECK(cdf(H, 0.5).value == 0.3);
}

TEST_CASE("cdf error bound is the certified digit modulus", "[marginal]") {
  SplitMix64 g(7001);
  for (const auto& P : kPairs) {
    for (int i = 0; i < 200; ++i) {
      const double x = g.next_double();
      for (int depth : {8, 20, 64}) {
        auto v = cdf(P, x, depth);
        CHECK(v.error_bound <= cdf_modulus(P, depth) + 0.0);
        CHECK(v.value >= 0.0);
        CHECK(v.value <= 1.0);
        CHECK(v.value - v.error_bound <= 1.0);
        CHECK(v.value + v.error_bound >= 0.0);
      }
    }
  }
  CHECK(cdf_modulus(Params(0.3, 0.5), 0) == 1.0);
  CHECK(cdf_modulus(Params(0.3, 0.5), 3) == Approx(0.125).epsilon(1e-15));
  CHECK(cdf_modulus(Params(0.3, 0.75), 2) == Approx(0.5625).epsilon(1e-15));
}

TEST_CASE("cdf satisfies the fixed-point equation", "[marginal]") {
  SplitMix64 g(7003);
  for (const auto& P : kPairs) {
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
      const double x = g.next_double();
      const double lhs = cdf(P, x).value;
      const double rhs = P.p * cdf(P, x / P.beta).value +
                         P.q * cdf(P, (x - 1.0) / P.beta + 1.0).value;
      worst = std::max(worst, std::fabs(lhs - rhs));
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("cdf is nondecreasing beyond its certified bounds", "[marginal]") {
  for (const auto& P : kPairs) {
    CdfValue prev = cdf(P, 0.0);
    for (int i = 1; i <= 2000; ++i) {
      const double x = double(i) / 2000;
      CdfValue v = cdf(P, x);
      CHECK(prev.value - v.value <= prev.error_bound + v.error_bound + 1e-15);
      prev = v;
    }
  }
}

TEST_CASE("cdf agrees with an independent interval iteration", "[marginal]") {
  SplitMix64 g(7005);
  for (const auto& P : kPairs) {
    testsupport::GridOracle oracle(P, 1 << 14, 40);
    const double tol = cdf_modulus(P, 40) + 1e-12;
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
      const double x = g.next_double();
      worst = std::max(worst, oracle.distance(x, cdf(P, x, 64).value));
    }
    CHECK(worst <= tol);
  }
}

TEST_CASE("cdf value at a two-cycle point matches its closed form",
          "[marginal]") {
  // x = 1/4 descends 1/4 -> 3/4 -> 1/4 forever, so
  // F(1/4) = p^2 / (1 - p q) = 1/3 at (1/3, 1/2).
  const Params P(1.0 / 3.0, 0.5);
  CHECK(cdf(P, 0.25).value == Approx(1.0 / 3.0).margin(1e-12));
  CHECK(cdf(P, 0.75).value == Approx(2.0 / 3.0).margin(1e-12));
}

TEST_CASE("scaling identity F(beta x) = p F(x)", "[marginal]") {
  SplitMix64 g(7007);
  for (const auto& P : kPairs) {
    double worst = 0.0;
    for (int i = 0; i < 400; ++i) {
      const double x = g.next_double();
      worst = std::max(
          worst, std::fabs(cdf(P, P.beta * x).value - P.p * cdf(P, x).value));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("reflection maps the law to its digit-swapped sibling",
          "[marginal]") {
  // 1 - F_{beta,p}(1 - x) = F_{beta,q}(x); defect bounded by the truncation
  // moduli plus the ulp slack, since 1 - x rounds for x < 1/2.
  std::vector<double> xs;
  for (int i = 0; i <= 1000; ++i) xs.push_back(double(i) / 1000);
  for (const auto& P : kPairs) {
    CHECK(symmetry_check(P, xs) <=
          2.0 * cdf_modulus(P, kDefaultDepth) + ulp_holder_slack(P));
  }
}

TEST_CASE("iteration contracts at exactly the digit rate", "[marginal]") {
  // The sup distance between consecutive iterates from the uniform start is
  // max(|p-beta|, |q-beta|) * max(p,q)^k, attained along the preimages of the
  // kink of the first iterate.
  SplitMix64 g(7011);
  for (const auto& P : kPairs) {
    const double d0 = std::max(std::fabs(P.p - P.beta), std::fabs(P.q - P.beta));
    const double x0 = std::fabs(P.p - P.beta) >= std::fabs(P.q - P.beta)
                          ? P.beta
                          : 1.0 - P.beta;
    for (int k : {2, 5, 8, 10}) {
      const double target = cdf_modulus(P, k) * d0;
      double xk;
      if (P.p >= P.q)
        xk = std::pow(P.beta, k) * x0;
      else
        xk = 1.0 - std::pow(P.beta, k) * (1.0 - x0);
      const double gap =
          std::fabs(iterate_cdf(P, xk, k + 1) - iterate_cdf(P, xk, k));
      CHECK(gap == Approx(target).margin(1e-12));
      // No point may beat the certified rate.
      double sup = gap;
      for (int i = 0; i < 200; ++i) {
        const double x = g.next_double();
        sup = std::max(sup,
                       std::fabs(iterate_cdf(P, x, k + 1) - iterate_cdf(P, x, k)));
      }
      CHECK(sup <= target + 1e-12);
    }
  }
}

TEST_CASE("nu is periodic, positive, and normalized", "[marginal]") {
  const Params P(1.0 / 3.0, 0.5);
  CHECK(nu(P, 0.0) == Approx(1.0).margin(1e-15));
  const double period = -std::log(P.beta);
  SplitMix64 g(7013);
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i < 500; ++i) {
    const double t = -g.next_double() * period;
    CHECK(std::fabs(nu(P, t) - nu(P, t - period)) <= 1e-10);
    CHECK(std::fabs(nu(P, t) - nu(P, t + 3 * period)) <= 1e-10);
  }
  // Dense positivity sweep over one period.
  for (int i = 0; i < 10000; ++i) {
    const double t = -period * double(i) / 10000;
    const double v = nu(P, t);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo > 0.0);
  CHECK(std::isfinite(hi));
  CHECK(hi >= 1.0);
}

TEST_CASE("nu degenerates to the constant 1 only on the uniform corner",
          "[marginal]") {
  const Params U(0.5, 0.5);
  for (int i = 0; i <= 64; ++i) {
    const double t = std::log(0.5) * double(i) / 64;
    CHECK(nu(U, t) == Approx(1.0).margin(1e-12));
  }
  // Off the corner the profile genuinely oscillates.
  const Params P(0.5, 0.25);
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i <= 512; ++i) {
    const double v = nu(P, std::log(0.5) * double(i) / 512);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi - lo > 1e-3);
}

TEST_CASE("psi anchors and the tail identity", "[marginal]") {
  for (const auto& P : kPairs) {
    CHECK(psi(P, -1.0) == Approx(1.0).margin(1e-12));
    CHECK(psi(P, -P.beta) == Approx(P.q).margin(1e-12));
  }
  const Params P(1.0 / 3.0, 0.5);
  CHECK(psi(P, -1.0 / 3.0) == Approx(0.5).margin(1e-12));
  // One-level tail identity plus reflection: q psi(-c) = F_swapped(beta c).
  for (const auto& R : kPairs) {
    for (double c : {0.3, 0.7, 1.0, 1.4}) {
      const double lhs = R.q * psi(R, -c);
      const double rhs = cdf(R.swapped(), c * R.beta).value;
      CHECK(lhs == Approx(rhs).margin(1e-10));
    }
  }
  CHECK_THROWS_AS(psi(P, 0.0), std::domain_error);
  CHECK_THROWS_AS(psi(P, 0.5), std::domain_error);
}

TEST_CASE("level sets of the tail identity", "[marginal]") {
  // F(1 + beta^n x) = 1 - q^n psi(x) for admitted (x, n).  Dyadic beta keeps
  // the level exactly representable.
  const Params P(0.5, 0.25);
  for (int n : {3, 5, 8}) {
    for (double x : {-0.5, -1.0, -1.5}) {
      const double u = 1.0 + std::pow(P.beta, n) * x;
      const double lhs = 1.0 - cdf(P, u).value;
      const double rhs = std::pow(P.q, n) * psi(P, x);
      CHECK(std::fabs(lhs - rhs) <= 1e-10);
    }
  }
}

TEST_CASE("tail ratios oscillate instead of converging", "[marginal]") {
  // Along h = beta^m the tail ratio (1-F(1-x h))/(1-F(1-h)) is constant in m
  // by exact digit scaling; interleaving h in {beta^m, x beta^m} exposes the
  // periodic factor.  At (1/3, 1/2), x = 1/2, the two subsequence values are
  // F_q(1/2)/F_q(1) = 1/2 and F_q(1/4)/F_q(1/2) = 2/3.
  const Params P(1.0 / 3.0, 0.5);
  const double x = 0.5;
  std::vector<double> ratios;
  for (int m = 8; m <= 14; ++m) {
    for (double c : {1.0, x}) {
      const double h = c * std::pow(P.beta, m);
      const double num = 1.0 - cdf(P, 1.0 - x * h).value;
      const double den = 1.0 - cdf(P, 1.0 - h).value;
      ratios.push_back(num / den);
    }
  }
  const double lo = *std::min_element(ratios.begin(), ratios.end());
  const double hi = *std::max_element(ratios.begin(), ratios.end());
  CHECK(hi - lo > 0.15);
  CHECK(hi - lo == Approx(1.0 / 6.0).margin(1e-8));
  CHECK(lo == Approx(0.5).margin(1e-8));
  CHECK(hi == Approx(2.0 / 3.0).margin(1e-8));
}

TEST_CASE("quantile honors the generalized-inverse contract", "[marginal]") {
  SplitMix64 g(7017);
  for (const auto& P : kPairs) {
    CHECK(quantile(P, 0.0) == 0.0);
    CHECK(quantile(P, 1.0) == 1.0);
    // quantile returns a 64-digit expansion rounded to double; evaluating
    // the cdf at that rounded point costs at most the ulp slack.
    const double slack = ulp_holder_slack(P);
    for (int i = 0; i < 200; ++i) {
      const double a = g.next_double();
      const double x = quantile(P, a);
      CHECK(cdf(P, x).value >= a - slack - 1e-15);
      if (x > 1e-6)
        CHECK(cdf(P, x - 1e-6).value <
              a + cdf_modulus(P, kDefaultDepth) + slack);
    }
  }
  CHECK_THROWS_AS(quantile(kPairs[0], -0.1), std::domain_error);
  CHECK_THROWS_AS(quantile(kPairs[0], 1.1), std::domain_error);
}

TEST_CASE("quantile pins the pinned median", "[marginal]") {
  const Params P(1.0 / 3.0, 0.5);
  const double q50 = quantile(P, 0.5);
  CHECK(q50 == Approx(1.0 / 3.0).margin(1e-15));
  // Brute scan near the jump point confirms the infimum.
  double first = -1.0;
  for (int i = 0; i <= 20000; ++i) {
    const double x = 0.33 + double(i) * 1e-6;
    if (cdf(P, x).value >= 0.5) {
      first = x;
      break;
    }
  }
  CHECK(first >= 0.0);
  CHECK(std::fabs(q50 - first) <= 1e-6 + 1e-12);
}

TEST_CASE("quantile digit descent reconstructs alpha", "[marginal]") {
  // Mirror the dual descent, then fold the digits back; alpha must land in
  // the closed bracket left by the unresolved residual.
  SplitMix64 g(7019);
  for (const auto& P : kPairs) {
    for (int i = 0; i < 100; ++i) {
      const double alpha = g.next_double();
      std::vector<int> digits;
      double a = alpha;
      for (int j = 0; j < 48; ++j) {
        if (a <= P.p) {
          digits.push_back(0);
          a /= P.p;
        } else {
          digits.push_back(1);
          a = (a - P.p) / P.q;
        }
      }
      double lo = 0.0, hi = 1.0;
      for (int j = 47; j >= 0; --j) {
        if (digits[j]) {
          lo = P.p + P.q * lo;
          hi = P.p + P.q * hi;
        } else {
          lo = P.p * lo;
          hi = P.p * hi;
        }
      }
      CHECK(alpha >= lo - 1e-13);
      CHECK(alpha <= hi + 1e-13);
    }
  }
}

TEST_CASE("quantile is nondecreasing in alpha", "[marginal]") {
  SplitMix64 g(7023);
  for (const auto& P : kPairs) {
    std::vector<double> alphas;
    for (int i = 0; i < 500; ++i) alphas.push_back(g.next_double());
    std::sort(alphas.begin(), alphas.end());
    double prev = 0.0;
    for (double a : alphas) {
      const double x = quantile(P, a);
      CHECK(x >= prev - 1e-15);
      prev = x;
    }
  }
}

TEST_CASE("digit words reconstruct their values", "[marginal]") {
  DigitStream all_ones;
  all_ones.digits.assign(200, 1);
  CHECK(all_ones.value(1.0 / 3.0) == Approx(1.0).margin(1e-15));
  DigitStream all_zero;
  all_zero.digits.assign(50, 0);
  CHECK(all_zero.value(0.4) == 0.0);
  DigitStream one;
  one.digits = {1};
  CHECK(one.value(0.25) == 0.75);  // (1-beta) * 1
}

TEST_CASE("stationary sampler matches the cdf", "[marginal]") {
  const Params P(1.0 / 3.0, 0.5);
  SplitMix64 g(substream(20260819ull, 9));
  std::vector<double> sample;
  sample.reserve(100000);
  for (int i = 0; i < 100000; ++i) sample.push_back(sample_stationary(P, g));
  const double d = testsupport::ks_statistic(
      sample, [&](double x) { return cdf(P, x).value; });
  CHECK(d <= 0.01);
}
