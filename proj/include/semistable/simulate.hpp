#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

#include "semistable/exactlaw.hpp"
#include "semistable/marginal.hpp"
#include "semistable/params.hpp"
#include "semistable/rng.hpp"

// Seeded Monte Carlo for the AR recursion X_{k+1} = beta X_k + eps_{k+1} and
// deterministic orbits of the expanding map that inverts it.  Replication r
// always draws from substream(seed, r), so results do not depend on how the
// replication range is partitioned across threads.

namespace semistable::sim {

// Optional parallelism: SEMISTABLE_THREADS selects the worker count for the
// replication loops; unset, empty, or not a positive integer means serial.
inline int thread_count() {
  const char* s = std::getenv("SEMISTABLE_THREADS");
  if (s == nullptr || *s == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(s, &end, 10);
  if (end == s || v < 1) return 1;
  return static_cast<int>(std::min(v, 64L));
}

struct MonteCarloConfig {
  std::uint64_t seed = 20260819ull;
  std::uint64_t replications = 10000;
  int depth = kDefaultDepth;      // digit truncation for X_0
  std::uint64_t horizon = 4096;   // per-replication stream length (runs method)
};

namespace detail {

inline void validate(const MonteCarloConfig& cfg) {
  if (cfg.replications < 1)
    throw std::invalid_argument("MonteCarloConfig: replications must be >= 1");
  if (cfg.depth < 1)
    throw std::invalid_argument("MonteCarloConfig: depth must be >= 1");
}

// Runs body(chunk_index, lo, hi) over a partition of [0, reps); chunk count
// and boundaries depend only on reps and the thread setting.
template <class Body>
inline std::size_t run_chunked(std::uint64_t reps, const Body& body) {
  const std::uint64_t T =
      std::min<std::uint64_t>(static_cast<std::uint64_t>(thread_count()), reps);
  if (T <= 1) {
    body(std::size_t{0}, std::uint64_t{0}, reps);
    return 1;
  }
  const std::uint64_t chunk = (reps + T - 1) / T;
  std::vector<std::thread> workers;
  std::size_t count = 0;
  for (std::uint64_t lo = 0; lo < reps; lo += chunk, ++count)
    workers.emplace_back([&body, count, lo, chunk, reps] {
      body(count, lo, std::min(lo + chunk, reps));
    });
  for (auto& w : workers) w.join();
  return count;
}

inline std::size_t chunk_plan(std::uint64_t reps) {
  const std::uint64_t T =
      std::min<std::uint64_t>(static_cast<std::uint64_t>(thread_count()), reps);
  if (T <= 1) return 1;
  const std::uint64_t chunk = (reps + T - 1) / T;
  return static_cast<std::size_t>((reps + chunk - 1) / chunk);
}

}  // namespace detail

struct Interval {
  double lo = 0.0, hi = 0.0;
};

// Wilson score interval for a binomial proportion (z = 1.96: central 95%).
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                double z = 1.96) {
  if (trials == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = ph + z2 / (2.0 * nn);
  const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn));
  return {std::max(0.0, (centre - half) / denom),
          std::min(1.0, (centre + half) / denom)};
}

// ---------------------------------------------------------------------------
// Trajectories

struct Trajectory {
  Params params;
  std::vector<std::uint8_t> x0_digits;    // digit j of X_0
  std::vector<std::uint8_t> innovations;  // eps_k as a bit, index k-1
  std::vector<double> values;             // X_0..X_m

  explicit Trajectory(const Params& P) : params(P) {}

  std::size_t steps() const { return innovations.size(); }
  int depth() const { return static_cast<int>(x0_digits.size()); }

  // Digit j of X_k: innovations shift in at the front, X_0's digits recede.
  // Digits beyond the recorded truncation read 0.
  int digit(std::size_t k, std::size_t j) const {
    if (k > steps()) throw std::out_of_range("Trajectory::digit: k out of range");
    if (j < k) return innovations[k - j - 1];
    const std::size_t into_x0 = j - k;
    return into_x0 < x0_digits.size() ? x0_digits[into_x0] : 0;
  }

  // Value of X_k re-read from its digit window at the recorded depth.
  double value_from_digits(std::size_t k) const {
    const std::size_t d = x0_digits.size() + k;
    double h = 0.0;
    for (std::size_t j = d; j-- > 0;)
      h = static_cast<double>(digit(k, j)) + params.beta * h;
    return (1.0 - params.beta) * h;
  }
};

inline Trajectory trajectory_from_bits(const Params& P,
                                       const std::vector<std::uint8_t>& x0_digits,
                                       const std::vector<std::uint8_t>& innovations) {
  Trajectory t(P);
  t.x0_digits = x0_digits;
  t.innovations = innovations;
  t.values.resize(innovations.size() + 1);
  double h = 0.0;
  for (std::size_t j = x0_digits.size(); j-- > 0;)
    h = static_cast<double>(x0_digits[j]) + P.beta * h;
  t.values[0] = (1.0 - P.beta) * h;
  for (std::size_t k = 0; k < innovations.size(); ++k)
    t.values[k + 1] =
        P.beta * t.values[k] + (innovations[k] ? 1.0 - P.beta : 0.0);
  return t;
}

inline Trajectory simulate_ar(const Params& P, const MonteCarloConfig& cfg,
                              std::uint64_t m, std::uint64_t replication = 0) {
  detail::validate(cfg);
  SplitMix64 g = substream(cfg.seed, replication);
  DigitSource ds(g, P.q);
  std::vector<std::uint8_t> x0(static_cast<std::size_t>(cfg.depth));
  for (auto& b : x0) b = static_cast<std::uint8_t>(ds.next_digit());
  std::vector<std::uint8_t> inn(static_cast<std::size_t>(m));
  for (auto& b : inn) b = static_cast<std::uint8_t>(ds.next_digit());
  return trajectory_from_bits(P, x0, inn);
}

// ---------------------------------------------------------------------------
// The expanding map and its conjugacy with the digit shift

inline double map_step(const Params& P, double x) {
  return x >= 1.0 - P.beta ? (x - 1.0) / P.beta + 1.0 : x / P.beta;
}

struct Orbit {
  std::vector<double> points;
  std::ptrdiff_t escape_index = -1;  // index of the first point outside [0,1]
};

inline Orbit iterate_map(const Params& P, double x0, int steps) {
  if (!(x0 >= 0.0 && x0 <= 1.0))
    throw std::domain_error("iterate_map: x0 must lie in [0,1]");
  if (steps < 0) throw std::invalid_argument("iterate_map: steps must be >= 0");
  Orbit o;
  o.points.reserve(static_cast<std::size_t>(steps) + 1);
  o.points.push_back(x0);
  for (int k = 0; k < steps; ++k) {
    const double nx = map_step(P, o.points.back());
    o.points.push_back(nx);
    if (!(nx >= 0.0 && nx <= 1.0)) {
      o.escape_index = static_cast<std::ptrdiff_t>(o.points.size()) - 1;
      break;
    }
  }
  return o;
}

// Slope of the map is 1/beta everywhere, so the exponent is a constant.
inline double lyapunov(double beta) {
  if (!(beta > 0.0 && beta <= 0.5))
    throw std::domain_error("lyapunov: beta must lie in (0, 1/2]");
  return -std::log(beta);
}

// First `count` digits of x, read off by the map itself: each step records
// which branch acted.  Faithful while the orbit stays farther from the
// branch point than the accumulated rounding, which holds for beta < 1/2
// at moderate count because the gap at scale j has width beta^j(1-2beta).
inline std::vector<std::uint8_t> extract_digits(const Params& P, double x,
                                                int count) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("extract_digits: x must lie in [0,1]");
  std::vector<std::uint8_t> out(static_cast<std::size_t>(count));
  for (auto& b : out) {
    b = x >= 1.0 - P.beta ? 1 : 0;
    x = map_step(P, x);
    x = std::min(std::max(x, 0.0), 1.0);
  }
  return out;
}

// The map undoes one AR step: applying it to X_{k+1} recovers X_k.  Checked
// on the digit representation: digits re-extracted from the stored value of
// X_{k+1} must be the innovation bit followed by X_k's re-extracted digits.
// value_defect reports max |f(X_{k+1}) - X_k| in the recorded floating
// arithmetic (0 when beta is a dyadic rational, where every step is exact).
struct ConjugacyReport {
  bool digits_exact = false;
  std::size_t steps_checked = 0;
  double value_defect = 0.0;
};

inline ConjugacyReport check_conjugacy(const Trajectory& t,
                                       int digits_checked = 20) {
  ConjugacyReport r;
  r.digits_exact = true;
  std::vector<std::uint8_t> prev =
      extract_digits(t.params, t.values[0], digits_checked);
  for (std::size_t k = 0; k + 1 < t.values.size(); ++k) {
    const std::vector<std::uint8_t> next =
        extract_digits(t.params, t.values[k + 1], digits_checked);
    if (next[0] != t.innovations[k]) r.digits_exact = false;
    for (int j = 0; j + 1 < digits_checked; ++j)
      if (next[static_cast<std::size_t>(j) + 1] != prev[static_cast<std::size_t>(j)])
        r.digits_exact = false;
    r.value_defect = std::max(
        r.value_defect,
        std::fabs(map_step(t.params, t.values[k + 1]) - t.values[k]));
    prev = next;
    ++r.steps_checked;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Invariance of the stationary law under the map (no Monte Carlo): the
// pullback of (a,b] is (beta a, beta b] plus its translate in the right cell,
// so the defect below is 0 for the exact law.

inline double check_invariance(const Params& P,
                               const std::vector<std::pair<double, double>>& intervals,
                               int depth = kDefaultDepth) {
  double worst = 0.0;
  for (const auto& [a, b] : intervals) {
    if (!(a >= 0.0 && a <= b && b <= 1.0))
      throw std::invalid_argument(
          "check_invariance: intervals must satisfy 0 <= a <= b <= 1");
    const double sh = 1.0 - P.beta;
    const double pre = (marginal::cdf(P, P.beta * b, depth).value -
                        marginal::cdf(P, P.beta * a, depth).value) +
                       (marginal::cdf(P, P.beta * b + sh, depth).value -
                        marginal::cdf(P, P.beta * a + sh, depth).value);
    const double direct = marginal::cdf(P, b, depth).value -
                          marginal::cdf(P, a, depth).value;
    worst = std::max(worst, std::fabs(pre - direct));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Convergence of the i.i.d. maximum law along the geometric block counts:
// F(1 + beta^n x)^{k_n} against its limit exp(-psi(x)).

struct DoaPoint {
  int n = 0;
  std::uint64_t k_n = 0;
  double marginal_at_level = 0.0;  // F(u_n)
  double value = 0.0;              // F(u_n)^{k_n}
  double gap = 0.0;                // |value - limit|
};

struct DoaReport {
  double x = 0.0;
  double psi = 0.0;
  double limit = 0.0;  // exp(-psi)
  std::vector<DoaPoint> points;
};

inline DoaReport doa_convergence(const Params& P, double x, int n_min,
                                 int n_max, int depth = kDefaultDepth) {
  if (!std::isfinite(x) || !(x < 0.0))
    throw std::domain_error("doa_convergence: requires finite x < 0");
  if (n_min < 1 || n_max < n_min)
    throw std::invalid_argument("doa_convergence: need 1 <= n_min <= n_max");
  DoaReport rep;
  rep.x = x;
  rep.psi = marginal::psi(P, x, depth);
  rep.limit = std::exp(-rep.psi);
  for (int n = n_min; n <= n_max; ++n) {
    const double u = 1.0 + std::pow(P.beta, n) * x;
    if (!(u > 0.0 && u < 1.0))
      throw std::invalid_argument("doa_convergence: n too small for this x");
    DoaPoint pt;
    pt.n = n;
    pt.k_n = block_count(P.q, n);
    pt.marginal_at_level = marginal::cdf(P, u, depth).value;
    pt.value = static_cast<double>(
        std::pow(static_cast<long double>(pt.marginal_at_level),
                 static_cast<long double>(pt.k_n)));
    pt.gap = std::fabs(pt.value - rep.limit);
    rep.points.push_back(pt);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Empirical law of the block maximum M_{k_n} at the levels u_n(x) over a
// sorted grid of negative x.  One trajectory per replication serves every
// grid point, so the estimates are monotone in x by construction.

struct EmpiricalLaw {
  std::vector<double> x_grid;
  int n = 0;
  std::uint64_t k_n = 0;
  std::uint64_t replications = 0;
  bool dependent = true;
  std::vector<double> u;          // thresholds u_n(x)
  std::vector<double> estimate;   // ambiguous trajectories counted as <=
  std::vector<double> ci_lo, ci_hi;
  std::vector<std::uint64_t> ambiguous;  // |M - u| within the guard band
};

inline EmpiricalLaw empirical_max_law(const Params& P,
                                      const std::vector<double>& x_grid, int n,
                                      const MonteCarloConfig& cfg,
                                      bool dependent = true) {
  detail::validate(cfg);
  if (x_grid.empty())
    throw std::invalid_argument("empirical_max_law: empty grid");
  for (std::size_t i = 0; i + 1 < x_grid.size(); ++i)
    if (!(x_grid[i] <= x_grid[i + 1]))
      throw std::invalid_argument("empirical_max_law: grid must be sorted");

  EmpiricalLaw law;
  law.x_grid = x_grid;
  law.n = n;
  law.replications = cfg.replications;
  law.dependent = dependent;
  for (double x : x_grid) {
    const exactlaw::LevelSet L = exactlaw::make_levels(P, x, n, cfg.depth);
    law.k_n = L.k_n;
    law.u.push_back(L.u_n);
  }

  // Values carry <= ~1e-12 arithmetic and truncation error; a maximum inside
  // the guard band around a threshold is counted both ways.
  const double guard = std::max(std::pow(P.beta, cfg.depth), 1e-12);
  const std::size_t G = x_grid.size();
  const std::size_t chunks = detail::chunk_plan(cfg.replications);
  std::vector<std::vector<std::uint64_t>> below(chunks,
                                                std::vector<std::uint64_t>(G, 0));
  std::vector<std::vector<std::uint64_t>> amb = below;

  const double u_top = law.u.back() + guard;
  detail::run_chunked(cfg.replications, [&](std::size_t ci, std::uint64_t lo,
                                            std::uint64_t hi) {
    auto& nbelow = below[ci];
    auto& namb = amb[ci];
    for (std::uint64_t r = lo; r < hi; ++r) {
      SplitMix64 g = substream(cfg.seed, r);
      DigitSource ds(g, P.q);
      double m = 0.0;
      if (dependent) {
        double x = 0.0;
        for (int j = cfg.depth; j-- > 0;)
          x = static_cast<double>(ds.next_digit()) + P.beta * x;
        x *= 1.0 - P.beta;
        m = x;
        for (std::uint64_t k = 1; k < law.k_n && m <= u_top; ++k) {
          x = P.beta * x + (ds.next_digit() ? 1.0 - P.beta : 0.0);
          m = std::max(m, x);
        }
      } else {
        for (std::uint64_t k = 0; k < law.k_n && m <= u_top; ++k) {
          double x = 0.0;
          for (int j = cfg.depth; j-- > 0;)
            x = static_cast<double>(ds.next_digit()) + P.beta * x;
          m = std::max(m, x * (1.0 - P.beta));
        }
      }
      for (std::size_t i = G; i-- > 0;) {
        if (m <= law.u[i] - guard)
          nbelow[i] += 1;
        else if (m <= law.u[i] + guard)
          namb[i] += 1;
        else
          break;  // grid sorted: every lower threshold is exceeded too
      }
    }
  });

  for (std::size_t i = 0; i < G; ++i) {
    std::uint64_t nb = 0, na = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
      nb += below[c][i];
      na += amb[c][i];
    }
    law.ambiguous.push_back(na);
    law.estimate.push_back(static_cast<double>(nb + na) /
                           static_cast<double>(cfg.replications));
    const Interval w = wilson_interval(nb + na, cfg.replications);
    law.ci_lo.push_back(w.lo);
    law.ci_hi.push_back(w.hi);
  }
  return law;
}

// ---------------------------------------------------------------------------
// Extremal index estimators at the default threshold u_n = 1 - beta^n
// (x = -1), where the exceedance {X_k > u_n} is, up to null sets, "the n
// most recent digits are all ones".  Both estimators therefore stream digits
// and track the trailing run length; no trajectory values are materialized.

enum class ThetaMethod { runs, ratio };

struct ThetaEstimate {
  ThetaMethod method = ThetaMethod::runs;
  bool iid_control = false;
  bool defined = false;
  double theta = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;  // bootstrap 95% percentile
  std::uint64_t exceedances = 0;    // runs: total; ratio: replications with any
  std::uint64_t clusters = 0;       // runs only
  std::uint64_t successes = 0;      // ratio only: replications with M <= u_n
  double block_law = 0.0;           // ratio only: successes / replications
  double marginal_at_u = 0.0;       // ratio only: F(u_n)
  std::uint64_t k_n = 0;
  int j_n = 0;
};

namespace detail {

// Length of the initial all-ones digit run, capped at `cap`.
inline int leading_run(DigitSource& ds, int cap) {
  int r = 0;
  while (r < cap && ds.next_digit()) ++r;
  return r;
}

struct RunsRepStats {
  std::uint32_t clusters = 0;
  std::uint32_t exceedances = 0;
};

}  // namespace detail

inline ThetaEstimate estimate_extremal_index(const Params& P, int n,
                                             const MonteCarloConfig& cfg,
                                             ThetaMethod method,
                                             bool iid_control = false) {
  detail::validate(cfg);
  if (cfg.depth < n)
    throw std::invalid_argument(
        "estimate_extremal_index: depth must cover the exceedance window");
  const exactlaw::LevelSet L = exactlaw::make_levels(P, -1.0, n, cfg.depth);

  ThetaEstimate est;
  est.method = method;
  est.iid_control = iid_control;
  est.k_n = L.k_n;
  est.j_n = L.j_n;

  const std::uint64_t reps = cfg.replications;
  SplitMix64 boot = substream(cfg.seed ^ 0xB007B007B007B007ull, 0);

  if (method == ThetaMethod::runs) {
    std::vector<detail::RunsRepStats> stats(reps);
    detail::run_chunked(reps, [&](std::size_t, std::uint64_t lo,
                                  std::uint64_t hi) {
      for (std::uint64_t r = lo; r < hi; ++r) {
        SplitMix64 g = substream(cfg.seed, r);
        DigitSource ds(g, P.q);
        auto& st = stats[r];
        std::int64_t last_exc = -static_cast<std::int64_t>(L.j_n) - 1;
        int run = detail::leading_run(ds, n);
        for (std::uint64_t k = 0; k <= cfg.horizon; ++k) {
          if (k > 0) {
            if (iid_control)
              run = detail::leading_run(ds, n);
            else
              run = ds.next_digit() ? std::min(run + 1, n) : 0;
          }
          if (run >= n) {
            st.exceedances += 1;
            const std::int64_t kk = static_cast<std::int64_t>(k);
            if (kk - last_exc > L.j_n) st.clusters += 1;
            last_exc = kk;
          }
        }
      }
    });
    std::uint64_t clusters = 0, exceed = 0;
    for (const auto& st : stats) {
      clusters += st.clusters;
      exceed += st.exceedances;
    }
    est.clusters = clusters;
    est.exceedances = exceed;
    est.defined = exceed > 0;
    est.theta = est.defined
                    ? static_cast<double>(clusters) / static_cast<double>(exceed)
                    : 0.0;
    if (est.defined) {
      std::vector<double> draws;
      draws.reserve(200);
      for (int b = 0; b < 200; ++b) {
        std::uint64_t c = 0, e = 0;
        for (std::uint64_t i = 0; i < reps; ++i) {
          const auto& st = stats[static_cast<std::size_t>(boot.next() % reps)];
          c += st.clusters;
          e += st.exceedances;
        }
        draws.push_back(e > 0 ? static_cast<double>(c) / static_cast<double>(e)
                              : est.theta);
      }
      std::sort(draws.begin(), draws.end());
      est.ci_lo = draws[4];    // 2.5th percentile of 200
      est.ci_hi = draws[194];  // 97.5th percentile
    }
    return est;
  }

  // ratio: theta-hat = log P(M_{k_n} <= u_n) / (k_n log F(u_n))
  const std::size_t chunks = detail::chunk_plan(reps);
  std::vector<std::uint64_t> succ_by_chunk(chunks, 0);
  detail::run_chunked(reps, [&](std::size_t ci, std::uint64_t lo,
                                std::uint64_t hi) {
    std::uint64_t succ = 0;
    for (std::uint64_t r = lo; r < hi; ++r) {
      SplitMix64 g = substream(cfg.seed, r);
      DigitSource ds(g, P.q);
      bool ok = true;
      int run = detail::leading_run(ds, n);
      if (run >= n) ok = false;
      for (std::uint64_t k = 1; ok && k < L.k_n; ++k) {
        if (iid_control)
          run = detail::leading_run(ds, n);
        else
          run = ds.next_digit() ? std::min(run + 1, n) : 0;
        if (run >= n) ok = false;
      }
      if (ok) ++succ;
    }
    succ_by_chunk[ci] = succ;
  });
  std::uint64_t successes = 0;
  for (std::uint64_t s : succ_by_chunk) successes += s;

  est.successes = successes;
  est.exceedances = reps - successes;
  est.block_law = static_cast<double>(successes) / static_cast<double>(reps);
  est.marginal_at_u = marginal::cdf(P, L.u_n, cfg.depth).value;
  est.defined = successes > 0 && successes < reps;
  const double denom =
      static_cast<double>(L.k_n) * std::log(est.marginal_at_u);
  auto theta_of = [&](double phat) { return std::log(phat) / denom; };
  est.theta = est.defined ? theta_of(est.block_law) : 0.0;
  if (est.defined) {
    std::vector<double> draws;
    draws.reserve(200);
    const double ph = est.block_law;
    for (int b = 0; b < 200; ++b) {
      std::uint64_t s = 0;
      for (std::uint64_t i = 0; i < reps; ++i)
        if (boot.next_double() < ph) ++s;
      const double pb = static_cast<double>(s) / static_cast<double>(reps);
      draws.push_back(pb > 0.0 && pb < 1.0 ? theta_of(pb) : est.theta);
    }
    std::sort(draws.begin(), draws.end());
    est.ci_lo = draws[4];
    est.ci_hi = draws[194];
  }
  return est;
}

// ---------------------------------------------------------------------------
// Gap between the full-window law and the powered one-block law, with the
// analytic bound terms that control it.

struct BlockingGap {
  double x = 0.0;
  int n = 0;
  int j_n = 0;
  std::uint64_t k_n = 0;
  std::uint64_t blocks = 0;  // r_n = floor(k_n / j_n)
  std::uint64_t ell = 0;     // separator length
  double mc_law = 0.0;       // P(M_{k_n} <= u_n), Monte Carlo
  double mc_ci_lo = 0.0, mc_ci_hi = 0.0;
  double exact_block_law = 0.0;  // P(M_{j_n+1} <= u_n), closed form
  double powered = 0.0;          // exact_block_law^{r_n}
  double gap = 0.0;              // |mc_law - powered|
  double t_edge = 0.0;           // j_n q^n psi
  double t_separators = 0.0;     // r_n (ell+1) q^n psi
  double bound = 0.0;            // t_edge + t_separators
};

inline BlockingGap blocking_gap(const Params& P, double x, int n,
                                std::uint64_t ell,
                                const MonteCarloConfig& cfg) {
  const exactlaw::LevelSet L = exactlaw::make_levels(P, x, n, cfg.depth);
  BlockingGap g;
  g.x = x;
  g.n = n;
  g.j_n = L.j_n;
  g.k_n = L.k_n;
  g.blocks = L.k_n / static_cast<std::uint64_t>(L.j_n);
  g.ell = ell != 0
              ? ell
              : static_cast<std::uint64_t>(
                    std::ceil(std::sqrt(static_cast<double>(L.j_n))));

  const EmpiricalLaw mc = empirical_max_law(P, {x}, n, cfg, true);
  g.mc_law = mc.estimate[0];
  g.mc_ci_lo = mc.ci_lo[0];
  g.mc_ci_hi = mc.ci_hi[0];

  g.exact_block_law = exactlaw::closed_form_law(P, L, L.j_n + 1);
  g.powered = static_cast<double>(
      std::pow(static_cast<long double>(g.exact_block_law),
               static_cast<long double>(g.blocks)));
  g.gap = std::fabs(g.mc_law - g.powered);

  const double tail = std::pow(P.q, n) * L.psi;
  g.t_edge = static_cast<double>(L.j_n) * tail;
  g.t_separators =
      static_cast<double>(g.blocks) * static_cast<double>(g.ell + 1) * tail;
  g.bound = g.t_edge + g.t_separators;
  return g;
}

}  // namespace semistable::sim
