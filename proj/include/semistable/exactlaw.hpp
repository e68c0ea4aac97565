#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "semistable/marginal.hpp"
#include "semistable/params.hpp"

// Exact finite-horizon laws of running maxima M_s = max{X_0, ..., X_{s-1}}
// at the geometric levels u_n = 1 + beta^n x, x < 0.  Everything here is
// deterministic: a memoized two-index recursion, its closed form, an exact
// run-length automaton at x = -1, and exhaustive enumeration over truncated
// digit words which brackets any event probability from below and above.

namespace semistable::exactlaw {

// Level bundle at (x, n): threshold u_n, window length j_n = max{i :
// u_{n-i} > 0}, block count k_n = floor(q^-n), norming a_n = beta^-n, and
// the tail factor psi common to every law at this x.
struct LevelSet {
  double x = 0.0;
  int n = 0;
  double u_n = 0.0;
  int j_n = 0;
  std::uint64_t k_n = 0;
  double a_n = 0.0;
  double b_n = 1.0;
  double psi = 0.0;
  std::vector<double> u;  // u[i] = u_{n-i}, i = 0..j_n, strictly decreasing
};

inline LevelSet make_levels(const Params& P, double x, int n,
                            int depth = kDefaultDepth) {
  if (!std::isfinite(x) || !(x < 0.0))
    throw std::domain_error("make_levels: requires finite x < 0");
  if (n < 1) throw std::invalid_argument("make_levels: n must be >= 1");

  auto level = [&](int m) { return 1.0 + std::pow(P.beta, m) * x; };

  LevelSet L;
  L.x = x;
  L.n = n;
  L.u_n = level(n);
  if (!(L.u_n > 0.0) || !(L.u_n < 1.0))
    throw std::invalid_argument("make_levels: n too small for this x");

  int j = 0;
  while (j <= n + 4096 && level(n - (j + 1)) > 0.0) ++j;
  if (j < 1) throw std::invalid_argument("make_levels: n too small for this x");
  L.j_n = j;

  L.k_n = block_count(P.q, n);
  L.a_n = std::pow(P.beta, -n);
  L.b_n = 1.0;
  L.psi = marginal::psi(P, x, depth);
  L.u.resize(static_cast<std::size_t>(j) + 1);
  for (int i = 0; i <= j; ++i) L.u[static_cast<std::size_t>(i)] = level(n - i);
  return L;
}

enum class LawProvenance { recursion, closed_form, oracle };

// P[s][i] = P(M_s <= u_{n-i}, X_{s-1+k} <= u_{n-i-k} shifted window), filled
// by P_{s,i} = p P_{s-1,0} + q P_{s-1,i+1} from the marginal base row
// P_{1,i} = F(u_{n-i}) = 1 - q^{n-i} psi(x).  Valid wedge: i + s - 1 <= j_n.
struct MaxLawTable {
  LevelSet levels;
  int s_max = 0;
  std::vector<std::vector<double>> prob;          // prob[s-1][i]
  std::vector<std::vector<LawProvenance>> source;
};

inline MaxLawTable build_max_law_table(const Params& P, const LevelSet& L,
                                       int s_max) {
  if (s_max < 1 || s_max > L.j_n + 1)
    throw std::invalid_argument(
        "build_max_law_table: need 1 <= s_max <= j_n + 1");
  MaxLawTable T;
  T.levels = L;
  T.s_max = s_max;
  T.prob.resize(static_cast<std::size_t>(s_max));
  T.source.resize(static_cast<std::size_t>(s_max));
  for (int s = 1; s <= s_max; ++s) {
    const int imax = L.j_n - (s - 1);
    auto& row = T.prob[static_cast<std::size_t>(s - 1)];
    auto& src = T.source[static_cast<std::size_t>(s - 1)];
    row.resize(static_cast<std::size_t>(imax) + 1);
    src.assign(row.size(), LawProvenance::recursion);
    for (int i = 0; i <= imax; ++i) {
      if (s == 1) {
        row[static_cast<std::size_t>(i)] =
            1.0 - std::pow(P.q, L.n - i) * L.psi;
      } else {
        const auto& prev = T.prob[static_cast<std::size_t>(s - 2)];
        row[static_cast<std::size_t>(i)] =
            P.p * prev[0] + P.q * prev[static_cast<std::size_t>(i) + 1];
      }
    }
  }
  return T;
}

// Single entry of the recursion; throws if (s, i) leaves the valid wedge.
inline double p_recursion(const Params& P, const LevelSet& L, int s, int i) {
  if (s < 1 || i < 0 || i + s - 1 > L.j_n)
    throw std::invalid_argument(
        "p_recursion: need s >= 1, i >= 0, i + s - 1 <= j_n");
  const MaxLawTable T = build_max_law_table(P, L, s);
  return T.prob[static_cast<std::size_t>(s - 1)][static_cast<std::size_t>(i)];
}

// Telescoped form of the same quantity:
// P(M_s <= u_n) = 1 - (p (s-1) + 1) q^n psi(x), valid for 2 <= s <= j_n + 1.
inline double closed_form_law(const Params& P, const LevelSet& L, int s) {
  if (s < 2 || s > L.j_n + 1)
    throw std::invalid_argument(
        "closed_form_law: valid only for 2 <= s <= j_n + 1; use "
        "run_automaton_law (x = -1) or enumeration brackets outside it");
  return 1.0 - (P.p * (s - 1) + 1.0) * std::pow(P.q, L.n) * L.psi;
}

// Exact law at x = -1 for any horizon s >= 1.  There X_k > u_n holds exactly
// when the n most recent digits of X_k are all ones (up to null sets), so
// M_s <= u_n is a run-length survival probability over the i.i.d. digit
// stream.  States track the trailing run of ones, capped at n - 1; the
// initial distribution is the stationary trailing-run law of X_0's digits.
inline double run_automaton_law(const Params& P, int n, std::int64_t s) {
  if (n < 2) throw std::invalid_argument("run_automaton_law: n must be >= 2");
  if (s < 1) throw std::invalid_argument("run_automaton_law: s must be >= 1");
  std::vector<double> st(static_cast<std::size_t>(n));
  for (int j = 0; j < n - 1; ++j)
    st[static_cast<std::size_t>(j)] = P.p * std::pow(P.q, j);
  st[static_cast<std::size_t>(n - 1)] = std::pow(P.q, n - 1);

  std::vector<double> nx(static_cast<std::size_t>(n));
  for (std::int64_t t = 0; t < s; ++t) {
    double alive = 0.0;
    for (int j = n - 1; j >= 0; --j) alive += st[static_cast<std::size_t>(j)];
    nx[0] = P.p * alive;
    for (int j = 0; j + 1 < n; ++j)
      nx[static_cast<std::size_t>(j + 1)] = P.q * st[static_cast<std::size_t>(j)];
    // a one on top of a full run of n-1 would complete a window: absorbed
    st.swap(nx);
  }
  double out = 0.0;
  for (int j = n - 1; j >= 0; --j) out += st[static_cast<std::size_t>(j)];
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration over truncated digit words.
//
// An atom is a pair (prefix word of K digits for X_0, innovation word of m
// digits for eps_1..eps_m); its weight is p^{#zeros} q^{#ones}.  Truncation
// only undershoots: the true X_k exceeds the atom trajectory by at most
// beta^K, so evaluating a monotone threshold event at u - beta^K and
// u + beta^K brackets the untruncated probability.

struct AtomTable {
  Params params;
  int prefix_depth;  // K
  int horizon;       // m

  std::uint64_t size() const {
    return 1ull << (prefix_depth + horizon);
  }
};

inline AtomTable enumerate_atoms(const Params& P, int K, int m) {
  if (K < 0 || m < 0 || K + m < 1)
    throw std::invalid_argument("enumerate_atoms: need K, m >= 0, K + m >= 1");
  if (K + m > 24)
    throw std::length_error("enumerate_atoms: K + m must not exceed 24");
  return AtomTable{P, K, m};
}

struct Atom {
  std::uint32_t prefix_word;      // digit j of X_0 = bit j
  std::uint32_t innovation_word;  // eps_k = bit k-1, as 0 or 1-beta
  double weight;
};

namespace detail {

// weight of a word class by total number of one-digits
inline std::vector<double> class_weights(const Params& P, int nbits) {
  std::vector<double> w(static_cast<std::size_t>(nbits) + 1);
  for (int c = 0; c <= nbits; ++c)
    w[static_cast<std::size_t>(c)] = std::pow(P.p, nbits - c) * std::pow(P.q, c);
  return w;
}

// Combines integer class counts with class weights, smallest weights first.
inline double weigh_counts(const Params& P, const std::vector<std::uint64_t>& counts,
                           const std::vector<double>& w) {
  long double total = 0.0L;
  const int nbits = static_cast<int>(w.size()) - 1;
  if (P.q >= P.p) {
    for (int c = 0; c <= nbits; ++c)
      total += (long double)counts[static_cast<std::size_t>(c)] *
               (long double)w[static_cast<std::size_t>(c)];
  } else {
    for (int c = nbits; c >= 0; --c)
      total += (long double)counts[static_cast<std::size_t>(c)] *
               (long double)w[static_cast<std::size_t>(c)];
  }
  return static_cast<double>(total);
}

inline double prefix_value(const Params& P, std::uint32_t word, int K) {
  double h = 0.0;
  for (int j = K; j-- > 0;) h = ((word >> j) & 1u) + P.beta * h;
  return (1.0 - P.beta) * h;
}

}  // namespace detail

inline Atom atom(const AtomTable& T, std::uint64_t index) {
  if (index >= T.size()) throw std::out_of_range("atom: index out of range");
  Atom a;
  a.prefix_word = static_cast<std::uint32_t>(index & ((1ull << T.prefix_depth) - 1));
  a.innovation_word = static_cast<std::uint32_t>(index >> T.prefix_depth);
  const int ones = std::popcount(index);
  const int nbits = T.prefix_depth + T.horizon;
  a.weight = std::pow(T.params.p, nbits - ones) * std::pow(T.params.q, ones);
  return a;
}

// Truncated trajectory of the atom: X~_0 .. X~_m.
inline std::vector<double> atom_trajectory(const AtomTable& T, std::uint64_t index) {
  const Atom a = atom(T, index);
  std::vector<double> xs(static_cast<std::size_t>(T.horizon) + 1);
  double x = detail::prefix_value(T.params, a.prefix_word, T.prefix_depth);
  xs[0] = x;
  for (int k = 1; k <= T.horizon; ++k) {
    const double eps = ((a.innovation_word >> (k - 1)) & 1u)
                           ? (1.0 - T.params.beta)
                           : 0.0;
    x = T.params.beta * x + eps;
    xs[static_cast<std::size_t>(k)] = x;
  }
  return xs;
}

// Total mass of the table; equals 1 up to summation rounding.
inline double total_weight(const AtomTable& T) {
  const int nbits = T.prefix_depth + T.horizon;
  const auto w = detail::class_weights(T.params, nbits);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(nbits) + 1, 0);
  for (int c = 0; c <= nbits; ++c) {
    // C(nbits, c) without floating error
    long double b = 1.0L;
    for (int i = 0; i < c; ++i) b = b * (nbits - i) / (i + 1);
    counts[static_cast<std::size_t>(c)] =
        static_cast<std::uint64_t>(std::llroundl(b));
  }
  return detail::weigh_counts(T.params, counts, w);
}

struct ProbBracket {
  double lo = 0.0;
  double hi = 1.0;
  bool contains(double v, double slack = 0.0) const {
    return v >= lo - slack && v <= hi + slack;
  }
  double width() const { return hi - lo; }
};

// One pass over all atoms: brackets P(M_s <= u) for every s = 1..s_max via
// the first index whose trajectory value crosses the shifted thresholds.
inline std::vector<ProbBracket> max_law_brackets(const AtomTable& T, double u,
                                                 int s_max) {
  if (s_max < 1 || s_max > T.horizon + 1)
    throw std::invalid_argument("max_law_brackets: need 1 <= s_max <= m + 1");
  const Params& P = T.params;
  const int K = T.prefix_depth, m = T.horizon;
  const int nbits = K + m;
  const double d = std::pow(P.beta, K);
  const double u_lo = u - d, u_hi = u + d;

  // first_exceed histograms by (class, step); step s_max means "never"
  const std::size_t classes = static_cast<std::size_t>(nbits) + 1;
  std::vector<std::uint64_t> surv_lo(classes * static_cast<std::size_t>(s_max), 0);
  std::vector<std::uint64_t> surv_hi(surv_lo.size(), 0);

  std::vector<double> traj(static_cast<std::size_t>(m) + 1);
  for (std::uint64_t pw = 0; pw < (1ull << K); ++pw) {
    const double x0 = detail::prefix_value(P, static_cast<std::uint32_t>(pw), K);
    const int ones0 = std::popcount(pw);
    for (std::uint64_t iw = 0; iw < (1ull << m); ++iw) {
      double x = x0;
      traj[0] = x;
      for (int k = 1; k <= m; ++k) {
        const double eps = ((iw >> (k - 1)) & 1u) ? (1.0 - P.beta) : 0.0;
        x = P.beta * x + eps;
        traj[static_cast<std::size_t>(k)] = x;
      }
      const int ones = ones0 + std::popcount(iw);
      int f_lo = s_max, f_hi = s_max;  // survive all s below these
      for (int k = 0; k < s_max; ++k) {
        const double v = traj[static_cast<std::size_t>(k)];
        if (f_lo == s_max && v > u_lo) f_lo = k;
        if (v > u_hi) { f_hi = k; break; }
      }
      const std::size_t base = static_cast<std::size_t>(ones) * s_max;
      // survive through s iff first_exceed >= s: accumulate at min(f, s_max-1)
      if (f_lo > 0)
        surv_lo[base + static_cast<std::size_t>(std::min(f_lo, s_max) - 1)] += 1;
      if (f_hi > 0)
        surv_hi[base + static_cast<std::size_t>(std::min(f_hi, s_max) - 1)] += 1;
    }
  }

  const auto w = detail::class_weights(P, nbits);
  std::vector<ProbBracket> out(static_cast<std::size_t>(s_max));
  // P(M_s <= u') = sum over atoms with first_exceed >= s
  std::vector<std::uint64_t> cnt_lo(classes, 0), cnt_hi(classes, 0);
  for (int s = s_max; s >= 1; --s) {
    for (std::size_t c = 0; c < classes; ++c) {
      cnt_lo[c] += surv_lo[c * s_max + static_cast<std::size_t>(s - 1)];
      cnt_hi[c] += surv_hi[c * s_max + static_cast<std::size_t>(s - 1)];
    }
    out[static_cast<std::size_t>(s - 1)] =
        ProbBracket{detail::weigh_counts(P, cnt_lo, w),
                    detail::weigh_counts(P, cnt_hi, w)};
  }
  return out;
}

inline ProbBracket max_law_bracket(const AtomTable& T, double u, int s) {
  return max_law_brackets(T, u, s).back();
}

// Weight of atoms whose innovation word has ones at eps_1..eps_i: the
// increment Y_i = X_{k+i} - beta^i X_k attains its upper bound 1 - beta^i
// exactly on this event.
struct YLaw {
  int i;
  double upper;      // 1 - beta^i
  double atom_prob;  // q^i
};

inline YLaw y_increment_law(const Params& P, int i) {
  if (i < 1) throw std::invalid_argument("y_increment_law: i must be >= 1");
  return YLaw{i, 1.0 - std::pow(P.beta, i), std::pow(P.q, i)};
}

// Exact atom count of {eps_1 = ... = eps_i = 1} in the table (no weights).
inline std::uint64_t y_upper_event_count(const AtomTable& T, int i) {
  if (i < 1 || i > T.horizon)
    throw std::invalid_argument("y_upper_event_count: need 1 <= i <= m");
  return T.size() >> i;
}

// ---------------------------------------------------------------------------
// Association bounds.  The process is a nondecreasing function of independent
// digits, so indicator events {max over a block <= u} are positively
// associated: joint probabilities dominate products.  Both checks evaluate
// point values on the truncated process (where the inequality is exact) and
// carry brackets for the untruncated law.

struct ProductBound {
  double lhs = 0.0;           // P(all blocks stay below u), truncated process
  double rhs = 0.0;           // product of per-block probabilities
  double slack = 0.0;         // lhs - rhs; association makes this >= 0
  ProbBracket lhs_bracket;
  double rhs_lo = 0.0, rhs_hi = 1.0;
  double bracket_error = 0.0;
};

namespace detail {

struct BlockEventCounts {
  // per block point/lo/hi counts by ones-class, plus joint survival by class
  std::vector<std::vector<std::uint64_t>> per_set, per_set_lo, per_set_hi;
  std::vector<std::vector<std::uint64_t>> joint_prefix;  // all sets 1..s hold
  std::vector<std::uint64_t> joint_lo, joint_hi;
};

inline void validate_sets(const AtomTable& T,
                          const std::vector<std::vector<int>>& sets) {
  if (sets.empty())
    throw std::invalid_argument("association check: need at least one block");
  for (const auto& s : sets) {
    if (s.empty())
      throw std::invalid_argument("association check: empty index block");
    for (int k : s)
      if (k < 0 || k > T.horizon)
        throw std::invalid_argument(
            "association check: block index outside 0..m");
  }
}

inline BlockEventCounts count_block_events(
    const AtomTable& T, const std::vector<std::vector<int>>& sets, double u) {
  validate_sets(T, sets);
  const Params& P = T.params;
  const int K = T.prefix_depth, m = T.horizon;
  const std::size_t classes = static_cast<std::size_t>(K + m) + 1;
  const double d = std::pow(P.beta, K);
  const double u_lo = u - d, u_hi = u + d;
  const std::size_t r = sets.size();

  BlockEventCounts C;
  C.per_set.assign(r, std::vector<std::uint64_t>(classes, 0));
  C.per_set_lo = C.per_set;
  C.per_set_hi = C.per_set;
  C.joint_prefix.assign(r, std::vector<std::uint64_t>(classes, 0));
  C.joint_lo.assign(classes, 0);
  C.joint_hi.assign(classes, 0);

  std::vector<double> traj(static_cast<std::size_t>(m) + 1);
  for (std::uint64_t pw = 0; pw < (1ull << K); ++pw) {
    const double x0 = prefix_value(P, static_cast<std::uint32_t>(pw), K);
    const int ones0 = std::popcount(pw);
    for (std::uint64_t iw = 0; iw < (1ull << m); ++iw) {
      double x = x0;
      traj[0] = x;
      for (int k = 1; k <= m; ++k) {
        const double eps = ((iw >> (k - 1)) & 1u) ? (1.0 - P.beta) : 0.0;
        x = P.beta * x + eps;
        traj[static_cast<std::size_t>(k)] = x;
      }
      const std::size_t ones =
          static_cast<std::size_t>(ones0 + std::popcount(iw));
      bool joint = true, joint_lo = true, joint_hi = true;
      for (std::size_t s = 0; s < r; ++s) {
        double mx = 0.0;
        for (int k : sets[s])
          mx = std::max(mx, traj[static_cast<std::size_t>(k)]);
        const bool hold = mx <= u, hold_lo = mx <= u_lo, hold_hi = mx <= u_hi;
        if (hold) C.per_set[s][ones] += 1;
        if (hold_lo) C.per_set_lo[s][ones] += 1;
        if (hold_hi) C.per_set_hi[s][ones] += 1;
        joint = joint && hold;
        joint_lo = joint_lo && hold_lo;
        joint_hi = joint_hi && hold_hi;
        if (joint) C.joint_prefix[s][ones] += 1;
      }
      if (joint_lo) C.joint_lo[ones] += 1;
      if (joint_hi) C.joint_hi[ones] += 1;
    }
  }
  return C;
}

}  // namespace detail

inline ProductBound check_product_bound(const AtomTable& T,
                                        const std::vector<std::vector<int>>& sets,
                                        double u) {
  const auto C = detail::count_block_events(T, sets, u);
  const auto w = detail::class_weights(T.params, T.prefix_depth + T.horizon);

  ProductBound R;
  R.lhs = detail::weigh_counts(T.params, C.joint_prefix.back(), w);
  R.lhs_bracket = ProbBracket{detail::weigh_counts(T.params, C.joint_lo, w),
                              detail::weigh_counts(T.params, C.joint_hi, w)};
  R.rhs = 1.0;
  R.rhs_lo = 1.0;
  R.rhs_hi = 1.0;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    R.rhs *= detail::weigh_counts(T.params, C.per_set[s], w);
    R.rhs_lo *= detail::weigh_counts(T.params, C.per_set_lo[s], w);
    R.rhs_hi *= detail::weigh_counts(T.params, C.per_set_hi[s], w);
  }
  R.slack = R.lhs - R.rhs;
  R.bracket_error =
      (R.lhs_bracket.hi - R.lhs_bracket.lo) + (R.rhs_hi - R.rhs_lo);
  return R;
}

inline ProductBound check_product_bound(const Params& P,
                                        const std::vector<std::vector<int>>& sets,
                                        double u, int K, int m) {
  return check_product_bound(enumerate_atoms(P, K, m), sets, u);
}

struct ConditionalBound {
  std::vector<double> terms;  // P(A_s | A_1..A_{s-1}) - P(A_s), s = 2..r
  double lhs_gap = 0.0;       // P(joint) - product(P(A_s))
  double sum_terms = 0.0;
  double bracket_error = 0.0;
};

inline ConditionalBound check_conditional_bound(
    const AtomTable& T, const std::vector<std::vector<int>>& sets, double u) {
  const auto C = detail::count_block_events(T, sets, u);
  const auto w = detail::class_weights(T.params, T.prefix_depth + T.horizon);

  const std::size_t r = sets.size();
  std::vector<double> joint(r), single(r);
  for (std::size_t s = 0; s < r; ++s) {
    joint[s] = detail::weigh_counts(T.params, C.joint_prefix[s], w);
    single[s] = detail::weigh_counts(T.params, C.per_set[s], w);
  }

  ConditionalBound R;
  double prod = single.empty() ? 1.0 : single[0];
  for (std::size_t s = 1; s < r; ++s) {
    if (!(joint[s - 1] > 0.0))
      throw std::domain_error(
          "check_conditional_bound: conditioning event has zero probability");
    R.terms.push_back(joint[s] / joint[s - 1] - single[s]);
    prod *= single[s];
  }
  R.lhs_gap = (r == 0 ? 0.0 : joint[r - 1]) - prod;
  for (double t : R.terms) R.sum_terms += t;
  const ProbBracket lhs_br{detail::weigh_counts(T.params, C.joint_lo, w),
                           detail::weigh_counts(T.params, C.joint_hi, w)};
  R.bracket_error = lhs_br.hi - lhs_br.lo;
  return R;
}

inline ConditionalBound check_conditional_bound(
    const Params& P, const std::vector<std::vector<int>>& sets, double u,
    int K, int m) {
  return check_conditional_bound(enumerate_atoms(P, K, m), sets, u);
}

// ---------------------------------------------------------------------------
// Counting oracle for wide prefixes.  Same measure as the atom streamer, but
// the 2^K prefix dimension is folded into a sorted weighted cdf: for each
// innovation word, the event {M_s <= u'} is the interval
// {X~_0 <= min_k (u' - I_k)/beta^k}, so one pass over 2^{s_max-1} words with
// binary searches replaces 2^{K+m} atom visits.  Exactly reproduces the
// streamer on instances where the trajectory arithmetic is unambiguous.

struct PrefixCdf {
  int depth = 0;               // K
  std::vector<double> values;  // sorted truncated-X_0 atoms
  std::vector<double> cum;     // cum[i] = weight of values[0..i-1]; cum[N]=total

  double mass_at_most(double v) const {
    const auto it = std::upper_bound(values.begin(), values.end(), v);
    return cum[static_cast<std::size_t>(it - values.begin())];
  }
};

inline PrefixCdf build_prefix_cdf(const Params& P, int K) {
  if (K < 1 || K > 22)
    throw std::length_error("build_prefix_cdf: K must lie in 1..22");
  const std::uint64_t n = 1ull << K;
  std::vector<std::pair<double, double>> atoms(n);
  const auto w = detail::class_weights(P, K);
  for (std::uint64_t pw = 0; pw < n; ++pw)
    atoms[pw] = {detail::prefix_value(P, static_cast<std::uint32_t>(pw), K),
                 w[static_cast<std::size_t>(std::popcount(pw))]};
  std::sort(atoms.begin(), atoms.end());
  PrefixCdf C;
  C.depth = K;
  C.values.resize(n);
  C.cum.resize(n + 1);
  long double run = 0.0L;
  for (std::uint64_t i = 0; i < n; ++i) {
    C.values[i] = atoms[i].first;
    C.cum[i] = static_cast<double>(run);
    run += atoms[i].second;
  }
  C.cum[n] = static_cast<double>(run);
  return C;
}

// Brackets P(M_s <= u_n) for s = 1..s_max using a prebuilt prefix cdf.
inline std::vector<ProbBracket> enumeration_law_brackets(const Params& P,
                                                         const PrefixCdf& C,
                                                         double x, int n,
                                                         int s_max) {
  if (s_max < 1)
    throw std::invalid_argument("enumeration_law_brackets: s_max must be >= 1");
  if (s_max > 26)
    throw std::length_error("enumeration_law_brackets: s_max too large");
  const LevelSet L = make_levels(P, x, n);
  const double d = std::pow(P.beta, C.depth);
  const double u_lo = L.u_n - d, u_hi = L.u_n + d;
  const int m = s_max - 1;
  const auto w = detail::class_weights(P, m);

  std::vector<long double> lo(static_cast<std::size_t>(s_max), 0.0L);
  std::vector<long double> hi(static_cast<std::size_t>(s_max), 0.0L);
  std::vector<double> inv_pow(static_cast<std::size_t>(m) + 1);
  inv_pow[0] = 1.0;
  for (int k = 1; k <= m; ++k) inv_pow[static_cast<std::size_t>(k)] =
      inv_pow[static_cast<std::size_t>(k - 1)] / P.beta;

  for (std::uint64_t iw = 0; iw < (1ull << m); ++iw) {
    const double we = w[static_cast<std::size_t>(std::popcount(iw))];
    double ival = 0.0;  // innovation-only trajectory value I_k
    double vmin_lo = u_lo, vmin_hi = u_hi;
    lo[0] += we * C.mass_at_most(vmin_lo);
    hi[0] += we * C.mass_at_most(vmin_hi);
    for (int k = 1; k <= m; ++k) {
      const double eps = ((iw >> (k - 1)) & 1u) ? (1.0 - P.beta) : 0.0;
      ival = P.beta * ival + eps;
      const double scale = inv_pow[static_cast<std::size_t>(k)];
      vmin_lo = std::min(vmin_lo, (u_lo - ival) * scale);
      vmin_hi = std::min(vmin_hi, (u_hi - ival) * scale);
      lo[static_cast<std::size_t>(k)] += we * C.mass_at_most(vmin_lo);
      hi[static_cast<std::size_t>(k)] += we * C.mass_at_most(vmin_hi);
    }
  }

  std::vector<ProbBracket> out(static_cast<std::size_t>(s_max));
  for (int s = 1; s <= s_max; ++s)
    out[static_cast<std::size_t>(s - 1)] =
        ProbBracket{static_cast<double>(lo[static_cast<std::size_t>(s - 1)]),
                    static_cast<double>(hi[static_cast<std::size_t>(s - 1)])};
  return out;
}

inline std::vector<ProbBracket> enumeration_law_brackets(const Params& P,
                                                         double x, int n,
                                                         int K, int s_max) {
  return enumeration_law_brackets(P, build_prefix_cdf(P, K), x, n, s_max);
}

}  // namespace semistable::exactlaw
