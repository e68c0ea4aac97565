#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "semistable/csv.hpp"
#include "semistable/evt.hpp"
#include "semistable/exactlaw.hpp"
#include "semistable/marginal.hpp"
#include "semistable/params.hpp"
#include "semistable/simulate.hpp"
#include "semistable/svg.hpp"
#include "semistable/verify.hpp"

// Command-line front end.  Every subcommand resolves its options (flags
// override config-file values), runs the corresponding library calls, and
// writes one deterministic CSV whose leading '#' lines echo the resolved
// configuration.  Exit codes: 0 success, 1 domain or runtime error, 2 usage.

namespace semistable::cli {

inline constexpr const char* kVersion = "0.1.0";

namespace detail {

using KeyValue = std::pair<std::string, std::string>;

inline void stamp(io::CsvWriter& w, const std::string& command,
                  const std::vector<KeyValue>& resolved) {
  w.metadata("version", kVersion);
  w.metadata("command", command);
  for (const auto& kv : resolved) w.metadata(kv.first, kv.second);
}

inline void emit(const io::CsvWriter& w, const std::string& out) {
  if (out.empty())
    std::fputs(w.text().c_str(), stdout);
  else
    w.save(out);
}

inline std::string fmt(double v) { return io::format_number(v); }
inline std::string fmt(std::uint64_t v) { return io::format_integer(v); }
inline std::string fmt(int v) {
  return io::format_integer(static_cast<std::uint64_t>(v));
}

// Options shared by the numeric subcommands.
struct Common {
  double beta = 1.0 / 3.0;
  double p = 0.5;
  int depth = kDefaultDepth;
  std::uint64_t seed = 20260819ull;
  std::string out;
  std::string config;

  Params params() const { return Params(beta, p); }
};

inline void add_params(CLI::App* sub, Common& c) {
  sub->add_option("--beta", c.beta, "contraction ratio, in (0, 1/2]")
      ->capture_default_str();
  sub->add_option("--p", c.p, "probability of a zero innovation, in (0, 1)")
      ->capture_default_str();
}

inline void add_plumbing(CLI::App* sub, Common& c, bool with_depth = true) {
  if (with_depth)
    sub->add_option("--depth", c.depth, "digit truncation depth")
        ->check(CLI::Range(1, 4096))
        ->capture_default_str();
  sub->add_option("--seed", c.seed, "base seed for randomized work")
      ->capture_default_str();
  sub->add_option("--out", c.out, "output CSV path; stdout when omitted");
  sub->add_option("--config", c.config,
                  "key=value config file; flags override file values");
}

// Expand "--config FILE" into "--key=value" tokens for every file entry whose
// option was not given explicitly, so flags win and file values still pass
// through normal option validation.
inline std::vector<std::string> apply_config_file(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::vector<std::string> given;
  for (const std::string& a : args)
    if (a.rfind("--", 0) == 0) given.push_back(a.substr(0, a.find('=')));
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: expected key=value, got: " + line);
    const std::string key = "--" + trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (val.size() >= 2 && (val.front() == '"' || val.front() == '\'') &&
        val.back() == val.front())
      val = val.substr(1, val.size() - 2);
    if (std::find(given.begin(), given.end(), key) != given.end()) continue;
    args.push_back(key + "=" + val);
  }
  return args;
}

}  // namespace detail

inline int run_cli(std::vector<std::string> args) {
  using detail::fmt;
  CLI::App app{"max-semistable extreme value toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  int rc = 0;

  // ---- cdf ----------------------------------------------------------------
  detail::Common cdf_c;
  double cdf_x = 0.0;
  int cdf_grid = 0;
  auto* cdf = app.add_subcommand("cdf", "evaluate the stationary cdf");
  detail::add_params(cdf, cdf_c);
  auto* cdf_ox = cdf->add_option("--x", cdf_x, "single evaluation point");
  auto* cdf_og =
      cdf->add_option("--grid", cdf_grid, "N+1 equally spaced points on [0,1]")
          ->check(CLI::Range(1, 2000000));
  cdf_ox->excludes(cdf_og);
  cdf_og->excludes(cdf_ox);
  detail::add_plumbing(cdf, cdf_c);
  cdf->callback([&]() {
    if (!*cdf_ox && !*cdf_og)
      throw CLI::RequiredError("cdf: one of --x or --grid");
    const Params P = cdf_c.params();
    io::CsvWriter w;
    detail::stamp(w, "cdf",
                  {{"beta", fmt(cdf_c.beta)},
                   {"p", fmt(cdf_c.p)},
                   {*cdf_ox ? "x" : "grid",
                    *cdf_ox ? fmt(cdf_x) : fmt(cdf_grid)},
                   {"depth", fmt(cdf_c.depth)},
                   {"seed", fmt(cdf_c.seed)}});
    w.header({"x", "F", "error_bound", "exact_flag"});
    auto row = [&](double x) {
      const auto v = marginal::cdf(P, x, cdf_c.depth);
      w.row({fmt(x), fmt(v.value), fmt(v.error_bound),
             v.exact() ? "1" : "0"});
    };
    if (*cdf_ox)
      row(cdf_x);
    else
      for (int i = 0; i <= cdf_grid; ++i)
        row(static_cast<double>(i) / cdf_grid);
    detail::emit(w, cdf_c.out);
  });

  // ---- nu -----------------------------------------------------------------
  detail::Common nu_c;
  int nu_grid = 256;
  auto* nu = app.add_subcommand("nu", "tabulate the periodic tail function");
  detail::add_params(nu, nu_c);
  nu->add_option("--grid", nu_grid, "N+1 points spanning one period")
      ->check(CLI::Range(1, 2000000))
      ->capture_default_str();
  detail::add_plumbing(nu, nu_c);
  nu->callback([&]() {
    const Params P = nu_c.params();
    io::CsvWriter w;
    detail::stamp(w, "nu",
                  {{"beta", fmt(nu_c.beta)},
                   {"p", fmt(nu_c.p)},
                   {"grid", fmt(nu_grid)},
                   {"depth", fmt(nu_c.depth)},
                   {"seed", fmt(nu_c.seed)}});
    w.header({"t", "nu"});
    const double lb = std::log(P.beta);
    for (int i = 0; i <= nu_grid; ++i) {
      // + 0.0 turns the -0.0 endpoint into +0.0
      const double t = lb * (nu_grid - i) / nu_grid + 0.0;  // log beta .. 0
      w.row({fmt(t), fmt(marginal::nu(P, t, nu_c.depth))});
    }
    detail::emit(w, nu_c.out);
  });

  // ---- quantile -------------------------------------------------------
  detail::Common qt_c;
  double qt_alpha = 0.5;
  int qt_grid = 0;
  auto* qt = app.add_subcommand("quantile", "invert the stationary cdf");
  detail::add_params(qt, qt_c);
  auto* qt_oa = qt->add_option("--alpha", qt_alpha, "single probability level");
  auto* qt_og =
      qt->add_option("--grid", qt_grid, "N+1 equally spaced levels on [0,1]")
          ->check(CLI::Range(1, 2000000));
  qt_oa->excludes(qt_og);
  qt_og->excludes(qt_oa);
  detail::add_plumbing(qt, qt_c);
  qt->callback([&]() {
    if (!*qt_oa && !*qt_og)
      throw CLI::RequiredError("quantile: one of --alpha or --grid");
    const Params P = qt_c.params();
    io::CsvWriter w;
    detail::stamp(w, "quantile",
                  {{"beta", fmt(qt_c.beta)},
                   {"p", fmt(qt_c.p)},
                   {*qt_oa ? "alpha" : "grid",
                    *qt_oa ? fmt(qt_alpha) : fmt(qt_grid)},
                   {"depth", fmt(qt_c.depth)},
                   {"seed", fmt(qt_c.seed)}});
    w.header({"alpha", "x"});
    auto row = [&](double a) {
      w.row({fmt(a), fmt(marginal::quantile(P, a, qt_c.depth))});
    };
    if (*qt_oa)
      row(qt_alpha);
    else
      for (int i = 0; i <= qt_grid; ++i)
        row(static_cast<double>(i) / qt_grid);
    detail::emit(w, qt_c.out);
  });

  // ---- simulate -------------------------------------------------------
  detail::Common sm_c;
  std::uint64_t sm_steps = 32;
  std::uint64_t sm_rep = 0;
  auto* sm = app.add_subcommand("simulate", "emit one stationary trajectory");
  detail::add_params(sm, sm_c);
  sm->add_option("--steps", sm_steps, "number of recursion steps")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100000000}))
      ->capture_default_str();
  sm->add_option("--replication", sm_rep, "substream index")
      ->capture_default_str();
  detail::add_plumbing(sm, sm_c);
  sm->callback([&]() {
    const Params P = sm_c.params();
    sim::MonteCarloConfig cfg;
    cfg.seed = sm_c.seed;
    cfg.replications = 1;
    cfg.depth = sm_c.depth;
    const sim::Trajectory t = sim::simulate_ar(P, cfg, sm_steps, sm_rep);
    io::CsvWriter w;
    detail::stamp(w, "simulate",
                  {{"beta", fmt(sm_c.beta)},
                   {"p", fmt(sm_c.p)},
                   {"steps", fmt(sm_steps)},
                   {"replication", fmt(sm_rep)},
                   {"depth", fmt(sm_c.depth)},
                   {"seed", fmt(sm_c.seed)}});
    w.header({"k", "value", "innovation"});
    for (std::size_t k = 0; k < t.values.size(); ++k)
      w.row({fmt(static_cast<std::uint64_t>(k)), fmt(t.values[k]),
             k == 0 ? "-1" : (t.innovations[k - 1] ? "1" : "0")});
    detail::emit(w, sm_c.out);
  });

  // ---- max-law --------------------------------------------------------
  detail::Common ml_c;
  std::vector<double> ml_xs;
  int ml_n = 0;
  std::uint64_t ml_reps = 10000;
  std::string ml_mode = "dep";
  auto* ml = app.add_subcommand(
      "max-law", "empirical block-maximum law against the limit laws");
  detail::add_params(ml, ml_c);
  ml->add_option("--x-grid", ml_xs, "comma-separated negative levels")
      ->delimiter(',')
      ->required();
  ml->add_option("--n", ml_n, "level index")
      ->check(CLI::Range(1, 60))
      ->required();
  ml->add_option("--reps", ml_reps, "Monte Carlo replications")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100000000}))
      ->capture_default_str();
  ml->add_option("--mode", ml_mode, "dep: the recursion; iid: independent draws")
      ->check(CLI::IsMember({"dep", "iid"}))
      ->capture_default_str();
  detail::add_plumbing(ml, ml_c);
  ml->callback([&]() {
    const Params P = ml_c.params();
    std::vector<double> xs = ml_xs;
    std::sort(xs.begin(), xs.end());
    sim::MonteCarloConfig cfg;
    cfg.seed = ml_c.seed;
    cfg.replications = ml_reps;
    cfg.depth = ml_c.depth;
    const sim::EmpiricalLaw law =
        sim::empirical_max_law(P, xs, ml_n, cfg, ml_mode == "dep");
    std::string xs_str;
    for (std::size_t i = 0; i < xs.size(); ++i)
      xs_str += (i ? "," : "") + fmt(xs[i]);
    io::CsvWriter w;
    detail::stamp(w, "max-law",
                  {{"beta", fmt(ml_c.beta)},
                   {"p", fmt(ml_c.p)},
                   {"x_grid", xs_str},
                   {"n", fmt(ml_n)},
                   {"reps", fmt(ml_reps)},
                   {"mode", ml_mode},
                   {"depth", fmt(ml_c.depth)},
                   {"seed", fmt(ml_c.seed)}});
    w.header({"x", "empirical", "ci_lo", "ci_hi", "theory_dep", "theory_iid",
              "ambiguous"});
    for (std::size_t i = 0; i < xs.size(); ++i)
      w.row({fmt(xs[i]), fmt(law.estimate[i]), fmt(law.ci_lo[i]),
             fmt(law.ci_hi[i]),
             fmt(evt::limit_law_dependent(P, xs[i], ml_c.depth)),
             fmt(evt::limit_law_iid(P, xs[i], ml_c.depth)),
             fmt(law.ambiguous[i])});
    detail::emit(w, ml_c.out);
  });

  // ---- extremal-index -------------------------------------------------
  detail::Common ei_c;
  int ei_n = 0;
  std::uint64_t ei_reps = 10000;
  std::uint64_t ei_horizon = 4096;
  std::string ei_method = "both";
  bool ei_control = false;
  auto* ei = app.add_subcommand("extremal-index",
                                "estimate the clustering index at level n");
  detail::add_params(ei, ei_c);
  ei->add_option("--n", ei_n, "level index")
      ->check(CLI::Range(2, 60))
      ->required();
  ei->add_option("--reps", ei_reps, "Monte Carlo replications")
      ->check(CLI::Range(std::uint64_t{2}, std::uint64_t{100000000}))
      ->capture_default_str();
  ei->add_option("--horizon", ei_horizon, "stream length for the runs method")
      ->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1000000000}))
      ->capture_default_str();
  ei->add_option("--method", ei_method, "runs | ratio | both")
      ->check(CLI::IsMember({"runs", "ratio", "both"}))
      ->capture_default_str();
  ei->add_flag("--control", ei_control,
               "append matching i.i.d. control rows (estimate near 1)");
  detail::add_plumbing(ei, ei_c);
  ei->callback([&]() {
    const Params P = ei_c.params();
    sim::MonteCarloConfig cfg;
    cfg.seed = ei_c.seed;
    cfg.replications = ei_reps;
    cfg.depth = std::max(ei_c.depth, ei_n);
    cfg.horizon = ei_horizon;
    io::CsvWriter w;
    detail::stamp(w, "extremal-index",
                  {{"beta", fmt(ei_c.beta)},
                   {"p", fmt(ei_c.p)},
                   {"n", fmt(ei_n)},
                   {"reps", fmt(ei_reps)},
                   {"horizon", fmt(ei_horizon)},
                   {"method", ei_method},
                   {"control", ei_control ? "1" : "0"},
                   {"depth", fmt(cfg.depth)},
                   {"seed", fmt(ei_c.seed)}});
    w.header({"method", "estimate", "ci_lo", "ci_hi", "theta_theory",
              "control", "defined", "exceedances", "clusters", "successes",
              "k_n", "j_n"});
    std::vector<sim::ThetaMethod> methods;
    if (ei_method != "ratio") methods.push_back(sim::ThetaMethod::runs);
    if (ei_method != "runs") methods.push_back(sim::ThetaMethod::ratio);
    auto emit_row = [&](sim::ThetaMethod m, bool control) {
      const auto est = sim::estimate_extremal_index(P, ei_n, cfg, m, control);
      w.row({m == sim::ThetaMethod::runs ? "runs" : "ratio",
             fmt(est.theta), fmt(est.ci_lo), fmt(est.ci_hi),
             fmt(control ? 1.0 : P.p), control ? "1" : "0",
             est.defined ? "1" : "0", fmt(est.exceedances),
             fmt(est.clusters), fmt(est.successes), fmt(est.k_n),
             fmt(est.j_n)});
    };
    for (auto m : methods) emit_row(m, false);
    if (ei_control)
      for (auto m : methods) emit_row(m, true);
    detail::emit(w, ei_c.out);
  });

  // ---- exact-law ------------------------------------------------------
  detail::Common el_c;
  double el_x = -1.0;
  int el_n = 0, el_smax = 0, el_prefix = 14;
  std::string el_method = "closed";
  auto* el = app.add_subcommand("exact-law",
                                "finite-window maximum law, four routes");
  detail::add_params(el, el_c);
  el->add_option("--x", el_x, "negative level parameter")
      ->capture_default_str();
  el->add_option("--n", el_n, "level index")
      ->check(CLI::Range(1, 60))
      ->required();
  el->add_option("--s-max", el_smax,
                 "largest window length; 0 keeps every admitted length")
      ->check(CLI::Range(0, 1000000))
      ->capture_default_str();
  el->add_option("--prefix-depth", el_prefix,
                 "enumeration prefix depth (enumeration method only)")
      ->check(CLI::Range(1, 22))
      ->capture_default_str();
  el->add_option("--method", el_method,
                 "recursion | closed | automaton | enumeration")
      ->check(CLI::IsMember({"recursion", "closed", "automaton", "enumeration"}))
      ->capture_default_str();
  detail::add_plumbing(el, el_c);
  el->callback([&]() {
    const Params P = el_c.params();
    const exactlaw::LevelSet L =
        exactlaw::make_levels(P, el_x, el_n, el_c.depth);
    const int s_top = el_smax > 0 ? el_smax : L.j_n + 1;
    io::CsvWriter w;
    detail::stamp(w, "exact-law",
                  {{"beta", fmt(el_c.beta)},
                   {"p", fmt(el_c.p)},
                   {"x", fmt(el_x)},
                   {"n", fmt(el_n)},
                   {"s_max", fmt(s_top)},
                   {"prefix_depth", fmt(el_prefix)},
                   {"method", el_method},
                   {"depth", fmt(el_c.depth)},
                   {"seed", fmt(el_c.seed)}});
    w.header({"s", "probability", "lo", "hi", "method"});
    auto point = [&](int s, double v) {
      w.row({fmt(s), fmt(v), fmt(v), fmt(v), el_method});
    };
    if (el_method == "recursion") {
      for (int s = 1; s <= s_top; ++s)
        point(s, exactlaw::p_recursion(P, L, s, 0));
    } else if (el_method == "closed") {
      for (int s = 2; s <= s_top; ++s)
        point(s, exactlaw::closed_form_law(P, L, s));
    } else if (el_method == "automaton") {
      if (el_x != -1.0)
        throw std::domain_error(
            "exact-law: the automaton route requires --x -1");
      for (int s = 1; s <= s_top; ++s)
        point(s, exactlaw::run_automaton_law(P, el_n, s));
    } else {
      const auto br =
          exactlaw::enumeration_law_brackets(P, el_x, el_n, el_prefix, s_top);
      for (int s = 1; s <= s_top; ++s) {
        const auto& b = br[static_cast<std::size_t>(s - 1)];
        w.row({fmt(s), fmt(0.5 * (b.lo + b.hi)), fmt(b.lo), fmt(b.hi),
               el_method});
      }
    }
    detail::emit(w, el_c.out);
  });

  // ---- verify ---------------------------------------------------------
  detail::Common vf_c;
  std::string vf_suite;
  auto* vf = app.add_subcommand("verify", "run an invariant suite");
  vf->add_option("--suite", vf_suite,
                 "marginal | exactlaw | dynamics | association | all")
      ->check(CLI::IsMember(
          {"marginal", "exactlaw", "dynamics", "association", "all"}))
      ->required();
  detail::add_plumbing(vf, vf_c);
  vf->callback([&]() {
    const auto results =
        verify::verify_suite(vf_suite, vf_c.seed, vf_c.depth);
    io::CsvWriter w;
    detail::stamp(w, "verify",
                  {{"suite", vf_suite},
                   {"depth", fmt(vf_c.depth)},
                   {"seed", fmt(vf_c.seed)}});
    w.header({"check", "measured", "threshold", "pass"});
    bool all = true;
    for (const auto& r : results) {
      w.row({io::csv_escape(r.name), fmt(r.measured), fmt(r.threshold),
             r.pass ? "1" : "0"});
      all = all && r.pass;
    }
    detail::emit(w, vf_c.out);
    if (!all) rc = 1;
  });

  // ---- figures --------------------------------------------------------
  detail::Common fg_c;
  std::string fg_id;
  std::string fg_dir;
  auto* fg = app.add_subcommand("figures",
                                "regenerate the reference figures and tables");
  fg->add_option("--fig", fg_id, "1 | 2 | 3 | convergence")
      ->check(CLI::IsMember({"1", "2", "3", "convergence"}))
      ->required();
  fg->add_option("--out-dir", fg_dir, "directory for CSV and SVG outputs")
      ->required();
  detail::add_plumbing(fg, fg_c, /*with_depth=*/true);
  fg->callback([&]() {
    namespace fs = std::filesystem;
    fs::create_directories(fg_dir);
    const std::string base = fg_dir + "/";
    const int depth = fg_c.depth;

    if (fg_id != "convergence") {
      static const struct { const char* id; double beta, p; } figs[] = {
          {"1", 1.0 / 3.0, 0.5}, {"2", 0.5, 0.25}, {"3", 0.5, 0.75}};
      double beta = 0, p = 0;
      for (const auto& f : figs)
        if (fg_id == f.id) beta = f.beta, p = f.p;
      const Params P(beta, p);
      const double expo = std::log(P.p) / std::log(P.beta);

      // cdf panel: uniform grid plus the exact geometric points where the
      // curve meets the reference power law
      std::vector<double> xs;
      for (int i = 0; i <= 800; ++i) xs.push_back(i / 800.0);
      for (int k = 0; k <= 10; ++k) xs.push_back(std::pow(P.beta, k));
      std::sort(xs.begin(), xs.end());
      xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

      io::CsvWriter wc;
      detail::stamp(wc, "figures",
                    {{"fig", fg_id},
                     {"panel", "cdf"},
                     {"beta", fmt(beta)},
                     {"p", fmt(p)},
                     {"depth", fmt(depth)},
                     {"seed", fmt(fg_c.seed)}});
      wc.header({"x", "F", "reference"});
      io::SvgSeries sF, sRef;
      for (double x : xs) {
        const double F = marginal::cdf(P, x, depth).value;
        const double ref = x > 0.0 ? std::pow(x, expo) : 0.0;
        wc.row({fmt(x), fmt(F), fmt(ref)});
        sF.x.push_back(x);
        sF.y.push_back(F);
        sRef.x.push_back(x);
        sRef.y.push_back(ref);
      }
      wc.save(base + "fig" + fg_id + "_cdf.csv");
      sF.label = "F";
      sRef.label = "x^(log p/log beta)";
      sRef.color = "#c24f1f";
      sRef.dashed = true;
      io::SvgPlot pc("stationary cdf", "x", "F(x)");
      pc.add_series(sF);
      pc.add_series(sRef);
      pc.save(base + "fig" + fg_id + "_cdf.svg");

      io::CsvWriter wn;
      detail::stamp(wn, "figures",
                    {{"fig", fg_id},
                     {"panel", "nu"},
                     {"beta", fmt(beta)},
                     {"p", fmt(p)},
                     {"depth", fmt(depth)},
                     {"seed", fmt(fg_c.seed)}});
      wn.header({"t", "nu"});
      io::SvgSeries sn;
      const double lb = std::log(P.beta);
      for (int i = 0; i <= 512; ++i) {
        const double t = lb * (512 - i) / 512.0 + 0.0;
        const double v = marginal::nu(P, t, depth);
        wn.row({fmt(t), fmt(v)});
        sn.x.push_back(t);
        sn.y.push_back(v);
      }
      wn.save(base + "fig" + fg_id + "_nu.csv");
      sn.label = "nu";
      io::SvgPlot pn("periodic tail function", "t", "nu(t)");
      pn.add_series(sn);
      pn.save(base + "fig" + fg_id + "_nu.svg");
    } else {
      const Params P(1.0 / 3.0, 0.5);
      const auto rep = sim::doa_convergence(P, -1.0, 2, 12, depth);
      io::CsvWriter wd;
      detail::stamp(wd, "figures",
                    {{"fig", "convergence"},
                     {"panel", "doa"},
                     {"beta", fmt(P.beta)},
                     {"p", fmt(P.p)},
                     {"x", fmt(-1.0)},
                     {"depth", fmt(depth)},
                     {"seed", fmt(fg_c.seed)}});
      wd.header({"n", "k_n", "marginal_at_level", "value", "gap"});
      io::SvgSeries sv, sl;
      for (const auto& pt : rep.points) {
        wd.row({fmt(pt.n), fmt(pt.k_n), fmt(pt.marginal_at_level),
                fmt(pt.value), fmt(pt.gap)});
        sv.x.push_back(pt.n);
        sv.y.push_back(pt.value);
        sl.x.push_back(pt.n);
        sl.y.push_back(rep.limit);
      }
      wd.save(base + "convergence_doa.csv");
      sv.label = "F(u_n)^k_n";
      sl.label = "limit";
      sl.color = "#c24f1f";
      sl.dashed = true;
      io::SvgPlot pd("powered marginal at the levels", "n", "probability");
      pd.add_series(sv);
      pd.add_series(sl);
      pd.save(base + "convergence_doa.svg");

      const std::vector<double> xs = {-2.0, -1.5, -1.0, -0.5, -0.25};
      sim::MonteCarloConfig cfg;
      cfg.seed = fg_c.seed;
      cfg.replications = 4000;
      cfg.depth = depth;
      const auto law = sim::empirical_max_law(P, xs, 8, cfg, true);
      io::CsvWriter wl;
      detail::stamp(wl, "figures",
                    {{"fig", "convergence"},
                     {"panel", "law"},
                     {"beta", fmt(P.beta)},
                     {"p", fmt(P.p)},
                     {"n", fmt(8)},
                     {"reps", fmt(cfg.replications)},
                     {"depth", fmt(depth)},
                     {"seed", fmt(fg_c.seed)}});
      wl.header({"x", "empirical", "ci_lo", "ci_hi", "theory_dep",
                 "theory_iid"});
      io::SvgSeries se, st;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double td = evt::limit_law_dependent(P, xs[i], depth);
        wl.row({fmt(xs[i]), fmt(law.estimate[i]), fmt(law.ci_lo[i]),
                fmt(law.ci_hi[i]), fmt(td),
                fmt(evt::limit_law_iid(P, xs[i], depth))});
        se.x.push_back(xs[i]);
        se.y.push_back(law.estimate[i]);
        st.x.push_back(xs[i]);
        st.y.push_back(td);
      }
      wl.save(base + "convergence_law.csv");
      se.label = "empirical";
      st.label = "limit";
      st.color = "#c24f1f";
      st.dashed = true;
      io::SvgPlot pl("block maximum law at n = 8", "x", "P(M <= u_n)");
      pl.add_series(se);
      pl.add_series(st);
      pl.save(base + "convergence_law.svg");
    }
  });

  try {
    args = detail::apply_config_file(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return rc;
}

}  // namespace semistable::cli
