#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "semistable/cli.hpp"
#include "semistable/marginal.hpp"

using Catch::Approx;
namespace fs = std::filesystem;
using semistable::cli::run_cli;

namespace {

std::string tmp_path(const std::string& name) {
  return (fs::temp_directory_path() / ("semistable_cli_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Table {
  std::vector<std::string> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    FAIL("no column " + name);
    return 0;
  }
  double num(std::size_t r, const std::string& name) const {
    return std::stod(rows.at(r).at(col(name)));
  }
  const std::string& str(std::size_t r, const std::string& name) const {
    return rows.at(r).at(col(name));
  }
};

Table read_table(const std::string& path) {
  Table t;
  std::istringstream in(slurp(path));
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    REQUIRE(line.find('\r') == std::string::npos);
    if (!line.empty() && line[0] == '#') {
      t.meta.push_back(line);
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!have_header) {
      t.columns = cells;
      have_header = true;
    } else {
      t.rows.push_back(cells);
    }
  }
  return t;
}

}  // namespace

TEST_CASE("exit codes: usage, domain, success", "[cli]") {
  CHECK(run_cli({}) == 2);                        // subcommand required
  CHECK(run_cli({"not-a-command"}) == 2);
  CHECK(run_cli({"--help"}) == 0);
  CHECK(run_cli({"--version"}) == 0);
  CHECK(run_cli({"cdf", "--help"}) == 0);
  CHECK(run_cli({"cdf"}) == 2);                   // needs --x or --grid
  CHECK(run_cli({"cdf", "--x", "0.5", "--grid", "4"}) == 2);
  CHECK(run_cli({"cdf", "--x", "0.5", "--bogus-flag"}) == 2);
  CHECK(run_cli({"cdf", "--beta", "0.9", "--x", "0.5",
                 "--out", tmp_path("never.csv")}) == 1);
  CHECK(run_cli({"max-law", "--x-grid", "-300", "--n", "1", "--reps", "10",
                 "--out", tmp_path("never.csv")}) == 1);
  CHECK(run_cli({"exact-law", "--x", "-0.5", "--n", "4", "--method",
                 "automaton", "--out", tmp_path("never.csv")}) == 1);
  CHECK(run_cli({"extremal-index", "--n", "1"}) == 2);   // range
  CHECK(run_cli({"figures", "--fig", "7", "--out-dir", tmp_path("figs")}) == 2);
  CHECK(run_cli({"verify"}) == 2);                // suite required
  CHECK(run_cli({"verify", "--suite", "bogus"}) == 2);
}

TEST_CASE("cdf command emits exact anchors and monotone grids", "[cli]") {
  const std::string out = tmp_path("cdf_point.csv");
  REQUIRE(run_cli({"cdf", "--beta", "0.3333333333333333", "--p", "0.5", "--x",
                   "0.3333333333333333", "--out", out}) == 0);
  Table t = read_table(out);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.num(0, "F") == 0.5);
  CHECK(t.num(0, "error_bound") == 0.0);
  CHECK(t.num(0, "exact_flag") == 1.0);
  CHECK_FALSE(t.meta.empty());
  bool has_version = false;
  for (const auto& m : t.meta)
    if (m.find("version=") != std::string::npos) has_version = true;
  CHECK(has_version);

  const std::string neg = tmp_path("cdf_neg.csv");
  REQUIRE(run_cli({"cdf", "--x", "-0.25", "--out", neg}) == 0);
  CHECK(read_table(neg).num(0, "F") == 0.0);

  const std::string grid = tmp_path("cdf_grid.csv");
  REQUIRE(run_cli({"cdf", "--beta", "0.4", "--p", "0.7", "--grid", "32",
                   "--out", grid}) == 0);
  Table g = read_table(grid);
  REQUIRE(g.rows.size() == 33);
  CHECK(g.num(0, "x") == 0.0);
  CHECK(g.num(0, "F") == 0.0);
  CHECK(g.num(32, "x") == 1.0);
  CHECK(g.num(32, "F") == 1.0);
  for (std::size_t r = 1; r < g.rows.size(); ++r)
    CHECK(g.num(r, "F") >= g.num(r - 1, "F") - 1e-15);
}

TEST_CASE("nu command spans one period with matching endpoints", "[cli]") {
  const std::string flat = tmp_path("nu_flat.csv");
  REQUIRE(run_cli({"nu", "--beta", "0.5", "--p", "0.5", "--grid", "16",
                   "--out", flat}) == 0);
  Table t = read_table(flat);
  REQUIRE(t.rows.size() == 17);
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    CHECK(t.num(r, "nu") == Approx(1.0).margin(1e-12));
  CHECK(t.num(0, "t") == Approx(std::log(0.5)).margin(1e-15));
  CHECK(t.num(16, "t") == 0.0);
  CHECK(t.str(16, "t") == "0");  // signed zero must not leak

  const std::string osc = tmp_path("nu_osc.csv");
  REQUIRE(run_cli({"nu", "--beta", "0.3333333333333333", "--p", "0.5",
                   "--grid", "64", "--out", osc}) == 0);
  Table u = read_table(osc);
  REQUIRE(u.rows.size() == 65);
  double lo = 1e300;
  for (std::size_t r = 0; r < u.rows.size(); ++r)
    lo = std::min(lo, u.num(r, "nu"));
  CHECK(lo > 0.0);
  CHECK(std::fabs(u.num(0, "nu") - u.num(64, "nu")) <= 1e-10);
}

TEST_CASE("quantile command inverts the cdf", "[cli]") {
  const std::string out = tmp_path("quantile.csv");
  REQUIRE(run_cli({"quantile", "--beta", "0.3333333333333333", "--p", "0.5",
                   "--alpha", "0.5", "--out", out}) == 0);
  CHECK(read_table(out).num(0, "x") ==
        Approx(1.0 / 3.0).margin(1e-12));

  const std::string grid = tmp_path("quantile_grid.csv");
  REQUIRE(run_cli({"quantile", "--beta", "0.4", "--p", "0.25", "--grid", "8",
                   "--out", grid}) == 0);
  Table g = read_table(grid);
  REQUIRE(g.rows.size() == 9);
  CHECK(g.num(0, "alpha") == 0.0);
  CHECK(g.num(0, "x") == 0.0);
  CHECK(g.num(8, "alpha") == 1.0);
  CHECK(g.num(8, "x") == 1.0);
  for (std::size_t r = 1; r < g.rows.size(); ++r)
    CHECK(g.num(r, "x") >= g.num(r - 1, "x") - 1e-15);
}

TEST_CASE("simulate command writes the recurrence it claims", "[cli]") {
  const std::string out = tmp_path("simulate.csv");
  REQUIRE(run_cli({"simulate", "--beta", "0.25", "--p", "0.3", "--steps", "5",
                   "--out", out}) == 0);
  Table t = read_table(out);
  REQUIRE(t.rows.size() == 6);
  CHECK(t.num(0, "innovation") == -1.0);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    CHECK(t.num(r, "k") == double(r));
    CHECK(t.num(r, "value") >= 0.0);
    CHECK(t.num(r, "value") <= 1.0);
    if (r > 0) {
      const double innov = t.num(r, "innovation");
      CHECK((innov == 0.0 || innov == 1.0));
      const double expect =
          0.25 * t.num(r - 1, "value") + (innov == 1.0 ? 0.75 : 0.0);
      CHECK(t.num(r, "value") == Approx(expect).margin(1e-15));
    }
  }

  // Same invocation, byte-identical output; other replication differs.
  const std::string again = tmp_path("simulate_again.csv");
  REQUIRE(run_cli({"simulate", "--beta", "0.25", "--p", "0.3", "--steps", "5",
                   "--out", again}) == 0);
  CHECK(slurp(out) == slurp(again));
  const std::string other = tmp_path("simulate_other.csv");
  REQUIRE(run_cli({"simulate", "--beta", "0.25", "--p", "0.3", "--steps", "5",
                   "--replication", "1", "--out", other}) == 0);
  CHECK(slurp(out) != slurp(other));
}

TEST_CASE("max-law command reports estimates against both limits", "[cli]") {
  const std::string out = tmp_path("maxlaw.csv");
  const std::vector<std::string> args = {
      "max-law", "--beta", "0.3333333333333333", "--p", "0.5",
      "--x-grid", "-1",    "--n", "8", "--reps", "4000", "--out", out};
  REQUIRE(run_cli(args) == 0);
  Table t = read_table(out);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.num(0, "theory_dep") == Approx(std::exp(-0.5)).margin(1e-9));
  CHECK(t.num(0, "theory_iid") == Approx(std::exp(-1.0)).margin(1e-9));
  CHECK(t.num(0, "ci_lo") <= t.num(0, "empirical"));
  CHECK(t.num(0, "empirical") <= t.num(0, "ci_hi"));
  CHECK(std::fabs(t.num(0, "empirical") - std::exp(-0.5)) <= 0.025);
  CHECK(t.num(0, "ambiguous") <= 2.0);

  const std::string again = tmp_path("maxlaw_again.csv");
  std::vector<std::string> args2 = args;
  args2.back() = again;
  REQUIRE(run_cli(args2) == 0);
  CHECK(slurp(out) == slurp(again));

  // Unsorted x grids come back sorted.
  const std::string multi = tmp_path("maxlaw_multi.csv");
  REQUIRE(run_cli({"max-law", "--x-grid", "-0.5,-2", "--n", "6", "--reps",
                   "500", "--out", multi}) == 0);
  Table m = read_table(multi);
  REQUIRE(m.rows.size() == 2);
  CHECK(m.num(0, "x") == -2.0);
  CHECK(m.num(1, "x") == -0.5);
  CHECK(m.num(0, "empirical") <= m.num(1, "empirical"));
}

TEST_CASE("extremal-index command writes paired estimate and control rows",
          "[cli]") {
  const std::string out = tmp_path("theta.csv");
  REQUIRE(run_cli({"extremal-index", "--beta", "0.3333333333333333", "--p",
                   "0.5", "--n", "6", "--reps", "3000", "--horizon", "1024",
                   "--method", "both", "--control", "--out", out}) == 0);
  Table t = read_table(out);
  REQUIRE(t.rows.size() == 4);
  CHECK(t.str(0, "method") == "runs");
  CHECK(t.str(1, "method") == "ratio");
  CHECK(t.str(2, "method") == "runs");
  CHECK(t.str(3, "method") == "ratio");
  for (std::size_t r = 0; r < 4; ++r) {
    const bool control = r >= 2;
    CHECK(t.num(r, "control") == (control ? 1.0 : 0.0));
    CHECK(t.num(r, "defined") == 1.0);
    CHECK(t.num(r, "k_n") == 64.0);
    if (!control) {
      CHECK(t.num(r, "theta_theory") == 0.5);
      CHECK(std::fabs(t.num(r, "estimate") - 0.5) <= 0.1);
    } else {
      CHECK(t.num(r, "theta_theory") == 1.0);
    }
  }
  // The ratio control targets 1 exactly; the runs control targets the
  // stationary window survival, which is close to but below 1.
  CHECK(std::fabs(t.num(3, "estimate") - 1.0) <= 0.1);
  CHECK(t.num(2, "estimate") <= 1.0);
  CHECK(t.num(2, "estimate") >= 0.8);

  const std::string runs_only = tmp_path("theta_runs.csv");
  REQUIRE(run_cli({"extremal-index", "--n", "4", "--reps", "300", "--horizon",
                   "512", "--method", "runs", "--out", runs_only}) == 0);
  CHECK(read_table(runs_only).rows.size() == 1);
}

TEST_CASE("exact-law command exposes all four evaluation routes", "[cli]") {
  const std::string closed = tmp_path("law_closed.csv");
  REQUIRE(run_cli({"exact-law", "--beta", "0.3333333333333333", "--p", "0.5",
                   "--x", "-1", "--n", "4", "--method", "closed", "--out",
                   closed}) == 0);
  Table c = read_table(closed);
  REQUIRE(c.rows.size() == 3);  // s = 2 .. j_n + 1
  CHECK(c.num(0, "s") == 2.0);
  CHECK(c.num(0, "probability") == Approx(0.90625).margin(1e-12));
  CHECK(c.num(1, "probability") == Approx(0.875).margin(1e-12));
  CHECK(c.num(2, "probability") == Approx(0.84375).margin(1e-12));

  const std::string rec = tmp_path("law_rec.csv");
  REQUIRE(run_cli({"exact-law", "--beta", "0.3333333333333333", "--p", "0.5",
                   "--x", "-1", "--n", "4", "--method", "recursion", "--out",
                   rec}) == 0);
  Table r = read_table(rec);
  REQUIRE(r.rows.size() == 4);  // s = 1 .. j_n + 1
  CHECK(r.num(0, "probability") == Approx(0.9375).margin(1e-12));
  for (std::size_t i = 0; i < c.rows.size(); ++i)
    CHECK(std::fabs(r.num(i + 1, "probability") - c.num(i, "probability")) <=
          1e-12);

  const std::string autom = tmp_path("law_autom.csv");
  REQUIRE(run_cli({"exact-law", "--p", "0.5", "--x", "-1", "--n", "2",
                   "--s-max", "2", "--method", "automaton", "--out", autom}) ==
          0);
  Table a = read_table(autom);
  REQUIRE(a.rows.size() == 2);
  CHECK(a.num(0, "probability") == Approx(0.75).margin(1e-12));
  CHECK(a.num(1, "probability") == Approx(0.625).margin(1e-12));

  const std::string enu = tmp_path("law_enum.csv");
  REQUIRE(run_cli({"exact-law", "--beta", "0.3333333333333333", "--p", "0.5",
                   "--x", "-1", "--n", "3", "--method", "enumeration",
                   "--prefix-depth", "12", "--out", enu}) == 0);
  Table e = read_table(enu);
  REQUIRE(e.rows.size() >= 2);
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    CHECK(e.num(i, "lo") <= e.num(i, "probability"));
    CHECK(e.num(i, "probability") <= e.num(i, "hi"));
    const double s = e.num(i, "s");
    if (s >= 2) {
      const double cf = 1.0 - (0.5 * (s - 1) + 1.0) / 8.0;
      CHECK(e.num(i, "lo") <= cf + 1e-12);
      CHECK(cf <= e.num(i, "hi") + 1e-12);
    }
  }
}

TEST_CASE("verify command gates its exit code on the checks", "[cli]") {
  const std::string out = tmp_path("verify.csv");
  REQUIRE(run_cli({"verify", "--suite", "exactlaw", "--out", out}) == 0);
  Table t = read_table(out);
  CHECK(t.rows.size() >= 5);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    CHECK(t.num(r, "pass") == 1.0);
    CHECK(t.num(r, "measured") <= t.num(r, "threshold"));
  }
}

TEST_CASE("config files feed defaults that flags override", "[cli]") {
  const std::string cfg = tmp_path("config.ini");
  {
    std::ofstream f(cfg);
    f << "beta=0.4\np=0.7\n";
  }
  const std::string out = tmp_path("config_out.csv");
  REQUIRE(run_cli({"cdf", "--config", cfg, "--x", "0.5", "--out", out}) == 0);
  CHECK(read_table(out).num(0, "F") == Approx(0.7).margin(1e-15));

  const std::string out2 = tmp_path("config_out2.csv");
  REQUIRE(run_cli({"cdf", "--config", cfg, "--p", "0.25", "--x", "0.5",
                   "--out", out2}) == 0);
  CHECK(read_table(out2).num(0, "F") == Approx(0.25).margin(1e-15));
}

TEST_CASE("figures command regenerates its panels deterministically",
          "[cli]") {
  const std::string dir = tmp_path("figs_run");
  REQUIRE(run_cli({"figures", "--fig", "1", "--out-dir", dir}) == 0);
  for (const char* name :
       {"fig1_cdf.csv", "fig1_cdf.svg", "fig1_nu.csv", "fig1_nu.svg"}) {
    CHECK(fs::exists(fs::path(dir) / name));
  }
  CHECK(slurp((fs::path(dir) / "fig1_cdf.svg").string()).find("<svg") !=
        std::string::npos);

  // The cdf touches the envelope x^(log p / log beta) at every x = beta^k.
  Table t = read_table((fs::path(dir) / "fig1_cdf.csv").string());
  int touched = 0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double x = t.num(r, "x");
    for (int k = 0; k <= 10; ++k) {
      if (std::fabs(x - std::pow(1.0 / 3.0, k)) <= 1e-14) {
        CHECK(t.num(r, "F") == Approx(t.num(r, "reference")).margin(1e-9));
        ++touched;
      }
    }
  }
  CHECK(touched >= 10);

  const std::string before =
      slurp((fs::path(dir) / "fig1_cdf.csv").string());
  REQUIRE(run_cli({"figures", "--fig", "1", "--out-dir", dir}) == 0);
  CHECK(slurp((fs::path(dir) / "fig1_cdf.csv").string()) == before);

  // Away from the uniform corner the modulation is genuinely non-constant.
  const std::string dir2 = tmp_path("figs_run2");
  REQUIRE(run_cli({"figures", "--fig", "2", "--out-dir", dir2}) == 0);
  Table nu2 = read_table((fs::path(dir2) / "fig2_nu.csv").string());
  double lo = 1e300, hi = -1e300;
  for (std::size_t r = 0; r < nu2.rows.size(); ++r) {
    lo = std::min(lo, nu2.num(r, "nu"));
    hi = std::max(hi, nu2.num(r, "nu"));
  }
  CHECK(hi - lo > 1e-3);
  CHECK(lo > 0.0);
}

TEST_CASE("convergence figure records the documented decay", "[cli]") {
  const std::string dir = tmp_path("figs_conv");
  REQUIRE(run_cli({"figures", "--fig", "convergence", "--out-dir", dir}) == 0);
  for (const char* name : {"convergence_doa.csv", "convergence_doa.svg",
                           "convergence_law.csv", "convergence_law.svg"}) {
    CHECK(fs::exists(fs::path(dir) / name));
  }
  Table t = read_table((fs::path(dir) / "convergence_doa.csv").string());
  REQUIRE(!t.rows.empty());
  const std::size_t last = t.rows.size() - 1;
  CHECK(t.num(last, "n") == 12.0);
  CHECK(t.num(last, "gap") <= 2e-4);

  Table law = read_table((fs::path(dir) / "convergence_law.csv").string());
  REQUIRE(law.rows.size() == 5);
  for (std::size_t r = 0; r < law.rows.size(); ++r) {
    CHECK(law.num(r, "theory_dep") >= law.num(r, "theory_iid"));
    CHECK(std::fabs(law.num(r, "empirical") - law.num(r, "theory_dep")) <=
          0.05);
  }
}
