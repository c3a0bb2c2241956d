// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line with
// the measured quantity against its pinned tolerance; the process exits
// nonzero when any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/test_support.hpp"
#include "dexeff/amm.hpp"
#include "dexeff/arbitrage.hpp"
#include "dexeff/eigen.hpp"
#include "dexeff/ingest.hpp"
#include "dexeff/routing.hpp"
#include "dexeff/simulator.hpp"
#include "dexeff/verifier.hpp"

using namespace dexeff;
using namespace dexeff::testing;

namespace {

int failures = 0;

void report(int number, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] %d. %s: %s\n", pass ? "PASS" : "FAIL", number, name, detail.c_str());
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

// --- criterion 1: closed-form vs numeric TAP solver ------------------------

void criterion_solver_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto m = random_market(rng, 30);
    const double tap_c = solve_tap_closed_form(m.graph, m.prices, m.date).tap_usd;
    const double tap_n = solve_tap_numeric(m.graph, m.prices, m.date).tap_usd;
    const double tvl = graph_tvl(m.graph, m.prices, m.date);
    const double abs_dev = std::fabs(tap_c - tap_n);
    const double allowed = std::max(1e-6 * std::max(tap_c, tap_n), 1e-8 * tvl);
    worst = std::max(worst, abs_dev / allowed);
  }
  const double secs = seconds_since(t0);
  report(1, "solver equivalence (200 instances, 1e-6 rel / 1e-8*TVL)",
         worst <= 1.0 && secs < 10.0,
         fmt("worst deviation %.3g of the allowance, %.2f s (< 10 s)", worst, secs));
}

// --- criterion 2: no arbitrage remains after the optimal plan ---------------

void criterion_theorem_suite() {
  std::mt19937_64 rng(2002);
  int straddle_failures = 0, cycle_failures = 0;
  double worst_ratio = 0.0, worst_cycle = 0.0;
  for (int i = 0; i < 100; ++i) {
    auto m = random_market(rng, 10);
    const auto plan = solve_tap_closed_form(m.graph, m.prices, m.date);
    const TokenGraph after = execute_plan(m.graph, plan, /*with_fee_reinjection=*/true);
    for (const auto& check : verify_no_cex_arbitrage(after, m.prices, m.date, 1e-9)) {
      if (!check.pass) ++straddle_failures;
      worst_ratio = std::max({worst_ratio, check.ratio_sell_a, check.ratio_sell_b});
    }
    VerifierConfig vcfg;
    vcfg.max_cycle_len = 4;
    vcfg.cycle_tol = 1e-6;
    for (const auto& probe : verify_no_cyclic_arbitrage(after, vcfg)) {
      if (!cycle_probe_passes(probe, vcfg)) ++cycle_failures;
      if (probe.input_cap > 0.0)
        worst_cycle = std::max(worst_cycle, probe.best_profit / probe.input_cap);
    }
  }
  report(2, "post-plan no-arbitrage (100 graphs, straddle 1e-9, cycles <= 4 at 1e-6)",
         straddle_failures == 0 && cycle_failures == 0,
         fmt("worst activation ratio %.12f, worst relative cycle profit %.3g",
             worst_ratio, worst_cycle));
}

// --- criterion 3: swap-level product and round-trip properties --------------

void criterion_cpmm_invariants() {
  std::mt19937_64 rng(3003);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(std::log(lo) + unit(rng) * (std::log(hi) - std::log(lo)));
  };
  static const double fees[] = {0.0, 0.003, 0.01};
  const TokenId A = tok("0xaa"), B = tok("0xbb");
  int bad = 0;
  double worst_p1 = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double a = log_uniform(1e2, 1e6), b = log_uniform(1e2, 1e6);
    const double fee = fees[rng() % 3];
    const Pool pool = make_pool("p", A, B, a, b, fee);
    const double din = log_uniform(1e-3, 1e6);
    const auto q = quote(pool, Direction::sell_a, din);
    const double p1 = q.post_phase1_reserves.first * q.post_phase1_reserves.second;
    worst_p1 = std::max(worst_p1, rel_diff(p1, a * b));
    if (rel_diff(p1, a * b) > 1e-12) ++bad;
    const double p2 = q.post_phase2_reserves.first * q.post_phase2_reserves.second;
    if (fee * din > 0.0 && !(p2 > a * b)) ++bad;
    if (fee > 0.0 && q.amount_out > 0.0) {
      const Pool after{pool.pool_id, A, B, q.post_phase2_reserves.first,
                       q.post_phase2_reserves.second, fee};
      if (!(quote(after, Direction::sell_b, q.amount_out).amount_out < din)) ++bad;
    }
  }
  report(3, "CPMM invariants (1e5 samples: product conservation, fee growth, round-trip loss)",
         bad == 0, fmt("violations %.0f, worst phase-1 relative error %.3g", (double)bad,
                       worst_p1));
}

// --- criterion 4: STAP is invariant under uniform price rescaling -----------

void criterion_stap_scale_invariance() {
  std::mt19937_64 rng(4004);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto m = random_market(rng, 20);
    const double base = stap(m.graph, m.prices, m.date).stap;
    for (double q : {0.1, 3.0, 1000.0}) {
      PriceBook scaled;
      for (const auto& t : m.graph.tokens) scaled.set(t, m.date, q * m.prices.get(t, m.date));
      worst = std::max(worst, rel_diff(stap(m.graph, scaled, m.date).stap, base));
    }
  }
  report(4, "STAP scale invariance (50 graphs, q in {0.1, 3, 1000}, 1e-12 rel)", worst <= 1e-12,
         fmt("worst relative deviation %.3g", worst));
}

// --- criterion 5: routing-comparison simulation on the bundled snapshot -----

void criterion_simulation(const std::string& data_dir) {
  const Date date = "2024-06-21";
  const auto snap = load_snapshot(data_dir + "/pools.csv", data_dir + "/prices.csv",
                                  data_dir + "/mapping.json", date);
  const TokenGraph g = build_filtered_graph(snap.records, snap.prices, date, snap.mapping);
  const auto tasks = generate_tasks(g, snap.prices, date, 1000, /*seed=*/1, 1000.0);

  double worst_conservation = 0.0, slowest = 0.0;
  SimulationSummary sum[2];
  bool dfs_trend_ok = false;
  const RoutingAlgo algos[2] = {RoutingAlgo::dfs, RoutingAlgo::line_graph};
  for (int k = 0; k < 2; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto trace = run_simulation(g, snap.prices, date, tasks, algos[k]);
    slowest = std::max(slowest, seconds_since(t0));
    double tvl_before = trace.initial_tvl;
    double first_half = 0.0, second_half = 0.0;
    for (const auto& rec : trace.records) {
      worst_conservation = std::max(
          worst_conservation,
          std::fabs(rec.value_in_usd + tvl_before - (rec.value_out_usd + rec.tvl_after)));
      tvl_before = rec.tvl_after;
      (rec.index < trace.records.size() / 2 ? first_half : second_half) += rec.tvl_after;
    }
    if (algos[k] == RoutingAlgo::dfs)
      dfs_trend_ok = second_half / 500.0 > first_half / 500.0;
    sum[k] = summarize(trace);
  }
  const bool conservation_ok = worst_conservation < 1e-6;
  const bool lg_ge_dfs = sum[1].cumulative_value_out_usd >= sum[0].cumulative_value_out_usd;
  const bool dfs_tvl_grows = sum[0].final_tvl > sum[0].initial_tvl && dfs_trend_ok;
  const bool lg_tvl_steadier = std::fabs(sum[1].tvl_delta) < std::fabs(sum[0].tvl_delta);
  report(5, "simulation reproduction (n=1000, $1000, seed 1: conservation, LG value, TVL trends)",
         conservation_ok && lg_ge_dfs && dfs_tvl_grows && lg_tvl_steadier && slowest < 60.0,
         fmt("conservation %.3g USD; LG-DFS value %+.2f; dTVL dfs %+.2f",
             worst_conservation,
             sum[1].cumulative_value_out_usd - sum[0].cumulative_value_out_usd,
             sum[0].tvl_delta) +
             fmt(", dTVL lg %+.2f; slowest run %.1f s", sum[1].tvl_delta, slowest));
}

// --- criterion 6: line-graph routing dominates DFS per query ----------------

void criterion_routing_dominance() {
  std::mt19937_64 rng(6006);
  int queries = 0, violations = 0;
  while (queries < 500) {
    const auto m = random_market(rng, 12);
    std::vector<TokenId> tokens(m.graph.tokens.begin(), m.graph.tokens.end());
    if (tokens.size() < 2) continue;
    const std::size_t ia = rng() % tokens.size();
    std::size_t ib = rng() % (tokens.size() - 1);
    if (ib >= ia) ++ib;
    const double amount = 1.0 + (double)(rng() % 1000);
    double dfs_out = -1.0, lg_out = -1.0;
    try {
      dfs_out = route_dfs(m.graph, tokens[ia], tokens[ib], amount).amount_out;
    } catch (const NoRoute&) {
    }
    try {
      lg_out = route_line_graph(m.graph, tokens[ia], tokens[ib], amount).amount_out;
    } catch (const NoRoute&) {
    }
    if (dfs_out < 0.0 && lg_out < 0.0) continue;  // disconnected pair; not a query
    ++queries;
    if (lg_out < dfs_out * (1.0 - 1e-12)) ++violations;
  }
  // Constructed strictness fixture: a mispriced parallel pair reachable only
  // through a token revisit makes the line-graph route strictly better.
  const TokenId A = tok("0xa1"), B = tok("0xb1"), C = tok("0xc1");
  TokenGraph g;
  g.add_pool(make_pool("p1", A, B, 100000, 100000, 0.003));
  g.add_pool(make_pool("p2", A, B, 100000, 120000, 0.003));
  g.add_pool(make_pool("p3", B, C, 100000, 100000, 0.003));
  const double dfs_out = route_dfs(g, C, B, 1000).amount_out;
  const double lg_out = route_line_graph(g, C, B, 1000).amount_out;
  report(6, "routing dominance (500 queries LG >= DFS; strict on the weave fixture)",
         violations == 0 && lg_out > dfs_out,
         fmt("violations %.0f; fixture DFS %.4f vs LG %.4f", (double)violations, dfs_out,
             lg_out));
}

// --- criterion 7: eigen consistent case and dense-oracle agreement ----------

// det(lambda*I - A) by Gaussian elimination with partial pivoting; positive
// above the largest real eigenvalue.
double char_poly(const std::vector<double>& a, std::size_t n, double lambda) {
  std::vector<double> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = (i == j ? lambda : 0.0) - a[i * n + j];
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(m[r * n + col]) > std::fabs(m[piv * n + col])) piv = r;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m[col * n + j], m[piv * n + j]);
      det = -det;
    }
    if (m[col * n + col] == 0.0) return 0.0;
    det *= m[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m[r * n + col] / m[col * n + col];
      for (std::size_t j = col; j < n; ++j) m[r * n + j] -= f * m[col * n + j];
    }
  }
  return det;
}

double perron_root_oracle(const std::vector<double>& a, std::size_t n) {
  double hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += a[i * n + j];
    hi = std::max(hi, row);
  }
  hi += 1.0;
  const double step = hi / 20000.0;
  double lo = hi - step;
  while (char_poly(a, n, lo) > 0.0) {
    hi = lo;
    lo -= step;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = (lo + hi) / 2.0;
    (char_poly(a, n, mid) > 0.0 ? hi : lo) = mid;
  }
  return (lo + hi) / 2.0;
}

void criterion_eigen() {
  std::mt19937_64 rng(7007);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_lambda = 0.0, worst_vec = 0.0, worst_oracle = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 7;  // up to 8 tokens
    std::vector<double> e(n);
    for (auto& v : e) v = std::exp(-6.0 + 12.0 * unit(rng));
    RateMatrix m;
    m.tokens.resize(n);
    m.values.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m.at(i, j) = e[i] / e[j];
    const auto rep = dominant_eigenpair(m);
    worst_lambda = std::max(worst_lambda, std::fabs(rep.lambda_max - (double)n));
    double sum = 0.0;
    for (double v : e) sum += v;
    for (std::size_t i = 0; i < n; ++i)
      worst_vec = std::max(worst_vec, rel_diff(rep.eigenvector[i], e[i] / sum));
    if (n <= 6) {
      // Perturb a reciprocal pair so the oracle sees a non-trivial instance.
      RateMatrix pert = m;
      const double f = 1.0 + unit(rng);
      pert.at(0, n - 1) *= f;
      pert.at(n - 1, 0) /= f;
      worst_oracle = std::max(worst_oracle,
                              std::fabs(dominant_eigenpair(pert).lambda_max -
                                        perron_root_oracle(pert.values, n)));
    }
  }
  report(7, "eigen consistent case (lambda=n, eigenvector to 1e-10; dense oracle to 1e-8)",
         worst_lambda <= 1e-10 && worst_vec <= 1e-10 && worst_oracle <= 1e-8,
         fmt("lambda dev %.3g, eigenvector dev %.3g, oracle dev %.3g", worst_lambda, worst_vec,
             worst_oracle));
}

// --- criterion 8: the observed two-pool trade that beat its input -----------

void criterion_corollary() {
  const bool flagged = check_corollary(3632.62, 3634.09);
  report(8, "corollary detector flags ($3632.62 in, $3634.09 out)", flagged,
         flagged ? "arbitrage-exists as expected" : "not flagged");
}

// --- criterion 9: CLI byte-determinism --------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void criterion_determinism(const std::string& data_dir, const std::string& cli,
                           const std::string& work_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(work_dir);
  const std::string inputs = " --pools " + data_dir + "/pools.csv --prices " + data_dir +
                             "/prices.csv --mapping " + data_dir + "/mapping.json";
  bool identical = true;
  std::string detail;
  for (int run = 0; run < 2; ++run) {
    const std::string stem = work_dir + "/sim" + std::to_string(run);
    const std::string cmd = cli + " simulate" + inputs +
                            " --snapshot-date 2024-06-21 --n 200 --seed 7 --algo both --out " +
                            stem + ".csv > /dev/null";
    if (std::system(cmd.c_str()) != 0) identical = false;
    const std::string series = cli + " stap-series" + inputs +
                               " --first-date 2024-06-21 --last-date 2024-06-23 --out " +
                               work_dir + "/series" + std::to_string(run) + ".csv > /dev/null";
    if (std::system(series.c_str()) != 0) identical = false;
  }
  for (const char* name : {".dfs.csv", ".lg.csv", ".summary.json"}) {
    if (read_file(work_dir + "/sim0" + name) != read_file(work_dir + "/sim1" + name)) {
      identical = false;
      detail += std::string(" sim") + name + " differs;";
    }
  }
  if (read_file(work_dir + "/series0.csv") != read_file(work_dir + "/series1.csv")) {
    identical = false;
    detail += " stap-series differs;";
  }
  report(9, "determinism (simulate and stap-series byte-identical across reruns)", identical,
         identical ? "all outputs byte-identical" : detail);
}

}  // namespace

int main(int argc, char** argv) {
  std::string data_dir = "tests/data", cli, work_dir = "acceptance-work";
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--data-dir") data_dir = argv[i + 1];
    else if (flag == "--cli") cli = argv[i + 1];
    else if (flag == "--work-dir") work_dir = argv[i + 1];
  }

  criterion_solver_equivalence();
  criterion_theorem_suite();
  criterion_cpmm_invariants();
  criterion_stap_scale_invariance();
  criterion_simulation(data_dir);
  criterion_routing_dominance();
  criterion_eigen();
  criterion_corollary();
  if (!cli.empty())
    criterion_determinism(data_dir, cli, work_dir);
  else
    report(9, "determinism (simulate and stap-series byte-identical across reruns)", false,
           "no --cli path supplied");

  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all 9 criteria passed\n");
  return 0;
}
