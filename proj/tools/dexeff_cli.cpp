// Command-line front end: ingestion checks, efficiency series, trade
// simulations, route quoting, no-arbitrage verification and the rate-matrix
// eigenvalue report, all emitting plain CSV/JSON.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dexeff/arbitrage.hpp"
#include "dexeff/eigen.hpp"
#include "dexeff/errors.hpp"
#include "dexeff/ingest.hpp"
#include "dexeff/routing.hpp"
#include "dexeff/simulator.hpp"
#include "dexeff/verifier.hpp"

namespace {

using nlohmann::json;

// Shortest-round-trip decimal formatting keeps reruns byte-identical.
std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  for (int prec = 1; prec <= 16; ++prec) {
    char probe[64];
    std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
    std::sscanf(probe, "%lf", &back);
    if (back == v) return probe;
  }
  return buf;
}

int log_verbosity = 1;  // 0 quiet, 1 info, 2 debug

void log_info(const std::string& msg) {
  if (log_verbosity >= 1) std::cerr << msg << "\n";
}

struct InputPaths {
  std::string pools;
  std::string prices;
  std::string mapping;
};

void add_input_flags(CLI::App* cmd, InputPaths& in) {
  cmd->add_option("--pools", in.pools, "pool reserves CSV")->required();
  cmd->add_option("--prices", in.prices, "token USD prices CSV")->required();
  cmd->add_option("--mapping", in.mapping, "token address mapping JSON")->required();
}

void add_filter_flags(CLI::App* cmd, dexeff::FilterConfig& cfg) {
  cmd->add_option("--min-pool-tvl", cfg.min_pool_tvl_usd, "minimum pool TVL in USD");
  cmd->add_option("--max-pools", cfg.target_max_pool_count, "maximum surviving pool count");
  cmd->add_option("--min-degree", cfg.min_degree, "minimum token degree kept");
  cmd->add_option("--fee-rate", cfg.fee_rate, "fee rate stamped on ingested pools");
}

dexeff::TokenGraph load_graph(const InputPaths& in, const dexeff::Date& date,
                              const dexeff::FilterConfig& cfg, dexeff::Snapshot& snap) {
  snap = dexeff::load_snapshot(in.pools, in.prices, in.mapping, date);
  return dexeff::build_filtered_graph(snap.records, snap.prices, date, snap.mapping, cfg,
                                      &snap.stats);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw dexeff::Error("cannot write " + path);
  return out;
}

std::string token_label(const dexeff::TokenId& t) {
  return t.symbol.empty() ? t.address : t.symbol;
}

const dexeff::TokenId& resolve_token(const dexeff::TokenGraph& graph, const std::string& key) {
  for (const auto& t : graph.tokens)
    if (t.address == key || t.symbol == key) return t;
  throw dexeff::Error("token '" + key + "' not in the filtered graph");
}

json straddle_json(const std::vector<dexeff::StraddleCheck>& checks) {
  json arr = json::array();
  for (const auto& c : checks)
    arr.push_back({{"pool_id", c.pool_id},
                   {"cex_ratio", c.cex_ratio},
                   {"ratio_sell_a", c.ratio_sell_a},
                   {"ratio_sell_b", c.ratio_sell_b},
                   {"pass", c.pass}});
  return arr;
}

json cycles_json(const std::vector<dexeff::CycleProbe>& probes,
                 const dexeff::VerifierConfig& cfg) {
  json arr = json::array();
  for (const auto& p : probes)
    arr.push_back({{"start_token", p.start_token.address},
                   {"pool_ids", p.pool_ids},
                   {"best_input", p.best_input},
                   {"best_profit", p.best_profit},
                   {"input_cap", p.input_cap},
                   {"pass", dexeff::cycle_probe_passes(p, cfg)}});
  return arr;
}

void write_trace_csv(const std::string& path, const dexeff::SimulationTrace& trace) {
  auto out = open_out(path);
  out << "index,algo,source,target,amount_in,value_in_usd,amount_out,value_out_usd,"
         "tvl_after,tap_after,stap_after\n";
  for (const auto& r : trace.records)
    out << r.index << ',' << dexeff::to_string(r.algo) << ',' << token_label(r.source) << ','
        << token_label(r.target) << ',' << fmt(r.amount_in) << ',' << fmt(r.value_in_usd) << ','
        << fmt(r.amount_out) << ',' << fmt(r.value_out_usd) << ',' << fmt(r.tvl_after) << ','
        << fmt(r.tap_after) << ',' << fmt(r.stap_after) << '\n';
}

json summary_json(const dexeff::SimulationTrace& trace) {
  const dexeff::SimulationSummary s = dexeff::summarize(trace);
  return {{"trades", s.trades},
          {"cumulative_value_in_usd", s.cumulative_value_in_usd},
          {"cumulative_value_out_usd", s.cumulative_value_out_usd},
          {"initial_tvl", s.initial_tvl},
          {"final_tvl", s.final_tvl},
          {"tvl_delta", s.tvl_delta},
          {"final_tap", s.final_tap},
          {"final_stap", s.final_stap},
          {"value_out_p05", s.value_out_p05},
          {"value_out_p25", s.value_out_p25},
          {"value_out_p50", s.value_out_p50},
          {"value_out_p75", s.value_out_p75},
          {"value_out_p95", s.value_out_p95},
          {"max_solver_cross_check_dev", s.trades ? trace.max_solver_cross_check_dev : 0.0}};
}

// Splits "path/name.csv" into "path/name" + ".csv" for per-algorithm outputs.
std::pair<std::string, std::string> split_extension(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return {path, ""};
  return {path.substr(0, dot), path.substr(dot)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CPMM market-efficiency toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML config file supplying any flag");
  app.add_option("--log-level", log_verbosity, "0 quiet, 1 info, 2 debug")
      ->check(CLI::Range(0, 2));

  InputPaths in;
  dexeff::FilterConfig filter;
  std::string out_path = "-";
  std::string date;

  // ingest-check
  auto* ingest_cmd = app.add_subcommand("ingest-check", "load, filter and report graph stats");
  add_input_flags(ingest_cmd, in);
  add_filter_flags(ingest_cmd, filter);
  ingest_cmd->add_option("--date", date, "snapshot date (YYYY-MM-DD)")->required();
  ingest_cmd->add_option("--out", out_path, "output JSON path, '-' for stdout");

  // stap-series
  std::string first_date, last_date;
  auto* series_cmd = app.add_subcommand("stap-series", "daily TVL/TAP/STAP series CSV");
  add_input_flags(series_cmd, in);
  add_filter_flags(series_cmd, filter);
  series_cmd->add_option("--first-date", first_date, "first date (YYYY-MM-DD)")->required();
  series_cmd->add_option("--last-date", last_date, "last date (YYYY-MM-DD)")->required();
  series_cmd->add_option("--out", out_path, "output CSV path")->required();

  // simulate
  std::size_t sim_n = 1000;
  std::uint64_t seed = 1;
  double budget = 1000.0;
  std::string algo_name = "dfs";
  dexeff::SimulationConfig sim_cfg;
  auto* sim_cmd = app.add_subcommand("simulate", "random-trade routing simulation");
  add_input_flags(sim_cmd, in);
  add_filter_flags(sim_cmd, filter);
  sim_cmd->add_option("--snapshot-date", date, "snapshot date (YYYY-MM-DD)")->required();
  sim_cmd->add_option("--n", sim_n, "number of trades");
  sim_cmd->add_option("--seed", seed, "RNG seed");
  sim_cmd->add_option("--budget-usd", budget, "USD budget per trade");
  sim_cmd->add_option("--algo", algo_name, "dfs, lg or both")
      ->check(CLI::IsMember({"dfs", "lg", "both"}));
  sim_cmd->add_option("--max-hops", sim_cfg.routing.max_hops, "route hop budget");
  sim_cmd->add_option("--numeric-check-every", sim_cfg.numeric_check_every,
                      "solver cross-check cadence, 0 disables");
  sim_cmd->add_option("--out", out_path, "trace CSV path")->required();

  // route
  std::string source_key, target_key;
  double amount = 0.0;
  int max_hops = 4;
  auto* route_cmd = app.add_subcommand("route", "quote the best path for one trade");
  add_input_flags(route_cmd, in);
  add_filter_flags(route_cmd, filter);
  route_cmd->add_option("--snapshot-date", date, "snapshot date (YYYY-MM-DD)")->required();
  route_cmd->add_option("--source", source_key, "source token address or symbol")->required();
  route_cmd->add_option("--target", target_key, "target token address or symbol")->required();
  route_cmd->add_option("--amount", amount, "input amount in source-token units")->required();
  route_cmd->add_option("--algo", algo_name, "dfs or lg")->check(CLI::IsMember({"dfs", "lg"}));
  route_cmd->add_option("--max-hops", max_hops, "route hop budget");
  route_cmd->add_option("--out", out_path, "output JSON path, '-' for stdout");

  // verify
  dexeff::VerifierConfig ver_cfg;
  int phase = 2;
  auto* verify_cmd = app.add_subcommand("verify", "no-arbitrage checks after the optimal plan");
  add_input_flags(verify_cmd, in);
  add_filter_flags(verify_cmd, filter);
  verify_cmd->add_option("--snapshot-date", date, "snapshot date (YYYY-MM-DD)")->required();
  verify_cmd->add_option("--max-cycle-len", ver_cfg.max_cycle_len, "cycle length bound");
  verify_cmd->add_option("--tol", ver_cfg.straddle_tol, "straddle ratio tolerance");
  verify_cmd->add_option("--phase", phase, "stop after phase 1 or 2")->check(CLI::Range(1, 2));
  verify_cmd->add_option("--out", out_path, "output JSON path, '-' for stdout");

  // eigen
  std::string rate_mode_name = "mid";
  auto* eigen_cmd = app.add_subcommand("eigen", "rate-matrix eigenvalue efficiency report");
  add_input_flags(eigen_cmd, in);
  add_filter_flags(eigen_cmd, filter);
  eigen_cmd->add_option("--date", date, "snapshot date (YYYY-MM-DD)")->required();
  eigen_cmd->add_option("--rate-mode", rate_mode_name, "mid or marginal")
      ->check(CLI::IsMember({"mid", "marginal"}));
  eigen_cmd->add_option("--out", out_path, "output JSON path, '-' for stdout");

  CLI11_PARSE(app, argc, argv);

  auto emit_json = [&](const json& doc) {
    const std::string text = doc.dump(2) + "\n";
    if (out_path == "-") {
      std::cout << text;
    } else {
      open_out(out_path) << text;
    }
  };

  try {
    if (*ingest_cmd) {
      dexeff::Snapshot snap;
      const dexeff::TokenGraph g = load_graph(in, date, filter, snap);
      json tokens = json::array();
      for (const auto& t : g.tokens) tokens.push_back({{"address", t.address}, {"symbol", t.symbol}});
      emit_json({{"date", date},
                 {"rows_parsed", snap.stats.rows_parsed},
                 {"rows_dropped_unmapped", snap.stats.rows_dropped_unmapped},
                 {"duplicates_replaced", snap.stats.duplicates_replaced},
                 {"warnings", snap.stats.warnings},
                 {"pool_count", g.pools.size()},
                 {"token_count", g.tokens.size()},
                 {"tvl_usd", dexeff::graph_tvl(g, snap.prices, date)},
                 {"tokens", tokens}});
    } else if (*series_cmd) {
      const dexeff::SnapshotSeries series =
          dexeff::snapshot_series(in.pools, in.prices, in.mapping, first_date, last_date, filter);
      auto out = open_out(out_path);
      out << "date,tvl_usd,tap_usd,stap\n";
      for (const auto& [d, graph] : series.snapshots) {
        const dexeff::EfficiencyReport rep = dexeff::stap(graph, series.prices, d);
        out << d << ',' << fmt(rep.tvl_usd) << ',' << fmt(rep.tap_usd) << ',' << fmt(rep.stap)
            << '\n';
        log_info("stap-series " + d + " stap=" + fmt(rep.stap));
      }
    } else if (*sim_cmd) {
      dexeff::Snapshot snap;
      const dexeff::TokenGraph g = load_graph(in, date, filter, snap);
      const auto tasks = dexeff::generate_tasks(g, snap.prices, date, sim_n, seed, budget);
      sim_cfg.usd_budget = budget;
      std::vector<dexeff::RoutingAlgo> algos;
      if (algo_name == "dfs" || algo_name == "both") algos.push_back(dexeff::RoutingAlgo::dfs);
      if (algo_name == "lg" || algo_name == "both")
        algos.push_back(dexeff::RoutingAlgo::line_graph);

      const auto [stem, ext] = split_extension(out_path);
      json summaries;
      for (const auto algo : algos) {
        dexeff::SimulationTrace trace = dexeff::run_simulation(g, snap.prices, date, tasks, algo,
                                                               sim_cfg);
        trace.rng_seed = seed;
        const std::string trace_path =
            algos.size() == 1 ? out_path : stem + "." + dexeff::to_string(algo) + ext;
        write_trace_csv(trace_path, trace);
        summaries[dexeff::to_string(algo)] =
            trace.records.empty() ? json({{"trades", 0}}) : summary_json(trace);
        log_info(std::string("simulate ") + dexeff::to_string(algo) + " -> " + trace_path);
      }
      json meta = {{"date", date},
                   {"seed", seed},
                   {"n", sim_n},
                   {"budget_usd", budget},
                   {"summaries", summaries}};
      open_out(stem + ".summary.json") << meta.dump(2) << "\n";
    } else if (*route_cmd) {
      dexeff::Snapshot snap;
      const dexeff::TokenGraph g = load_graph(in, date, filter, snap);
      const dexeff::RoutingAlgo algo =
          algo_name == "lg" ? dexeff::RoutingAlgo::line_graph : dexeff::RoutingAlgo::dfs;
      dexeff::RoutingConfig rcfg;
      rcfg.max_hops = max_hops;
      const dexeff::Route r = dexeff::route(g, algo, resolve_token(g, source_key),
                                            resolve_token(g, target_key), amount, rcfg);
      json hops = json::array();
      for (const auto& [pool_id, dir] : r.hops)
        hops.push_back({{"pool_id", pool_id}, {"direction", dexeff::to_string(dir)}});
      emit_json({{"algo", dexeff::to_string(algo)},
                 {"source", token_label(r.source)},
                 {"target", token_label(r.target)},
                 {"amount_in", r.amount_in},
                 {"amount_out", r.amount_out},
                 {"hops", hops}});
    } else if (*verify_cmd) {
      dexeff::Snapshot snap;
      const dexeff::TokenGraph g = load_graph(in, date, filter, snap);
      const dexeff::TradePlan plan = dexeff::solve_tap_closed_form(g, snap.prices, date);
      const dexeff::TokenGraph after = dexeff::execute_plan(g, plan, phase == 2);

      const auto pre_straddle = dexeff::verify_no_cex_arbitrage(g, snap.prices, date,
                                                                ver_cfg.straddle_tol);
      const auto post_straddle = dexeff::verify_no_cex_arbitrage(after, snap.prices, date,
                                                                 ver_cfg.straddle_tol);
      const auto post_cycles = dexeff::verify_no_cyclic_arbitrage(after, ver_cfg);

      bool all_pass = true;
      for (const auto& c : post_straddle) all_pass = all_pass && c.pass;
      for (const auto& p : post_cycles) all_pass = all_pass && dexeff::cycle_probe_passes(p, ver_cfg);

      emit_json({{"date", date},
                 {"phase", phase},
                 {"tap_usd", plan.tap_usd},
                 {"pre_straddle", straddle_json(pre_straddle)},
                 {"post_straddle", straddle_json(post_straddle)},
                 {"post_cycles", cycles_json(post_cycles, ver_cfg)},
                 {"all_pass", all_pass}});
      if (!all_pass) {
        log_info("verify: post-execution checks FAILED");
        return 1;
      }
      log_info("verify: all post-execution checks passed");
    } else if (*eigen_cmd) {
      dexeff::Snapshot snap;
      const dexeff::TokenGraph g = load_graph(in, date, filter, snap);
      const dexeff::RateMode mode =
          rate_mode_name == "marginal" ? dexeff::RateMode::marginal : dexeff::RateMode::mid;
      const dexeff::RateMatrix m = dexeff::build_rate_matrix(g, mode, snap.prices, date);
      const dexeff::EigenReport rep = dexeff::dominant_eigenpair(m);
      json tokens = json::array();
      for (const auto& t : m.tokens) tokens.push_back(token_label(t));
      emit_json({{"date", date},
                 {"rate_mode", dexeff::to_string(mode)},
                 {"token_count", m.size()},
                 {"tokens", tokens},
                 {"lambda_max", rep.lambda_max},
                 {"consistency_gap", rep.consistency_gap},
                 {"iterations", rep.iterations},
                 {"eigenvector", rep.eigenvector},
                 {"efficiency_distance",
                  dexeff::efficiency_distance(rep, m.tokens, snap.prices, date)}});
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
