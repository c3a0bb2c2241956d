#pragma once

#include <cstdint>

#include "dexeff/arbitrage.hpp"
#include "dexeff/core.hpp"
#include "dexeff/routing.hpp"

namespace dexeff {

/// One random trade: sell usd_budget worth of the source token for the target
/// token.
struct TradeTask {
  std::size_t index = 0;
  TokenId source;
  TokenId target;
  double usd_budget = 0.0;
  double amount_in = 0.0;  // usd_budget / P_source
};

struct TradeRecord {
  std::size_t index = 0;
  RoutingAlgo algo = RoutingAlgo::dfs;
  TokenId source;
  TokenId target;
  bool routed = false;  // false when no route existed; amounts are zero
  std::vector<std::pair<std::string, Direction>> route_hops;
  double amount_in = 0.0;
  double value_in_usd = 0.0;
  double amount_out = 0.0;
  double value_out_usd = 0.0;
  double tvl_after = 0.0;
  double tap_after = 0.0;
  double stap_after = 0.0;
};

struct SimulationTrace {
  RoutingAlgo algo = RoutingAlgo::dfs;
  std::uint64_t rng_seed = 0;
  double initial_tvl = 0.0;
  std::vector<TradeRecord> records;
  // Worst closed-form vs numeric-solver TAP deviation observed at the sampled
  // cross-check points, relative to max(TAP, 1).
  double max_solver_cross_check_dev = 0.0;
};

struct SimulationConfig {
  double usd_budget = 1000.0;
  RoutingConfig routing;
  // Every Nth trade the recorded TAP is re-derived with the numeric solver;
  // 0 disables the cross-check.
  std::size_t numeric_check_every = 100;
  SolverConfig solver;
};

struct SimulationSummary {
  std::size_t trades = 0;
  double cumulative_value_in_usd = 0.0;
  double cumulative_value_out_usd = 0.0;
  double initial_tvl = 0.0;
  double final_tvl = 0.0;
  double tvl_delta = 0.0;
  double final_tap = 0.0;
  double final_stap = 0.0;
  // Quantiles of the per-trade value_out distribution (p05/p25/p50/p75/p95).
  double value_out_p05 = 0.0;
  double value_out_p25 = 0.0;
  double value_out_p50 = 0.0;
  double value_out_p75 = 0.0;
  double value_out_p95 = 0.0;
};

/// Draws n ordered distinct-token pairs uniformly with a seeded mt19937_64.
/// Index draws take the raw 64-bit output modulo the choice count, so the
/// sequence depends only on the seed and the sorted token set.
std::vector<TradeTask> generate_tasks(const TokenGraph& graph, const PriceBook& prices,
                                      const Date& date, std::size_t n, std::uint64_t seed,
                                      double usd_budget = 1000.0);

/// Runs the task sequence under one routing algorithm: each trade routes
/// against the current snapshot, executes every hop (both phases), then the
/// four observables are recorded. NoRoute tasks record zeros and leave the
/// snapshot unchanged. CEX prices stay frozen at the snapshot date.
SimulationTrace run_simulation(const TokenGraph& graph, const PriceBook& prices, const Date& date,
                               const std::vector<TradeTask>& tasks, RoutingAlgo algo,
                               const SimulationConfig& config = {});

SimulationSummary summarize(const SimulationTrace& trace);

}  // namespace dexeff
