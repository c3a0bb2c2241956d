#pragma once

#include "dexeff/amm.hpp"
#include "dexeff/arbitrage.hpp"
#include "dexeff/core.hpp"

namespace dexeff {

/// Per-pool no-arbitrage evidence against CEX prices: at zero trade size,
/// neither selling A nor selling B into the pool can beat the CEX rate.
struct StraddleCheck {
  std::string pool_id;
  double cex_ratio = 0.0;        // P_A / P_B
  double ratio_sell_a = 0.0;     // gamma * b * P_B / (a * P_A), profitable iff > 1
  double ratio_sell_b = 0.0;     // gamma * a * P_A / (b * P_B), profitable iff > 1
  bool pass = false;
};

/// One closed walk of pools probed for cyclic profit: start token in, same
/// token out, best profit over the searched input range.
struct CycleProbe {
  TokenId start_token;
  std::vector<std::string> pool_ids;
  std::vector<Direction> directions;
  double best_input = 0.0;
  double best_profit = 0.0;  // output - input, in start-token units
  double input_cap = 0.0;    // searched domain upper bound
};

struct VerifierConfig {
  int max_cycle_len = 4;
  double straddle_tol = 1e-9;
  double cycle_tol = 1e-6;             // relative to the probed input scale
  double cycle_search_rel_tol = 1e-10; // golden-section termination
};

/// Checks both zero-size trade directions of every pool against CEX prices.
/// Meant to run on a snapshot after executing the optimal trade plan (either
/// phase); pass iff both activation ratios are <= 1 + tol.
std::vector<StraddleCheck> verify_no_cex_arbitrage(const TokenGraph& graph,
                                                   const PriceBook& prices, const Date& date,
                                                   double tol = 1e-9);

/// Enumerates all pool-simple cycles up to max_cycle_len pools from every
/// start token and maximizes end-to-end profit by golden-section search over
/// the input amount. A probe passes when best_profit <= cycle_tol * input_cap.
std::vector<CycleProbe> verify_no_cyclic_arbitrage(const TokenGraph& graph,
                                                   const VerifierConfig& config = {});

inline bool cycle_probe_passes(const CycleProbe& probe, const VerifierConfig& config = {}) {
  return probe.best_profit <= config.cycle_tol * probe.input_cap;
}

/// Flags "arbitrage exists" iff the monetized output exceeds the monetized
/// input of a trade.
bool check_corollary(double value_in_usd, double value_out_usd);

/// Executes a trade plan on a snapshot. with_fee_reinjection=false stops
/// after phase 1 (reserves at their constant-product point).
TokenGraph execute_plan(const TokenGraph& graph, const TradePlan& plan,
                        bool with_fee_reinjection = true);

}  // namespace dexeff
