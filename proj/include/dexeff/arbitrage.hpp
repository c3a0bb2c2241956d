#pragma once

#include <optional>

#include "dexeff/amm.hpp"
#include "dexeff/core.hpp"

namespace dexeff {

/// One pool's share of the optimal arbitrage trade. direction is empty when
/// the pool is inactive (no profitable trade exists).
struct TradeEntry {
  std::string pool_id;
  std::optional<Direction> direction;
  double amount_in = 0.0;
  double amount_out = 0.0;
  double profit_usd = 0.0;
};

/// The solution of the total-arbitrage-profit maximization: per-pool trades
/// plus the USD objective value. At most one direction is nonzero per pool.
struct TradePlan {
  std::vector<TradeEntry> entries;
  double tap_usd = 0.0;
};

struct EfficiencyReport {
  Date date;
  double tap_usd = 0.0;
  double tvl_usd = 0.0;
  double stap = 0.0;  // tap / tvl, dimensionless
};

struct SolveOptions {
  // Drained pools in real snapshots: skip (contribute nothing) or error out.
  bool skip_dead_pools = true;
};

/// Log-barrier interior-point settings for the numeric cross-check solver.
struct SolverConfig {
  double barrier_initial = 1.0;
  double barrier_min = 1e-9;
  double barrier_shrink = 10.0;   // mu <- mu / shrink
  double gradient_tol = 1e-10;    // relative to the pool's price scale
  int max_newton_iters = 200;     // per barrier stage
  bool polish = true;             // 1-D refinement of the final point
};

/// Per-pool closed form. Selling A is profitable iff gamma*b*P_B/(a*P_A) > 1,
/// with optimizer amount_in = (sqrt(gamma*a*b*P_B/P_A) - a) / gamma; the
/// symmetric condition governs selling B. The objective has no inter-pool
/// coupling, so the plan is the per-pool sum.
TradePlan solve_tap_closed_form(const TokenGraph& graph, const PriceBook& prices,
                                const Date& date, const SolveOptions& opts = {});

/// Independent numeric route: per pool, maximize the USD profit over all four
/// nonnegative flow variables subject to the product constraint, by a
/// log-barrier method with damped Newton steps. Used to cross-check the
/// closed form; results are canonicalized so at most one direction is nonzero.
TradePlan solve_tap_numeric(const TokenGraph& graph, const PriceBook& prices, const Date& date,
                            const SolverConfig& config = {}, const SolveOptions& opts = {});

/// TAP (closed form) standardized by graph TVL.
EfficiencyReport stap(const TokenGraph& graph, const PriceBook& prices, const Date& date,
                      const SolveOptions& opts = {});

/// Profit of trading amount_in into the pool in the given direction, valued
/// at CEX prices. Shared by both solvers' reporting.
double pool_trade_profit_usd(const Pool& pool, Direction dir, double amount_in,
                             const PriceBook& prices, const Date& date);

}  // namespace dexeff
