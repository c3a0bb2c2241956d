#include "dexeff/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dexeff/optimize.hpp"

namespace dexeff {
namespace {

struct Hop {
  const Pool* pool;
  Direction dir;
};

double compose_output(const std::vector<Hop>& hops, double input) {
  double amount = input;
  for (const auto& h : hops) amount = quote(*h.pool, h.dir, amount).amount_out;
  return amount;
}

// Probe one closed walk: bound the input domain, then golden-section the
// concave profit function output(x) - x.
CycleProbe probe_cycle(const TokenId& start, const std::vector<Hop>& hops,
                       const VerifierConfig& cfg) {
  CycleProbe probe;
  probe.start_token = start;
  for (const auto& h : hops) {
    probe.pool_ids.push_back(h.pool->pool_id);
    probe.directions.push_back(h.dir);
  }

  // Cap each hop's input-side reserve, expressed in start-token units via the
  // marginal rates of the preceding hops.
  double rate_prefix = 1.0;
  double cap = std::numeric_limits<double>::infinity();
  for (const auto& h : hops) {
    const double reserve_in = h.dir == Direction::sell_a ? h.pool->reserve_a : h.pool->reserve_b;
    cap = std::min(cap, 0.5 * reserve_in / rate_prefix);
    const auto rates = marginal_rates(*h.pool);
    rate_prefix *= h.dir == Direction::sell_a ? rates.first : rates.second;
  }
  probe.input_cap = cap;

  auto profit = [&](double x) { return compose_output(hops, x) - x; };
  probe.best_input = golden_section_maximize(profit, 0.0, cap, cfg.cycle_search_rel_tol);
  probe.best_profit = profit(probe.best_input);
  if (probe.best_profit < 0.0 && profit(0.0) >= probe.best_profit) {
    probe.best_input = 0.0;
    probe.best_profit = 0.0;
  }
  return probe;
}

void enumerate_cycles(const TokenGraph& graph, const TokenId& start, const TokenId& current,
                      std::vector<Hop>& walk, std::vector<const Pool*>& used,
                      std::set<TokenId>& visited, const VerifierConfig& cfg,
                      std::vector<CycleProbe>& out) {
  if (static_cast<int>(walk.size()) >= cfg.max_cycle_len) return;
  for (const auto& pool : graph.pools) {
    if (!pool.live() || !pool.has_token(current)) continue;
    if (std::find(used.begin(), used.end(), &pool) != used.end()) continue;
    const TokenId& next = pool.other_token(current);
    const Direction dir = pool.token_a == current ? Direction::sell_a : Direction::sell_b;
    walk.push_back({&pool, dir});
    used.push_back(&pool);
    if (next == start) {
      if (walk.size() >= 2) out.push_back(probe_cycle(start, walk, cfg));
    } else if (visited.insert(next).second) {
      enumerate_cycles(graph, start, next, walk, used, visited, cfg, out);
      visited.erase(next);
    }
    used.pop_back();
    walk.pop_back();
  }
}

}  // namespace

std::vector<StraddleCheck> verify_no_cex_arbitrage(const TokenGraph& graph,
                                                   const PriceBook& prices, const Date& date,
                                                   double tol) {
  std::vector<StraddleCheck> checks;
  for (const auto& pool : graph.pools) {
    if (!pool.live()) continue;
    const double pa = prices.get(pool.token_a, date);
    const double pb = prices.get(pool.token_b, date);
    const double g = pool.gamma();
    StraddleCheck check;
    check.pool_id = pool.pool_id;
    check.cex_ratio = pa / pb;
    check.ratio_sell_a = g * pool.reserve_b * pb / (pool.reserve_a * pa);
    check.ratio_sell_b = g * pool.reserve_a * pa / (pool.reserve_b * pb);
    check.pass = check.ratio_sell_a <= 1.0 + tol && check.ratio_sell_b <= 1.0 + tol;
    checks.push_back(check);
  }
  return checks;
}

std::vector<CycleProbe> verify_no_cyclic_arbitrage(const TokenGraph& graph,
                                                   const VerifierConfig& config) {
  std::vector<CycleProbe> probes;
  for (const auto& start : graph.tokens) {
    std::vector<Hop> walk;
    std::vector<const Pool*> used;
    std::set<TokenId> visited;
    enumerate_cycles(graph, start, start, walk, used, visited, config, probes);
  }
  return probes;
}

bool check_corollary(double value_in_usd, double value_out_usd) {
  return value_out_usd > value_in_usd;
}

TokenGraph execute_plan(const TokenGraph& graph, const TradePlan& plan,
                        bool with_fee_reinjection) {
  TokenGraph next = graph;
  for (const auto& entry : plan.entries) {
    if (!entry.direction || entry.amount_in <= 0.0) continue;
    Pool* pool = next.find_pool(entry.pool_id);
    if (pool == nullptr) throw StaleQuote("pool " + entry.pool_id + " missing from snapshot");
    const SwapQuote q = quote(*pool, *entry.direction, entry.amount_in);
    const auto& reserves = with_fee_reinjection ? q.post_phase2_reserves : q.post_phase1_reserves;
    pool->reserve_a = reserves.first;
    pool->reserve_b = reserves.second;
  }
  return next;
}

}  // namespace dexeff
