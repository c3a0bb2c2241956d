#include "dexeff/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace dexeff {
namespace {

double quantile(std::vector<double> sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double pos = p * (static_cast<double>(sorted.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

std::vector<TradeTask> generate_tasks(const TokenGraph& graph, const PriceBook& prices,
                                      const Date& date, std::size_t n, std::uint64_t seed,
                                      double usd_budget) {
  std::vector<TokenId> tokens(graph.tokens.begin(), graph.tokens.end());
  if (tokens.size() < 2) throw DegenerateGraph("need at least two tokens to generate trades");
  for (const auto& t : tokens)
    if (!prices.has(t, date)) throw MissingPrice(t.address, date);

  std::mt19937_64 rng(seed);
  std::vector<TradeTask> tasks;
  tasks.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t src = static_cast<std::size_t>(rng() % tokens.size());
    std::size_t dst = static_cast<std::size_t>(rng() % (tokens.size() - 1));
    if (dst >= src) ++dst;
    TradeTask task;
    task.index = i;
    task.source = tokens[src];
    task.target = tokens[dst];
    task.usd_budget = usd_budget;
    task.amount_in = usd_budget / prices.get(task.source, date);
    tasks.push_back(std::move(task));
  }
  return tasks;
}

SimulationTrace run_simulation(const TokenGraph& graph, const PriceBook& prices, const Date& date,
                               const std::vector<TradeTask>& tasks, RoutingAlgo algo,
                               const SimulationConfig& config) {
  SimulationTrace trace;
  trace.algo = algo;
  trace.initial_tvl = graph_tvl(graph, prices, date);

  TokenGraph state = graph;
  for (const auto& task : tasks) {
    TradeRecord rec;
    rec.index = task.index;
    rec.algo = algo;
    rec.source = task.source;
    rec.target = task.target;

    try {
      const Route r = route(state, algo, task.source, task.target, task.amount_in, config.routing);
      auto [next, amount_out] = execute_route(state, r);
      state = std::move(next);
      rec.routed = true;
      rec.route_hops = r.hops;
      rec.amount_in = task.amount_in;
      rec.value_in_usd = task.amount_in * prices.get(task.source, date);
      rec.amount_out = amount_out;
      rec.value_out_usd = amount_out * prices.get(task.target, date);
    } catch (const NoRoute&) {
      // Skipped in place: the snapshot is unchanged and the record keeps zero
      // amounts, so both algorithms stay on the identical task sequence.
    }

    rec.tvl_after = graph_tvl(state, prices, date);
    const TradePlan plan = solve_tap_closed_form(state, prices, date);
    rec.tap_after = plan.tap_usd;
    rec.stap_after = rec.tvl_after > 0.0 ? rec.tap_after / rec.tvl_after : 0.0;

    if (config.numeric_check_every > 0 && (task.index + 1) % config.numeric_check_every == 0) {
      const TradePlan numeric = solve_tap_numeric(state, prices, date, config.solver);
      const double dev =
          std::fabs(numeric.tap_usd - plan.tap_usd) / std::max({plan.tap_usd, numeric.tap_usd, 1.0});
      trace.max_solver_cross_check_dev = std::max(trace.max_solver_cross_check_dev, dev);
    }

    trace.records.push_back(std::move(rec));
  }
  return trace;
}

SimulationSummary summarize(const SimulationTrace& trace) {
  if (trace.records.empty()) throw EmptyTrace("simulation trace has no records");

  SimulationSummary s;
  s.trades = trace.records.size();
  s.initial_tvl = trace.initial_tvl;
  std::vector<double> outs;
  outs.reserve(trace.records.size());
  for (const auto& rec : trace.records) {
    s.cumulative_value_in_usd += rec.value_in_usd;
    s.cumulative_value_out_usd += rec.value_out_usd;
    outs.push_back(rec.value_out_usd);
  }
  const auto& last = trace.records.back();
  s.final_tvl = last.tvl_after;
  s.tvl_delta = s.final_tvl - s.initial_tvl;
  s.final_tap = last.tap_after;
  s.final_stap = last.stap_after;

  std::sort(outs.begin(), outs.end());
  s.value_out_p05 = quantile(outs, 0.05);
  s.value_out_p25 = quantile(outs, 0.25);
  s.value_out_p50 = quantile(outs, 0.50);
  s.value_out_p75 = quantile(outs, 0.75);
  s.value_out_p95 = quantile(outs, 0.95);
  return s;
}

}  // namespace dexeff
