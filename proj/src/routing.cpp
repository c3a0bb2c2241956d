#include "dexeff/routing.hpp"

#include <algorithm>

namespace dexeff {
namespace {

struct Hop {
  const Pool* pool;
  Direction dir;
};

double compose(const std::vector<Hop>& hops, double amount_in) {
  double amount = amount_in;
  for (const auto& h : hops) amount = quote(*h.pool, h.dir, amount).amount_out;
  return amount;
}

std::vector<std::string> pool_seq(const std::vector<Hop>& hops) {
  std::vector<std::string> seq;
  seq.reserve(hops.size());
  for (const auto& h : hops) seq.push_back(h.pool->pool_id);
  return seq;
}

class BestCandidate {
 public:
  void consider(const std::vector<Hop>& hops, double amount_in) {
    const double out = compose(hops, amount_in);
    auto seq = pool_seq(hops);
    if (!found_ || out > best_out_ || (out == best_out_ && seq < best_seq_)) {
      found_ = true;
      best_out_ = out;
      best_seq_ = std::move(seq);
      best_hops_ = hops;
    }
  }

  bool found() const { return found_; }
  double amount_out() const { return best_out_; }
  const std::vector<Hop>& hops() const { return best_hops_; }

 private:
  bool found_ = false;
  double best_out_ = 0.0;
  std::vector<std::string> best_seq_;
  std::vector<Hop> best_hops_;
};

// Token-simple paths: tokens never repeat, each parallel pool is a branch.
void dfs_paths(const TokenGraph& graph, const TokenId& current, const TokenId& target,
               double amount_in, int hops_left, std::set<TokenId>& visited,
               std::vector<Hop>& walk, BestCandidate& best) {
  if (hops_left == 0) return;
  for (const auto& pool : graph.pools) {
    if (!pool.live() || !pool.has_token(current)) continue;
    const TokenId& next = pool.other_token(current);
    if (visited.count(next)) continue;
    walk.push_back({&pool, pool.token_a == current ? Direction::sell_a : Direction::sell_b});
    if (next == target) {
      best.consider(walk, amount_in);
    } else {
      visited.insert(next);
      dfs_paths(graph, next, target, amount_in, hops_left - 1, visited, walk, best);
      visited.erase(next);
    }
    walk.pop_back();
  }
}

// Line-graph chains: pools never repeat, tokens may. This is a simple path in
// the graph whose nodes are pools, walked with the running swap token.
void lg_chains(const TokenGraph& graph, const TokenId& current, const TokenId& target,
               double amount_in, int hops_left, std::vector<const Pool*>& used,
               std::vector<Hop>& walk, BestCandidate& best) {
  if (hops_left == 0) return;
  for (const auto& pool : graph.pools) {
    if (!pool.live() || !pool.has_token(current)) continue;
    if (std::find(used.begin(), used.end(), &pool) != used.end()) continue;
    const TokenId& next = pool.other_token(current);
    walk.push_back({&pool, pool.token_a == current ? Direction::sell_a : Direction::sell_b});
    used.push_back(&pool);
    if (next == target) best.consider(walk, amount_in);
    lg_chains(graph, next, target, amount_in, hops_left - 1, used, walk, best);
    used.pop_back();
    walk.pop_back();
  }
}

Route finish(const TokenId& source, const TokenId& target,
             double amount_in, const BestCandidate& best, const char* algo) {
  if (!best.found())
    throw NoRoute(std::string("no ") + algo + " route from " + source.address + " to " +
                  target.address);
  Route r;
  r.source = source;
  r.target = target;
  r.amount_in = amount_in;
  r.amount_out = best.amount_out();
  for (const auto& h : best.hops()) r.hops.emplace_back(h.pool->pool_id, h.dir);
  return r;
}

void check_query(const TokenGraph& graph, const TokenId& source, const TokenId& target,
                 double amount_in) {
  if (source == target) throw InvalidAmount("source and target tokens are identical");
  if (!graph.tokens.count(source) || !graph.tokens.count(target))
    throw InvalidAmount("source or target token not in graph");
  if (amount_in <= 0.0) throw InvalidAmount("route amount must be positive");
}

}  // namespace

Route route_dfs(const TokenGraph& graph, const TokenId& source, const TokenId& target,
                double amount_in, int max_hops) {
  check_query(graph, source, target, amount_in);
  BestCandidate best;
  std::set<TokenId> visited{source};
  std::vector<Hop> walk;
  dfs_paths(graph, source, target, amount_in, max_hops, visited, walk, best);
  return finish(source, target, amount_in, best, "dfs");
}

Route route_line_graph(const TokenGraph& graph, const TokenId& source, const TokenId& target,
                       double amount_in, int max_hops) {
  check_query(graph, source, target, amount_in);
  BestCandidate best;
  std::vector<const Pool*> used;
  std::vector<Hop> walk;
  lg_chains(graph, source, target, amount_in, max_hops, used, walk, best);
  return finish(source, target, amount_in, best, "line-graph");
}

Route route(const TokenGraph& graph, RoutingAlgo algo, const TokenId& source,
            const TokenId& target, double amount_in, const RoutingConfig& config) {
  return algo == RoutingAlgo::dfs ? route_dfs(graph, source, target, amount_in, config.max_hops)
                                  : route_line_graph(graph, source, target, amount_in,
                                                     config.max_hops);
}

double quote_route(const TokenGraph& graph, const Route& r) {
  double amount = r.amount_in;
  for (const auto& [pool_id, dir] : r.hops) {
    const Pool* pool = graph.find_pool(pool_id);
    if (pool == nullptr) throw StaleQuote("pool " + pool_id + " missing from snapshot");
    amount = quote(*pool, dir, amount).amount_out;
  }
  return amount;
}

std::pair<TokenGraph, double> execute_route(const TokenGraph& graph, const Route& r) {
  TokenGraph next = graph;
  double amount = r.amount_in;
  for (const auto& [pool_id, dir] : r.hops) {
    const Pool* pool = next.find_pool(pool_id);
    if (pool == nullptr) throw StaleQuote("pool " + pool_id + " missing from snapshot");
    const SwapQuote q = quote(*pool, dir, amount);
    amount = q.amount_out;
    next = execute(next, q);
  }
  return {std::move(next), amount};
}

}  // namespace dexeff
