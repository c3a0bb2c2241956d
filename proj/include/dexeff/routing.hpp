#pragma once

#include "dexeff/amm.hpp"
#include "dexeff/core.hpp"

namespace dexeff {

enum class RoutingAlgo { dfs, line_graph };

inline const char* to_string(RoutingAlgo a) { return a == RoutingAlgo::dfs ? "dfs" : "lg"; }

/// A linear (non-splitting) trading path: an ordered chain of pool hops from
/// source to target. No pool repeats within a route.
struct Route {
  std::vector<std::pair<std::string, Direction>> hops;  // (pool_id, direction)
  TokenId source;
  TokenId target;
  double amount_in = 0.0;
  double amount_out = 0.0;
};

struct RoutingConfig {
  int max_hops = 4;
};

/// Enumerates all simple token-node paths from source to target (each
/// parallel pool is a distinct branch), quotes each by sequential composition
/// and returns the best. Ties break on the lexicographically smallest pool-id
/// sequence.
Route route_dfs(const TokenGraph& graph, const TokenId& source, const TokenId& target,
                double amount_in, int max_hops = 4);

/// Searches simple paths of the line graph (pools as nodes, shared tokens as
/// edges) whose shared-token chain forms a valid swap sequence from source to
/// target. The candidate set contains every DFS path plus chains that revisit
/// tokens through distinct pools; same quoting and tie-break as route_dfs.
Route route_line_graph(const TokenGraph& graph, const TokenId& source, const TokenId& target,
                       double amount_in, int max_hops = 4);

Route route(const TokenGraph& graph, RoutingAlgo algo, const TokenId& source,
            const TokenId& target, double amount_in, const RoutingConfig& config = {});

/// Quotes a hop chain on the given snapshot; pools along a route are distinct
/// so the composition is exact against current reserves.
double quote_route(const TokenGraph& graph, const Route& r);

/// Executes every hop of the route (both trade phases) on a copy of the
/// snapshot. Returns the new snapshot and the realized output amount.
std::pair<TokenGraph, double> execute_route(const TokenGraph& graph, const Route& r);

}  // namespace dexeff
