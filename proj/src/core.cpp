#include "dexeff/core.hpp"

namespace dexeff {

double pool_tvl(const Pool& pool, const PriceBook& prices, const Date& date) {
  const double pa = prices.get(pool.token_a, date);
  const double pb = prices.get(pool.token_b, date);
  return pool.reserve_a * pa + pool.reserve_b * pb;
}

double graph_tvl(const TokenGraph& graph, const PriceBook& prices, const Date& date) {
  double total = 0.0;
  for (const auto& pool : graph.pools) total += pool_tvl(pool, prices, date);
  return total;
}

}  // namespace dexeff
