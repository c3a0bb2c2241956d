#include "dexeff/amm.hpp"

namespace dexeff {

SwapQuote quote(const Pool& pool, Direction direction, double amount_in) {
  if (!pool.live()) throw DeadPool(pool.pool_id);
  if (amount_in < 0.0)
    throw InvalidAmount("negative swap input for pool " + pool.pool_id);

  const double g = pool.gamma();
  const double fee = pool.fee_rate * amount_in;

  SwapQuote q;
  q.pool_id = pool.pool_id;
  q.direction = direction;
  q.amount_in = amount_in;
  q.retained_fee = fee;
  q.pre_reserves = {pool.reserve_a, pool.reserve_b};

  if (direction == Direction::sell_a) {
    const double a = pool.reserve_a;
    const double b = pool.reserve_b;
    q.amount_out = g * amount_in * b / (a + g * amount_in);
    // The kept reserve comes straight from the product equation rather than
    // b - amount_out, so the constant product holds to a few ulps even when
    // the input dwarfs the reserves.
    q.post_phase1_reserves = {a + g * amount_in, a * b / (a + g * amount_in)};
    q.post_phase2_reserves = {q.post_phase1_reserves.first + fee, q.post_phase1_reserves.second};
  } else {
    const double a = pool.reserve_a;
    const double b = pool.reserve_b;
    q.amount_out = g * amount_in * a / (b + g * amount_in);
    q.post_phase1_reserves = {a * b / (b + g * amount_in), b + g * amount_in};
    q.post_phase2_reserves = {q.post_phase1_reserves.first, q.post_phase1_reserves.second + fee};
  }
  return q;
}

TokenGraph execute(const TokenGraph& graph, const SwapQuote& q) {
  TokenGraph next = graph;
  Pool* pool = next.find_pool(q.pool_id);
  if (pool == nullptr) throw StaleQuote("pool " + q.pool_id + " no longer in graph");
  // Bit-for-bit reserve comparison: the quote is only valid against the exact
  // state it was priced on.
  if (pool->reserve_a != q.pre_reserves.first || pool->reserve_b != q.pre_reserves.second)
    throw StaleQuote("reserves of pool " + q.pool_id + " changed since quoting");
  pool->reserve_a = q.post_phase2_reserves.first;
  pool->reserve_b = q.post_phase2_reserves.second;
  return next;
}

std::pair<double, double> marginal_rates(const Pool& pool) {
  if (!pool.live()) throw DeadPool(pool.pool_id);
  const double g = pool.gamma();
  return {g * pool.reserve_b / pool.reserve_a, g * pool.reserve_a / pool.reserve_b};
}

}  // namespace dexeff
