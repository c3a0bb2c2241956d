#pragma once

#include "dexeff/core.hpp"

namespace dexeff {

enum class Direction { sell_a, sell_b };

inline const char* to_string(Direction d) { return d == Direction::sell_a ? "sell_a" : "sell_b"; }

/// A priced swap against a specific pool state. The trade has two phases:
/// phase 1 swaps at constant product with the fee withheld, phase 2 adds the
/// retained fee back to the input side of the pool.
struct SwapQuote {
  std::string pool_id;
  Direction direction = Direction::sell_a;
  double amount_in = 0.0;
  double amount_out = 0.0;
  double retained_fee = 0.0;  // lambda * amount_in, in input-token units
  std::pair<double, double> pre_reserves;          // (a, b) the quote was priced against
  std::pair<double, double> post_phase1_reserves;  // after the constant-product swap
  std::pair<double, double> post_phase2_reserves;  // after fee reinjection
};

/// Price a swap. Phase 1 closed form: selling A gives
/// amount_out = gamma * in * b / (a + gamma * in), keeping (a + gamma*in)(b - out) = a*b.
SwapQuote quote(const Pool& pool, Direction direction, double amount_in);

/// Apply a quote to the graph, returning a new snapshot with the pool at its
/// post-phase-2 reserves. The pool must still hold exactly the reserves the
/// quote was priced against, otherwise StaleQuote.
TokenGraph execute(const TokenGraph& graph, const SwapQuote& q);

/// Zero-size exchange rates: (B per A sold, A per B sold) = (gamma*b/a, gamma*a/b).
std::pair<double, double> marginal_rates(const Pool& pool);

}  // namespace dexeff
