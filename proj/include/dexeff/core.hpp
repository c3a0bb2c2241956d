#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dexeff/errors.hpp"

namespace dexeff {

// Calendar date as ISO-8601 "YYYY-MM-DD".
using Date = std::string;

/// Token identity. The lowercase contract address is canonical; the symbol is
/// display-only and never participates in comparison.
struct TokenId {
  std::string address;
  std::string symbol;

  bool operator==(const TokenId& other) const { return address == other.address; }
  bool operator!=(const TokenId& other) const { return address != other.address; }
  bool operator<(const TokenId& other) const { return address < other.address; }
};

/// One CPMM liquidity pool. Reserves are in human units (decimals already
/// applied at ingestion). A pool is live iff both reserves are positive.
struct Pool {
  std::string pool_id;
  TokenId token_a;
  TokenId token_b;
  double reserve_a = 0.0;
  double reserve_b = 0.0;
  double fee_rate = 0.0;  // lambda, in [0, 1)

  double gamma() const { return 1.0 - fee_rate; }
  bool live() const { return reserve_a > 0.0 && reserve_b > 0.0; }
  bool has_token(const TokenId& t) const { return token_a == t || token_b == t; }
  const TokenId& other_token(const TokenId& t) const { return token_a == t ? token_b : token_a; }
};

/// Tokens as nodes, pools as edges. Parallel pools between the same token
/// pair are allowed (the graph is a multigraph). Treated as an immutable
/// snapshot: mutation produces a copy.
struct TokenGraph {
  std::set<TokenId> tokens;
  std::vector<Pool> pools;

  void add_pool(Pool pool) {
    tokens.insert(pool.token_a);
    tokens.insert(pool.token_b);
    pools.push_back(std::move(pool));
  }

  const Pool* find_pool(const std::string& pool_id) const {
    for (const auto& p : pools)
      if (p.pool_id == pool_id) return &p;
    return nullptr;
  }

  Pool* find_pool(const std::string& pool_id) {
    for (auto& p : pools)
      if (p.pool_id == pool_id) return &p;
    return nullptr;
  }

  std::vector<const Pool*> pools_with_token(const TokenId& t) const {
    std::vector<const Pool*> out;
    for (const auto& p : pools)
      if (p.has_token(t)) out.push_back(&p);
    return out;
  }
};

/// CEX USD prices keyed by (token address, date). All stored prices are
/// strictly positive.
class PriceBook {
 public:
  void set(const TokenId& token, const Date& date, double usd_price) {
    if (usd_price <= 0.0)
      throw InvalidAmount("price must be positive for token " + token.address);
    prices_[{token.address, date}] = usd_price;
  }

  double get(const TokenId& token, const Date& date) const {
    auto it = prices_.find({token.address, date});
    if (it == prices_.end()) throw MissingPrice(token.address, date);
    return it->second;
  }

  std::optional<double> try_get(const TokenId& token, const Date& date) const {
    auto it = prices_.find({token.address, date});
    if (it == prices_.end()) return std::nullopt;
    return it->second;
  }

  bool has(const TokenId& token, const Date& date) const {
    return prices_.count({token.address, date}) > 0;
  }

  bool empty() const { return prices_.empty(); }

 private:
  std::map<std::pair<std::string, Date>, double> prices_;
};

/// A token amount together with its USD value at a stated date.
struct Valuation {
  double amount = 0.0;
  TokenId token;
  double usd_value = 0.0;

  static Valuation of(double amount, const TokenId& token, const PriceBook& prices,
                      const Date& date) {
    return {amount, token, amount * prices.get(token, date)};
  }
};

/// USD value of a single pool: reserve_a * P_A + reserve_b * P_B.
double pool_tvl(const Pool& pool, const PriceBook& prices, const Date& date);

/// USD value of every pool in the graph.
double graph_tvl(const TokenGraph& graph, const PriceBook& prices, const Date& date);

}  // namespace dexeff
