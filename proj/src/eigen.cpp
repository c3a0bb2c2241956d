#include "dexeff/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace dexeff {
namespace {

struct PairEdge {
  const Pool* pool = nullptr;
  double tvl = 0.0;
};

// For every connected token pair, the live pool with the highest TVL
// (lexicographically smallest pool_id on ties).
std::map<std::pair<std::string, std::string>, PairEdge> best_direct_pools(
    const TokenGraph& graph, const PriceBook& prices, const Date& date) {
  std::map<std::pair<std::string, std::string>, PairEdge> best;
  for (const auto& pool : graph.pools) {
    if (!pool.live()) continue;
    const double tvl = pool_tvl(pool, prices, date);
    auto key = std::minmax(pool.token_a.address, pool.token_b.address);
    auto& slot = best[{key.first, key.second}];
    if (slot.pool == nullptr || tvl > slot.tvl ||
        (tvl == slot.tvl && pool.pool_id < slot.pool->pool_id)) {
      slot.pool = &pool;
      slot.tvl = tvl;
    }
  }
  return best;
}

// Zero-size rate for converting token `from` into token `into` through one pool.
double step_rate(const Pool& pool, const TokenId& into, const TokenId& from, RateMode mode) {
  const double scale = mode == RateMode::marginal ? pool.gamma() : 1.0;
  const double reserve_into = pool.token_a == into ? pool.reserve_a : pool.reserve_b;
  const double reserve_from = pool.token_a == from ? pool.reserve_a : pool.reserve_b;
  return scale * reserve_into / reserve_from;
}

}  // namespace

RateMatrix build_rate_matrix(const TokenGraph& graph, RateMode mode, const PriceBook& prices,
                             const Date& date) {
  RateMatrix m;
  m.mode = mode;
  m.tokens.assign(graph.tokens.begin(), graph.tokens.end());
  const std::size_t n = m.tokens.size();
  m.values.assign(n * n, 0.0);

  const auto best = best_direct_pools(graph, prices, date);
  auto edge = [&](std::size_t u, std::size_t v) -> const PairEdge* {
    auto key = std::minmax(m.tokens[u].address, m.tokens[v].address);
    auto it = best.find({key.first, key.second});
    return it == best.end() ? nullptr : &it->second;
  };

  for (std::size_t j = 0; j < n; ++j) {
    // BFS from the paying token j; every other token's rate composes along its
    // shortest pool path, stepping through the highest-TVL predecessor pool.
    std::vector<int> dist(n, -1);
    std::vector<std::size_t> order;
    dist[j] = 0;
    std::deque<std::size_t> queue{j};
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      order.push_back(u);
      for (std::size_t v = 0; v < n; ++v) {
        if (dist[v] >= 0 || edge(u, v) == nullptr) continue;
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      if (dist[i] < 0)
        throw Disconnected("token " + m.tokens[i].address + " unreachable from " +
                           m.tokens[j].address);

    std::vector<double> rate(n, 0.0);
    rate[j] = 1.0;
    for (const std::size_t t : order) {
      if (t == j) continue;
      const PairEdge* chosen = nullptr;
      std::size_t chosen_pred = 0;
      for (std::size_t u = 0; u < n; ++u) {
        if (dist[u] != dist[t] - 1) continue;
        const PairEdge* e = edge(u, t);
        if (e == nullptr) continue;
        if (chosen == nullptr || e->tvl > chosen->tvl ||
            (e->tvl == chosen->tvl && e->pool->pool_id < chosen->pool->pool_id)) {
          chosen = e;
          chosen_pred = u;
        }
      }
      rate[t] = rate[chosen_pred] * step_rate(*chosen->pool, m.tokens[t], m.tokens[chosen_pred], mode);
    }
    for (std::size_t i = 0; i < n; ++i) m.at(j, i) = i == j ? 1.0 : rate[i];
  }
  return m;
}

EigenReport dominant_eigenpair(const RateMatrix& matrix, double tol, int max_iter) {
  const std::size_t n = matrix.size();
  if (n == 0) throw DegenerateGraph("empty rate matrix");
  for (double v : matrix.values)
    if (!(v > 0.0)) throw InvalidAmount("rate matrix must be strictly positive");

  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  std::vector<double> y(n);
  EigenReport report;
  for (int iter = 1; iter <= max_iter; ++iter) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += matrix.at(i, j) * x[j];
      y[i] = acc;
      sum += acc;
    }
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] /= sum;
      delta += std::fabs(y[i] - x[i]);
    }
    x.swap(y);
    report.lambda_max = sum;  // x had unit sum, so sum(A*x) estimates lambda
    report.iterations = iter;
    if (delta < tol) {
      report.eigenvector = x;
      report.consistency_gap = report.lambda_max - static_cast<double>(n);
      return report;
    }
  }
  throw IterationLimit("power iteration did not converge in " + std::to_string(max_iter) +
                       " iterations");
}

double efficiency_distance(const EigenReport& report, const std::vector<TokenId>& tokens,
                           const PriceBook& prices, const Date& date) {
  if (tokens.size() != report.eigenvector.size())
    throw InvalidAmount("token set does not match eigenvector length");
  std::vector<double> p(tokens.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    p[i] = prices.get(tokens[i], date);
    sum += p[i];
  }
  double dist = 0.0;
  for (std::size_t i = 0; i < tokens.size(); ++i)
    dist += std::fabs(report.eigenvector[i] - p[i] / sum);
  return dist;
}

}  // namespace dexeff
