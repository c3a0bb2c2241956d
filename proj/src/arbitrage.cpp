#include "dexeff/arbitrage.hpp"

#include "dexeff/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace dexeff {
namespace {

// Solves a 4x4 system in place by Gaussian elimination with partial pivoting.
// Returns false if the matrix is numerically singular.
bool solve4(std::array<std::array<double, 4>, 4> m, std::array<double, 4> rhs,
            std::array<double, 4>& out) {
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
    if (std::fabs(m[pivot][col]) < 1e-300) return false;
    std::swap(m[col], m[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    for (int r = col + 1; r < 4; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (int r = 3; r >= 0; --r) {
    double s = rhs[r];
    for (int c = r + 1; c < 4; ++c) s -= m[r][c] * out[c];
    out[r] = s / m[r][r];
  }
  return true;
}

struct PoolSolution {
  std::optional<Direction> direction;
  double amount_in = 0.0;
  double amount_out = 0.0;
  double profit_usd = 0.0;
};

PoolSolution closed_form_pool(const Pool& pool, double pa, double pb) {
  const double g = pool.gamma();
  const double a = pool.reserve_a;
  const double b = pool.reserve_b;

  PoolSolution sol;
  // Activation conditions: the two ratios multiply to gamma^2 <= 1, so at most
  // one can exceed 1. Ties at exactly 1 yield zero profit and stay inactive.
  const double ratio_sell_a = g * b * pb / (a * pa);
  const double ratio_sell_b = g * a * pa / (b * pb);
  if (ratio_sell_a > 1.0) {
    const double din = (std::sqrt(g * a * b * pb / pa) - a) / g;
    const double dout = g * din * b / (a + g * din);
    sol.direction = Direction::sell_a;
    sol.amount_in = din;
    sol.amount_out = dout;
    sol.profit_usd = pb * dout - pa * din;
  } else if (ratio_sell_b > 1.0) {
    const double din = (std::sqrt(g * a * b * pa / pb) - b) / g;
    const double dout = g * din * a / (b + g * din);
    sol.direction = Direction::sell_b;
    sol.amount_in = din;
    sol.amount_out = dout;
    sol.profit_usd = pa * dout - pb * din;
  }
  return sol;
}

// Log-barrier interior point on one pool's four flow variables
// x = (a_in, a_out, b_in, b_out), maximizing
//   pa*(a_out - a_in) + pb*(b_out - b_in)
// subject to u*v >= a*b with u = a + g*a_in - a_out, v = b + g*b_in - b_out,
// and x >= 0. The product constraint gets the log-det barrier log(u*v - a*b),
// which is concave on the feasible region.
PoolSolution barrier_pool(const Pool& pool, double pa, double pb, const SolverConfig& cfg) {
  const double g = pool.gamma();
  const double a = pool.reserve_a;
  const double b = pool.reserve_b;
  const double ab = a * b;
  const std::array<double, 4> obj_grad = {-pa, pa, -pb, pb};
  const std::array<double, 4> cu = {g, -1.0, 0.0, 0.0};  // du/dx
  const std::array<double, 4> cv = {0.0, 0.0, g, -1.0};  // dv/dx

  auto slack = [&](const std::array<double, 4>& x, double& u, double& v) {
    u = a + g * x[0] - x[1];
    v = b + g * x[2] - x[3];
    return u * v - ab;
  };

  // Strictly feasible start: inputs eps, outputs g*eps/2 leaves both reserves
  // slightly above their initial values.
  const double eps = 1e-3 * std::min(a, b);
  std::array<double, 4> x = {eps, g * eps / 2.0, eps, g * eps / 2.0};

  const double price_scale = std::max({pa, pb, 1.0});
  auto f_mu = [&](const std::array<double, 4>& p, double mu) {
    double u, v;
    const double c = slack(p, u, v);
    if (c <= 0.0 || p[0] <= 0.0 || p[1] <= 0.0 || p[2] <= 0.0 || p[3] <= 0.0)
      return -std::numeric_limits<double>::infinity();
    double val = 0.0;
    for (int i = 0; i < 4; ++i) val += obj_grad[i] * p[i];
    val += mu * std::log(c);
    for (int i = 0; i < 4; ++i) val += mu * std::log(p[i]);
    return val;
  };

  for (double mu = cfg.barrier_initial; mu >= cfg.barrier_min; mu /= cfg.barrier_shrink) {
    for (int iter = 0; iter < cfg.max_newton_iters; ++iter) {
      double u, v;
      const double c = slack(x, u, v);

      std::array<double, 4> grad_c;
      for (int i = 0; i < 4; ++i) grad_c[i] = v * cu[i] + u * cv[i];

      std::array<double, 4> grad;
      double gnorm = 0.0;
      for (int i = 0; i < 4; ++i) {
        grad[i] = obj_grad[i] + mu * (grad_c[i] / c + 1.0 / x[i]);
        gnorm = std::max(gnorm, std::fabs(grad[i]));
      }
      if (gnorm <= cfg.gradient_tol * price_scale) break;

      // Hessian of mu*log(c): mu * (c*(cu cv^T + cv cu^T) - grad_c grad_c^T) / c^2.
      std::array<std::array<double, 4>, 4> hess{};
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          hess[i][j] = mu * ((cu[i] * cv[j] + cv[i] * cu[j]) / c - grad_c[i] * grad_c[j] / (c * c));
      for (int i = 0; i < 4; ++i) hess[i][i] -= mu / (x[i] * x[i]);

      std::array<double, 4> step{};
      std::array<double, 4> neg_grad = {-grad[0], -grad[1], -grad[2], -grad[3]};
      // Near the boundary at tiny mu the Hessian can collapse numerically;
      // stop this stage and let the next stage or the polish step finish.
      if (!solve4(hess, neg_grad, step)) break;

      const double f0 = f_mu(x, mu);
      double t = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls, t /= 2.0) {
        std::array<double, 4> trial;
        for (int i = 0; i < 4; ++i) trial[i] = x[i] + t * step[i];
        if (f_mu(trial, mu) > f0) {
          x = trial;
          moved = true;
          break;
        }
      }
      if (!moved) break;  // step no longer improves at this stage's precision
    }
  }

  // Canonicalize: net the two directions. The inactive-side variables sit at
  // O(mu/price) after the final stage, so netting error is below tolerance.
  const double net_a_in = x[0] - x[1];
  const double net_b_in = x[2] - x[3];
  Direction dir = net_a_in >= net_b_in ? Direction::sell_a : Direction::sell_b;
  double best_in = std::max(dir == Direction::sell_a ? net_a_in : net_b_in, 0.0);

  auto profit_in_dir = [&](Direction d, double din) {
    const SwapQuote q = quote(pool, d, din);
    return d == Direction::sell_a ? pb * q.amount_out - pa * din : pa * q.amount_out - pb * din;
  };

  if (cfg.polish) {
    // Profit is concave in the input with profit(0) = 0 and turns negative
    // once the whole output side is worth less than the input, so the search
    // range [0, reserve_out * P_out / P_in] always brackets the maximizer.
    // Running both directions makes the result independent of how far the
    // barrier stages got.
    double best_profit = -std::numeric_limits<double>::infinity();
    for (Direction d : {Direction::sell_a, Direction::sell_b}) {
      auto f = [&](double din) { return profit_in_dir(d, din); };
      const double cap = d == Direction::sell_a ? b * pb / pa : a * pa / pb;
      const double din = golden_section_maximize(f, 0.0, cap, 1e-14);
      const double p = f(din);
      if (p > best_profit) {
        best_profit = p;
        dir = d;
        best_in = din;
      }
    }
  }

  PoolSolution sol;
  const double best_profit = best_in > 0.0 ? profit_in_dir(dir, best_in) : 0.0;
  if (best_profit > 0.0) {
    const SwapQuote q = quote(pool, dir, best_in);
    sol.direction = dir;
    sol.amount_in = best_in;
    sol.amount_out = q.amount_out;
    sol.profit_usd = best_profit;
  }
  return sol;
}

template <typename PerPool>
TradePlan solve_with(const TokenGraph& graph, const PriceBook& prices, const Date& date,
                     const SolveOptions& opts, PerPool&& per_pool) {
  TradePlan plan;
  for (const auto& pool : graph.pools) {
    if (!pool.live()) {
      if (!opts.skip_dead_pools) throw DeadPool(pool.pool_id);
      plan.entries.push_back({pool.pool_id, std::nullopt, 0.0, 0.0, 0.0});
      continue;
    }
    const double pa = prices.get(pool.token_a, date);
    const double pb = prices.get(pool.token_b, date);
    const PoolSolution sol = per_pool(pool, pa, pb);
    plan.entries.push_back({pool.pool_id, sol.direction, sol.amount_in, sol.amount_out,
                            sol.profit_usd});
    plan.tap_usd += sol.profit_usd;
  }
  return plan;
}

}  // namespace

TradePlan solve_tap_closed_form(const TokenGraph& graph, const PriceBook& prices, const Date& date,
                                const SolveOptions& opts) {
  return solve_with(graph, prices, date, opts,
                    [](const Pool& p, double pa, double pb) { return closed_form_pool(p, pa, pb); });
}

TradePlan solve_tap_numeric(const TokenGraph& graph, const PriceBook& prices, const Date& date,
                            const SolverConfig& config, const SolveOptions& opts) {
  return solve_with(graph, prices, date, opts, [&](const Pool& p, double pa, double pb) {
    return barrier_pool(p, pa, pb, config);
  });
}

EfficiencyReport stap(const TokenGraph& graph, const PriceBook& prices, const Date& date,
                      const SolveOptions& opts) {
  EfficiencyReport report;
  report.date = date;
  report.tvl_usd = graph_tvl(graph, prices, date);
  if (report.tvl_usd <= 0.0) throw DegenerateGraph("graph TVL is zero on " + date);
  report.tap_usd = solve_tap_closed_form(graph, prices, date, opts).tap_usd;
  report.stap = report.tap_usd / report.tvl_usd;
  return report;
}

double pool_trade_profit_usd(const Pool& pool, Direction dir, double amount_in,
                             const PriceBook& prices, const Date& date) {
  const double pa = prices.get(pool.token_a, date);
  const double pb = prices.get(pool.token_b, date);
  const SwapQuote q = quote(pool, dir, amount_in);
  return dir == Direction::sell_a ? pb * q.amount_out - pa * amount_in
                                  : pa * q.amount_out - pb * amount_in;
}

}  // namespace dexeff
