#pragma once

#include <vector>

#include "dexeff/core.hpp"

namespace dexeff {

enum class RateMode { mid, marginal };

inline const char* to_string(RateMode m) { return m == RateMode::mid ? "mid" : "marginal"; }

/// Dense positive pairwise exchange-rate matrix over the graph's tokens.
/// entry(i, j) is the value of one unit of token i measured in token j at
/// zero size, so a consistent matrix has entry(i, j) = p_i / p_j and its
/// dominant eigenvector is the price vector; the diagonal is exactly 1.
struct RateMatrix {
  std::vector<TokenId> tokens;      // row/column order (sorted by address)
  std::vector<double> values;       // row-major n*n
  RateMode mode = RateMode::mid;

  std::size_t size() const { return tokens.size(); }
  double& at(std::size_t i, std::size_t j) { return values[i * size() + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * size() + j]; }
};

struct EigenReport {
  double lambda_max = 0.0;
  std::vector<double> eigenvector;  // positive, normalized to unit sum
  double consistency_gap = 0.0;     // lambda_max - n; zero for consistent rates
  int iterations = 0;
};

/// Builds the rate matrix from the graph. Direct pairs use the highest-TVL
/// pool between them (mid: reserve ratio; marginal: gamma-adjusted); missing
/// pairs compose rates along a shortest pool path, preferring high-TVL pools.
/// Prices are only consulted to rank pools by TVL.
RateMatrix build_rate_matrix(const TokenGraph& graph, RateMode mode, const PriceBook& prices,
                             const Date& date);

/// Power iteration with unit-sum normalization. Converges for any positive
/// matrix; stops when successive iterates are within tol in L1.
EigenReport dominant_eigenpair(const RateMatrix& matrix, double tol = 1e-12, int max_iter = 10000);

/// L1 distance between the unit-sum-normalized eigenvector and the unit-sum-
/// normalized CEX price vector over the same token order. Zero means the
/// DEX-implied values align with CEX prices exactly.
double efficiency_distance(const EigenReport& report, const std::vector<TokenId>& tokens,
                           const PriceBook& prices, const Date& date);

}  // namespace dexeff
