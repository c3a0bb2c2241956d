#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dexeff/core.hpp"

namespace dexeff {

/// One raw pool-reserve reading. Reserves are in the token's smallest unit;
/// decimal adjustment happens when the snapshot is loaded.
struct PoolRecord {
  std::string pool_address;
  std::string token0_address;
  std::string token1_address;
  double reserve0 = 0.0;  // human units, decimals applied
  double reserve1 = 0.0;
  Date date;
};

struct TokenMapping {
  std::string provider_id;
  std::string symbol;
};

struct FilterConfig {
  double min_pool_tvl_usd = 10000.0;
  std::size_t target_max_pool_count = 18;
  // Degree threshold for the iterative node-pruning step.
  std::size_t min_degree = 2;
  // Fee rate stamped on every ingested pool (0.3% on Uniswap V2).
  double fee_rate = 0.003;
};

struct LoadStats {
  std::size_t rows_parsed = 0;
  std::size_t rows_dropped_unmapped = 0;
  std::size_t duplicates_replaced = 0;
  std::vector<std::string> warnings;
};

struct Snapshot {
  std::vector<PoolRecord> records;
  PriceBook prices;
  std::map<std::string, TokenMapping> mapping;  // lowercase address -> provider id/symbol
  LoadStats stats;
};

/// Reads the pools CSV, prices CSV and mapping JSON, keeping pool rows for
/// the given date. Addresses are lowercased; rows whose tokens are absent
/// from the mapping are dropped and counted; duplicate (pool, date) rows are
/// last-write-wins with a warning.
Snapshot load_snapshot(const std::string& pools_file, const std::string& prices_file,
                       const std::string& mapping_file, const Date& date);

/// The filtering pipeline, in order: drop pools below the TVL floor, drop
/// pools with an unpriced token, iteratively prune tokens of degree below
/// min_degree, then repeatedly remove the lowest-TVL pool (re-pruning after
/// each removal) until the pool count fits. Equal-TVL removals break ties on
/// pool_id.
TokenGraph build_filtered_graph(const std::vector<PoolRecord>& records, const PriceBook& prices,
                                const Date& date,
                                const std::map<std::string, TokenMapping>& mapping,
                                const FilterConfig& config = {}, LoadStats* stats = nullptr);

struct SnapshotSeries {
  PriceBook prices;
  std::vector<std::pair<Date, TokenGraph>> snapshots;
  LoadStats stats;
};

/// Fixes the graph topology on the first date, then walks the range updating
/// only reserves. Dates with a missing pool reading carry the previous
/// reserves forward with a warning.
SnapshotSeries snapshot_series(const std::string& pools_file, const std::string& prices_file,
                               const std::string& mapping_file, const Date& first_date,
                               const Date& last_date, const FilterConfig& config = {});

/// ISO-8601 date helpers for walking ranges.
Date next_date(const Date& date);
bool date_less_equal(const Date& a, const Date& b);

}  // namespace dexeff
