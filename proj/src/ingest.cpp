#include "dexeff/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dexeff {
namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

double parse_number(const std::string& s, std::size_t line_no, const char* what) {
  try {
    std::size_t consumed = 0;
    const double v = std::stod(s, &consumed);
    if (consumed != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("malformed ") + what + " '" + s + "'", line_no);
  }
}

struct RawPoolsFile {
  // (pool_address, date) -> record; duplicates are last-write-wins.
  std::map<std::pair<std::string, Date>, PoolRecord> records;
};

RawPoolsFile parse_pools(const std::string& path, const std::map<std::string, TokenMapping>& mapping,
                         LoadStats& stats) {
  static const std::vector<std::string> expected = {
      "pool_address", "token0_address", "token1_address", "reserve0_raw",
      "reserve1_raw", "decimals0",      "decimals1",      "date"};

  auto in = open_or_throw(path);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty pools file", 1);
  ++line_no;
  if (split_csv(line) != expected) throw ParseError("unexpected pools CSV header", 1);

  RawPoolsFile out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != expected.size()) throw ParseError("wrong column count", line_no);

    PoolRecord rec;
    rec.pool_address = lowercase(f[0]);
    rec.token0_address = lowercase(f[1]);
    rec.token1_address = lowercase(f[2]);
    rec.date = f[7];
    const double raw0 = parse_number(f[3], line_no, "reserve0_raw");
    const double raw1 = parse_number(f[4], line_no, "reserve1_raw");
    const double dec0 = parse_number(f[5], line_no, "decimals0");
    const double dec1 = parse_number(f[6], line_no, "decimals1");
    if (raw0 < 0.0 || raw1 < 0.0) throw ParseError("negative reserve", line_no);
    if (dec0 < 0 || dec0 > 36 || dec1 < 0 || dec1 > 36)
      throw ParseError("decimals out of [0, 36]", line_no);
    rec.reserve0 = raw0 / std::pow(10.0, dec0);
    rec.reserve1 = raw1 / std::pow(10.0, dec1);

    if (!mapping.count(rec.token0_address) || !mapping.count(rec.token1_address)) {
      ++stats.rows_dropped_unmapped;
      continue;
    }
    if (rec.token0_address == rec.token1_address) {
      stats.warnings.push_back("self-loop pool " + rec.pool_address + " dropped");
      continue;
    }

    const auto key = std::make_pair(rec.pool_address, rec.date);
    if (out.records.count(key)) {
      ++stats.duplicates_replaced;
      stats.warnings.push_back("duplicate reading for pool " + rec.pool_address + " on " +
                               rec.date + "; keeping the later row");
    }
    out.records[key] = rec;
    ++stats.rows_parsed;
  }
  return out;
}

PriceBook parse_prices(const std::string& path) {
  static const std::vector<std::string> expected = {"token_address", "date", "usd_price"};
  auto in = open_or_throw(path);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty prices file", 1);
  ++line_no;
  if (split_csv(line) != expected) throw ParseError("unexpected prices CSV header", 1);

  PriceBook book;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != expected.size()) throw ParseError("wrong column count", line_no);
    const double price = parse_number(f[2], line_no, "usd_price");
    if (price <= 0.0) throw ParseError("non-positive price", line_no);
    book.set(TokenId{lowercase(f[0]), ""}, f[1], price);
  }
  return book;
}

std::map<std::string, TokenMapping> parse_mapping(const std::string& path) {
  auto in = open_or_throw(path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid mapping JSON: ") + e.what(), 0);
  }
  std::map<std::string, TokenMapping> mapping;
  for (const auto& [address, entry] : doc.items()) {
    TokenMapping m;
    m.provider_id = entry.value("id", "");
    m.symbol = entry.value("symbol", "");
    mapping[lowercase(address)] = m;
  }
  return mapping;
}

TokenId make_token(const std::string& address, const std::map<std::string, TokenMapping>& mapping) {
  auto it = mapping.find(address);
  return TokenId{address, it == mapping.end() ? "" : it->second.symbol};
}

std::map<TokenId, std::size_t> degrees(const std::vector<Pool>& pools) {
  std::map<TokenId, std::size_t> deg;
  for (const auto& p : pools) {
    ++deg[p.token_a];
    ++deg[p.token_b];
  }
  return deg;
}

void prune_low_degree(std::vector<Pool>& pools, std::size_t min_degree) {
  for (;;) {
    const auto deg = degrees(pools);
    const auto before = pools.size();
    pools.erase(std::remove_if(pools.begin(), pools.end(),
                               [&](const Pool& p) {
                                 return deg.at(p.token_a) < min_degree ||
                                        deg.at(p.token_b) < min_degree;
                               }),
                pools.end());
    if (pools.size() == before) return;
  }
}

}  // namespace

Snapshot load_snapshot(const std::string& pools_file, const std::string& prices_file,
                       const std::string& mapping_file, const Date& date) {
  Snapshot snap;
  snap.mapping = parse_mapping(mapping_file);
  snap.prices = parse_prices(prices_file);
  const RawPoolsFile raw = parse_pools(pools_file, snap.mapping, snap.stats);
  for (const auto& [key, rec] : raw.records)
    if (rec.date == date) snap.records.push_back(rec);
  if (snap.records.empty()) throw EmptySnapshot("no pool rows for " + date);
  return snap;
}

TokenGraph build_filtered_graph(const std::vector<PoolRecord>& records, const PriceBook& prices,
                                const Date& date,
                                const std::map<std::string, TokenMapping>& mapping,
                                const FilterConfig& config, LoadStats* stats) {
  auto warn = [&](const std::string& msg) {
    if (stats != nullptr) stats->warnings.push_back(msg);
  };

  std::vector<Pool> pools;
  for (const auto& rec : records) {
    Pool pool;
    pool.pool_id = rec.pool_address;
    pool.token_a = make_token(rec.token0_address, mapping);
    pool.token_b = make_token(rec.token1_address, mapping);
    pool.reserve_a = rec.reserve0;
    pool.reserve_b = rec.reserve1;
    pool.fee_rate = config.fee_rate;

    // Steps 1 and 2: TVL floor and priceability.
    if (!prices.has(pool.token_a, date) || !prices.has(pool.token_b, date)) {
      warn("pool " + pool.pool_id + " dropped: unpriced token");
      continue;
    }
    if (pool_tvl(pool, prices, date) < config.min_pool_tvl_usd) continue;
    pools.push_back(std::move(pool));
  }

  // Step 3: iterated low-degree pruning.
  prune_low_degree(pools, config.min_degree);

  // Step 4: peel the lowest-TVL pool (pool_id tie-break) until the target pool
  // count is reached, re-pruning degrees after each removal.
  while (pools.size() > config.target_max_pool_count) {
    auto lowest = std::min_element(pools.begin(), pools.end(), [&](const Pool& x, const Pool& y) {
      const double tx = pool_tvl(x, prices, date);
      const double ty = pool_tvl(y, prices, date);
      return tx < ty || (tx == ty && x.pool_id < y.pool_id);
    });
    pools.erase(lowest);
    prune_low_degree(pools, config.min_degree);
  }

  if (pools.empty()) throw EmptySnapshot("no pools survive filtering on " + date);

  std::sort(pools.begin(), pools.end(),
            [](const Pool& x, const Pool& y) { return x.pool_id < y.pool_id; });
  TokenGraph graph;
  for (auto& pool : pools) graph.add_pool(std::move(pool));
  return graph;
}

SnapshotSeries snapshot_series(const std::string& pools_file, const std::string& prices_file,
                               const std::string& mapping_file, const Date& first_date,
                               const Date& last_date, const FilterConfig& config) {
  SnapshotSeries series;
  const auto mapping = parse_mapping(mapping_file);
  series.prices = parse_prices(prices_file);
  const RawPoolsFile raw = parse_pools(pools_file, mapping, series.stats);

  std::vector<PoolRecord> first_records;
  for (const auto& [key, rec] : raw.records)
    if (rec.date == first_date) first_records.push_back(rec);
  if (first_records.empty()) throw EmptySnapshot("no pool rows for " + first_date);

  TokenGraph graph =
      build_filtered_graph(first_records, series.prices, first_date, mapping, config, &series.stats);
  series.snapshots.emplace_back(first_date, graph);

  for (Date d = next_date(first_date); date_less_equal(d, last_date); d = next_date(d)) {
    TokenGraph day = series.snapshots.back().second;
    for (auto& pool : day.pools) {
      auto it = raw.records.find({pool.pool_id, d});
      if (it == raw.records.end()) {
        series.stats.warnings.push_back("pool " + pool.pool_id + " missing on " + d +
                                        "; carrying previous reserves forward");
        continue;
      }
      pool.reserve_a = it->second.reserve0;
      pool.reserve_b = it->second.reserve1;
    }
    series.snapshots.emplace_back(d, std::move(day));
  }
  return series;
}

Date next_date(const Date& date) {
  int y = 0, m = 0, d = 0;
  if (std::sscanf(date.c_str(), "%d-%d-%d", &y, &m, &d) != 3)
    throw ParseError("invalid date '" + date + "'", 0);
  static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  const int month_days = m == 2 && leap ? 29 : days[m - 1];
  if (++d > month_days) {
    d = 1;
    if (++m > 12) {
      m = 1;
      ++y;
    }
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
  return buf;
}

bool date_less_equal(const Date& a, const Date& b) { return a <= b; }

}  // namespace dexeff
