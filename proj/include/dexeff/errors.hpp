#pragma once

#include <stdexcept>
#include <string>

namespace dexeff {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingPrice : Error {
  explicit MissingPrice(const std::string& token, const std::string& date)
      : Error("missing price for token " + token + " on " + date), token(token), date(date) {}
  std::string token;
  std::string date;
};

struct DeadPool : Error {
  explicit DeadPool(const std::string& pool_id)
      : Error("pool " + pool_id + " has a zero reserve"), pool_id(pool_id) {}
  std::string pool_id;
};

struct InvalidAmount : Error {
  using Error::Error;
};

struct StaleQuote : Error {
  using Error::Error;
};

struct NoRoute : Error {
  using Error::Error;
};

struct SolverFailure : Error {
  using Error::Error;
};

struct DegenerateGraph : Error {
  using Error::Error;
};

struct Disconnected : Error {
  using Error::Error;
};

struct IterationLimit : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line(line) {}
  std::size_t line;
};

struct EmptySnapshot : Error {
  using Error::Error;
};

struct EmptyTrace : Error {
  using Error::Error;
};

}  // namespace dexeff
