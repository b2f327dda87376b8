#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "percomp/lattice.hpp"

namespace percomp::cli {

/// Malformed or invalid configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A JSON object of experiment parameters with typed, field-named access.
class Config {
 public:
  Config() : doc_(nlohmann::json::object()) {}

  /// Throws ConfigError carrying line and column on a syntax error.
  static Config parse(std::string_view text, const std::string& origin = "config");
  static Config load(const std::filesystem::path& path);

  /// Sets `key` from command-line text: JSON if it parses as JSON, else a string.
  void set_raw(const std::string& key, const std::string& text);

  bool has(const std::string& key) const { return doc_.contains(key); }
  const nlohmann::json& document() const { return doc_; }

  double number(const std::string& key, std::optional<double> fallback = {}) const;
  double probability(const std::string& key, std::optional<double> fallback = {}) const;
  std::int64_t integer(const std::string& key, std::optional<std::int64_t> fallback = {}) const;
  /// Integer in [lo, hi].
  int bounded(const std::string& key, int lo, int hi, std::optional<int> fallback = {}) const;
  bool flag(const std::string& key, bool fallback) const;
  std::uint64_t seed() const;
  std::vector<int> integers(const std::string& key, std::optional<std::vector<int>> fallback = {}) const;
  std::vector<double> probabilities(const std::string& key) const;
  Site site(const std::string& key, int dim, std::optional<Site> fallback = {}) const;
  std::vector<Site> sites(const std::string& key, int dim,
                          std::optional<std::vector<Site>> fallback = {}) const;

 private:
  const nlohmann::json* find(const std::string& key, bool required) const;

  nlohmann::json doc_;
};

}  // namespace percomp::cli
