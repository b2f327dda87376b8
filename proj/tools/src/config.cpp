#include "percomp/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

namespace percomp::cli {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw ConfigError("config field '" + key + "': " + what);
}

int as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) bad(key, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    bad(key, "integer out of range");
  }
  return static_cast<int>(x);
}

Site as_site(const json& v, const std::string& key, int dim) {
  if (!v.is_array() || v.size() != static_cast<std::size_t>(dim)) {
    bad(key, "expected an array of " + std::to_string(dim) + " integers");
  }
  Site s{};
  for (int a = 0; a < dim; ++a) s[static_cast<std::size_t>(a)] = as_int(v[static_cast<std::size_t>(a)], key);
  return s;
}

}  // namespace

Config Config::parse(std::string_view text, const std::string& origin) {
  Config c;
  try {
    c.doc_ = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line:column.
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": JSON parse error: " + e.what());
  }
  if (!c.doc_.is_object()) throw ConfigError(origin + ": top level must be a JSON object");
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse(buf.str(), path.string());
}

void Config::set_raw(const std::string& key, const std::string& text) {
  json v = json::parse(text, nullptr, /*allow_exceptions=*/false);
  doc_[key] = v.is_discarded() ? json(text) : std::move(v);
}

const nlohmann::json* Config::find(const std::string& key, bool required) const {
  auto it = doc_.find(key);
  if (it == doc_.end()) {
    if (required) bad(key, "missing");
    return nullptr;
  }
  return &*it;
}

double Config::number(const std::string& key, std::optional<double> fallback) const {
  const json* v = find(key, !fallback);
  if (!v) return *fallback;
  if (!v->is_number()) bad(key, "expected a number");
  return v->get<double>();
}

double Config::probability(const std::string& key, std::optional<double> fallback) const {
  const double x = number(key, fallback);
  if (!(x >= 0.0 && x <= 1.0)) bad(key, "expected a probability in [0, 1]");
  return x;
}

std::int64_t Config::integer(const std::string& key, std::optional<std::int64_t> fallback) const {
  const json* v = find(key, !fallback);
  if (!v) return *fallback;
  if (!v->is_number_integer()) bad(key, "expected an integer");
  return v->get<std::int64_t>();
}

int Config::bounded(const std::string& key, int lo, int hi, std::optional<int> fallback) const {
  const std::int64_t x = integer(key, fallback ? std::optional<std::int64_t>(*fallback) : std::nullopt);
  if (x < lo || x > hi) {
    bad(key, "expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(x);
}

bool Config::flag(const std::string& key, bool fallback) const {
  const json* v = find(key, false);
  if (!v) return fallback;
  if (!v->is_boolean()) bad(key, "expected true or false");
  return v->get<bool>();
}

std::uint64_t Config::seed() const {
  const json* v = find("seed", true);
  if (v->is_number_unsigned()) return v->get<std::uint64_t>();
  if (v->is_number_integer() && v->get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v->get<std::int64_t>());
  }
  bad("seed", "expected a non-negative integer");
}

std::vector<int> Config::integers(const std::string& key,
                                  std::optional<std::vector<int>> fallback) const {
  const json* v = find(key, !fallback);
  if (!v) return *fallback;
  if (!v->is_array()) bad(key, "expected an array of integers");
  std::vector<int> out;
  for (const json& x : *v) out.push_back(as_int(x, key));
  return out;
}

std::vector<double> Config::probabilities(const std::string& key) const {
  const json* v = find(key, true);
  if (!v->is_array()) bad(key, "expected an array of probabilities");
  std::vector<double> out;
  for (const json& x : *v) {
    if (!x.is_number() || !(x.get<double>() >= 0.0 && x.get<double>() <= 1.0)) {
      bad(key, "expected an array of probabilities in [0, 1]");
    }
    out.push_back(x.get<double>());
  }
  return out;
}

Site Config::site(const std::string& key, int dim, std::optional<Site> fallback) const {
  const json* v = find(key, !fallback);
  if (!v) return *fallback;
  return as_site(*v, key, dim);
}

std::vector<Site> Config::sites(const std::string& key, int dim,
                                std::optional<std::vector<Site>> fallback) const {
  const json* v = find(key, !fallback);
  if (!v) return *fallback;
  if (!v->is_array()) bad(key, "expected an array of sites");
  std::vector<Site> out;
  for (const json& x : *v) out.push_back(as_site(x, key, dim));
  return out;
}

}  // namespace percomp::cli
