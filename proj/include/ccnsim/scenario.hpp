#pragma once

#include "content_store.hpp"
#include "fib.hpp"
#include "hash.hpp"
#include "topology.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ccnsim {

/// Invalid configuration; remembers which field was violated.
class ScenarioError : public std::runtime_error {
public:
  ScenarioError(std::string field, const std::string& message)
    : std::runtime_error(field + ": " + message)
    , m_field(std::move(field))
  {
  }

  const std::string& field() const { return m_field; }

private:
  std::string m_field;
};

enum class ForwardingStrategy { SmartFlooding, BestRoute };

inline const char* toString(ForwardingStrategy s)
{
  return s == ForwardingStrategy::SmartFlooding ? "smart-flooding" : "best-route";
}

inline std::optional<ForwardingStrategy> strategyFromString(std::string_view s)
{
  if (s == "smart-flooding") {
    return ForwardingStrategy::SmartFlooding;
  }
  if (s == "best-route") {
    return ForwardingStrategy::BestRoute;
  }
  return std::nullopt;
}

enum class PopularityModel { Uniform, Zipf };

/// Request popularity over the catalog: "uniform" or "zipf:<exponent>".
struct Popularity {
  PopularityModel model = PopularityModel::Zipf;
  double zipfExponent = 1.0;

  std::string str() const
  {
    if (model == PopularityModel::Uniform) {
      return "uniform";
    }
    std::ostringstream out;
    out << "zipf:" << zipfExponent;
    return out.str();
  }

  static std::optional<Popularity> fromString(std::string_view s)
  {
    if (s == "uniform") {
      return Popularity{PopularityModel::Uniform, 0.0};
    }
    if (s.rfind("zipf:", 0) == 0) {
      try {
        std::size_t used = 0;
        std::string arg{s.substr(5)};
        double exp = std::stod(arg, &used);
        if (used == arg.size()) {
          return Popularity{PopularityModel::Zipf, exp};
        }
      } catch (const std::exception&) {
      }
    }
    return std::nullopt;
  }
};

/** \brief One experiment configuration.
 *
 *  Defaults reproduce the bundled scenarios/table1.cfg: 12-node Abilene,
 *  100 interests/s per node, 1200-name catalog, 180 s of traffic. The
 *  scenario file is a flat `key = value` list whose keys mirror the field
 *  names one-to-one; set() is the single write path shared by the file
 *  parser and the CLI overrides.
 */
struct Scenario {
  std::string topologySource = "abilene"; // "abilene" or a file path
  Topology topology = buildAbilene();
  ForwardingStrategy strategy = ForwardingStrategy::SmartFlooding;
  CachePolicy cachePolicy = CachePolicy::Lru;
  std::size_t cacheCapacity = 480; // chunks
  bool queryEnabled = true;
  double interestRate = 100; // interests/second per node
  std::size_t catalogSize = 1200;
  std::size_t namesPerProducer = 100;
  Popularity popularity{};
  double queryGateFraction = 0.5;
  std::size_t maxGreen = 2;
  std::optional<TimeMs> fibStalenessT; // nullopt = auto (cacheCapacity/interestRate)
  TimeMs pitInitTimeout = 2000;
  double durationSeconds = 180;
  std::uint64_t seed = 1;

  TimeMs effectiveStalenessT() const
  {
    if (fibStalenessT) {
      return *fibStalenessT;
    }
    return fibThreshold(static_cast<double>(cacheCapacity), interestRate);
  }

  double cacheFraction() const
  {
    return catalogSize == 0
             ? 0.0
             : static_cast<double>(cacheCapacity) / static_cast<double>(catalogSize);
  }

  void setCacheFraction(double fraction)
  {
    if (!(fraction > 0.0) || fraction > 1.0) {
      throw ScenarioError("cache_fraction", "must be in (0, 1]");
    }
    cacheCapacity = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(catalogSize)));
  }

  void validate() const
  {
    topologyCheck();
    if (catalogSize == 0 || catalogSize != namesPerProducer * topology.nodeCount()) {
      throw ScenarioError("catalog_size",
                          "must equal names_per_producer x producer count");
    }
    if (cacheCapacity == 0 || cacheCapacity > catalogSize) {
      throw ScenarioError("cache_capacity", "must be in [1, catalog_size]");
    }
    if (!(interestRate > 0)) {
      throw ScenarioError("interest_rate", "must be positive");
    }
    if (!(queryGateFraction > 0.0) || queryGateFraction > 1.0) {
      throw ScenarioError("query_gate_fraction", "must be in (0, 1]");
    }
    if (maxGreen == 0) {
      throw ScenarioError("max_green", "must be at least 1");
    }
    if (fibStalenessT && *fibStalenessT <= 0) {
      throw ScenarioError("fib_staleness_T", "must be positive");
    }
    if (pitInitTimeout <= 0) {
      throw ScenarioError("pit_init_timeout", "must be positive");
    }
    if (durationSeconds < 0) {
      throw ScenarioError("duration", "must be non-negative");
    }
    if (popularity.model == PopularityModel::Zipf && !(popularity.zipfExponent > 0)) {
      throw ScenarioError("popularity", "zipf exponent must be positive");
    }
  }

  /// Assigns one field by its scenario-file key; unknown keys are errors.
  void set(const std::string& key, const std::string& value)
  {
    if (key == "topology") {
      if (value == "abilene") {
        topology = buildAbilene();
      } else {
        topology = Topology::loadFile(value);
      }
      topologySource = value;
    } else if (key == "strategy") {
      auto s = strategyFromString(value);
      if (!s) {
        throw ScenarioError(key, "expected smart-flooding or best-route");
      }
      strategy = *s;
    } else if (key == "cache_policy") {
      auto p = cachePolicyFromString(value);
      if (!p) {
        throw ScenarioError(key, "expected lru, lfu or fifo");
      }
      cachePolicy = *p;
    } else if (key == "cache_capacity") {
      cacheCapacity = parseCount(key, value);
    } else if (key == "query_enabled") {
      queryEnabled = parseBool(key, value);
    } else if (key == "interest_rate") {
      interestRate = parseDouble(key, value);
    } else if (key == "catalog_size") {
      catalogSize = parseCount(key, value);
    } else if (key == "names_per_producer") {
      namesPerProducer = parseCount(key, value);
    } else if (key == "popularity") {
      auto p = Popularity::fromString(value);
      if (!p) {
        throw ScenarioError(key, "expected uniform or zipf:<exponent>");
      }
      popularity = *p;
    } else if (key == "query_gate_fraction") {
      queryGateFraction = parseDouble(key, value);
    } else if (key == "max_green") {
      maxGreen = parseCount(key, value);
    } else if (key == "fib_staleness_T") {
      if (value == "auto") {
        fibStalenessT = std::nullopt;
      } else {
        fibStalenessT = static_cast<TimeMs>(parseCount(key, value));
      }
    } else if (key == "pit_init_timeout") {
      pitInitTimeout = static_cast<TimeMs>(parseCount(key, value));
    } else if (key == "duration") {
      durationSeconds = parseDouble(key, value);
    } else if (key == "seed") {
      seed = parseU64(key, value);
    } else {
      throw ScenarioError(key, "unknown scenario key");
    }
  }

  /// Flat key=value form; `#` comments, blank lines ignored.
  static Scenario fromFile(const std::string& path)
  {
    std::ifstream in{path};
    if (!in) {
      throw ScenarioError("scenario", "cannot open file '" + path + "'");
    }
    namespace fs = std::filesystem;
    fs::path dir = fs::path{path}.parent_path();
    Scenario scenario;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
      ++lineNo;
      auto hash = line.find('#');
      if (hash != std::string::npos) {
        line.erase(hash);
      }
      std::string key, value;
      if (!splitKeyValue(line, key, value)) {
        if (!isBlank(line)) {
          throw ScenarioError("scenario",
                              "line " + std::to_string(lineNo) + ": expected key = value");
        }
        continue;
      }
      if (key == "topology" && value != "abilene") {
        fs::path p{value};
        if (p.is_relative()) {
          value = (dir / p).string();
        }
      }
      scenario.set(key, value);
    }
    return scenario;
  }

  /// Stable serialization feeding scenarioId(); seed intentionally excluded
  /// so sibling runs of one experiment share an id.
  std::string canonicalString() const
  {
    std::ostringstream out;
    out << "cache_capacity=" << cacheCapacity << '\n'
        << "cache_policy=" << toString(cachePolicy) << '\n'
        << "catalog_size=" << catalogSize << '\n'
        << "duration=" << durationSeconds << '\n'
        << "fib_staleness_T=" << (fibStalenessT ? std::to_string(*fibStalenessT) : "auto")
        << '\n'
        << "interest_rate=" << interestRate << '\n'
        << "max_green=" << maxGreen << '\n'
        << "names_per_producer=" << namesPerProducer << '\n'
        << "pit_init_timeout=" << pitInitTimeout << '\n'
        << "popularity=" << popularity.str() << '\n'
        << "query_enabled=" << (queryEnabled ? "on" : "off") << '\n'
        << "query_gate_fraction=" << queryGateFraction << '\n'
        << "strategy=" << toString(strategy) << '\n'
        << "topology_hash=" << fnv1a64(topology.toText()) << '\n';
    return out.str();
  }

  std::uint64_t scenarioId() const { return fnv1a64(canonicalString()); }

private:
  void topologyCheck() const
  {
    try {
      topology.validate();
    } catch (const TopologyError& e) {
      throw ScenarioError("topology", e.what());
    }
  }

  static bool isBlank(const std::string& s)
  {
    return s.find_first_not_of(" \t\r\n") == std::string::npos;
  }

  static std::string trim(std::string s)
  {
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  }

  static bool splitKeyValue(const std::string& line, std::string& key, std::string& value)
  {
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      return false;
    }
    key = trim(line.substr(0, eq));
    value = trim(line.substr(eq + 1));
    return !key.empty() && !value.empty();
  }

  static bool parseBool(const std::string& key, const std::string& value)
  {
    if (value == "on" || value == "true" || value == "1") {
      return true;
    }
    if (value == "off" || value == "false" || value == "0") {
      return false;
    }
    throw ScenarioError(key, "expected on or off");
  }

  static std::size_t parseCount(const std::string& key, const std::string& value)
  {
    try {
      std::size_t used = 0;
      long long v = std::stoll(value, &used);
      if (used == value.size() && v >= 0) {
        return static_cast<std::size_t>(v);
      }
    } catch (const std::exception&) {
    }
    throw ScenarioError(key, "expected a non-negative integer, got '" + value + "'");
  }

  static std::uint64_t parseU64(const std::string& key, const std::string& value)
  {
    try {
      std::size_t used = 0;
      unsigned long long v = std::stoull(value, &used);
      if (used == value.size()) {
        return v;
      }
    } catch (const std::exception&) {
    }
    throw ScenarioError(key, "expected an unsigned integer, got '" + value + "'");
  }

  static double parseDouble(const std::string& key, const std::string& value)
  {
    try {
      std::size_t used = 0;
      double v = std::stod(value, &used);
      if (used == value.size()) {
        return v;
      }
    } catch (const std::exception&) {
    }
    throw ScenarioError(key, "expected a number, got '" + value + "'");
  }
};

} // namespace ccnsim
