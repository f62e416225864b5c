#pragma once

#include "content_store.hpp"
#include "scenario.hpp"

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace ccnsim {

struct NodeMetrics {
  std::uint64_t emitted = 0; // consumer interests this node's app sent
  std::uint64_t interestTx = 0;
  std::uint64_t floodEvents = 0;
  std::uint64_t floodPackets = 0;
  std::uint64_t retransmissions = 0;
  std::uint64_t satisfied = 0;
  std::uint64_t unsatisfied = 0;
  std::uint64_t duplicateDrops = 0;
  std::uint64_t unsolicitedDrops = 0;
  std::uint64_t queryProbesSent = 0;     // interests that left carrying a probe
  std::uint64_t queryResultsAttached = 0; // data this node answered with a result
  std::uint64_t queryRoutesLearned = 0;  // FIB updates taken from query results
  std::uint64_t responseSamples = 0;     // forwarded fetches (PIT-path deliveries)
  double responseSumMs = 0;
};

/** \brief Counters of one run plus its identification.
 *
 *  avgResponseTimeMs averages satisfied consumer interests only. Equal
 *  scenario and seed reproduce every field bit for bit, traceHash included.
 */
struct MetricsReport {
  std::uint64_t scenarioId = 0;
  std::uint64_t seed = 0;
  ForwardingStrategy strategy = ForwardingStrategy::SmartFlooding;
  CachePolicy policy = CachePolicy::Lru;
  bool queryEnabled = false;
  double cacheFraction = 0;

  std::uint64_t floodEvents = 0;
  std::uint64_t floodPackets = 0;
  std::uint64_t interestTx = 0;
  std::uint64_t retransmissions = 0;
  std::uint64_t unsatisfied = 0;
  std::uint64_t satisfied = 0;
  std::uint64_t emitted = 0;
  std::uint64_t responseSamples = 0; // forwarded fetches behind the average
  double avgResponseTimeMs = 0;

  std::vector<NodeMetrics> perNode;
  std::uint64_t traceHash = 0;

  static const char* csvHeader()
  {
    return "scenario_id,seed,strategy,policy,query_enabled,cache_fraction,"
           "flood_events,flood_packets,interest_tx,retransmissions,unsatisfied,"
           "avg_response_time_ms";
  }

  std::string csvRow() const
  {
    char buf[320];
    std::snprintf(buf, sizeof(buf),
                  "%016llx,%llu,%s,%s,%s,%.6g,%llu,%llu,%llu,%llu,%llu,%.6f",
                  static_cast<unsigned long long>(scenarioId),
                  static_cast<unsigned long long>(seed), toString(strategy),
                  toString(policy), queryEnabled ? "on" : "off", cacheFraction,
                  static_cast<unsigned long long>(floodEvents),
                  static_cast<unsigned long long>(floodPackets),
                  static_cast<unsigned long long>(interestTx),
                  static_cast<unsigned long long>(retransmissions),
                  static_cast<unsigned long long>(unsatisfied), avgResponseTimeMs);
    return buf;
  }
};

} // namespace ccnsim
