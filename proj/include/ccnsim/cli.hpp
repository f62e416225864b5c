#pragma once

#include "engine.hpp"
#include "metrics.hpp"
#include "scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace ccnsim {
namespace cli {

/// Scenario-field overrides captured as text so every flag funnels through
/// Scenario::set(), the same path the scenario file takes.
struct Overrides {
  std::optional<std::string> topology;
  std::optional<std::string> strategy;
  std::optional<std::string> policy;
  std::optional<std::string> cacheCapacity;
  std::optional<std::string> query;
  std::optional<std::string> rate;
  std::optional<std::string> catalogSize;
  std::optional<std::string> namesPerProducer;
  std::optional<std::string> gateFraction;
  std::optional<std::string> maxGreen;
  std::optional<std::string> fibStaleness;
  std::optional<std::string> pitTimeout;
  std::optional<std::string> duration;
  std::optional<std::string> seed;
  std::optional<double> zipf;
  bool uniform = false;
  std::optional<double> cacheFraction; // applied last, needs catalog size
};

inline void addOverrideFlags(CLI::App* cmd, Overrides& o)
{
  cmd->add_option("--topology", o.topology, "Topology: 'abilene' or a topology file");
  cmd->add_option("--strategy", o.strategy, "Forwarding strategy: smart-flooding|best-route");
  cmd->add_option("--policy", o.policy, "Cache replacement policy: lru|lfu|fifo");
  cmd->add_option("--cache-capacity", o.cacheCapacity, "Cache capacity in chunks");
  cmd->add_option("--cache-fraction", o.cacheFraction,
                  "Cache capacity as a fraction of the catalog, in (0,1]");
  cmd->add_option("--query", o.query, "Query mechanism: on|off");
  cmd->add_option("--rate", o.rate, "Consumer interests per second per node");
  cmd->add_option("--catalog-size", o.catalogSize, "Total distinct content names");
  cmd->add_option("--names-per-producer", o.namesPerProducer, "Names each producer owns");
  cmd->add_option("--query-gate-fraction", o.gateFraction,
                  "Survival-rank threshold for answering queries, in (0,1]");
  cmd->add_option("--max-green", o.maxGreen, "Green faces allowed per FIB entry");
  cmd->add_option("--fib-staleness", o.fibStaleness,
                  "Green-face staleness threshold in ms, or 'auto'");
  cmd->add_option("--pit-timeout", o.pitTimeout, "PIT timer initialization value in ms");
  cmd->add_option("--duration", o.duration, "Traffic duration in seconds");
  auto* zipf = cmd->add_option("--zipf", o.zipf, "Zipf request popularity with this exponent");
  cmd->add_flag("--uniform", o.uniform, "Uniform request popularity")->excludes(zipf);
}

inline void applyOverrides(Scenario& scenario, const Overrides& o)
{
  if (o.topology) {
    scenario.set("topology", *o.topology);
  }
  if (o.catalogSize) {
    scenario.set("catalog_size", *o.catalogSize);
  }
  if (o.namesPerProducer) {
    scenario.set("names_per_producer", *o.namesPerProducer);
  }
  if (o.strategy) {
    scenario.set("strategy", *o.strategy);
  }
  if (o.policy) {
    scenario.set("cache_policy", *o.policy);
  }
  if (o.cacheCapacity) {
    scenario.set("cache_capacity", *o.cacheCapacity);
  }
  if (o.query) {
    scenario.set("query_enabled", *o.query);
  }
  if (o.rate) {
    scenario.set("interest_rate", *o.rate);
  }
  if (o.gateFraction) {
    scenario.set("query_gate_fraction", *o.gateFraction);
  }
  if (o.maxGreen) {
    scenario.set("max_green", *o.maxGreen);
  }
  if (o.fibStaleness) {
    scenario.set("fib_staleness_T", *o.fibStaleness);
  }
  if (o.pitTimeout) {
    scenario.set("pit_init_timeout", *o.pitTimeout);
  }
  if (o.duration) {
    scenario.set("duration", *o.duration);
  }
  if (o.seed) {
    scenario.set("seed", *o.seed);
  }
  if (o.uniform) {
    scenario.set("popularity", "uniform");
  } else if (o.zipf) {
    std::ostringstream v;
    v << "zipf:" << *o.zipf;
    scenario.set("popularity", v.str());
  }
  if (o.cacheFraction) {
    scenario.setCacheFraction(*o.cacheFraction); // after catalog_size overrides
  }
}

inline std::vector<std::string> splitList(const std::string& csv)
{
  std::vector<std::string> items;
  std::string item;
  std::istringstream in{csv};
  while (std::getline(in, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) {
      items.push_back(item.substr(b, e - b + 1));
    }
  }
  return items;
}

/// Appends rows to `path`, writing the header first when the file is new or
/// empty. Returns false on I/O failure.
inline bool appendCsv(const std::string& path, const std::vector<std::string>& rows,
                      std::ostream& err)
{
  bool needHeader = true;
  {
    std::ifstream probe{path, std::ios::ate};
    if (probe.good() && probe.tellg() > 0) {
      needHeader = false;
    }
  }
  std::ofstream out{path, std::ios::app};
  if (!out) {
    err << "cannot open output file '" << path << "'\n";
    return false;
  }
  if (needHeader) {
    out << MetricsReport::csvHeader() << '\n';
  }
  for (const std::string& row : rows) {
    out << row << '\n';
  }
  out.flush();
  if (!out) {
    err << "write failed on '" << path << "'\n";
    return false;
  }
  return true;
}

inline Scenario loadScenario(const std::optional<std::string>& path, const Overrides& o)
{
  Scenario scenario;
  if (path) {
    scenario = Scenario::fromFile(*path);
  }
  applyOverrides(scenario, o);
  return scenario;
}

inline int cmdRun(const std::optional<std::string>& scenarioPath, const Overrides& o,
                  const std::optional<std::string>& output,
                  const std::optional<std::string>& tracePath, std::ostream& out,
                  std::ostream& err)
{
  MetricsReport report;
  try {
    Scenario scenario = loadScenario(scenarioPath, o);
    EngineOptions options;
    std::ofstream traceFile;
    if (tracePath) {
      traceFile.open(*tracePath);
      if (!traceFile) {
        err << "cannot open trace file '" << *tracePath << "'\n";
        return 2;
      }
      options.traceOut = &traceFile;
    }
    report = runScenario(scenario, options);
  } catch (const ScenarioError& e) {
    err << "invalid scenario: " << e.what() << '\n';
    return 1;
  } catch (const TopologyError& e) {
    err << "invalid scenario: " << e.what() << '\n';
    return 1;
  }
  std::string row = report.csvRow();
  if (output && !appendCsv(*output, {row}, err)) {
    return 2;
  }
  out << row << '\n';
  return 0;
}

inline int cmdSweep(const std::optional<std::string>& scenarioPath, const Overrides& o,
                    const std::string& fractionsCsv, const std::string& policiesCsv,
                    const std::string& modesCsv, const std::string& seedsCsv,
                    unsigned jobs, const std::optional<std::string>& output,
                    std::ostream& out, std::ostream& err)
{
  Scenario base;
  std::vector<double> fractions;
  std::vector<CachePolicy> policies;
  std::vector<bool> modes;
  std::vector<std::uint64_t> seeds;
  try {
    base = loadScenario(scenarioPath, o);
    for (const std::string& tok : splitList(fractionsCsv)) {
      std::size_t used = 0;
      double f = std::stod(tok, &used);
      if (used != tok.size()) {
        throw ScenarioError("cache_fraction", "bad fraction '" + tok + "'");
      }
      fractions.push_back(f);
    }
    for (const std::string& tok : splitList(policiesCsv)) {
      auto p = cachePolicyFromString(tok);
      if (!p) {
        throw ScenarioError("cache_policy", "bad policy '" + tok + "'");
      }
      policies.push_back(*p);
    }
    for (const std::string& tok : splitList(modesCsv)) {
      if (tok == "on") {
        modes.push_back(true);
      } else if (tok == "off") {
        modes.push_back(false);
      } else {
        throw ScenarioError("query_enabled", "bad query mode '" + tok + "'");
      }
    }
    for (const std::string& tok : splitList(seedsCsv)) {
      seeds.push_back(std::stoull(tok));
    }
    if (seeds.empty()) {
      throw ScenarioError("seeds", "at least one seed is required");
    }
    if (fractions.empty() || policies.empty() || modes.empty()) {
      throw ScenarioError("sweep", "fractions, policies and query modes must be non-empty");
    }
  } catch (const ScenarioError& e) {
    err << "invalid scenario: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "invalid scenario: " << e.what() << '\n';
    return 1;
  }

  std::vector<SweepCell> cells;
  try {
    cells = sweep(base, fractions, policies, modes, seeds, jobs);
  } catch (const ScenarioError& e) {
    err << "invalid scenario: " << e.what() << '\n';
    return 1;
  }

  std::vector<std::string> rows;
  std::string failure;
  for (const SweepCell& cell : cells) {
    if (!cell.error.empty()) {
      failure = cell.error;
      break;
    }
    rows.push_back(cell.report->csvRow());
  }
  if (output && !appendCsv(*output, rows, err)) {
    return 2;
  }
  out << MetricsReport::csvHeader() << '\n';
  for (const std::string& row : rows) {
    out << row << '\n';
  }
  if (!failure.empty()) {
    err << "sweep cell failed: " << failure << '\n';
    return 1;
  }
  return 0;
}

inline int cmdValidateTopology(const std::string& path, std::ostream& out,
                               std::ostream& err)
{
  Topology topo;
  try {
    if (path == "abilene") {
      topo = buildAbilene();
    } else {
      std::ifstream probe{path};
      if (!probe) {
        err << "cannot open topology file '" << path << "'\n";
        return 2;
      }
      topo = Topology::loadFile(path);
    }
    topo.validate();
  } catch (const TopologyError& e) {
    err << "invalid: " << e.what() << '\n';
    return 1;
  }
  out << "topology OK: " << topo.nodes.size() << " nodes, " << topo.links.size()
      << " links, connected\n";
  return 0;
}

} // namespace cli

/// Entry point behind tools/ccnsim; streams injectable for tests.
inline int cliMain(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr)
{
  CLI::App app{"ccnsim: a deterministic content-centric network simulator"};
  app.require_subcommand(1);

  std::optional<std::string> scenarioPath;
  std::optional<std::string> output;
  std::optional<std::string> tracePath;
  cli::Overrides overrides;

  CLI::App* run = app.add_subcommand("run", "Execute one scenario and emit a CSV row");
  run->add_option("--scenario", scenarioPath, "Scenario file (flat key = value)");
  run->add_option("--seed", overrides.seed, "Random seed for this run");
  run->add_option("--output", output, "CSV file to append the row to");
  run->add_option("--trace", tracePath, "Write a per-event trace to this file");
  cli::addOverrideFlags(run, overrides);

  std::string fractionsCsv = "0.4,0.5,0.6,0.7";
  std::string policiesCsv = "lru,lfu,fifo";
  std::string modesCsv = "on,off";
  std::string seedsCsv = "1";
  unsigned jobs = 0;
  CLI::App* sweepCmd =
    app.add_subcommand("sweep", "Run the Cartesian grid of scenario variants");
  sweepCmd->add_option("--scenario", scenarioPath, "Scenario file (flat key = value)");
  sweepCmd->add_option("--cache-fractions", fractionsCsv, "Comma list of cache fractions");
  sweepCmd->add_option("--policies", policiesCsv, "Comma list of cache policies");
  sweepCmd->add_option("--query-modes", modesCsv, "Comma list of query modes (on,off)");
  sweepCmd->add_option("--seeds", seedsCsv, "Comma list of seeds");
  sweepCmd->add_option("--jobs", jobs, "Worker threads (0 = hardware)");
  sweepCmd->add_option("--output", output, "CSV file to append the rows to");
  cli::addOverrideFlags(sweepCmd, overrides);

  std::string topologyPath;
  CLI::App* validate =
    app.add_subcommand("validate-topology", "Check a topology file and report its shape");
  validate->add_option("file", topologyPath, "Topology file, or 'abilene'")->required();

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  if (run->parsed()) {
    return cli::cmdRun(scenarioPath, overrides, output, tracePath, out, err);
  }
  if (sweepCmd->parsed()) {
    return cli::cmdSweep(scenarioPath, overrides, fractionsCsv, policiesCsv, modesCsv,
                         seedsCsv, jobs, output, out, err);
  }
  return cli::cmdValidateTopology(topologyPath, out, err);
}

} // namespace ccnsim
