#pragma once

#include "forwarding.hpp"
#include "metrics.hpp"
#include "random.hpp"
#include "scenario.hpp"
#include "topology.hpp"

#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <queue>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace ccnsim {

/// Traffic stops at `duration`; in-flight exchanges get this long to settle
/// before the counters freeze.
inline constexpr TimeMs kDrainMs = 5000;

struct EngineOptions {
  std::ostream* traceOut = nullptr;  // newline-delimited per-event trace
  bool forceQueryGateClosed = false; // test hook: no query answer ever attaches
};

struct LinkEnd {
  NodeId peer = 0;
  FaceId peerFace = 0;
  TimeMs delay = 0;
};

/// faceTable[n][f] describes node n's link face f (f >= 1, in topology file
/// order); index 0 is a placeholder for the application face.
inline std::vector<std::vector<LinkEnd>> buildFaceTable(const Topology& topo)
{
  std::vector<std::vector<LinkEnd>> table(topo.nodeCount());
  for (auto& faces : table) {
    faces.push_back(LinkEnd{});
  }
  for (const TopoLink& l : topo.links) {
    auto fa = static_cast<FaceId>(table[l.a].size());
    auto fb = static_cast<FaceId>(table[l.b].size());
    table[l.a].push_back(LinkEnd{l.b, fb, l.delayMs});
    table[l.b].push_back(LinkEnd{l.a, fa, l.delayMs});
  }
  return table;
}

struct SeedRoute {
  NodeId node = 0;
  ContentName prefix;
  FaceId face = 0;
  TimeMs metric = 0;
  FaceState state = FaceState::Green;
};

/// Bootstrap routing, one record per (node, remote producer prefix, link
/// face). The minimum-delay next hop is Green with metric = round-trip path
/// delay (equal-cost ties to the lower neighbor id); every other link face
/// is installed Yellow with the round-trip metric of the detour through
/// that neighbor, so strategies have ranked alternates to fall back on.
inline std::vector<SeedRoute> shortestPathSeedRoutes(const Topology& topo)
{
  const std::size_t n = topo.nodeCount();
  auto faceTable = buildFaceTable(topo);
  struct Adj {
    NodeId neighbor;
    TimeMs delay;
    FaceId face;
  };
  std::vector<std::vector<Adj>> adj(n);
  for (NodeId v = 0; v < n; ++v) {
    for (FaceId f = 1; f < faceTable[v].size(); ++f) {
      const LinkEnd& e = faceTable[v][f];
      adj[v].push_back(Adj{e.peer, e.delay, f});
    }
  }

  constexpr TimeMs kInf = std::numeric_limits<TimeMs>::max() / 4;
  std::vector<SeedRoute> routes;
  for (const TopoNode& producer : topo.nodes) {
    std::vector<TimeMs> dist(n, kInf);
    dist[producer.id] = 0;
    using Item = std::pair<TimeMs, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.push({0, producer.id});
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (d != dist[v]) {
        continue;
      }
      for (const Adj& a : adj[v]) {
        if (d + a.delay < dist[a.neighbor]) {
          dist[a.neighbor] = d + a.delay;
          heap.push({dist[a.neighbor], a.neighbor});
        }
      }
    }
    for (NodeId v = 0; v < n; ++v) {
      if (v == producer.id) {
        continue; // no self-route
      }
      const Adj* best = nullptr;
      TimeMs bestThrough = kInf;
      for (const Adj& a : adj[v]) {
        TimeMs through = a.delay + dist[a.neighbor];
        if (through < bestThrough ||
            (through == bestThrough && best && a.neighbor < best->neighbor)) {
          best = &a;
          bestThrough = through;
        }
      }
      assert(best); // validated topologies are connected
      routes.push_back(
        SeedRoute{v, producer.prefix, best->face, 2 * dist[v], FaceState::Green});
      for (const Adj& a : adj[v]) {
        if (a.face != best->face) {
          routes.push_back(SeedRoute{v, producer.prefix, a.face,
                                     2 * (a.delay + dist[a.neighbor]),
                                     FaceState::Yellow});
        }
      }
    }
  }
  return routes;
}

/** \brief Deterministic single-queue discrete-event engine for one run.
 *
 *  Events execute in (time, sequence) order; all randomness comes from the
 *  scenario seed, so equal (scenario, seed) pairs reproduce the run bit for
 *  bit, trace hash included. The WithQueryMechanism template parameter
 *  compiles the query branches of the pipelines in or out; the plain
 *  instantiation is runScenario().
 */
template <bool WithQueryMechanism = true>
class Engine {
public:
  static constexpr bool kWithQuery = WithQueryMechanism;

  explicit Engine(const Scenario& scenario, const EngineOptions& options = {})
    : m_scenario(scenario)
    , m_options(options)
    , m_rng(scenario.seed)
  {
    m_scenario.validate();
    setup();
  }

  MetricsReport run()
  {
    while (!m_queue.empty() && m_queue.top().time <= m_endMs) {
      Event ev = m_queue.top();
      m_queue.pop();
      m_now = ev.time;
      dispatch(ev);
    }
    finalize();
    return buildReport();
  }

public: // pipeline environment
  Nonce freshNonce() { return m_rng.nextU32(); }

  void sendInterest(Node& node, FaceId face, const InterestPacket& pkt, TimeMs now)
  {
    assert(face != kAppFace && face < m_faceTable[node.id].size());
    m_nodeMetrics[node.id].interestTx += 1;
    note(Trace::TxInterest, node.id, face, pkt.name, now);
    const LinkEnd& link = m_faceTable[node.id][face];
    schedule(now + link.delay, link.peer, link.peerFace, pkt);
  }

  void sendData(Node& node, FaceId face, const DataPacket& pkt, TimeMs now, bool fromPit)
  {
    if (face == kAppFace) {
      deliver(node, pkt, now, fromPit);
      return;
    }
    assert(face < m_faceTable[node.id].size());
    note(Trace::TxData, node.id, face, pkt.name, now);
    const LinkEnd& link = m_faceTable[node.id][face];
    schedule(now + link.delay, link.peer, link.peerFace, pkt);
  }

  void armPitTimer(Node& node, const ContentName& name, TimeMs deadline)
  {
    node.pit.setTimer(name, deadline);
    schedule(deadline, node.id, kAppFace, TimerCheck{name, deadline});
  }

  void noteFlood(Node& node, std::size_t fanout)
  {
    m_nodeMetrics[node.id].floodEvents += 1;
    m_nodeMetrics[node.id].floodPackets += fanout - 1;
  }

  void noteRetransmission(Node& node, const ContentName& name, TimeMs now)
  {
    m_nodeMetrics[node.id].retransmissions += 1;
    note(Trace::Retransmit, node.id, kAppFace, name, now);
  }

  void noteGiveUp(Node& node, const ContentName& name, TimeMs now)
  {
    auto& ledger = m_outstanding[node.id];
    auto it = ledger.find(name);
    if (it != ledger.end()) {
      m_nodeMetrics[node.id].unsatisfied += it->second.size();
      ledger.erase(it);
    }
    note(Trace::GiveUp, node.id, kAppFace, name, now);
  }

  void noteDuplicateDrop(Node& node, const ContentName& name, TimeMs now)
  {
    m_nodeMetrics[node.id].duplicateDrops += 1;
    note(Trace::DuplicateDrop, node.id, kAppFace, name, now);
  }

  void noteUnsolicited(Node& node, const ContentName& name, TimeMs now)
  {
    m_nodeMetrics[node.id].unsolicitedDrops += 1;
    note(Trace::UnsolicitedDrop, node.id, kAppFace, name, now);
  }

  bool queryGateOpen(const Node& node, const ContentName& queryName) const
  {
    if (m_options.forceQueryGateClosed) {
      return false;
    }
    return node.cs.isLongLived(queryName, node.queryGateFraction);
  }

  void noteQueryProbe(Node& node) { m_nodeMetrics[node.id].queryProbesSent += 1; }
  void noteQueryAnswer(Node& node) { m_nodeMetrics[node.id].queryResultsAttached += 1; }
  void noteQueryRouteLearned(Node& node) { m_nodeMetrics[node.id].queryRoutesLearned += 1; }

  const std::vector<Node>& nodes() const { return m_nodes; }
  const std::vector<ContentName>& catalog() const { return m_catalog; }

private:
  struct TimerCheck {
    ContentName name;
    TimeMs deadline = 0;
  };

  struct Event {
    TimeMs time = 0;
    std::uint64_t seq = 0;
    NodeId node = 0;
    FaceId face = 0;
    std::variant<std::monostate, InterestPacket, DataPacket, TimerCheck> payload;
  };

  struct EventAfter {
    bool operator()(const Event& a, const Event& b) const
    {
      if (a.time != b.time) {
        return a.time > b.time;
      }
      return a.seq > b.seq;
    }
  };

  enum class Trace : std::uint8_t {
    Emit = 1,
    TxInterest,
    RxInterest,
    TxData,
    RxData,
    Deliver,
    Timeout,
    Retransmit,
    GiveUp,
    DuplicateDrop,
    UnsolicitedDrop,
  };

  static const char* traceName(Trace t)
  {
    switch (t) {
    case Trace::Emit:
      return "emit";
    case Trace::TxInterest:
      return "tx_i";
    case Trace::RxInterest:
      return "rx_i";
    case Trace::TxData:
      return "tx_d";
    case Trace::RxData:
      return "rx_d";
    case Trace::Deliver:
      return "deliver";
    case Trace::Timeout:
      return "timeout";
    case Trace::Retransmit:
      return "retx";
    case Trace::GiveUp:
      return "giveup";
    case Trace::DuplicateDrop:
      return "dup_drop";
    case Trace::UnsolicitedDrop:
      return "unsol_drop";
    }
    return "?";
  }

  void setup()
  {
    const Topology& topo = m_scenario.topology;
    const std::size_t n = topo.nodeCount();
    m_durationMs = static_cast<TimeMs>(std::llround(m_scenario.durationSeconds * 1000.0));
    m_endMs = m_durationMs + kDrainMs;
    m_faceTable = buildFaceTable(topo);

    m_catalog.reserve(m_scenario.catalogSize);
    FibConfig fibConfig{m_scenario.maxGreen, m_scenario.effectiveStalenessT()};
    m_nodes.reserve(n);
    for (const TopoNode& tn : topo.nodes) {
      Node node{m_scenario.cacheCapacity, m_scenario.cachePolicy, fibConfig};
      node.id = tn.id;
      node.producerPrefix = tn.prefix;
      node.linkFaceCount = m_faceTable[tn.id].size() - 1;
      node.strategy = m_scenario.strategy;
      node.queryEnabled = kWithQuery && m_scenario.queryEnabled;
      node.queryGateFraction = m_scenario.queryGateFraction;
      node.pitInitTimeout = m_scenario.pitInitTimeout;
      for (std::size_t j = 0; j < m_scenario.namesPerProducer; ++j) {
        char suffix[24];
        std::snprintf(suffix, sizeof(suffix), "/item%03zu", j);
        ContentName name = ContentName::parse(tn.prefix.str() + suffix);
        node.ownedNames.insert(name);
        m_catalog.push_back(std::move(name));
      }
      m_nodes.push_back(std::move(node));
    }

    for (const SeedRoute& r : shortestPathSeedRoutes(topo)) {
      m_nodes[r.node].fib.installRoute(r.prefix,
                                       FaceRecord{r.face, r.metric, r.state, 0});
    }

    // popularity rank -> catalog index, shuffled so the hot set spreads
    // across producers
    m_rankToCatalog.resize(m_catalog.size());
    for (std::size_t i = 0; i < m_rankToCatalog.size(); ++i) {
      m_rankToCatalog[i] = static_cast<std::uint32_t>(i);
    }
    m_rng.shuffle(m_rankToCatalog);
    m_sampler = m_scenario.popularity.model == PopularityModel::Uniform
                  ? PopularitySampler::uniform(m_catalog.size())
                  : PopularitySampler::zipf(m_catalog.size(),
                                            m_scenario.popularity.zipfExponent);

    m_nodeMetrics.assign(n, NodeMetrics{});
    m_outstanding.resize(n);
    m_emitIndex.assign(n, 0);

    if (m_durationMs > 0) {
      for (NodeId i = 0; i < n; ++i) {
        TimeMs t0 = emissionTime(i, 0);
        if (t0 < m_durationMs) {
          schedule(t0, i, kAppFace, std::monostate{});
        }
      }
    }
  }

  TimeMs emissionTime(NodeId node, std::uint64_t k) const
  {
    double interval = 1000.0 / m_scenario.interestRate;
    auto phase = static_cast<TimeMs>(
      std::floor(interval * node / static_cast<double>(m_nodes.size())));
    return phase + static_cast<TimeMs>(
                     std::floor(static_cast<double>(k) * 1000.0 / m_scenario.interestRate));
  }

  template <typename Payload>
  void schedule(TimeMs time, NodeId node, FaceId face, Payload&& payload)
  {
    assert(time >= m_now);
    Event ev;
    ev.time = time;
    ev.seq = m_nextSeq++;
    ev.node = node;
    ev.face = face;
    ev.payload = std::forward<Payload>(payload);
    m_queue.push(std::move(ev));
  }

  void dispatch(Event& ev)
  {
    Node& node = m_nodes[ev.node];
    switch (ev.payload.index()) {
    case 0:
      handleAppEmission(node, ev.time);
      break;
    case 1: {
      auto& interest = std::get<InterestPacket>(ev.payload);
      note(Trace::RxInterest, ev.node, ev.face, interest.name, ev.time);
      processInterest(node, std::move(interest), ev.face, ev.time, *this);
      break;
    }
    case 2: {
      auto& data = std::get<DataPacket>(ev.payload);
      note(Trace::RxData, ev.node, ev.face, data.name, ev.time);
      processData(node, data, ev.face, ev.time, *this);
      break;
    }
    case 3: {
      auto& check = std::get<TimerCheck>(ev.payload);
      if (node.pit.checkExpired(check.name, check.deadline, ev.time)) {
        note(Trace::Timeout, ev.node, kAppFace, check.name, ev.time);
        processPitTimeout(node, check.name, ev.time, *this);
      }
      break;
    }
    }
  }

  void handleAppEmission(Node& node, TimeMs now)
  {
    std::size_t rank = m_sampler.draw(m_rng);
    const ContentName& name = m_catalog[m_rankToCatalog[rank]];
    InterestPacket interest;
    interest.name = name;
    interest.nonce = m_rng.nextU32();
    interest.emitTime = now;
    interest.origin = node.id;

    m_outstanding[node.id][name].push_back(now);
    auto& nm = m_nodeMetrics[node.id];
    nm.emitted += 1;
    nm.interestTx += 1; // the consumer's own emission counts as a transmission
    note(Trace::Emit, node.id, kAppFace, name, now);
    processInterest(node, std::move(interest), kAppFace, now, *this);

    std::uint64_t k = ++m_emitIndex[node.id];
    TimeMs next = emissionTime(node.id, k);
    if (next < m_durationMs) {
      schedule(next, node.id, kAppFace, std::monostate{});
    }
  }

  void deliver(Node& node, const DataPacket& pkt, TimeMs now, bool fromPit)
  {
    auto& ledger = m_outstanding[node.id];
    auto it = ledger.find(pkt.name);
    if (it != ledger.end()) {
      auto& nm = m_nodeMetrics[node.id];
      for (TimeMs emitTime : it->second) {
        nm.satisfied += 1;
        if (fromPit) {
          // response time is measured for forwarded fetches; instant local
          // answers satisfy the interest but contribute no sample
          nm.responseSamples += 1;
          nm.responseSumMs += static_cast<double>(now - emitTime);
        }
      }
      ledger.erase(it);
    }
    note(Trace::Deliver, node.id, kAppFace, pkt.name, now);
  }

  void finalize()
  {
    // whatever is still outstanding after the drain counts unsatisfied
    for (NodeId i = 0; i < m_outstanding.size(); ++i) {
      for (const auto& [name, times] : m_outstanding[i]) {
        m_nodeMetrics[i].unsatisfied += times.size();
      }
      m_outstanding[i].clear();
    }
  }

  MetricsReport buildReport()
  {
    MetricsReport report;
    report.scenarioId = m_scenario.scenarioId();
    report.seed = m_scenario.seed;
    report.strategy = m_scenario.strategy;
    report.policy = m_scenario.cachePolicy;
    report.queryEnabled = kWithQuery && m_scenario.queryEnabled;
    report.cacheFraction = m_scenario.cacheFraction();
    double responseSum = 0;
    std::uint64_t samples = 0;
    for (const NodeMetrics& nm : m_nodeMetrics) {
      report.emitted += nm.emitted;
      report.interestTx += nm.interestTx;
      report.floodEvents += nm.floodEvents;
      report.floodPackets += nm.floodPackets;
      report.retransmissions += nm.retransmissions;
      report.satisfied += nm.satisfied;
      report.unsatisfied += nm.unsatisfied;
      report.responseSamples += nm.responseSamples;
      responseSum += nm.responseSumMs;
      samples += nm.responseSamples;
    }
    report.avgResponseTimeMs =
      samples == 0 ? 0.0 : responseSum / static_cast<double>(samples);
    report.perNode = std::move(m_nodeMetrics);
    report.traceHash = m_traceHash.digest();
    return report;
  }

  void note(Trace kind, NodeId node, FaceId face, const ContentName& name, TimeMs now)
  {
    m_traceHash.mix(static_cast<std::uint64_t>(now))
      .mix(static_cast<std::uint64_t>(kind))
      .mix(node)
      .mix(face)
      .mix(name.str());
    if (m_options.traceOut) {
      *m_options.traceOut << now << ' ' << node << ' ' << traceName(kind) << " f" << face
                          << ' ' << name.str() << '\n';
    }
  }

  Scenario m_scenario;
  EngineOptions m_options;
  SeededRng m_rng;
  std::vector<Node> m_nodes;
  std::vector<std::vector<LinkEnd>> m_faceTable;
  std::vector<ContentName> m_catalog;
  std::vector<std::uint32_t> m_rankToCatalog;
  PopularitySampler m_sampler = PopularitySampler::uniform(1);
  std::vector<NodeMetrics> m_nodeMetrics;
  std::vector<std::unordered_map<ContentName, std::vector<TimeMs>, ContentNameHash>>
    m_outstanding;
  std::vector<std::uint64_t> m_emitIndex;
  std::priority_queue<Event, std::vector<Event>, EventAfter> m_queue;
  std::uint64_t m_nextSeq = 0;
  TimeMs m_now = 0;
  TimeMs m_durationMs = 0;
  TimeMs m_endMs = 0;
  Fnv1a64 m_traceHash;
};

inline MetricsReport runScenario(const Scenario& scenario, const EngineOptions& options = {})
{
  return Engine<true>(scenario, options).run();
}

struct SweepCell {
  Scenario scenario;
  std::optional<MetricsReport> report;
  std::string error; // non-empty when the cell failed
};

/** \brief Cartesian grid of runs over the given axes.
 *
 *  Cells are ordered by (cache fraction, policy, query mode off<on, seed)
 *  and may execute on several worker threads; each cell is an independent
 *  deterministic run, so the ordering of results never depends on timing.
 */
inline std::vector<SweepCell> sweep(const Scenario& base,
                                    std::span<const double> cacheFractions,
                                    std::span<const CachePolicy> policies,
                                    std::span<const bool> queryModes,
                                    std::span<const std::uint64_t> seeds,
                                    unsigned jobs = 0)
{
  std::vector<double> fr{cacheFractions.begin(), cacheFractions.end()};
  std::vector<CachePolicy> po{policies.begin(), policies.end()};
  std::vector<bool> qm{queryModes.begin(), queryModes.end()};
  std::vector<std::uint64_t> sd{seeds.begin(), seeds.end()};
  std::sort(fr.begin(), fr.end());
  std::sort(po.begin(), po.end(),
            [](CachePolicy a, CachePolicy b) { return static_cast<int>(a) < static_cast<int>(b); });
  std::sort(qm.begin(), qm.end());
  std::sort(sd.begin(), sd.end());

  std::vector<SweepCell> cells;
  for (double f : fr) {
    for (CachePolicy p : po) {
      for (bool q : qm) {
        for (std::uint64_t seed : sd) {
          SweepCell cell;
          cell.scenario = base;
          cell.scenario.cachePolicy = p;
          cell.scenario.queryEnabled = q;
          cell.scenario.seed = seed;
          cell.scenario.setCacheFraction(f);
          cells.push_back(std::move(cell));
        }
      }
    }
  }

  unsigned workers = jobs != 0 ? jobs : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, cells.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&cells, &next] {
    for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
      try {
        cells[i].report = runScenario(cells[i].scenario);
      } catch (const std::exception& e) {
        cells[i].error = e.what();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) {
      pool.emplace_back(work);
    }
    for (std::thread& t : pool) {
      t.join();
    }
  }
  return cells;
}

} // namespace ccnsim
