#pragma once

#include "content_store.hpp"
#include "fib.hpp"
#include "packet.hpp"
#include "pit.hpp"
#include "scenario.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_set>
#include <vector>

namespace ccnsim {

inline constexpr std::uint32_t kDefaultPayloadSize = 1024;

/// Shortest timer a green-face metric may produce.
inline constexpr TimeMs kMinPitTimerMs = 50;

/** \brief One router: its tables plus the per-node configuration.
 *
 *  Link faces are numbered 1..linkFaceCount; face 0 is the application.
 */
struct Node {
  NodeId id = 0;
  ContentName producerPrefix;
  std::unordered_set<ContentName, ContentNameHash> ownedNames;
  std::size_t linkFaceCount = 0;
  ForwardingStrategy strategy = ForwardingStrategy::SmartFlooding;
  bool queryEnabled = false;
  double queryGateFraction = 0.5;
  TimeMs pitInitTimeout = 2000;
  ContentStore cs;
  Pit pit;
  Fib fib;

  Node(std::size_t cacheCapacity, CachePolicy cachePolicy, FibConfig fibConfig)
    : cs(cacheCapacity, cachePolicy)
    , fib(fibConfig)
  {
  }

  bool owns(const ContentName& name) const { return ownedNames.count(name) != 0; }
};

struct StrategyChoice {
  std::vector<FaceId> faces;
  bool flooded = false; // smart-flooding fan-out of size >= 2
};

/** \brief Out-face selection for an (re)transmission attempt.
 *
 *  Best route walks the ranked face list one position per attempt, the
 *  arrival face excluded; off the end means give up. Smart flooding sends
 *  to the best green face on the first attempt and otherwise fans out to
 *  every face of the entry, falling back to every link face except the
 *  arrival face when the table knows none.
 */
inline StrategyChoice selectFaces(const Node& node, const ContentName& name,
                                  FaceId inFace, std::uint32_t attempt)
{
  auto all = node.fib.lookup(name);
  std::vector<FaceId> candidates;
  candidates.reserve(all.size());
  for (const FaceRecord& r : all) {
    if (r.face != inFace) {
      candidates.push_back(r.face);
    }
  }

  StrategyChoice choice;
  if (node.strategy == ForwardingStrategy::BestRoute) {
    if (attempt < candidates.size()) {
      choice.faces.push_back(candidates[attempt]);
    }
    return choice;
  }

  if (attempt == 0) {
    for (const FaceRecord& r : all) {
      if (r.face != inFace && r.state == FaceState::Green) {
        choice.faces.push_back(r.face); // ordered list: first green is best
        return choice;
      }
    }
  }
  choice.faces = std::move(candidates);
  if (choice.faces.empty()) {
    for (FaceId f = 1; f <= node.linkFaceCount; ++f) {
      if (f != inFace) {
        choice.faces.push_back(f);
      }
    }
  }
  choice.flooded = choice.faces.size() >= 2;
  return choice;
}

/// Timer for a pending entry: twice the green metric when a single green
/// face was chosen (floored), the initialization value otherwise.
inline TimeMs pitTimerDeadline(const Node& node, const ContentName& name,
                               const StrategyChoice& choice, TimeMs now)
{
  if (choice.faces.size() == 1) {
    for (const FaceRecord& r : node.fib.lookup(name)) {
      if (r.face == choice.faces.front() && r.state == FaceState::Green) {
        return now + std::max<TimeMs>(2 * r.metric, kMinPitTimerMs);
      }
    }
  }
  return now + node.pitInitTimeout;
}

namespace detail {

template <class Env>
void attachQueryAnswer(Node& node, const InterestPacket& interest, DataPacket& data,
                       Env& env)
{
  if (node.queryEnabled && interest.queryName &&
      env.queryGateOpen(node, *interest.queryName)) {
    data.queryResult = QueryResult{*interest.queryName, node.id};
    env.noteQueryAnswer(node);
  }
}

} // namespace detail

/** \brief Interest pipeline.
 *
 *  Content store first, producer ownership second, then the pending-interest
 *  table, then strategy selection. Query handling (compiled in only when
 *  Env::kWithQuery): a router that answers from its store or as producer
 *  also checks the piggybacked query name against the store and attaches a
 *  query result when that name is ranked long-lived; the first-hop router
 *  stamps the currently most popular pending name onto an interest arriving
 *  from the application.
 */
template <class Env>
void processInterest(Node& node, InterestPacket interest, FaceId inFace, TimeMs now,
                     Env& env)
{
  // content store
  if (auto data = node.cs.lookup(interest.name, now)) {
    if constexpr (Env::kWithQuery) {
      detail::attachQueryAnswer(node, interest, *data, env);
    }
    env.sendData(node, inFace, *data, now, false);
    return;
  }

  // producer answers from the application face, no service delay
  if (node.owns(interest.name)) {
    DataPacket data;
    data.name = interest.name;
    data.payloadSize = kDefaultPayloadSize;
    if constexpr (Env::kWithQuery) {
      detail::attachQueryAnswer(node, interest, data, env);
    }
    env.sendData(node, inFace, data, now, false);
    return;
  }

  // pending-interest table
  switch (node.pit.onInterest(interest, inFace, now)) {
  case PitDecision::DuplicateDropped:
    env.noteDuplicateDrop(node, interest.name, now);
    return;
  case PitDecision::Aggregated:
    return;
  case PitDecision::ForwardNeeded:
    break;
  }

  // first-hop router picks the probe name
  if constexpr (Env::kWithQuery) {
    if (node.queryEnabled && !interest.queryName && inFace == kAppFace) {
      interest.queryName = node.pit.mostPopular(interest.name);
      if (interest.queryName) {
        env.noteQueryProbe(node);
      }
    }
  }

  // strategy decides the out-faces
  StrategyChoice choice = selectFaces(node, interest.name, inFace, 0);
  if (choice.faces.empty()) {
    node.pit.erase(interest.name);
    env.noteGiveUp(node, interest.name, now);
    return;
  }
  node.pit.recordOut(interest.name, choice.faces);
  env.armPitTimer(node, interest.name, pitTimerDeadline(node, interest.name, choice, now));
  if (choice.flooded) {
    env.noteFlood(node, choice.faces.size());
  }
  for (FaceId f : choice.faces) {
    env.sendInterest(node, f, interest, now);
  }
}

/** \brief Data pipeline.
 *
 *  Satisfies the pending entry, feeds the response time into the FIB for
 *  the content name (and for the carried query result when present), caches
 *  the data, and forwards copies toward every recorded in-face.
 */
template <class Env>
void processData(Node& node, const DataPacket& data, FaceId inFace, TimeMs now, Env& env)
{
  auto entry = node.pit.take(data.name);
  if (!entry) {
    env.noteUnsolicited(node, data.name, now);
    return;
  }
  TimeMs responseTime = std::max<TimeMs>(now - entry->createTime, 1);
  node.fib.updateEntryFace(data.name, inFace, responseTime, now);
  if constexpr (Env::kWithQuery) {
    if (node.queryEnabled && data.queryResult) {
      node.fib.updateEntryFace(data.queryResult->name, inFace, responseTime, now);
      env.noteQueryRouteLearned(node);
    }
  }
  node.cs.insert(data, now);
  for (FaceId f : entry->inFaces) {
    env.sendData(node, f, data, now, true);
  }
}

/** \brief Timer expiry: retransmit through the next strategy choice or give up.
 *
 *  The retransmission budget is frozen at the first timeout to the number
 *  of faces the FIB then knows for the name; exhausting it (or running out
 *  of strategy choices) deletes the entry and counts it unsatisfied.
 */
template <class Env>
void processPitTimeout(Node& node, const ContentName& name, TimeMs now, Env& env)
{
  PitEntry* entry = node.pit.find(name);
  if (!entry) {
    return;
  }
  std::uint32_t attempt = ++entry->retryCursor;
  if (entry->retransCap < 0) {
    entry->retransCap = static_cast<std::int64_t>(node.fib.lookup(name).size());
  }
  StrategyChoice choice;
  if (attempt <= entry->retransCap) {
    FaceId exclude = entry->inFaces.empty() ? kAppFace : entry->inFaces.front();
    choice = selectFaces(node, name, exclude, attempt);
  }
  if (choice.faces.empty()) {
    node.pit.erase(name);
    env.noteGiveUp(node, name, now);
    return;
  }
  env.noteRetransmission(node, name, now);

  InterestPacket retx;
  retx.name = name;
  retx.nonce = env.freshNonce();
  retx.emitTime = now;
  retx.origin = node.id;
  entry->nonces.push_back(retx.nonce); // loop protection against echoes
  node.pit.recordOut(name, choice.faces);
  env.armPitTimer(node, name, pitTimerDeadline(node, name, choice, now));
  if (choice.flooded) {
    env.noteFlood(node, choice.faces.size());
  }
  for (FaceId f : choice.faces) {
    env.sendInterest(node, f, retx, now);
  }
}

} // namespace ccnsim
