#pragma once

#include "hash.hpp"
#include "name.hpp"
#include "packet.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace ccnsim {

class MissingEntryError : public std::runtime_error {
public:
  explicit MissingEntryError(const ContentName& name)
    : std::runtime_error("no pending-interest entry for " + name.str())
  {
  }
};

enum class PitDecision { ForwardNeeded, Aggregated, DuplicateDropped };

struct PitEntry {
  static constexpr TimeMs kNoDeadline = std::numeric_limits<TimeMs>::max();

  ContentName name;
  std::vector<FaceId> inFaces;  // sorted; disjoint from outFaces
  std::vector<FaceId> outFaces; // sorted
  std::vector<Nonce> nonces;    // every nonce accepted into this entry
  std::uint64_t requestCount = 0;
  TimeMs createTime = 0;
  TimeMs timerDeadline = kNoDeadline;
  bool timerFired = true; // nothing pending until setTimer()
  std::uint32_t retryCursor = 0;  // retransmission attempts so far
  std::int64_t retransCap = -1;   // frozen at first timeout; -1 = not yet

  bool hasNonce(Nonce nonce) const
  {
    return std::find(nonces.begin(), nonces.end(), nonce) != nonces.end();
  }
};

/** \brief Pending Interest Table.
 *
 *  One entry per name. Duplicate nonces are dropped without touching the
 *  entry; further interests for a pending name aggregate into it. The
 *  aggregated request count is the popularity signal mostPopular() ranks.
 */
class Pit {
public:
  PitDecision onInterest(const InterestPacket& interest, FaceId inFace, TimeMs now)
  {
    auto it = m_entries.find(interest.name);
    if (it != m_entries.end()) {
      PitEntry& entry = it->second;
      if (entry.hasNonce(interest.nonce)) {
        return PitDecision::DuplicateDropped;
      }
      entry.nonces.push_back(interest.nonce);
      addFace(entry.inFaces, inFace);
      removeFace(entry.outFaces, inFace); // in-face wins, sets stay disjoint
      entry.requestCount += 1;
      return PitDecision::Aggregated;
    }
    PitEntry entry;
    entry.name = interest.name;
    entry.inFaces.push_back(inFace);
    entry.nonces.push_back(interest.nonce);
    entry.requestCount = 1;
    entry.createTime = now;
    m_entries.emplace(interest.name, std::move(entry));
    return PitDecision::ForwardNeeded;
  }

  /// Extends out-faces; faces already recorded as in-faces are rejected.
  void recordOut(const ContentName& name, std::span<const FaceId> faces)
  {
    PitEntry& entry = require(name);
    for (FaceId face : faces) {
      if (!contains(entry.inFaces, face)) {
        addFace(entry.outFaces, face);
      }
    }
  }

  /// Satisfies and removes the entry; nothing when the data is unsolicited.
  std::optional<PitEntry> take(const ContentName& name)
  {
    auto it = m_entries.find(name);
    if (it == m_entries.end()) {
      return std::nullopt;
    }
    PitEntry entry = std::move(it->second);
    m_entries.erase(it);
    return entry;
  }

  /// In-faces of the matching entry, removing it; empty set on unsolicited data.
  std::vector<FaceId> onData(const ContentName& name)
  {
    auto entry = take(name);
    return entry ? std::move(entry->inFaces) : std::vector<FaceId>{};
  }

  /** \brief Name of the live entry with the highest request count, skipping
   *  `exclude`. Ties: more in-faces, then later creation, then name order.
   */
  std::optional<ContentName> mostPopular(const ContentName& exclude) const
  {
    const PitEntry* best = nullptr;
    for (const auto& [name, entry] : m_entries) {
      if (name == exclude) {
        continue;
      }
      if (!best || precedes(entry, *best)) {
        best = &entry;
      }
    }
    if (!best) {
      return std::nullopt;
    }
    return best->name;
  }

  void setTimer(const ContentName& name, TimeMs deadline)
  {
    PitEntry& entry = require(name);
    entry.timerDeadline = deadline;
    entry.timerFired = false;
  }

  /// Entries whose deadline has passed, in name order. Each deadline is
  /// reported at most once; entries stay in the table.
  std::vector<ContentName> expired(TimeMs now)
  {
    std::vector<ContentName> names;
    for (auto& [name, entry] : m_entries) {
      if (!entry.timerFired && entry.timerDeadline <= now) {
        entry.timerFired = true;
        names.push_back(name);
      }
    }
    std::sort(names.begin(), names.end());
    return names;
  }

  /// Targeted form of expired() for a single entry and a known deadline.
  bool checkExpired(const ContentName& name, TimeMs deadline, TimeMs now)
  {
    PitEntry* entry = find(name);
    if (!entry || entry->timerFired || entry->timerDeadline != deadline ||
        entry->timerDeadline > now) {
      return false;
    }
    entry->timerFired = true;
    return true;
  }

  PitEntry* find(const ContentName& name)
  {
    auto it = m_entries.find(name);
    return it == m_entries.end() ? nullptr : &it->second;
  }

  const PitEntry* find(const ContentName& name) const
  {
    auto it = m_entries.find(name);
    return it == m_entries.end() ? nullptr : &it->second;
  }

  bool erase(const ContentName& name) { return m_entries.erase(name) != 0; }

  std::size_t size() const { return m_entries.size(); }

  std::uint64_t stateHash() const
  {
    std::vector<const PitEntry*> sorted;
    sorted.reserve(m_entries.size());
    for (const auto& [name, entry] : m_entries) {
      sorted.push_back(&entry);
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const PitEntry* a, const PitEntry* b) { return a->name < b->name; });
    Fnv1a64 h;
    for (const PitEntry* entry : sorted) {
      h.mix(entry->name.str());
      for (FaceId f : entry->inFaces) {
        h.mix(std::uint64_t{f} + 1);
      }
      h.mix(std::uint64_t{0xf0f0});
      for (FaceId f : entry->outFaces) {
        h.mix(std::uint64_t{f} + 1);
      }
      for (Nonce n : entry->nonces) {
        h.mix(std::uint64_t{n});
      }
      h.mix(entry->requestCount);
      h.mix(static_cast<std::uint64_t>(entry->createTime));
      h.mix(static_cast<std::uint64_t>(entry->timerDeadline));
      h.mix(static_cast<std::uint64_t>(entry->retryCursor));
    }
    return h.digest();
  }

private:
  /// Popularity order: a before b when a is the better query candidate.
  static bool precedes(const PitEntry& a, const PitEntry& b)
  {
    if (a.requestCount != b.requestCount) {
      return a.requestCount > b.requestCount;
    }
    if (a.inFaces.size() != b.inFaces.size()) {
      return a.inFaces.size() > b.inFaces.size();
    }
    if (a.createTime != b.createTime) {
      return a.createTime > b.createTime;
    }
    return a.name < b.name;
  }

  PitEntry& require(const ContentName& name)
  {
    auto it = m_entries.find(name);
    if (it == m_entries.end()) {
      throw MissingEntryError(name);
    }
    return it->second;
  }

  static bool contains(const std::vector<FaceId>& faces, FaceId face)
  {
    return std::binary_search(faces.begin(), faces.end(), face);
  }

  static void addFace(std::vector<FaceId>& faces, FaceId face)
  {
    auto it = std::lower_bound(faces.begin(), faces.end(), face);
    if (it == faces.end() || *it != face) {
      faces.insert(it, face);
    }
  }

  static void removeFace(std::vector<FaceId>& faces, FaceId face)
  {
    auto it = std::lower_bound(faces.begin(), faces.end(), face);
    if (it != faces.end() && *it == face) {
      faces.erase(it);
    }
  }

  std::unordered_map<ContentName, PitEntry, ContentNameHash> m_entries;
};

} // namespace ccnsim
