#pragma once

#include "hash.hpp"
#include "name.hpp"
#include "packet.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace ccnsim {

enum class FaceState { Green, Yellow };

struct FaceRecord {
  FaceId face = 0;
  TimeMs metric = 0; // response time to obtain content via this face
  FaceState state = FaceState::Yellow;
  TimeMs lastDataTime = 0; // newest data seen via this face for this name

  friend bool operator==(const FaceRecord&, const FaceRecord&) = default;
};

struct FibConfig {
  std::size_t maxGreen = 2;
  TimeMs stalenessT = 4800; // green faces idle longer than this get demoted
};

/// Route-staleness threshold in ms: the time a full cache of C chunks takes
/// to turn over at F contents per second.
inline TimeMs fibThreshold(double cacheSizeChunks, double contentsPerSecond)
{
  if (cacheSizeChunks <= 0 || contentsPerSecond <= 0) {
    throw std::invalid_argument(
      "fibThreshold: cache size and content rate must be positive");
  }
  return static_cast<TimeMs>(std::llround(1000.0 * cacheSizeChunks / contentsPerSecond));
}

struct FibEntry {
  ContentName name;
  std::vector<FaceRecord> faces; // greens by metric, then yellows by metric

  std::size_t greenCount() const
  {
    return static_cast<std::size_t>(
      std::count_if(faces.begin(), faces.end(),
                    [](const FaceRecord& r) { return r.state == FaceState::Green; }));
  }

  const FaceRecord* findFace(FaceId face) const
  {
    for (const FaceRecord& r : faces) {
      if (r.face == face) {
        return &r;
      }
    }
    return nullptr;
  }
};

/** \brief Forwarding Information Base with green/yellow face states.
 *
 *  Faces of an entry stay sorted: green before yellow, ascending metric
 *  within a state, face id as tie-break. updateEntryFace() implements the
 *  routing-table update rules: a new face enters green while the green list
 *  has room; once full it either displaces the worst green (when its
 *  response time is better) or triggers the staleness scan that demotes
 *  greens idle longer than stalenessT, taking a freed slot if that opens
 *  one; otherwise it is recorded yellow.
 */
class Fib {
public:
  /// Entries never grow beyond this many faces; worst yellow is dropped.
  static constexpr std::size_t kMaxFacesPerEntry = 8;

  explicit Fib(FibConfig config)
    : m_config(config)
  {
  }

  void updateEntryFace(const ContentName& name, FaceId face, TimeMs responseTime,
                       TimeMs now)
  {
    if (responseTime <= 0) {
      responseTime = 1; // metric stays positive
    }
    auto [it, created] = m_entries.try_emplace(name);
    FibEntry& entry = it->second;
    if (created) {
      entry.name = name;
    }

    for (FaceRecord& rec : entry.faces) {
      if (rec.face == face) {
        // known face: refresh, promote when the green list has room
        rec.metric = responseTime;
        rec.lastDataTime = now;
        if (rec.state == FaceState::Yellow && entry.greenCount() < m_config.maxGreen) {
          rec.state = FaceState::Green;
        }
        resort(entry);
        return;
      }
    }

    FaceRecord fresh;
    fresh.face = face;
    fresh.metric = responseTime;
    fresh.lastDataTime = now;
    std::size_t greens = entry.greenCount();
    if (greens < m_config.maxGreen) {
      fresh.state = FaceState::Green;
    } else {
      FaceRecord& worstGreen = entry.faces[greens - 1]; // ordered: last green
      if (responseTime < worstGreen.metric) {
        worstGreen.state = FaceState::Yellow;
        fresh.state = FaceState::Green;
      } else {
        for (FaceRecord& rec : entry.faces) {
          if (rec.state == FaceState::Green &&
              now - rec.lastDataTime > m_config.stalenessT) {
            rec.state = FaceState::Yellow;
          }
        }
        if (entry.greenCount() < m_config.maxGreen) {
          fresh.state = FaceState::Green;
        }
      }
    }
    entry.faces.push_back(fresh);
    if (entry.faces.size() > kMaxFacesPerEntry) {
      dropWorstYellow(entry);
    }
    resort(entry);
  }

  /// Ranked faces for a name: the union of the exact entry's faces and the
  /// faces of every matching prefix entry, in canonical order (green before
  /// yellow, ascending metric). A face known to several entries keeps its
  /// best-ranked record. Exact routes thus win exactly when their measured
  /// response time beats the fallback routes, and prefix routes stay
  /// reachable for retransmissions; empty when nothing matches.
  std::vector<FaceRecord> lookup(const ContentName& name) const
  {
    std::vector<FaceRecord> out;
    if (const FibEntry* exact = findExact(name)) {
      out = exact->faces;
    }
    for (ContentName p = name.parentPrefix(); !p.empty(); p = p.parentPrefix()) {
      if (const FibEntry* entry = findExact(p)) {
        out.insert(out.end(), entry->faces.begin(), entry->faces.end());
      }
    }
    std::sort(out.begin(), out.end(), rankBefore);
    auto seen = [&out](const FaceRecord& r, std::size_t upto) {
      for (std::size_t i = 0; i < upto; ++i) {
        if (out[i].face == r.face) {
          return true;
        }
      }
      return false;
    };
    std::size_t kept = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (!seen(out[i], kept)) {
        out[kept++] = out[i];
      }
    }
    out.resize(kept);
    return out;
  }

  std::optional<FaceRecord> bestGreen(const ContentName& name) const
  {
    auto faces = lookup(name);
    if (!faces.empty() && faces.front().state == FaceState::Green) {
      return faces.front();
    }
    return std::nullopt;
  }

  /// Bootstrap insertion of a preloaded route; normal learning goes through
  /// updateEntryFace().
  void installRoute(const ContentName& name, const FaceRecord& record)
  {
    auto [it, created] = m_entries.try_emplace(name);
    FibEntry& entry = it->second;
    if (created) {
      entry.name = name;
    }
    assert(entry.findFace(record.face) == nullptr);
    assert(record.state == FaceState::Yellow || entry.greenCount() < m_config.maxGreen);
    entry.faces.push_back(record);
    if (entry.faces.size() > kMaxFacesPerEntry) {
      dropWorstYellow(entry);
    }
    resort(entry);
  }

  const FibEntry* findExact(const ContentName& name) const
  {
    auto it = m_entries.find(name);
    return it == m_entries.end() ? nullptr : &it->second;
  }

  std::size_t entryCount() const { return m_entries.size(); }

  const FibConfig& config() const { return m_config; }

  std::uint64_t stateHash() const
  {
    std::vector<const FibEntry*> sorted;
    sorted.reserve(m_entries.size());
    for (const auto& [name, entry] : m_entries) {
      sorted.push_back(&entry);
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const FibEntry* a, const FibEntry* b) { return a->name < b->name; });
    Fnv1a64 h;
    for (const FibEntry* entry : sorted) {
      h.mix(entry->name.str());
      for (const FaceRecord& r : entry->faces) {
        h.mix(std::uint64_t{r.face});
        h.mix(static_cast<std::uint64_t>(r.metric));
        h.mix(r.state == FaceState::Green ? 1u : 2u);
        h.mix(static_cast<std::uint64_t>(r.lastDataTime));
      }
    }
    return h.digest();
  }

private:
  static bool rankBefore(const FaceRecord& a, const FaceRecord& b)
  {
    if (a.state != b.state) {
      return a.state == FaceState::Green;
    }
    if (a.metric != b.metric) {
      return a.metric < b.metric;
    }
    return a.face < b.face;
  }

  static void resort(FibEntry& entry)
  {
    std::sort(entry.faces.begin(), entry.faces.end(), rankBefore);
  }

  static void dropWorstYellow(FibEntry& entry)
  {
    auto worst = entry.faces.end();
    for (auto it = entry.faces.begin(); it != entry.faces.end(); ++it) {
      if (it->state != FaceState::Yellow) {
        continue;
      }
      if (worst == entry.faces.end() || it->metric > worst->metric ||
          (it->metric == worst->metric && it->face > worst->face)) {
        worst = it;
      }
    }
    assert(worst != entry.faces.end());
    entry.faces.erase(worst);
  }

  std::unordered_map<ContentName, FibEntry, ContentNameHash> m_entries;
  FibConfig m_config;
};

} // namespace ccnsim
