#pragma once

#include "hash.hpp"
#include "name.hpp"
#include "packet.hpp"

#include <cassert>
#include <cstdint>
#include <iterator>
#include <optional>
#include <set>
#include <string_view>
#include <unordered_map>

namespace ccnsim {

enum class CachePolicy { Lru, Lfu, Fifo };

inline const char* toString(CachePolicy policy)
{
  switch (policy) {
  case CachePolicy::Lru:
    return "lru";
  case CachePolicy::Lfu:
    return "lfu";
  case CachePolicy::Fifo:
    return "fifo";
  }
  return "?";
}

inline std::optional<CachePolicy> cachePolicyFromString(std::string_view s)
{
  if (s == "lru") {
    return CachePolicy::Lru;
  }
  if (s == "lfu") {
    return CachePolicy::Lfu;
  }
  if (s == "fifo") {
    return CachePolicy::Fifo;
  }
  return std::nullopt;
}

/// Bookkeeping for one cached data packet.
struct CsRecord {
  ContentName name;
  std::uint32_t payloadSize = 0;
  TimeMs lastAccess = 0;
  TimeMs insertTime = 0;
  std::uint64_t hitCount = 0; // lookup hits only; insertion is not a hit
};

/** \brief Capacity-bounded per-node cache with pluggable replacement.
 *
 *  Eviction follows a total order: the policy key first (LRU last access,
 *  LFU hit count, FIFO insert time; smaller evicts first), canonical name
 *  text as the tie-break. The same order drives survivalRank(), the
 *  normalized distance of an entry from eviction that the query-answer
 *  gate consults.
 */
class ContentStore {
public:
  ContentStore(std::size_t capacity, CachePolicy policy)
    : m_capacity(capacity)
    , m_policy(policy)
  {
  }

  ContentStore(const ContentStore& other) { *this = other; }

  ContentStore& operator=(const ContentStore& other)
  {
    if (this != &other) {
      m_capacity = other.m_capacity;
      m_policy = other.m_policy;
      m_entries = other.m_entries;
      m_order.clear();
      for (const auto& [name, rec] : m_entries) {
        m_order.insert(OrderKey{policyKey(rec), &rec.name});
      }
    }
    return *this;
  }

  /// Exact-name lookup. A hit refreshes last access and hit count.
  std::optional<DataPacket> lookup(const ContentName& name, TimeMs now)
  {
    auto it = m_entries.find(name);
    if (it == m_entries.end()) {
      return std::nullopt;
    }
    CsRecord& rec = it->second;
    std::int64_t oldKey = policyKey(rec);
    rec.lastAccess = now;
    rec.hitCount += 1;
    if (policyKey(rec) != oldKey) {
      reindex(rec, oldKey);
    }
    DataPacket data;
    data.name = rec.name;
    data.payloadSize = rec.payloadSize;
    return data;
  }

  /// Caches a data packet; returns the evicted name when the store was full.
  /// Re-inserting a cached name refreshes its last access and evicts nothing.
  std::optional<ContentName> insert(const DataPacket& data, TimeMs now)
  {
    assert(!data.name.empty());
    auto it = m_entries.find(data.name);
    if (it != m_entries.end()) {
      CsRecord& rec = it->second;
      std::int64_t oldKey = policyKey(rec);
      rec.lastAccess = now;
      if (policyKey(rec) != oldKey) {
        reindex(rec, oldKey);
      }
      return std::nullopt;
    }
    if (m_capacity == 0) {
      return std::nullopt;
    }
    std::optional<ContentName> victim;
    if (m_entries.size() == m_capacity) {
      auto victimIt = m_order.begin();
      victim = *victimIt->name;
      m_order.erase(victimIt);
      m_entries.erase(*victim);
    }
    CsRecord rec;
    rec.name = data.name;
    rec.payloadSize = data.payloadSize;
    rec.lastAccess = now;
    rec.insertTime = now;
    auto [pos, inserted] = m_entries.emplace(data.name, std::move(rec));
    assert(inserted);
    m_order.insert(OrderKey{policyKey(pos->second), &pos->second.name});
    return victim;
  }

  /// Normalized eviction distance: 0 = farthest from eviction, (n-1)/n =
  /// next victim. Nothing on a miss.
  std::optional<double> survivalRank(const ContentName& name) const
  {
    auto it = m_entries.find(name);
    if (it == m_entries.end()) {
      return std::nullopt;
    }
    const CsRecord& rec = it->second;
    auto pos = m_order.find(OrderKey{policyKey(rec), &rec.name});
    assert(pos != m_order.end());
    auto evictPos = static_cast<std::size_t>(std::distance(m_order.begin(), pos));
    std::size_t n = m_entries.size();
    return static_cast<double>(n - 1 - evictPos) / static_cast<double>(n);
  }

  /// True when the entry ranks inside the best thresholdFraction of the
  /// eviction order. Misses are never long-lived.
  bool isLongLived(const ContentName& name, double thresholdFraction) const
  {
    assert(thresholdFraction > 0 && thresholdFraction <= 1);
    auto rank = survivalRank(name);
    return rank && *rank < thresholdFraction;
  }

  std::size_t size() const { return m_entries.size(); }
  std::size_t capacity() const { return m_capacity; }
  CachePolicy policy() const { return m_policy; }

  bool contains(const ContentName& name) const { return m_entries.count(name) != 0; }

  const CsRecord* find(const ContentName& name) const
  {
    auto it = m_entries.find(name);
    return it == m_entries.end() ? nullptr : &it->second;
  }

  std::uint64_t stateHash() const
  {
    Fnv1a64 h;
    for (const OrderKey& key : m_order) {
      const CsRecord& rec = m_entries.at(*key.name);
      h.mix(rec.name.str());
      h.mix(static_cast<std::uint64_t>(rec.lastAccess));
      h.mix(static_cast<std::uint64_t>(rec.insertTime));
      h.mix(rec.hitCount);
      h.mix(rec.payloadSize);
    }
    return h.digest();
  }

private:
  struct OrderKey {
    std::int64_t key;
    const ContentName* name;
  };

  struct OrderLess {
    bool operator()(const OrderKey& a, const OrderKey& b) const
    {
      if (a.key != b.key) {
        return a.key < b.key;
      }
      return *a.name < *b.name;
    }
  };

  std::int64_t policyKey(const CsRecord& rec) const
  {
    switch (m_policy) {
    case CachePolicy::Lru:
      return rec.lastAccess;
    case CachePolicy::Lfu:
      return static_cast<std::int64_t>(rec.hitCount);
    case CachePolicy::Fifo:
      return rec.insertTime;
    }
    return 0;
  }

  void reindex(const CsRecord& rec, std::int64_t oldKey)
  {
    m_order.erase(OrderKey{oldKey, &rec.name});
    m_order.insert(OrderKey{policyKey(rec), &rec.name});
  }

  std::size_t m_capacity;
  CachePolicy m_policy;
  std::unordered_map<ContentName, CsRecord, ContentNameHash> m_entries;
  std::set<OrderKey, OrderLess> m_order; // begin() = next victim
};

} // namespace ccnsim
