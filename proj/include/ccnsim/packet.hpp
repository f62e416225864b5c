#pragma once

#include "name.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace ccnsim {

using NodeId = std::uint32_t;
using FaceId = std::uint32_t;

/// Simulation time in milliseconds.
using TimeMs = std::int64_t;

/// Random tag on an interest; an already-recorded nonce marks a duplicate.
using Nonce = std::uint32_t;

/// Every node reserves face 0 for its local application.
inline constexpr FaceId kAppFace = 0;

/// Answer to a piggybacked cache probe: where the probed name is held.
struct QueryResult {
  ContentName name;
  NodeId holder = 0;

  friend bool operator==(const QueryResult&, const QueryResult&) = default;
};

struct InterestPacket {
  ContentName name;
  std::string selector;                 // carried opaquely, never interpreted
  Nonce nonce = 0;
  std::optional<ContentName> queryName; // cache probe riding on this interest
  TimeMs emitTime = 0;                  // set once at consumer emission
  NodeId origin = 0;
};

struct DataPacket {
  ContentName name;
  std::uint32_t payloadSize = 0;
  std::string signature;     // carried opaquely
  std::string signatureInfo; // carried opaquely
  std::optional<QueryResult> queryResult;
};

} // namespace ccnsim
