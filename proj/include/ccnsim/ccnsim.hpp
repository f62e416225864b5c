#pragma once

// Umbrella header for the whole simulator.

#include "content_store.hpp" // IWYU pragma: export
#include "engine.hpp"        // IWYU pragma: export
#include "fib.hpp"           // IWYU pragma: export
#include "forwarding.hpp"    // IWYU pragma: export
#include "metrics.hpp"       // IWYU pragma: export
#include "name.hpp"          // IWYU pragma: export
#include "packet.hpp"        // IWYU pragma: export
#include "pit.hpp"           // IWYU pragma: export
#include "random.hpp"        // IWYU pragma: export
#include "scenario.hpp"      // IWYU pragma: export
#include "topology.hpp"      // IWYU pragma: export
