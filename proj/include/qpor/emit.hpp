#pragma once

#include <span>
#include <string>

#include "qpor/explorer.hpp"

namespace qpor {

// Graphviz rendering of a set of events. Solid arrows are immediate
// causality, dotted lines join lock-tree siblings, which are the events in
// immediate conflict.
std::string export_dot (const EventStore &s, std::span<const EventId> events);

// The live events U of the store.
std::string export_dot (const EventStore &s);

// Exploration statistics as a JSON object. The keys max_configs, ssbs,
// events, assert_violations, blocked_deadlocks, time_ms and phase_ms are
// always present.
std::string stats_json (const ExplorationStats &st, const AltConfig &alt);

} // namespace qpor
