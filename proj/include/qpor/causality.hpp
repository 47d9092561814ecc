#pragma once

#include "qpor/event_store.hpp"

namespace qpor {

bool causally_less (const EventStore &s, EventId a, EventId b);

inline bool causally_leq (const EventStore &s, EventId a, EventId b)
{
   return a == b || causally_less (s, a, b);
}

// Bottom is in conflict with nothing.
bool in_conflict (const EventStore &s, EventId a, EventId b);

// Whether e conflicts with some event of the configuration whose maximal
// events per thread are given by the cut. Only the cut needs checking,
// since conflict is inherited upwards through causality.
bool conflicts_with_cut (const EventStore &s, EventId e, std::span<const EventId> thread_cut);

} // namespace qpor
