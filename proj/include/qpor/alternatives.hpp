#pragma once

// k-partial alternatives: the comb built over the live events U and the
// search for a pairwise conflict-free combination of its spikes.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "qpor/event_store.hpp"

namespace qpor {

struct AltConfig
{
   static constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max ();

   AltConfig () = default;
   explicit AltConfig (std::size_t k);

   std::size_t k = kUnbounded;

   bool unbounded () const { return k == kUnbounded; }
};

struct Comb
{
   std::vector<EventId> targets;             // the events of D the spikes answer
   std::vector<std::vector<EventId>> spikes; // in search order
};

struct AltStats
{
   std::uint64_t calls = 0;
   std::uint64_t found = 0;
   std::uint64_t visits = 0;        // candidate placements tried by the search
   std::uint64_t spike_events = 0;  // events kept in spikes after filtering
};

// D is ordered by the time its events were disabled, most recent last.
Comb build_comb (const EventStore &s, const Configuration &c, std::span<const EventId> d,
   const AltConfig &cfg);

// One event per spike, pairwise not in conflict; the first found.
std::optional<std::vector<EventId>> search_comb (const EventStore &s, const Comb &comb,
   AltStats *stats = nullptr);

// A clue J to D after C that is an alternative to the k most recent events
// of D, as the union of the local configurations of a comb solution.
std::optional<std::vector<EventId>> alt (const EventStore &s, const Configuration &c,
   std::span<const EventId> d, const AltConfig &cfg, AltStats *stats = nullptr);

bool is_configuration (const EventStore &s, std::span<const EventId> events);

bool is_clue (const EventStore &s, std::span<const EventId> j, std::span<const EventId> c,
   std::span<const EventId> d);

// A clue that conflicts with every event of D.
bool is_alternative (const EventStore &s, std::span<const EventId> j, std::span<const EventId> c,
   std::span<const EventId> d);

} // namespace qpor
