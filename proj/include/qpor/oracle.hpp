#pragma once

// Brute-force reference implementations used to validate the explorer:
// interleaving enumeration, trace normal forms, and the unfolding built as
// a literal fixpoint over configurations.

#include <cstdint>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "qpor/event_store.hpp"

namespace qpor {

struct OracleLimits
{
   std::size_t max_runs = 10000;
   std::size_t max_events = 2000;
   std::size_t max_configs = 2000000;
   StepLimits steps;
};

struct LimitExceeded : Error
{
   using Error::Error;
};

// Every maximal run, by depth-first search over the interleavings.
std::vector<std::vector<Action>> enumerate_runs (const Program &p, const OracleLimits &lim = {});

// The least linearization of the run's dependency graph, ordering the
// occurrences by thread. Two runs are equivalent iff their forms agree.
struct TraceClass
{
   std::vector<Action> canonical;
   friend auto operator<=> (const TraceClass &, const TraceClass &) = default;
};

TraceClass canonicalize (std::span<const Action> run);

// One canonical run per equivalence class of maximal runs, found without
// enumerating the other members of each class.
std::vector<TraceClass> enumerate_trace_classes (const Program &p, const OracleLimits &lim = {});

//------------------------------------------------------------------------

using Bits = boost::dynamic_bitset<>;

// Events named by structure: a label and the names of the maximal events
// of the history. Shared between the explorer's store and the reference
// unfolding so that events can be matched.
class NameTable
{
public:
   using Name = std::uint32_t;

   Name intern (const Action &a, std::vector<Name> preds);
   std::size_t size () const { return keys_.size (); }

private:
   std::map<std::pair<Action, std::vector<Name>>, Name> names_;
   std::vector<std::pair<Action, std::vector<Name>>> keys_;
};

// Names the events of a store as they are created. Installs itself as the
// store's intern hook, so it must outlive the store's use.
class StoreNamer
{
public:
   StoreNamer (EventStore &s, NameTable &names);
   NameTable::Name operator() (EventId e) const { return names_of_.at (e); }

   // every name given so far, including those of released events
   const std::vector<NameTable::Name> &seen () const { return seen_; }

private:
   const EventStore *store_;
   NameTable *names_;
   std::unordered_map<EventId, NameTable::Name> names_of_;
   std::vector<NameTable::Name> seen_;
};

struct RefEvent
{
   Action label;
   Bits history;   // strict causes
   Bits direct;    // immediate conflicts recorded by the fixpoint
   NameTable::Name name = 0;
};

struct RefUnfolding
{
   std::vector<RefEvent> events;
   std::vector<Bits> maximal;   // maximal configurations
   std::size_t configurations = 0;
   std::size_t rounds = 0;

   std::size_t size () const { return events.size (); }
   Bits local (std::size_t e) const;
};

RefUnfolding ref_unfold (const Program &p, NameTable &names, const OracleLimits &lim = {});

struct RefRelations
{
   std::vector<Bits> less;       // less[b][a]: a < b
   std::vector<Bits> conflict;
};

RefRelations ref_relations (const RefUnfolding &u);

// Events of U whose history lies in C, minus those that extend C to a
// larger configuration.
std::vector<std::size_t> ref_cex (const RefUnfolding &u, const Bits &c);
std::vector<std::size_t> ref_en (const RefUnfolding &u, const Bits &c);

} // namespace qpor
