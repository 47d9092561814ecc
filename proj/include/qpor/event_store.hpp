#pragma once

// Events of the unfolding, hash-consed by (label, thread predecessor,
// mutex predecessor), together with configurations and the extension
// operators en, cexp and ex.

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <unordered_map>
#include <vector>

#include "qpor/program.hpp"
#include "qpor/skip_tree.hpp"

namespace qpor {

using EventId = std::uint32_t;
inline constexpr EventId kBottom = 0;
inline constexpr EventId kNoEvent = std::numeric_limits<EventId>::max ();

struct InconsistentPredecessors : Error
{
   using Error::Error;
};

struct Event
{
   Action label;
   EventId pt = kBottom;       // previous event of the same thread
   EventId pm = kNoEvent;      // previous event on the mutex; kNoEvent for local
   TreeRef thread_node;
   TreeRef lock_node;          // invalid for local events
   std::vector<EventId> tmax;  // per thread, the <-maximal event of [e]
   std::vector<EventId> lmax;  // per mutex
   std::uint32_t children = 0; // live events naming this one as pt or pm
   bool alive = false;
   bool in_u = false;

   ThreadId thread () const { return label.thread; }
};

class EventStore
{
public:
   explicit EventStore (const Program &p, unsigned skip_step = 4);
   EventStore (const EventStore &) = delete;
   EventStore &operator= (const EventStore &) = delete;

   const Program &program () const { return *prog_; }

   // Returns the existing event with that key or creates it. For local
   // actions pm must be kNoEvent, for lock and unlock it must name the
   // previous event on the mutex (kBottom if there is none).
   EventId intern (const Action &a, EventId pt, EventId pm = kNoEvent);
   EventId find (const Action &a, EventId pt, EventId pm = kNoEvent) const;

   const Event &operator[] (EventId e) const { return events_[e]; }
   bool alive (EventId e) const { return e < events_.size () && events_[e].alive; }

   std::size_t capacity () const { return events_.size (); }
   std::size_t size () const { return live_events_; }   // excludes bottom
   std::uint64_t created () const { return created_; }
   std::vector<EventId> events () const;                // alive, excludes bottom

   // The set U of events the explorer keeps around. Events that leave U
   // and have no live successor are freed, recursively.
   void add_live (EventId e);
   void drop_live (EventId e);
   bool is_live (EventId e) const { return events_[e].in_u; }
   std::size_t live_count () const { return in_u_count_; }

   void set_intern_hook (std::function<void (EventId)> f) { on_intern_ = std::move (f); }

   const CausalityIndex &index () const { return index_; }

   // lock and unlock events of a mutex ordered by the lock tree
   EventId lmax (EventId e, MutexId m) const { return events_[e].lmax[m]; }
   EventId tmax (EventId e, ThreadId t) const { return events_[e].tmax[t]; }

private:
   struct Key
   {
      Action a;
      EventId pt, pm;
      friend bool operator== (const Key &, const Key &) = default;
   };
   struct KeyHash
   {
      std::size_t operator() (const Key &k) const noexcept
      {
         std::size_t h = std::hash<Action> {} (k.a);
         h ^= std::size_t (k.pt) * 0x100000001b3ull + 0x9e3779b9 + (h << 6) + (h >> 2);
         h ^= std::size_t (k.pm) * 0xff51afd7ed558ccdull + 0x9e3779b9 + (h << 6) + (h >> 2);
         return h;
      }
   };

   void check_predecessors (const Action &a, EventId pt, EventId pm) const;
   void try_release (EventId e);

   const Program *prog_;
   CausalityIndex index_;
   std::vector<Event> events_;
   std::vector<EventId> free_;
   std::unordered_map<Key, EventId, KeyHash> keys_;
   std::size_t live_events_ = 0;
   std::size_t in_u_count_ = 0;
   std::uint64_t created_ = 0;
   std::function<void (EventId)> on_intern_;
};

//------------------------------------------------------------------------

// A configuration grown and shrunk at its end, like a stack, carrying the
// state reached by executing its events in insertion order.
class Configuration
{
public:
   explicit Configuration (const EventStore &s, StepLimits limits = {});

   // e must be in en(C). Throws ActionNotEnabled otherwise.
   void push (EventId e);
   void pop ();

   bool contains (EventId e) const { return e == kBottom || (e < member_.size () && member_[e]); }
   std::span<const EventId> events () const { return events_; }
   std::size_t size () const { return events_.size (); }
   bool empty () const { return events_.empty (); }

   EventId max_in_thread (ThreadId t) const { return tcut_[t]; }
   EventId max_in_mutex (MutexId m) const { return mcut_[m]; }
   std::span<const EventId> thread_cut () const { return tcut_; }

   const State &state () const { return states_.back (); }
   const EventStore &store () const { return *store_; }

   // assertions that failed while executing the events of C
   std::vector<AssertSite> failed_asserts () const;
   bool has_failed_assert () const { return !failures_.empty (); }

   std::vector<Action> run () const;

private:
   struct Undo
   {
      EventId prev_t;
      EventId prev_m;
   };

   const EventStore *store_;
   StepLimits limits_;
   std::vector<EventId> events_;
   std::vector<bool> member_;
   std::vector<EventId> tcut_;
   std::vector<EventId> mcut_;
   std::vector<Undo> undo_;
   std::vector<State> states_;
   std::vector<std::pair<std::size_t, AssertSite>> failures_;
};

// Builds the configuration containing exactly the given causally-closed,
// conflict-free set of events.
Configuration make_configuration (const EventStore &s, std::span<const EventId> events,
   StepLimits limits = {});

// [e] in a topological order, bottom excluded.
std::vector<EventId> local_config (const EventStore &s, EventId e);

// Topological order of a causally-closed set, smallest id first on ties.
std::vector<EventId> linearize (const EventStore &s, std::span<const EventId> events);

State state_of (const EventStore &s, std::span<const EventId> events,
   const StepLimits &limits = {});

std::vector<EventId> en (EventStore &s, const Configuration &c);

struct CexpCounters
{
   std::uint64_t iterations = 0;   // pm hops along lock chains
};

std::vector<EventId> cexp (EventStore &s, const Configuration &c, CexpCounters *counters = nullptr);

// en(C) followed by cexp(C)
std::vector<EventId> ex (EventStore &s, const Configuration &c, CexpCounters *counters = nullptr);

struct TooLarge : Error
{
   using Error::Error;
};

// Every linearization of a configuration; throws TooLarge past max_runs.
std::vector<std::vector<Action>> interleavings (const EventStore &s,
   std::span<const EventId> events, std::size_t max_runs = 100000);

} // namespace qpor
