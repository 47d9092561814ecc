#include "qpor/event_store.hpp"

#include <algorithm>
#include <cassert>
#include <queue>

#include "qpor/causality.hpp"

namespace qpor {

namespace {

Action normalized (Action a)
{
   if (a.is_local ()) a.mutex = 0;
   return a;
}

} // namespace

EventStore::EventStore (const Program &p, unsigned skip_step) :
   prog_ (&p),
   index_ (p.num_threads (), p.num_mutexes (), skip_step)
{
   Event bottom;
   bottom.alive = true;
   bottom.tmax.assign (p.num_threads (), kBottom);
   bottom.lmax.assign (p.num_mutexes (), kBottom);
   events_.push_back (std::move (bottom));
}

EventId EventStore::find (const Action &a, EventId pt, EventId pm) const
{
   auto it = keys_.find (Key {normalized (a), pt, pm});
   return it == keys_.end () ? kNoEvent : it->second;
}

void EventStore::check_predecessors (const Action &a, EventId pt, EventId pm) const
{
   auto fail = [&] (const std::string &why) {
      throw InconsistentPredecessors ("cannot create " + prog_->describe (a) + ": " + why);
   };

   if (a.thread >= prog_->num_threads ()) fail ("no such thread");
   if (!alive (pt)) fail ("thread predecessor is not an event");
   if (pt != kBottom && events_[pt].thread () != a.thread)
      fail ("thread predecessor belongs to another thread");

   if (a.is_local ())
   {
      if (pm != kNoEvent) fail ("local actions have no mutex predecessor");
      return;
   }

   MutexId m = a.mutex;
   if (m >= prog_->num_mutexes ()) fail ("no such mutex");
   if (pm == kNoEvent || !alive (pm)) fail ("mutex predecessor is not an event");
   if (pm != kBottom && !events_[pm].label.touches (m))
      fail ("mutex predecessor does not touch the mutex");

   bool initially_locked = prog_->mutexes[m].initially_locked;
   EventId last = events_[pt].lmax[m];

   if (a.is_unlock ())
   {
      if (pm != last) fail ("unlock must follow the lock its thread holds");
      if (pm == kBottom ? !initially_locked : !events_[pm].label.is_lock ())
         fail ("unlock must follow the lock its thread holds");
      return;
   }

   if (pm == kBottom)
   {
      if (initially_locked) fail ("mutex starts locked");
      if (last != kBottom) fail ("mutex predecessor precedes the history of the thread predecessor");
      return;
   }
   if (!events_[pm].label.is_unlock ()) fail ("lock must follow an unlock");
   if (!causally_leq (*this, events_[pm].tmax[a.thread], pt))
      fail ("mutex predecessor has seen a later event of the thread");
   if (!causally_leq (*this, last, pm))
      fail ("mutex predecessor precedes the history of the thread predecessor");
   if (in_conflict (*this, pt, pm)) fail ("predecessors are in conflict");
}

EventId EventStore::intern (const Action &act, EventId pt, EventId pm)
{
   Action a = normalized (act);
   if (EventId e = find (a, pt, pm); e != kNoEvent) return e;
   check_predecessors (a, pt, pm);

   EventId id;
   if (free_.empty ())
   {
      id = EventId (events_.size ());
      events_.emplace_back ();
   }
   else
   {
      id = free_.back ();
      free_.pop_back ();
   }

   Event &e = events_[id];
   e.label = a;
   e.pt = pt;
   e.pm = pm;
   e.children = 0;
   e.in_u = false;
   e.alive = true;
   e.thread_node = index_.add_thread_node (a.thread,
      pt == kBottom ? nullptr : &events_[pt].thread_node);
   e.lock_node = TreeRef {};
   if (!a.is_local ())
      e.lock_node = index_.add_lock_node (a.mutex,
         pm == kBottom ? nullptr : &events_[pm].lock_node);

   // merge the maps of both predecessors; the two candidates for a given
   // thread or mutex are always ordered, so the deeper one wins
   e.tmax = events_[pt].tmax;
   e.lmax = events_[pt].lmax;
   if (pm != kNoEvent && pm != kBottom)
   {
      const Event &q = events_[pm];
      for (std::size_t t = 0; t < e.tmax.size (); ++t)
      {
         EventId x = e.tmax[t], y = q.tmax[t];
         if (y == kBottom || x == y) continue;
         if (x == kBottom || index_.depth (events_[y].thread_node) > index_.depth (events_[x].thread_node))
            e.tmax[t] = y;
      }
      for (std::size_t m = 0; m < e.lmax.size (); ++m)
      {
         EventId x = e.lmax[m], y = q.lmax[m];
         if (y == kBottom || x == y) continue;
         if (x == kBottom || index_.depth (events_[y].lock_node) > index_.depth (events_[x].lock_node))
            e.lmax[m] = y;
      }
   }
   e.tmax[a.thread] = id;
   if (!a.is_local ()) e.lmax[a.mutex] = id;

   if (pt != kBottom) events_[pt].children++;
   if (pm != kNoEvent && pm != kBottom) events_[pm].children++;

   keys_.emplace (Key {a, pt, pm}, id);
   ++live_events_;
   ++created_;
   if (on_intern_) on_intern_ (id);
   return id;
}

std::vector<EventId> EventStore::events () const
{
   std::vector<EventId> out;
   for (EventId e = 1; e < events_.size (); ++e)
      if (events_[e].alive) out.push_back (e);
   return out;
}

void EventStore::add_live (EventId e)
{
   assert (alive (e));
   if (e == kBottom || events_[e].in_u) return;
   events_[e].in_u = true;
   ++in_u_count_;
}

void EventStore::drop_live (EventId e)
{
   if (e == kBottom || !alive (e) || !events_[e].in_u) return;
   events_[e].in_u = false;
   --in_u_count_;
   try_release (e);
}

void EventStore::try_release (EventId first)
{
   std::vector<EventId> work {first};
   while (!work.empty ())
   {
      EventId x = work.back ();
      work.pop_back ();
      Event &e = events_[x];
      if (x == kBottom || !e.alive || e.in_u || e.children > 0) continue;

      keys_.erase (Key {e.label, e.pt, e.pm});
      index_.release (e.lock_node);
      index_.release (e.thread_node);
      e.alive = false;
      --live_events_;
      free_.push_back (x);
      for (EventId p : {e.pt, e.pm})
      {
         if (p == kNoEvent || p == kBottom) continue;
         events_[p].children--;
         work.push_back (p);
      }
   }
}

//------------------------------------------------------------------------

Configuration::Configuration (const EventStore &s, StepLimits limits) :
   store_ (&s),
   limits_ (limits),
   tcut_ (s.program ().num_threads (), kBottom),
   mcut_ (s.program ().num_mutexes (), kBottom)
{
   states_.push_back (initial_state (s.program ()));
}

void Configuration::push (EventId id)
{
   const EventStore &s = *store_;
   if (!s.alive (id) || id == kBottom) throw ActionNotEnabled ("not an event");
   const Event &e = s[id];
   const Program &p = s.program ();
   bool sync = !e.label.is_local ();
   if (contains (id) || e.pt != tcut_[e.thread ()] || (sync && e.pm != mcut_[e.label.mutex]))
      throw ActionNotEnabled ("event " + std::to_string (id) + " " + p.describe (e.label)
         + " is not enabled in the configuration");

   State next = states_.back ();
   std::optional<AssertSite> failed = apply (next, e.label, p, limits_);
   states_.push_back (std::move (next));
   if (failed) failures_.emplace_back (events_.size (), *failed);

   undo_.push_back ({tcut_[e.thread ()], sync ? mcut_[e.label.mutex] : kNoEvent});
   tcut_[e.thread ()] = id;
   if (sync) mcut_[e.label.mutex] = id;
   if (member_.size () <= id) member_.resize (std::max<std::size_t> (id + 1, s.capacity ()));
   member_[id] = true;
   events_.push_back (id);
}

void Configuration::pop ()
{
   assert (!events_.empty ());
   EventId id = events_.back ();
   const Event &e = (*store_)[id];
   Undo u = undo_.back ();
   undo_.pop_back ();
   tcut_[e.thread ()] = u.prev_t;
   if (!e.label.is_local ()) mcut_[e.label.mutex] = u.prev_m;
   member_[id] = false;
   states_.pop_back ();
   events_.pop_back ();
   while (!failures_.empty () && failures_.back ().first >= events_.size ()) failures_.pop_back ();
}

std::vector<AssertSite> Configuration::failed_asserts () const
{
   std::vector<AssertSite> out;
   for (const auto &f : failures_) out.push_back (f.second);
   return out;
}

std::vector<Action> Configuration::run () const
{
   std::vector<Action> out;
   out.reserve (events_.size ());
   for (EventId e : events_) out.push_back ((*store_)[e].label);
   return out;
}

Configuration make_configuration (const EventStore &s, std::span<const EventId> events,
   StepLimits limits)
{
   Configuration c (s, limits);
   for (EventId e : linearize (s, events)) c.push (e);
   return c;
}

std::vector<EventId> linearize (const EventStore &s, std::span<const EventId> events)
{
   std::vector<std::int32_t> pos (s.capacity (), -1);
   std::vector<EventId> ids;
   for (EventId e : events)
   {
      if (e == kBottom || pos[e] >= 0) continue;
      pos[e] = std::int32_t (ids.size ());
      ids.push_back (e);
   }

   std::vector<std::uint32_t> indeg (ids.size (), 0);
   std::vector<std::vector<std::uint32_t>> succ (ids.size ());
   for (std::size_t i = 0; i < ids.size (); ++i)
   {
      const Event &e = s[ids[i]];
      for (EventId p : {e.pt, e.pm})
      {
         if (p == kNoEvent || p == kBottom) continue;
         if (pos[p] < 0) throw Error ("event set is not causally closed");
         succ[pos[p]].push_back (std::uint32_t (i));
         indeg[i]++;
      }
   }

   std::priority_queue<EventId, std::vector<EventId>, std::greater<>> ready;
   for (std::size_t i = 0; i < ids.size (); ++i)
      if (indeg[i] == 0) ready.push (ids[i]);
   std::vector<EventId> out;
   out.reserve (ids.size ());
   while (!ready.empty ())
   {
      EventId e = ready.top ();
      ready.pop ();
      out.push_back (e);
      for (std::uint32_t j : succ[pos[e]])
         if (--indeg[j] == 0) ready.push (ids[j]);
   }
   return out;
}

std::vector<EventId> local_config (const EventStore &s, EventId e)
{
   std::vector<EventId> set;
   std::vector<bool> seen (s.capacity (), false);
   std::vector<EventId> work {e};
   while (!work.empty ())
   {
      EventId x = work.back ();
      work.pop_back ();
      if (x == kNoEvent || x == kBottom || seen[x]) continue;
      seen[x] = true;
      set.push_back (x);
      work.push_back (s[x].pt);
      work.push_back (s[x].pm);
   }
   return linearize (s, set);
}

State state_of (const EventStore &s, std::span<const EventId> events, const StepLimits &limits)
{
   State st = initial_state (s.program ());
   for (EventId e : linearize (s, events)) apply (st, s[e].label, s.program (), limits);
   return st;
}

//------------------------------------------------------------------------

std::vector<EventId> en (EventStore &s, const Configuration &c)
{
   const Program &p = s.program ();
   const State &st = c.state ();
   std::vector<EventId> out;
   for (ThreadId t = 0; t < p.num_threads (); ++t)
   {
      std::optional<Action> a = next_action (st, p, t);
      if (!a) continue;
      if (a->is_lock () && st.locks[a->mutex] != 0) continue;
      EventId pm = a->is_local () ? kNoEvent : c.max_in_mutex (a->mutex);
      out.push_back (s.intern (*a, c.max_in_thread (t), pm));
   }
   return out;
}

namespace {

struct CexpWalk
{
   EventStore &s;
   const Configuration &c;
   CexpCounters *counters;
   std::vector<EventId> out;
   std::vector<bool> seen;

   void emit (const Action &a, EventId et, EventId em)
   {
      EventId e = s.intern (a, et, em);
      if (seen.size () <= e) seen.resize (s.capacity (), false);
      if (seen[e] || c.contains (e)) return;
      seen[e] = true;
      out.push_back (e);
   }

   void hop ()
   {
      if (counters) counters->iterations++;
   }

   // Walks the lock chain of a mutex backwards from em, producing every
   // lock event with thread predecessor et that acquires the mutex at an
   // earlier point of the chain.
   void walk (const Action &a, EventId et, EventId em)
   {
      while (!causally_leq (s, em, et))
      {
         hop ();
         em = s[em].pm;
         if (em == kBottom || causally_less (s, em, et)) break;
         hop ();
         em = s[em].pm;
         emit (a, et, em);
      }
   }
};

} // namespace

std::vector<EventId> cexp (EventStore &s, const Configuration &c, CexpCounters *counters)
{
   CexpWalk w {s, c, counters, {}, std::vector<bool> (s.capacity (), false)};

   for (EventId e : c.events ())
   {
      const Event &ev = s[e];
      if (!ev.label.is_lock ()) continue;
      Action a = ev.label;
      w.walk (a, ev.pt, ev.pm);
   }

   // the pending lock of each thread, enabled or not, races with every
   // earlier acquisition the thread has not yet observed
   const Program &p = s.program ();
   for (ThreadId t = 0; t < p.num_threads (); ++t)
   {
      std::optional<Action> a = next_action (c.state (), p, t);
      if (!a || !a->is_lock ()) continue;
      EventId et = c.max_in_thread (t);
      EventId last = c.max_in_mutex (a->mutex);
      if (last == kBottom) continue;
      if (s[last].label.is_unlock ())
      {
         w.walk (*a, et, last);
         continue;
      }
      if (causally_leq (s, last, et)) continue;
      EventId em = s[last].pm;
      w.emit (*a, et, em);
      w.walk (*a, et, em);
   }
   return std::move (w.out);
}

std::vector<EventId> ex (EventStore &s, const Configuration &c, CexpCounters *counters)
{
   std::vector<EventId> out = en (s, c);
   std::vector<EventId> more = cexp (s, c, counters);
   out.insert (out.end (), more.begin (), more.end ());
   return out;
}

//------------------------------------------------------------------------

std::vector<std::vector<Action>> interleavings (const EventStore &s,
   std::span<const EventId> events, std::size_t max_runs)
{
   std::vector<EventId> order = linearize (s, events);
   std::size_t n = order.size ();
   std::vector<std::int32_t> pos (s.capacity (), -1);
   for (std::size_t i = 0; i < n; ++i) pos[order[i]] = std::int32_t (i);

   std::vector<std::vector<std::uint32_t>> preds (n);
   for (std::size_t i = 0; i < n; ++i)
      for (EventId p : {s[order[i]].pt, s[order[i]].pm})
         if (p != kNoEvent && p != kBottom) preds[i].push_back (std::uint32_t (pos[p]));

   std::vector<std::vector<Action>> out;
   std::vector<bool> done (n, false);
   std::vector<Action> prefix;

   auto rec = [&] (auto &self) -> void {
      if (prefix.size () == n)
      {
         if (out.size () >= max_runs)
            throw TooLarge ("more than " + std::to_string (max_runs) + " interleavings");
         out.push_back (prefix);
         return;
      }
      for (std::size_t i = 0; i < n; ++i)
      {
         if (done[i]) continue;
         bool ready = std::all_of (preds[i].begin (), preds[i].end (),
            [&] (std::uint32_t j) { return bool (done[j]); });
         if (!ready) continue;
         done[i] = true;
         prefix.push_back (s[order[i]].label);
         self (self);
         prefix.pop_back ();
         done[i] = false;
      }
   };
   rec (rec);
   return out;
}

} // namespace qpor
