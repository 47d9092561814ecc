#include "qpor/explorer.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>

#include "qpor/causality.hpp"

namespace qpor {

GuardExceeded::GuardExceeded (const std::string &what, std::vector<Action> p) :
   Error (what),
   prefix (std::move (p))
{
}

namespace {

using Clock = std::chrono::steady_clock;

class Stopwatch
{
public:
   explicit Stopwatch (double &acc) : acc_ (acc), start_ (Clock::now ()) {}
   ~Stopwatch ()
   {
      acc_ += std::chrono::duration<double, std::milli> (Clock::now () - start_).count ();
   }

private:
   double &acc_;
   Clock::time_point start_;
};

enum class Phase { Enter, AfterLeft, AfterRight };

struct Frame
{
   Phase phase = Phase::Enter;
   EventId e = kNoEvent;
   std::vector<EventId> a;
};

class Explorer
{
public:
   Explorer (EventStore &s, const ExploreOptions &o, ExploreObserver *obs) :
      s_ (s), opts_ (o), obs_ (obs), c_ (s, o.limits)
   {
   }

   ExplorationStats run ()
   {
      auto t0 = Clock::now ();
      std::uint64_t created0 = s_.created ();
      stack_.push_back ({});
      while (!stack_.empty ())
      {
         switch (stack_.back ().phase)
         {
         case Phase::Enter: enter (); break;
         case Phase::AfterLeft: after_left (); break;
         case Phase::AfterRight: after_right (); break;
         }
      }
      st_.events = s_.created () - created0;
      st_.time_ms = std::chrono::duration<double, std::milli> (Clock::now () - t0).count ();
      return st_;
   }

private:
   EventStore &s_;
   const ExploreOptions &opts_;
   ExploreObserver *obs_;
   Configuration c_;
   std::vector<EventId> d_;
   std::vector<bool> in_d_;
   std::vector<Frame> stack_;
   ExplorationStats st_;

   bool in_d (EventId e) const { return e < in_d_.size () && in_d_[e]; }

   void push_d (EventId e)
   {
      d_.push_back (e);
      if (in_d_.size () <= e) in_d_.resize (s_.capacity (), false);
      in_d_[e] = true;
   }

   void pop_d ()
   {
      in_d_[d_.back ()] = false;
      d_.pop_back ();
   }

   void enter ()
   {
      if (++st_.frames > opts_.max_frames)
         throw GuardExceeded ("frame limit of " + std::to_string (opts_.max_frames)
            + " exceeded", c_.run ());

      std::vector<EventId> en_c, cex_c;
      {
         Stopwatch w (st_.phase_ms.extensions);
         CexpCounters cnt;
         en_c = en (s_, c_);
         cex_c = cexp (s_, c_, &cnt);
         st_.cexp_iterations += cnt.iterations;
         for (EventId e : en_c) s_.add_live (e);
         for (EventId e : cex_c) s_.add_live (e);
         st_.peak_live = std::max<std::uint64_t> (st_.peak_live, s_.live_count ());
      }
      if (opts_.check_invariants) check_frame (stack_.back ().a);
      if (obs_) obs_->on_configuration (c_, en_c, cex_c);

      if (std::all_of (en_c.begin (), en_c.end (), [&] (EventId e) { return in_d (e); }))
      {
         if (en_c.empty ())
            record_maximal ();
         else
         {
            ++st_.ssbs;
            if (obs_) obs_->on_ssb (c_);
         }
         stack_.pop_back ();
         return;
      }

      Frame &f = stack_.back ();
      std::vector<EventId> pool;
      if (f.a.empty ())
      {
         for (EventId e : en_c)
            if (!in_d (e)) pool.push_back (e);
      }
      else
      {
         for (EventId e : en_c)
            if (std::find (f.a.begin (), f.a.end (), e) != f.a.end ()) pool.push_back (e);
         if (pool.empty () && opts_.check_invariants)
            throw InvariantViolation ("A is not empty but shares nothing with en(C)");
         if (pool.empty ())
            for (EventId e : en_c)
               if (!in_d (e)) pool.push_back (e);
      }
      EventId e = opts_.choice == Choice::Min ? *std::min_element (pool.begin (), pool.end ())
                                             : *std::max_element (pool.begin (), pool.end ());

      std::vector<EventId> child_a;
      for (EventId x : f.a)
         if (x != e) child_a.push_back (x);
      f.e = e;
      f.phase = Phase::AfterLeft;
      f.a.clear ();

      execute (e);
      stack_.push_back ({Phase::Enter, kNoEvent, std::move (child_a)});
   }

   void execute (EventId e)
   {
      Stopwatch w (st_.phase_ms.execute);
      try
      {
         c_.push (e);
      }
      catch (const StepLimitExceeded &x)
      {
         std::vector<Action> prefix = c_.run ();
         prefix.push_back (s_[e].label);
         throw GuardExceeded (x.what (), std::move (prefix));
      }
   }

   void after_left ()
   {
      Frame &f = stack_.back ();
      c_.pop ();
      push_d (f.e);

      std::optional<std::vector<EventId>> j;
      {
         Comb comb;
         {
            Stopwatch w (st_.phase_ms.comb_build);
            st_.alt.calls++;
            comb = build_comb (s_, c_, d_, opts_.alt);
            for (const auto &spike : comb.spikes) st_.alt.spike_events += spike.size ();
         }
         Stopwatch w (st_.phase_ms.comb_search);
         std::optional<std::vector<EventId>> pick = search_comb (s_, comb, &st_.alt);
         if (pick)
         {
            st_.alt.found++;
            std::vector<bool> seen (s_.capacity (), false);
            j.emplace ();
            for (EventId x : *pick)
               for (EventId y : local_config (s_, x))
                  if (!seen[y])
                  {
                     seen[y] = true;
                     j->push_back (y);
                  }
            std::sort (j->begin (), j->end ());
         }
      }
      if (obs_) obs_->on_alt (c_, d_, j);

      if (!j)
      {
         after_right ();
         return;
      }
      std::vector<EventId> a;
      for (EventId x : *j)
         if (!c_.contains (x)) a.push_back (x);
      f.phase = Phase::AfterRight;
      stack_.push_back ({Phase::Enter, kNoEvent, std::move (a)});
   }

   void after_right ()
   {
      pop_d ();
      if (opts_.prune) prune ();
      stack_.pop_back ();
   }

   // U := U ∩ (C ∪ D ∪ #(C ∪ D))
   void prune ()
   {
      std::vector<EventId> drop;
      for (EventId e : s_.events ())
      {
         if (!s_.is_live (e) || c_.contains (e) || in_d (e)) continue;
         if (conflicts_with_cut (s_, e, c_.thread_cut ())) continue;
         bool keep = std::any_of (d_.begin (), d_.end (),
            [&] (EventId x) { return in_conflict (s_, e, x); });
         if (!keep) drop.push_back (e);
      }
      for (EventId e : drop) s_.drop_live (e);
   }

   void record_maximal ()
   {
      ++st_.max_configs;
      const State &state = c_.state ();
      const Program &p = s_.program ();
      for (ThreadId t = 0; t < p.num_threads (); ++t)
         if (!terminated (state, p, t))
         {
            ++st_.blocked_deadlocks;
            break;
         }
      if (c_.has_failed_assert ())
      {
         std::vector<Action> run = c_.run ();
         for (const AssertSite &site : c_.failed_asserts ()) st_.violations.push_back ({site, run});
      }
      if (obs_) obs_->on_maximal (c_);
   }

   void check_frame (std::span<const EventId> a)
   {
      for (EventId d : d_)
      {
         if (c_.contains (d)) throw InvariantViolation ("C and D intersect");
         const Event &ev = s_[d];
         for (EventId p : {ev.pt, ev.pm})
            if (p != kNoEvent && !c_.contains (p)) throw InvariantViolation ("D is not within ex(C)");
      }
      std::vector<EventId> all (c_.events ().begin (), c_.events ().end ());
      for (EventId x : a)
      {
         if (c_.contains (x)) throw InvariantViolation ("C and A intersect");
         if (in_d (x)) throw InvariantViolation ("A and D intersect");
         all.push_back (x);
      }
      if (!a.empty () && !is_configuration (s_, all))
         throw InvariantViolation ("C ∪ A is not a configuration");
   }
};

} // namespace

ExplorationStats explore (EventStore &store, const ExploreOptions &opts, ExploreObserver *observer)
{
   Explorer x (store, opts, observer);
   return x.run ();
}

ExplorationStats explore (const Program &p, const ExploreOptions &opts)
{
   EventStore s (p);
   return explore (s, opts);
}

} // namespace qpor
