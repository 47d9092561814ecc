#include "qpor/oracle.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>

#include <boost/functional/hash.hpp>

#include "qpor/causality.hpp"

namespace qpor {

namespace {

struct Search
{
   const Program &p;
   const OracleLimits &lim;
   std::vector<Action> prefix;
};

void runs_from (Search &s, const State &st, std::vector<std::vector<Action>> &out)
{
   auto en = enabled (st, s.p);
   if (en.empty ())
   {
      if (out.size () >= s.lim.max_runs)
         throw LimitExceeded ("more than " + std::to_string (s.lim.max_runs) + " runs");
      out.push_back (s.prefix);
      return;
   }
   for (auto &a : en)
   {
      State next = step (st, a, s.p, s.lim.steps);
      s.prefix.push_back (a);
      runs_from (s, next, out);
      s.prefix.pop_back ();
   }
}

// Appending a keeps the word in lexicographic normal form unless some
// letter greater than a can be swapped past it.
bool extends_normal_form (std::span<const Action> w, const Action &a)
{
   for (auto i = w.size (); i-- > 0;)
   {
      if (!independent (w[i], a)) return true;
      if (a < w[i]) return false;
   }
   return true;
}

void classes_from (Search &s, const State &st, std::vector<TraceClass> &out)
{
   auto en = enabled (st, s.p);
   if (en.empty ())
   {
      if (out.size () >= s.lim.max_runs)
         throw LimitExceeded ("more than " + std::to_string (s.lim.max_runs) + " classes");
      out.push_back (TraceClass {s.prefix});
      return;
   }
   for (auto &a : en)
   {
      if (!extends_normal_form (s.prefix, a)) continue;
      State next = step (st, a, s.p, s.lim.steps);
      s.prefix.push_back (a);
      classes_from (s, next, out);
      s.prefix.pop_back ();
   }
}

} // namespace

std::vector<std::vector<Action>> enumerate_runs (const Program &p, const OracleLimits &lim)
{
   Search s {p, lim, {}};
   std::vector<std::vector<Action>> out;
   runs_from (s, initial_state (p), out);
   return out;
}

TraceClass canonicalize (std::span<const Action> run)
{
   std::size_t n = run.size ();
   std::vector<std::vector<std::size_t>> succ (n);
   std::vector<std::size_t> indeg (n, 0);
   for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < j; ++i)
         if (!independent (run[i], run[j]))
         {
            succ[i].push_back (j);
            ++indeg[j];
         }

   auto later = [&] (std::size_t i, std::size_t j) {
      if (run[i] != run[j]) return run[j] < run[i];
      return j < i;
   };
   std::priority_queue<std::size_t, std::vector<std::size_t>, decltype (later)> ready (later);
   for (std::size_t i = 0; i < n; ++i)
      if (indeg[i] == 0) ready.push (i);

   TraceClass tc;
   while (!ready.empty ())
   {
      auto i = ready.top ();
      ready.pop ();
      tc.canonical.push_back (run[i]);
      for (auto j : succ[i])
         if (--indeg[j] == 0) ready.push (j);
   }
   return tc;
}

std::vector<TraceClass> enumerate_trace_classes (const Program &p, const OracleLimits &lim)
{
   Search s {p, lim, {}};
   std::vector<TraceClass> out;
   classes_from (s, initial_state (p), out);
   std::sort (out.begin (), out.end ());
   return out;
}

//------------------------------------------------------------------------

NameTable::Name NameTable::intern (const Action &a, std::vector<Name> preds)
{
   std::sort (preds.begin (), preds.end ());
   preds.erase (std::unique (preds.begin (), preds.end ()), preds.end ());
   Action key = a;
   if (key.is_local ()) key.mutex = 0;
   auto [it, fresh] = names_.try_emplace ({key, preds}, Name (keys_.size ()));
   if (fresh) keys_.push_back (it->first);
   return it->second;
}

StoreNamer::StoreNamer (EventStore &s, NameTable &names) :
   store_ (&s),
   names_ (&names)
{
   s.set_intern_hook ([this] (EventId e) {
      const Event &ev = (*store_)[e];
      std::vector<NameTable::Name> preds;
      EventId pt = ev.pt;
      EventId pm = ev.pm == kNoEvent ? kBottom : ev.pm;
      if (pt != kBottom && !(pm != kBottom && causally_less (*store_, pt, pm)))
         preds.push_back (names_of_.at (pt));
      if (pm != kBottom && !(pt != kBottom && causally_leq (*store_, pm, pt)))
         preds.push_back (names_of_.at (pm));
      auto n = names_->intern (ev.label, std::move (preds));
      names_of_[e] = n;
      seen_.push_back (n);
   });
}

//------------------------------------------------------------------------

Bits RefUnfolding::local (std::size_t e) const
{
   Bits b = events[e].history;
   b.set (e);
   return b;
}

namespace {

struct RefBuilder
{
   RefBuilder (const Program &p, NameTable &names, const OracleLimits &lim) :
      p (p), names (names), lim (lim)
   {}

   const Program &p;
   NameTable &names;
   const OracleLimits &lim;
   RefUnfolding u {};
   std::size_t cap = 64;

   struct Config
   {
      Bits members;
      State state;
      std::size_t scanned = 0;   // events already tried as extensions
   };
   std::vector<Config> configs;
   std::unordered_map<Bits, std::size_t, boost::hash<Bits>> config_ids;
   std::unordered_map<Bits, std::vector<std::size_t>, boost::hash<Bits>> by_history;

   void grow ()
   {
      cap *= 2;
      for (auto &e : u.events)
      {
         e.history.resize (cap);
         e.direct.resize (cap);
      }
      config_ids.clear ();
      for (std::size_t i = 0; i < configs.size (); ++i)
      {
         configs[i].members.resize (cap);
         config_ids.emplace (configs[i].members, i);
      }
      std::unordered_map<Bits, std::vector<std::size_t>, boost::hash<Bits>> h;
      for (auto &[k, v] : by_history)
      {
         Bits k2 = k;
         k2.resize (cap);
         h.emplace (std::move (k2), v);
      }
      by_history = std::move (h);
   }

   bool add_config (Bits members, State state)
   {
      if (config_ids.count (members)) return false;
      if (configs.size () >= lim.max_configs)
         throw LimitExceeded ("more than " + std::to_string (lim.max_configs) + " configurations");
      config_ids.emplace (members, configs.size ());
      configs.push_back ({std::move (members), std::move (state), 0});
      return true;
   }

   Bits maxima (const Bits &c) const
   {
      Bits m = c;
      for (auto e = c.find_first (); e != Bits::npos; e = c.find_next (e))
         m -= u.events[e].history;
      return m;
   }

   // Adds the event <a, C> unless present. Returns whether it is new.
   bool add_event (const Action &a, const Bits &c)
   {
      auto &same = by_history[c];
      for (auto e : same)
         if (u.events[e].label == a) return false;
      if (u.events.size () >= lim.max_events)
         throw LimitExceeded ("more than " + std::to_string (lim.max_events) + " events");

      std::size_t id = u.events.size ();
      same.push_back (id);
      RefEvent ev;
      ev.label = a;
      ev.history = c;
      ev.direct.resize (cap);
      std::vector<NameTable::Name> preds;
      Bits m = maxima (c);
      for (auto e = m.find_first (); e != Bits::npos; e = m.find_next (e))
         preds.push_back (u.events[e].name);
      ev.name = names.intern (a, std::move (preds));
      for (std::size_t o = 0; o < id; ++o)
         if (!independent (u.events[o].label, a) && !c.test (o))
         {
            ev.direct.set (o);
            u.events[o].direct.set (id);
         }
      u.events.push_back (std::move (ev));
      if (u.events.size () == cap) grow ();
      return true;
   }

   // Events whose history is exactly C: the enabled actions that depend on
   // every maximal event of C.
   bool discover (std::size_t ci)
   {
      Bits c = configs[ci].members;
      Bits m = maxima (c);
      bool added = false;
      for (auto &a : enabled (configs[ci].state, p))
      {
         bool all_dep = true;
         for (auto e = m.find_first (); e != Bits::npos && all_dep; e = m.find_next (e))
            all_dep = !independent (u.events[e].label, a);
         if (all_dep) added |= add_event (a, c);
      }
      return added;
   }

   bool extend (std::size_t ci)
   {
      bool added = false;
      for (std::size_t e = configs[ci].scanned; e < u.events.size (); ++e)
      {
         const Bits &c = configs[ci].members;
         const auto &ev = u.events[e];
         if (c.test (e) || !ev.history.is_subset_of (c) || ev.direct.intersects (c)) continue;
         Bits next = c;
         next.set (e);
         State st = step (configs[ci].state, ev.label, p, lim.steps);
         added |= add_config (std::move (next), std::move (st));
      }
      configs[ci].scanned = u.events.size ();
      return added;
   }

   void run ()
   {
      add_config (Bits (cap), initial_state (p));
      bool changed = true;
      while (changed)
      {
         changed = false;
         ++u.rounds;
         for (std::size_t ci = 0; ci < configs.size (); ++ci)
            changed |= discover (ci);
         for (std::size_t ci = 0; ci < configs.size (); ++ci)
            changed |= extend (ci);
      }

      std::size_t n = u.events.size ();
      for (auto &e : u.events)
      {
         e.history.resize (n);
         e.direct.resize (n);
      }
      for (auto &c : configs)
      {
         c.members.resize (n);
         bool maximal = true;
         for (std::size_t e = 0; e < n && maximal; ++e)
         {
            const auto &ev = u.events[e];
            if (!c.members.test (e) && ev.history.is_subset_of (c.members)
               && !ev.direct.intersects (c.members))
               maximal = false;
         }
         if (maximal) u.maximal.push_back (c.members);
      }
      u.configurations = configs.size ();
   }
};

} // namespace

RefUnfolding ref_unfold (const Program &p, NameTable &names, const OracleLimits &lim)
{
   RefBuilder b (p, names, lim);
   b.run ();
   return std::move (b.u);
}

RefRelations ref_relations (const RefUnfolding &u)
{
   std::size_t n = u.size ();
   RefRelations r;
   r.less.reserve (n);
   std::vector<Bits> locals, inherited;
   for (std::size_t e = 0; e < n; ++e)
   {
      r.less.push_back (u.events[e].history);
      locals.push_back (u.local (e));
   }
   for (std::size_t e = 0; e < n; ++e)
   {
      Bits dc (n);
      for (auto c = locals[e].find_first (); c != Bits::npos; c = locals[e].find_next (c))
         dc |= u.events[c].direct;
      inherited.push_back (std::move (dc));
   }
   for (std::size_t i = 0; i < n; ++i)
   {
      Bits row (n);
      for (std::size_t j = 0; j < n; ++j)
         if (inherited[i].intersects (locals[j])) row.set (j);
      r.conflict.push_back (std::move (row));
   }
   return r;
}

std::vector<std::size_t> ref_en (const RefUnfolding &u, const Bits &c)
{
   std::vector<std::size_t> out;
   for (std::size_t e = 0; e < u.size (); ++e)
   {
      const auto &ev = u.events[e];
      if (!c.test (e) && ev.history.is_subset_of (c) && !ev.direct.intersects (c))
         out.push_back (e);
   }
   return out;
}

std::vector<std::size_t> ref_cex (const RefUnfolding &u, const Bits &c)
{
   std::vector<std::size_t> out;
   for (std::size_t e = 0; e < u.size (); ++e)
   {
      const auto &ev = u.events[e];
      if (!c.test (e) && ev.history.is_subset_of (c) && ev.direct.intersects (c))
         out.push_back (e);
   }
   return out;
}

} // namespace qpor
