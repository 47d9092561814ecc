#include "qpor/alternatives.hpp"

#include <algorithm>
#include <set>

#include "qpor/causality.hpp"

namespace qpor {

AltConfig::AltConfig (std::size_t kk) :
   k (kk)
{
   if (k == 0) throw std::invalid_argument ("k must be at least 1");
}

namespace {

std::uint32_t depth_sum (const EventStore &s, EventId e)
{
   const Event &ev = s[e];
   std::uint32_t d = s.index ().depth (ev.thread_node);
   if (ev.lock_node.valid ()) d += s.index ().depth (ev.lock_node);
   return d;
}

} // namespace

Comb build_comb (const EventStore &s, const Configuration &c, std::span<const EventId> d,
   const AltConfig &cfg)
{
   Comb comb;
   std::size_t n = std::min (cfg.k, d.size ());
   comb.targets.assign (d.end () - n, d.end ());

   std::vector<EventId> live;
   for (EventId e : s.events ())
      if (s.is_live (e)) live.push_back (e);

   for (EventId target : comb.targets)
   {
      std::vector<EventId> spike;
      for (EventId e : live)
      {
         if (!in_conflict (s, e, target)) continue;
         if (conflicts_with_cut (s, e, c.thread_cut ())) continue;
         bool sees_d = std::any_of (d.begin (), d.end (),
            [&] (EventId x) { return causally_leq (s, x, e); });
         if (sees_d) continue;
         spike.push_back (e);
      }
      std::stable_sort (spike.begin (), spike.end (), [&] (EventId a, EventId b) {
         return depth_sum (s, a) > depth_sum (s, b);
      });
      comb.spikes.push_back (std::move (spike));
   }

   std::vector<std::size_t> order (comb.spikes.size ());
   for (std::size_t i = 0; i < order.size (); ++i) order[i] = i;
   std::stable_sort (order.begin (), order.end (), [&] (std::size_t a, std::size_t b) {
      return comb.spikes[a].size () < comb.spikes[b].size ();
   });
   Comb sorted;
   for (std::size_t i : order)
   {
      sorted.targets.push_back (comb.targets[i]);
      sorted.spikes.push_back (std::move (comb.spikes[i]));
   }
   return sorted;
}

std::optional<std::vector<EventId>> search_comb (const EventStore &s, const Comb &comb,
   AltStats *stats)
{
   std::size_t n = comb.spikes.size ();
   for (const auto &spike : comb.spikes)
      if (spike.empty ()) return std::nullopt;

   std::vector<EventId> chosen;
   std::vector<std::size_t> cursor (n, 0);
   std::size_t i = 0;
   std::uint64_t visits = 0;

   while (true)
   {
      if (i == n) break;
      const std::vector<EventId> &spike = comb.spikes[i];
      bool placed = false;
      while (cursor[i] < spike.size ())
      {
         EventId cand = spike[cursor[i]++];
         ++visits;
         bool ok = std::none_of (chosen.begin (), chosen.end (),
            [&] (EventId x) { return in_conflict (s, x, cand); });
         if (ok)
         {
            chosen.push_back (cand);
            placed = true;
            break;
         }
      }
      if (placed)
      {
         ++i;
         continue;
      }
      // exhausted this spike, back up
      cursor[i] = 0;
      if (i == 0)
      {
         if (stats) stats->visits += visits;
         return std::nullopt;
      }
      --i;
      chosen.pop_back ();
   }
   if (stats) stats->visits += visits;
   return chosen;
}

std::optional<std::vector<EventId>> alt (const EventStore &s, const Configuration &c,
   std::span<const EventId> d, const AltConfig &cfg, AltStats *stats)
{
   if (stats) stats->calls++;
   Comb comb = build_comb (s, c, d, cfg);
   if (stats)
      for (const auto &spike : comb.spikes) stats->spike_events += spike.size ();
   std::optional<std::vector<EventId>> pick = search_comb (s, comb, stats);
   if (!pick) return std::nullopt;

   std::vector<EventId> j;
   std::vector<bool> seen (s.capacity (), false);
   for (EventId e : *pick)
      for (EventId x : local_config (s, e))
         if (!seen[x])
         {
            seen[x] = true;
            j.push_back (x);
         }
   std::sort (j.begin (), j.end ());
   if (stats) stats->found++;
   return j;
}

bool is_configuration (const EventStore &s, std::span<const EventId> events)
{
   std::set<EventId> set (events.begin (), events.end ());
   for (EventId e : set)
   {
      if (e == kBottom) continue;
      if (!s.alive (e)) return false;
      for (EventId p : {s[e].pt, s[e].pm})
         if (p != kNoEvent && p != kBottom && !set.count (p)) return false;
   }
   for (auto a = set.begin (); a != set.end (); ++a)
      for (auto b = std::next (a); b != set.end (); ++b)
         if (in_conflict (s, *a, *b)) return false;
   return true;
}

bool is_clue (const EventStore &s, std::span<const EventId> j, std::span<const EventId> c,
   std::span<const EventId> d)
{
   for (EventId x : j)
      if (std::find (d.begin (), d.end (), x) != d.end ()) return false;
   std::vector<EventId> all (c.begin (), c.end ());
   all.insert (all.end (), j.begin (), j.end ());
   return is_configuration (s, all);
}

bool is_alternative (const EventStore &s, std::span<const EventId> j, std::span<const EventId> c,
   std::span<const EventId> d)
{
   if (!is_clue (s, j, c, d)) return false;
   return std::all_of (d.begin (), d.end (), [&] (EventId x) {
      return std::any_of (j.begin (), j.end (), [&] (EventId y) { return in_conflict (s, x, y); });
   });
}

} // namespace qpor
