#include "qpor/causality.hpp"

namespace qpor {

bool causally_less (const EventStore &s, EventId a, EventId b)
{
   if (a == b || b == kBottom) return false;
   if (a == kBottom) return true;

   const Event &ea = s[a];
   const Event &eb = s[b];
   if (ea.thread () == eb.thread ())
      return s.index ().is_ancestor (ea.thread_node, eb.thread_node);

   EventId x = eb.tmax[ea.thread ()];
   if (x == kBottom) return false;
   return x == a || s.index ().is_ancestor (ea.thread_node, s[x].thread_node);
}

namespace {

bool tree_conflict (const EventStore &s, TreeRef a, TreeRef b)
{
   const CausalityIndex &ix = s.index ();
   return !ix.is_ancestor (a, b) && !ix.is_ancestor (b, a);
}

} // namespace

bool in_conflict (const EventStore &s, EventId a, EventId b)
{
   if (a == b || a == kBottom || b == kBottom) return false;

   const Event &ea = s[a];
   const Event &eb = s[b];
   if (ea.thread () == eb.thread ())
      return tree_conflict (s, ea.thread_node, eb.thread_node);
   if (!ea.label.is_local () && !eb.label.is_local () && ea.label.mutex == eb.label.mutex)
      return tree_conflict (s, ea.lock_node, eb.lock_node);

   for (std::size_t m = 0; m < ea.lmax.size (); ++m)
   {
      EventId x = ea.lmax[m];
      EventId y = eb.lmax[m];
      if (x == kBottom || y == kBottom || x == y) continue;
      if (tree_conflict (s, s[x].lock_node, s[y].lock_node)) return true;
   }
   return false;
}

bool conflicts_with_cut (const EventStore &s, EventId e, std::span<const EventId> thread_cut)
{
   for (EventId c : thread_cut)
      if (in_conflict (s, e, c)) return true;
   return false;
}

} // namespace qpor
