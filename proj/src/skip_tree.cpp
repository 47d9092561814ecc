#include "qpor/skip_tree.hpp"

#include <cassert>
#include <string>

namespace qpor {

unsigned trailing_zeros (std::uint64_t d, unsigned s)
{
   unsigned n = 0;
   if (d == 0) return 0;
   while (d % s == 0)
   {
      d /= s;
      ++n;
   }
   return n;
}

SkipTree::SkipTree (unsigned step) :
   step_ (step)
{
   if (step < 2) throw std::invalid_argument ("skip step must be at least 2");
   nodes_.push_back ({kRoot, 0, 0, true});
   links_.emplace_back ();
}

SkipTree::Node SkipTree::add_child (Node parent)
{
   assert (valid (parent));
   std::uint32_t d = nodes_[parent].depth + 1;

   std::vector<Node> links;
   unsigned tz = trailing_zeros (d, step_);
   links.reserve (tz);
   std::uint64_t dist = step_;
   Node from = parent;
   for (unsigned j = 0; j < tz; ++j, dist *= step_)
   {
      from = ancestor_at_depth (from, std::uint32_t (d - dist));
      links.push_back (from);
   }

   Node n;
   if (free_.empty ())
   {
      n = Node (nodes_.size ());
      nodes_.push_back ({parent, d, 0, true});
      links_.push_back (std::move (links));
   }
   else
   {
      n = free_.back ();
      free_.pop_back ();
      nodes_[n] = {parent, d, 0, true};
      links_[n] = std::move (links);
   }
   nodes_[parent].children++;
   return n;
}

void SkipTree::release (Node n)
{
   assert (n != kRoot && valid (n));
   assert (nodes_[n].children == 0);
   nodes_[nodes_[n].parent].children--;
   nodes_[n].live = false;
   links_[n].clear ();
   free_.push_back (n);
}

SkipTree::Node SkipTree::ancestor_at_depth (Node n, std::uint32_t g, std::uint64_t *hops) const
{
   std::uint32_t d = nodes_[n].depth;
   if (g > d)
      throw DepthOutOfRange ("no ancestor at depth " + std::to_string (g)
         + " for a node at depth " + std::to_string (d));

   std::uint64_t count = 0;
   while (d > g)
   {
      // greediest link that does not overshoot; links are sorted by
      // increasing distance
      const std::vector<Node> &ln = links_[n];
      Node next = nodes_[n].parent;
      std::uint64_t dist = step_;
      for (std::size_t j = 0; j < ln.size () && d - dist >= g && dist <= d; ++j, dist *= step_)
         next = ln[j];
      n = next;
      d = nodes_[n].depth;
      ++count;
   }
   if (hops) *hops += count;
   return n;
}

bool SkipTree::is_ancestor (Node a, Node b, std::uint64_t *hops) const
{
   if (a == b) return true;
   if (nodes_[a].depth >= nodes_[b].depth) return false;
   return ancestor_at_depth (b, nodes_[a].depth, hops) == a;
}

//------------------------------------------------------------------------

CausalityIndex::CausalityIndex (std::size_t threads, std::size_t mutexes, unsigned step) :
   threads_ (threads),
   step_ (step)
{
   trees_.reserve (threads + mutexes);
   for (std::size_t i = 0; i < threads + mutexes; ++i) trees_.emplace_back (step);
}

TreeRef CausalityIndex::add_thread_node (ThreadId t, const TreeRef *parent)
{
   assert (!parent || parent->tree == t);
   SkipTree::Node p = parent ? parent->node : SkipTree::kRoot;
   return {t, trees_[t].add_child (p)};
}

TreeRef CausalityIndex::add_lock_node (MutexId m, const TreeRef *parent)
{
   std::uint32_t tree = std::uint32_t (threads_ + m);
   assert (!parent || parent->tree == tree);
   SkipTree::Node p = parent ? parent->node : SkipTree::kRoot;
   return {tree, trees_[tree].add_child (p)};
}

void CausalityIndex::release (TreeRef r)
{
   if (r.valid ()) trees_[r.tree].release (r.node);
}

bool CausalityIndex::is_ancestor (TreeRef a, TreeRef b) const
{
   if (a.tree != b.tree) throw DifferentTrees ("ancestor query across different trees");
   ++queries_;
   return trees_[a.tree].is_ancestor (a.node, b.node, &hops_);
}

} // namespace qpor
