#pragma once

// Append-only rooted trees with skip links to ancestors at distances
// s, s^2, s^3, ... from each node. A node at depth d stores one link per
// trailing zero of d written in base s, so that q(n, g), the ancestor of n
// at depth g, is reached in a logarithmic number of hops.

#include <cstdint>
#include <span>
#include <vector>

#include "qpor/program.hpp"

namespace qpor {

struct DepthOutOfRange : Error
{
   using Error::Error;
};

struct DifferentTrees : Error
{
   using Error::Error;
};

// Number of trailing zeros of d in base s; 0 for d == 0.
unsigned trailing_zeros (std::uint64_t d, unsigned s);

class SkipTree
{
public:
   using Node = std::uint32_t;
   static constexpr Node kRoot = 0;

   explicit SkipTree (unsigned step = 4);

   Node add_child (Node parent);

   // The node must be a leaf; its slot is recycled by later insertions.
   void release (Node n);

   Node parent (Node n) const { return nodes_[n].parent; }
   std::uint32_t depth (Node n) const { return nodes_[n].depth; }

   // links()[j] is the ancestor at depth depth(n) - step^(j+1).
   std::span<const Node> skip_links (Node n) const { return links_[n]; }

   Node ancestor_at_depth (Node n, std::uint32_t g, std::uint64_t *hops = nullptr) const;

   // Reflexive: every node is its own ancestor.
   bool is_ancestor (Node a, Node b, std::uint64_t *hops = nullptr) const;

   unsigned step () const { return step_; }
   std::size_t size () const { return nodes_.size () - free_.size (); }
   bool valid (Node n) const { return n < nodes_.size () && nodes_[n].live; }

private:
   struct NodeData
   {
      Node parent;
      std::uint32_t depth;
      std::uint32_t children;
      bool live;
   };

   unsigned step_;
   std::vector<NodeData> nodes_;
   std::vector<std::vector<Node>> links_;
   std::vector<Node> free_;
};

// A handle on a node of one of the trees of a CausalityIndex.
struct TreeRef
{
   static constexpr std::uint32_t kNoTree = ~std::uint32_t (0);
   std::uint32_t tree = kNoTree;
   SkipTree::Node node = SkipTree::kRoot;

   bool valid () const { return tree != kNoTree; }
   friend bool operator== (const TreeRef &, const TreeRef &) = default;
};

// One thread tree per thread and one lock tree per mutex.
class CausalityIndex
{
public:
   CausalityIndex (std::size_t threads, std::size_t mutexes, unsigned step = 4);

   // parent == nullptr attaches to the root of the tree
   TreeRef add_thread_node (ThreadId t, const TreeRef *parent);
   TreeRef add_lock_node (MutexId m, const TreeRef *parent);
   void release (TreeRef r);

   bool is_ancestor (TreeRef a, TreeRef b) const;
   std::uint32_t depth (TreeRef r) const { return trees_[r.tree].depth (r.node); }

   const SkipTree &thread_tree (ThreadId t) const { return trees_[t]; }
   const SkipTree &lock_tree (MutexId m) const { return trees_[threads_ + m]; }
   unsigned step () const { return step_; }

   // ancestor queries answered and tree nodes traversed, for profiling
   std::uint64_t queries () const { return queries_; }
   std::uint64_t hops () const { return hops_; }

private:
   std::size_t threads_;
   unsigned step_;
   std::vector<SkipTree> trees_;
   mutable std::uint64_t queries_ = 0;
   mutable std::uint64_t hops_ = 0;
};

} // namespace qpor
