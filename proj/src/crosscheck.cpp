#include "qpor/crosscheck.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_set>

#include "qpor/causality.hpp"

namespace qpor {

namespace {

constexpr std::size_t kMaxProblems = 8;

class Checker : public ExploreObserver
{
public:
   Checker (EventStore &s, NameTable &names, const RefUnfolding &u, const RefRelations &rel,
      ModeReport &rep, bool check_pairs) :
      s_ (s), namer_ (s, names), u_ (u), rel_ (rel), rep_ (rep), check_pairs_ (check_pairs)
   {
      for (std::size_t e = 0; e < u.size (); ++e)
      {
         auto n = u.events[e].name;
         if (ref_of_.size () <= n) ref_of_.resize (n + 1, kNone);
         ref_of_[n] = e;
      }
   }

   void on_configuration (const Configuration &c, std::span<const EventId> en_c,
      std::span<const EventId> cex_c) override
   {
      ++rep_.configurations;
      Bits cb;
      if (!to_ref (c.events (), cb)) return;

      auto expect_en = ref_en (u_, cb);
      auto expect_cex = ref_cex (u_, cb);
      if (names (en_c) != sorted (expect_en))
      {
         ++rep_.en_mismatches;
         problem ("en differs at a configuration of size " + std::to_string (c.size ()));
      }
      if (names (cex_c) != sorted (expect_cex))
      {
         ++rep_.cex_mismatches;
         problem ("cexp differs at a configuration of size " + std::to_string (c.size ()));
      }
      for (EventId e : cex_c)
         if (!s_[e].label.is_lock ())
         {
            ++rep_.non_lock_cex;
            problem ("cexp returned " + s_.program ().describe (s_[e].label));
         }

      if (check_pairs_) check_pairs ();
   }

   void on_alt (const Configuration &c, std::span<const EventId> d,
      const std::optional<std::vector<EventId>> &j) override
   {
      ++rep_.alt_calls;
      Bits cb, db;
      if (!to_ref (c.events (), cb) || !to_ref (d, db)) return;
      bool certified = std::any_of (u_.maximal.begin (), u_.maximal.end (),
         [&] (const Bits &m) { return cb.is_subset_of (m) && !m.intersects (db); });
      if (certified) ++rep_.alt_certified;

      bool exact = rep_.alt.unbounded ();
      if (certified && !j)
         violation ("no clue returned although a maximal configuration avoids D");
      if (exact && !certified && j)
         violation ("clue returned although every maximal configuration meets D");
      if (j)
      {
         if (!is_clue (s_, *j, c.events (), d)) violation ("returned set is not a clue");
         else if (exact && !is_alternative (s_, *j, c.events (), d))
            violation ("returned clue is not an alternative");
      }
   }

   void on_maximal (const Configuration &c) override
   {
      std::vector<NameTable::Name> key;
      for (EventId e : c.events ()) key.push_back (namer_ (e));
      std::sort (key.begin (), key.end ());
      maximal_.insert (std::move (key));
   }

   void finish ()
   {
      rep_.distinct_maximal = maximal_.size ();
      std::set<NameTable::Name> seen (namer_.seen ().begin (), namer_.seen ().end ());
      rep_.interned = seen.size ();
      std::set<NameTable::Name> expected;
      for (auto &e : u_.events) expected.insert (e.name);
      for (auto n : expected)
         if (!seen.count (n)) ++rep_.missing_events;
      for (auto n : seen)
         if (!expected.count (n)) ++rep_.extra_events;
   }

private:
   static constexpr std::size_t kNone = ~std::size_t (0);

   std::size_t ref (EventId e) const
   {
      auto n = namer_ (e);
      return n < ref_of_.size () ? ref_of_[n] : kNone;
   }

   bool to_ref (std::span<const EventId> events, Bits &out) const
   {
      out.resize (u_.size ());
      out.reset ();
      for (EventId e : events)
      {
         auto r = ref (e);
         if (r == kNone) return false;
         out.set (r);
      }
      return true;
   }

   std::vector<NameTable::Name> names (std::span<const EventId> events) const
   {
      std::vector<NameTable::Name> v;
      for (EventId e : events) v.push_back (namer_ (e));
      std::sort (v.begin (), v.end ());
      return v;
   }

   std::vector<NameTable::Name> sorted (const std::vector<std::size_t> &refs) const
   {
      std::vector<NameTable::Name> v;
      for (auto r : refs) v.push_back (u_.events[r].name);
      std::sort (v.begin (), v.end ());
      return v;
   }

   void check_pairs ()
   {
      std::vector<EventId> live;
      for (EventId e : s_.events ())
         if (ref (e) != kNone) live.push_back (e);
      for (EventId a : live)
         for (EventId b : live)
         {
            if (a == b) continue;
            std::size_t ra = ref (a), rb = ref (b);
            if (!pairs_.insert ((std::uint64_t (ra) << 32) | rb).second) continue;
            ++rep_.pairs;
            if (causally_less (s_, a, b) != rel_.less[rb].test (ra))
            {
               ++rep_.causality_mismatches;
               problem ("causality differs for a pair");
            }
            if (in_conflict (s_, a, b) != rel_.conflict[ra].test (rb))
            {
               ++rep_.conflict_mismatches;
               problem ("conflict differs for a pair");
            }
         }
   }

   void violation (const std::string &what)
   {
      ++rep_.alt_contract_violations;
      problem (what);
   }

   void problem (const std::string &what)
   {
      if (rep_.problems.size () < kMaxProblems) rep_.problems.push_back (what);
   }

   EventStore &s_;
   StoreNamer namer_;
   const RefUnfolding &u_;
   const RefRelations &rel_;
   ModeReport &rep_;
   bool check_pairs_;
   std::vector<std::size_t> ref_of_;
   std::set<std::vector<NameTable::Name>> maximal_;
   std::unordered_set<std::uint64_t> pairs_;
};

std::string mode_name (const AltConfig &a)
{
   return a.unbounded () ? "inf" : std::to_string (a.k);
}

} // namespace

bool CrossCheckReport::ok () const
{
   if (ref_maximal != trace_classes) return false;
   for (const auto &m : modes)
   {
      if (m.distinct_maximal != trace_classes) return false;
      if (m.missing_events || m.extra_events) return false;
      if (m.en_mismatches || m.cex_mismatches || m.non_lock_cex) return false;
      if (m.causality_mismatches || m.conflict_mismatches) return false;
      if (m.alt_contract_violations) return false;
   }
   return true;
}

CrossCheckReport cross_check (const Program &p, const CrossCheckOptions &opts)
{
   CrossCheckReport r;
   r.trace_classes = enumerate_trace_classes (p, opts.limits).size ();

   NameTable names;
   RefUnfolding u = ref_unfold (p, names, opts.limits);
   RefRelations rel = ref_relations (u);
   r.ref_events = u.size ();
   r.ref_maximal = u.maximal.size ();

   auto run = [&] (const AltConfig &mode, bool prune) {
      ModeReport &rep = r.modes.emplace_back ();
      rep.alt = mode;
      rep.prune = prune;
      EventStore store (p, opts.skip_step);
      Checker checker (store, names, u, rel, rep, opts.check_pairs);
      ExploreOptions eo;
      eo.alt = mode;
      eo.prune = prune;
      eo.limits = opts.limits.steps;
      rep.stats = explore (store, eo, &checker);
      checker.finish ();
   };
   for (const auto &mode : opts.modes) run (mode, true);
   if (opts.unpruned_pass) run (AltConfig (), false);
   return r;
}

std::string describe (const CrossCheckReport &r)
{
   std::ostringstream o;
   o << "trace classes " << r.trace_classes << ", reference events " << r.ref_events
     << ", reference maximal configurations " << r.ref_maximal << "\n";
   for (const auto &m : r.modes)
   {
      o << "k=" << mode_name (m.alt) << (m.prune ? "" : " unpruned") << ": maximal " << m.stats.max_configs << " (" << m.distinct_maximal
        << " distinct), ssbs " << m.stats.ssbs << ", events " << m.interned << " (missing "
        << m.missing_events << ", extra " << m.extra_events << "), configurations "
        << m.configurations << " (en/cex mismatches " << m.en_mismatches << "/" << m.cex_mismatches
        << ", non-lock cex " << m.non_lock_cex << "), pairs " << m.pairs << " (mismatches "
        << m.causality_mismatches << "/" << m.conflict_mismatches << "), alt calls " << m.alt_calls
        << " (violations " << m.alt_contract_violations << ")\n";
      for (const auto &p : m.problems) o << "  " << p << "\n";
   }
   return o.str ();
}

} // namespace qpor
