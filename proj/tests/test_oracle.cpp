#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "qpor/crosscheck.hpp"
#include "qpor/dsl.hpp"
#include "qpor/generators.hpp"
#include "qpor/oracle.hpp"
#include "support.hpp"

using namespace qpor;

namespace {

std::size_t class_count_by_runs (const Program &p)
{
   std::set<TraceClass> classes;
   for (auto &r : enumerate_runs (p)) classes.insert (canonicalize (r));
   return classes.size ();
}

} // namespace

TEST_CASE ("runs and classes of small programs")
{
   auto p = parse_program ("var a\nvar b\nthread p { a = 1 }\nthread q { b = 2 }\n");
   CHECK (enumerate_runs (p).size () == 2);
   CHECK (class_count_by_runs (p) == 1);
   CHECK (enumerate_trace_classes (p).size () == 1);

   auto handoff = load ("handoff.qp");
   CHECK (class_count_by_runs (handoff) == 3);
   CHECK (enumerate_trace_classes (handoff).size () == 3);
}

TEST_CASE ("independent threads commute into one class")
{
   auto p = parse_program ("var a\nvar b\nvar c\nvar d\n"
                           "thread p { a = 1 }\nthread q { b = 1 }\n"
                           "thread r { c = 1 }\nthread s { d = 1 }\n");
   auto runs = enumerate_runs (p);
   CHECK (runs.size () == 24);
   std::set<TraceClass> classes;
   for (auto &r : runs) classes.insert (canonicalize (r));
   CHECK (classes.size () == 1);
}

TEST_CASE ("canonical form")
{
   auto w = Action::local (0);
   auto r = Action::local (1);
   auto r2 = Action::local (2);
   std::vector<Action> one {w, r, r2}, two {w, r2, r};
   CHECK (canonicalize (one) == canonicalize (two));

   auto l0 = Action::lock (0, 0), u0 = Action::unlock (0, 0);
   auto l1 = Action::lock (1, 0), u1 = Action::unlock (1, 0);
   std::vector<Action> a {l0, u0, l1, u1}, b {l1, u1, l0, u0};
   CHECK (canonicalize (a).canonical == a);
   CHECK (canonicalize (b).canonical == b);
   CHECK (canonicalize (a) != canonicalize (b));

   auto c = canonicalize (two);
   CHECK (canonicalize (c.canonical) == c);
}

TEST_CASE ("run limit")
{
   auto p = parse_program ("var a\nthread p { a = 1\na = 2\na = 3 }\nthread q { a = 1\na = 2\na = 3 }\n");
   OracleLimits lim;
   lim.max_runs = 5;
   CHECK_THROWS_AS (enumerate_runs (p, lim), LimitExceeded);
}

TEST_CASE ("writers have 2n classes")
{
   for (unsigned n = 1; n <= 4; ++n)
   {
      auto p = generate_writers (n);
      CHECK (enumerate_trace_classes (p).size () == 2 * n);
   }
   CHECK (class_count_by_runs (generate_writers (1)) == 2);
}

TEST_CASE ("reference unfolding of handoff")
{
   auto p = load ("handoff.qp");
   NameTable names;
   auto u = ref_unfold (p, names);
   CHECK (u.size () == 19);
   CHECK (u.maximal.size () == 3);

   auto rel = ref_relations (u);
   std::size_t n = u.size ();
   for (std::size_t i = 0; i < n; ++i)
   {
      CHECK_FALSE (rel.conflict[i].test (i));
      CHECK_FALSE (rel.less[i].test (i));
      for (std::size_t j = 0; j < n; ++j)
      {
         CHECK (rel.conflict[i].test (j) == rel.conflict[j].test (i));
         if (rel.less[j].test (i)) CHECK_FALSE (rel.less[i].test (j));
         if (rel.less[j].test (i)) CHECK (rel.less[i].is_subset_of (rel.less[j]));
      }
   }

   // Match the store's numbering through names.
   EventStore store (p);
   StoreNamer namer (store, names);
   auto ids = intern_handoff (store);
   std::vector<std::size_t> ref (20);
   for (int i = 1; i <= 19; ++i)
   {
      bool found = false;
      for (std::size_t r = 0; r < n; ++r)
         if (u.events[r].name == namer (ids[i]))
         {
            ref[i] = r;
            found = true;
         }
      CHECK (found);
   }
   CHECK (rel.less[ref[5]].test (ref[1]));
   CHECK (rel.less[ref[12]].test (ref[8]));
   CHECK (rel.conflict[ref[2]].test (ref[8]));
   CHECK_FALSE (rel.conflict[ref[1]].test (ref[8]));
}

TEST_CASE ("reference unfolding of a single thread is a chain")
{
   auto p = parse_program ("var a\nmutex m\nthread t { a = 1\nlock(m)\na = 2\nunlock(m) }\n");
   NameTable names;
   auto u = ref_unfold (p, names);
   REQUIRE (u.size () == 4);
   auto rel = ref_relations (u);
   for (std::size_t i = 0; i < 4; ++i)
   {
      CHECK (rel.conflict[i].none ());
      CHECK (rel.less[i].count () == i);
   }
}

TEST_CASE ("event limit")
{
   OracleLimits lim;
   lim.max_events = 10;
   NameTable names;
   CHECK_THROWS_AS (ref_unfold (load ("handoff.qp"), names, lim), LimitExceeded);
}

TEST_CASE ("explorer agrees with the reference on the fixtures")
{
   for (const char *f : {"handoff.qp", "two_locals.qp", "nested_locks.qp", "lock_order.qp",
           "counter_assert.qp", "start_gate.qp", "disjoint.qp"})
   {
      CAPTURE (f);
      auto r = cross_check (load (f));
      INFO (describe (r));
      CHECK (r.ok ());
   }
}

TEST_CASE ("explorer agrees with the reference on writers")
{
   for (unsigned n = 1; n <= 3; ++n)
   {
      CAPTURE (n);
      auto r = cross_check (generate_writers (n));
      INFO (describe (r));
      CHECK (r.ok ());
      CHECK (r.trace_classes == 2 * n);
   }
}
