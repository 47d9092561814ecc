#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "qpor/causality.hpp"
#include "qpor/dsl.hpp"
#include "qpor/explorer.hpp"
#include "support.hpp"

using namespace qpor;

struct Recorder : ExploreObserver
{
   std::vector<std::set<EventId>> maximal;
   void on_maximal (const Configuration &c) override
   {
      maximal.emplace_back (c.events ().begin (), c.events ().end ());
   }
};

TEST_CASE ("handoff")
{
   Program p = load ("handoff.qp");
   for (std::size_t k : {std::size_t (1), std::size_t (2), AltConfig::kUnbounded})
   {
      CAPTURE (k);
      EventStore s (p);
      ExploreOptions o;
      o.alt = AltConfig (k);
      o.check_invariants = true;
      o.prune = false;
      Recorder r;
      ExplorationStats st = explore (s, o, &r);
      CHECK (st.max_configs == 3);
      CHECK (st.ssbs == 0);
      CHECK (st.blocked_deadlocks == 1);
      CHECK (st.violations.empty ());
      CHECK (s.size () == 19);
   }
}

TEST_CASE ("handoff with pruning and either choice order")
{
   Program p = load ("handoff.qp");
   for (Choice ch : {Choice::Min, Choice::Max})
   {
      ExploreOptions o;
      o.choice = ch;
      o.check_invariants = true;
      ExplorationStats st = explore (p, o);
      CHECK (st.max_configs == 3);
      CHECK (st.ssbs == 0);
   }
}

TEST_CASE ("straight line")
{
   Program p = parse_program ("var x\nthread t { x = 1\n x = 2 }\n");
   ExplorationStats st = explore (p);
   CHECK (st.max_configs == 1);
   CHECK (st.ssbs == 0);
   CHECK (st.events == 2);
}

TEST_CASE ("assertion violations are collected")
{
   Program p = parse_program ("var x\nthread t { assert(0 == 1) }\nthread u { x = 1 }\n");
   ExplorationStats st = explore (p);
   CHECK (st.max_configs == 1);
   REQUIRE (st.violations.size () == 1);
   CHECK (st.violations[0].witness.size () == 2);
   CHECK (st.violations[0].site.pos.line == 2);
}

TEST_CASE ("guards")
{
   Program p = parse_program ("var x\nthread t { while (1) { x = x + 1 } }\n");
   ExploreOptions o;
   o.limits.max_steps = 100;
   CHECK_THROWS_AS (explore (p, o), GuardExceeded);

   Program q = load ("handoff.qp");
   ExploreOptions f;
   f.max_frames = 3;
   CHECK_THROWS_AS (explore (q, f), GuardExceeded);
   CHECK_THROWS_AS (AltConfig (0), std::invalid_argument);
}
