#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "qpor/alternatives.hpp"
#include "qpor/causality.hpp"
#include "support.hpp"

using namespace qpor;

namespace {

struct Handoff
{
   qpor::Program p = load ("handoff.qp");
   EventStore store {p};
   std::vector<EventId> e = intern_handoff (store);

   Handoff ()
   {
      for (int i = 1; i <= 19; ++i) store.add_live (e[i]);
   }

   std::vector<EventId> ids (std::initializer_list<int> xs) const
   {
      std::vector<EventId> v;
      for (int x : xs) v.push_back (e[x]);
      return v;
   }

   bool has (const std::vector<EventId> &j, int x) const
   {
      return std::find (j.begin (), j.end (), e[x]) != j.end ();
   }
};

} // namespace

TEST_CASE ("k must be positive")
{
   CHECK_THROWS_AS (AltConfig (0), std::invalid_argument);
   CHECK (AltConfig ().unbounded ());
   CHECK_FALSE (AltConfig (3).unbounded ());
}

TEST_CASE ("alternative to 2 after 1")
{
   Handoff f;
   auto c = make_configuration (f.store, f.ids ({1}));
   auto d = f.ids ({2});
   for (AltConfig cfg : {AltConfig (1), AltConfig ()})
   {
      auto j = alt (f.store, c, d, cfg);
      REQUIRE (j);
      CHECK (f.has (*j, 8));
      CHECK_FALSE (f.has (*j, 2));
      CHECK (is_clue (f.store, *j, c.events (), d));
      CHECK (is_alternative (f.store, *j, c.events (), d));
   }
}

TEST_CASE ("alternative to 2 and 13 after [12]")
{
   Handoff f;
   auto c = make_configuration (f.store, f.ids ({1, 8, 9, 10, 11, 12}));
   auto d = f.ids ({2, 13});
   AltStats st;
   auto j = alt (f.store, c, d, AltConfig (), &st);
   REQUIRE (j);
   CHECK (f.has (*j, 15));
   CHECK (is_alternative (f.store, *j, c.events (), d));
   CHECK (st.calls == 1);
   CHECK (st.found == 1);
   CHECK (st.visits >= 1);

   // with k = 1 only 13 needs an answer
   auto j1 = alt (f.store, c, d, AltConfig (1));
   REQUIRE (j1);
   CHECK (is_clue (f.store, *j1, c.events (), d));
   bool answers_13 = f.has (*j1, 15);
   CHECK (answers_13);
}

TEST_CASE ("no alternative when every maximal configuration meets D")
{
   Handoff f;
   // after [7] plus 1..4 every extension is fixed; D = {15} and 13 is not
   // enabled, so nothing conflicts with 15 outside D
   auto c = make_configuration (f.store, f.ids ({1, 2, 3, 4, 5, 6, 7}));
   auto d = f.ids ({15});
   CHECK_FALSE (alt (f.store, c, d, AltConfig ()));
}

TEST_CASE ("clue and alternative predicates")
{
   Handoff f;
   auto c = f.ids ({1});
   CHECK (is_clue (f.store, f.ids ({8}), c, f.ids ({2})));
   CHECK (is_clue (f.store, f.ids ({15}), c, f.ids ({2})));
   CHECK_FALSE (is_alternative (f.store, f.ids ({15}), c, f.ids ({2})));
   // not causally closed
   CHECK_FALSE (is_clue (f.store, f.ids ({9}), c, f.ids ({2})));
   // meets D
   CHECK_FALSE (is_clue (f.store, f.ids ({2}), c, f.ids ({2})));
   // conflicts with C
   CHECK_FALSE (is_clue (f.store, f.ids ({8}), f.ids ({1, 2}), f.ids ({15})));

   CHECK (is_configuration (f.store, f.ids ({1, 8, 9})));
   CHECK_FALSE (is_configuration (f.store, f.ids ({2, 8})));
   CHECK_FALSE (is_configuration (f.store, f.ids ({9})));
}

TEST_CASE ("comb spikes")
{
   Handoff f;
   auto c = make_configuration (f.store, f.ids ({1, 8, 9, 10, 11, 12}));
   auto d = f.ids ({2, 13});
   auto comb = build_comb (f.store, c, d, AltConfig ());
   REQUIRE (comb.spikes.size () == 2);
   for (std::size_t i = 0; i < comb.spikes.size (); ++i)
      for (EventId x : comb.spikes[i])
         CHECK (in_conflict (f.store, x, comb.targets[i]));
   auto one = build_comb (f.store, c, d, AltConfig (1));
   REQUIRE (one.targets.size () == 1);
   CHECK (one.targets[0] == f.e[13]);
}
