#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "qpor/dsl.hpp"
#include "qpor/program.hpp"
#include "support.hpp"

using namespace qpor;

TEST_CASE ("enabled follows the lock state")
{
   Program p = load ("handoff.qp");
   State s0 = initial_state (p);
   std::vector<Action> en0 = enabled (s0, p);
   CHECK (en0 == std::vector<Action> {Action::local (0), Action::lock (1, 0), Action::lock (2, 1)});

   State s1 = step (s0, Action::lock (1, 0), p);
   CHECK (s1.locks[0] != 0);
   CHECK (s1.memory == s0.memory);
   std::vector<Action> en1 = enabled (s1, p);
   CHECK (std::find (en1.begin (), en1.end (), Action::lock (1, 0)) == en1.end ());

   SUBCASE ("everything terminated")
   {
      Program q = parse_program ("var x\nthread a { x = 1 }\nthread b { }\n");
      State s = run (q, std::vector<Action> {Action::local (0)});
      CHECK (enabled (s, q).empty ());
      CHECK (terminated (s, q, 1));
   }
}

TEST_CASE ("run folds step")
{
   Program p = load ("handoff.qp");
   CHECK (run (p, {}) == initial_state (p));

   std::vector<Action> seq {Action::local (0), Action::lock (1, 0)};
   State s = run (p, seq);
   CHECK (s.locks[0] != 0);
   CHECK (s.memory[*p.find_var ("x")] == 0);
   CHECK (s.steps == 2);

   std::vector<Action> twice {Action::lock (1, 0), Action::lock (1, 0)};
   try
   {
      run (p, twice);
      FAIL ("expected not-a-run");
   }
   catch (const NotARun &e)
   {
      CHECK (e.index == 1);
   }
}

TEST_CASE ("local statements")
{
   Program p = parse_program (R"(
var x
array a[3] = {1, 2}
thread t {
  x = 7
  a[x - 5] = a[0] + a[1] * 10
  assert(x == 8)
  a[x - 4] = 0
}
)");
   State s = initial_state (p);
   CHECK (!apply (s, Action::local (0), p));
   CHECK (s.memory[0] == 7);
   CHECK (s.locks.empty ());
   apply (s, Action::local (0), p);
   CHECK (s.memory[1 + 2] == 21);
   auto failed = apply (s, Action::local (0), p);
   REQUIRE (failed);
   CHECK (failed->pos.line == 7);
   CHECK_THROWS_AS (apply (s, Action::local (0), p), ExecutionError);
}

TEST_CASE ("execution errors")
{
   Program div = parse_program ("var x\nthread t { x = 1 / x }\n");
   State s = initial_state (div);
   CHECK_THROWS_AS (apply (s, Action::local (0), div), ExecutionError);

   Program unl = parse_program ("mutex m\nthread t { unlock(m) }\n");
   s = initial_state (unl);
   CHECK_THROWS_AS (apply (s, Action::unlock (0, 0), unl), ExecutionError);

   Program other = parse_program ("mutex m\nthread a { lock(m) }\nthread b { unlock(m) }\n");
   s = run (other, std::vector<Action> {Action::lock (0, 0)});
   CHECK_THROWS_AS (apply (s, Action::unlock (1, 0), other), ExecutionError);

   Program loop = parse_program ("var x\nthread t { while (1) { x = x + 1 } }\n");
   s = initial_state (loop);
   StepLimits lim {50};
   CHECK_THROWS_AS (
      for (int i = 0; i < 100; ++i) apply (s, Action::local (0), loop, lim),
      StepLimitExceeded);

   CHECK_THROWS_AS (apply (s, Action::lock (0, 0), loop), ActionNotEnabled);
}

TEST_CASE ("initially locked mutex is released once by anyone")
{
   Program p = parse_program ("mutex s = 1\nthread a { unlock(s) }\nthread b { lock(s) }\n");
   State s0 = initial_state (p);
   CHECK (enabled (s0, p) == std::vector<Action> {Action::unlock (0, 0)});
   State s1 = step (s0, Action::unlock (0, 0), p);
   CHECK (enabled (s1, p) == std::vector<Action> {Action::lock (1, 0)});
}

TEST_CASE ("independence")
{
   CHECK (independent (Action::local (0), Action::local (1)));
   CHECK (!independent (Action::lock (0, 0), Action::unlock (1, 0)));
   CHECK (!independent (Action::lock (0, 0), Action::local (0)));
   CHECK (independent (Action::lock (0, 0), Action::lock (1, 1)));
   CHECK (independent (Action::lock (0, 0), Action::local (1)));
   CHECK (!independent (Action::lock (0, 0), Action::lock (1, 0)));

   std::mt19937 rng (7);
   auto random_action = [&] {
      ThreadId t = rng () % 3;
      switch (rng () % 3)
      {
      case 0: return Action::local (t);
      case 1: return Action::lock (t, rng () % 2);
      default: return Action::unlock (t, rng () % 2);
      }
   };
   for (int i = 0; i < 2000; ++i)
   {
      Action a = random_action (), b = random_action ();
      CHECK (independent (a, b) == independent (b, a));
      CHECK (!independent (a, a));
   }
}

// Exhaustive diamond check over the reachable state space.
static void check_diamonds (const Program &p)
{
   std::vector<State> todo {initial_state (p)};
   std::set<std::pair<std::vector<std::int64_t>, std::vector<std::uint32_t>>> seen;
   std::size_t visited = 0;
   while (!todo.empty () && visited < 10000)
   {
      State s = std::move (todo.back ());
      todo.pop_back ();
      std::vector<std::uint32_t> key = s.pc;
      key.insert (key.end (), s.locks.begin (), s.locks.end ());
      if (!seen.insert ({s.memory, key}).second) continue;
      ++visited;

      std::vector<Action> en = enabled (s, p);
      for (const Action &a : en)
         for (const Action &b : en)
         {
            if (!independent (a, b)) continue;
            State sa = step (s, a, p);
            State sb = step (s, b, p);
            REQUIRE (is_enabled (sa, p, b));
            REQUIRE (is_enabled (sb, p, a));
            CHECK (step (sa, b, p) == step (sb, a, p));
         }
      for (const Action &a : en)
      {
         State t = step (s, a, p);
         CHECK (t == step (s, a, p));
         todo.push_back (std::move (t));
      }
   }
}

TEST_CASE ("diamond property on fixtures")
{
   for (const char *f : {"handoff.qp"})
   {
      CAPTURE (f);
      check_diamonds (load (f));
   }
}
