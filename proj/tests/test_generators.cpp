#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qpor/dsl.hpp"
#include "qpor/explorer.hpp"
#include "qpor/generators.hpp"
#include "support.hpp"

using namespace qpor;

TEST_CASE ("writers shape")
{
   auto p = generate_writers (3);
   CHECK (p.num_threads () == 5);
   CHECK (p.num_mutexes () == 4);
   CHECK (p.threads[3].name == "count");
   CHECK (p.threads[4].name == "master");
   CHECK (print_program (parse_program (writers_source (3))) == print_program (p));

   auto one = generate_writers (1);
   CHECK (one.num_threads () == 3);
}

TEST_CASE ("writers fixtures match the generator")
{
   for (unsigned n = 1; n <= 4; ++n)
      CHECK (print_program (load ("writers" + std::to_string (n) + ".qp"))
         == print_program (generate_writers (n)));
}

TEST_CASE ("the worked 3-SAT example")
{
   // (x1 | !x2 | x3) & (!x1 | !x2) & (x1 | !x3)
   Formula3Sat f;
   f.num_vars = 3;
   f.clauses = {{{0, true}, {1, false}, {2, true}}, {{0, false}, {1, false}}, {{0, true}, {2, false}}};
   auto p = generate_3sat (f);
   CHECK (p.num_threads () == 16);
   CHECK (p.num_mutexes () == 13);
   std::size_t start = 0;
   for (auto &m : p.mutexes) start += m.initially_locked;
   CHECK (start == 7);

   auto text = parse_dimacs ("c example\np cnf 3 3\n1 -2 3 0\n-1 -2 0\n1 -3 0\n");
   CHECK (print_program (generate_3sat (text)) == print_program (p));
   CHECK (print_program (load ("sat_example.qp")) == print_program (p));

   // at most 2|V| + |phi|(|V|+1) events in the construction's counting,
   // here doubled since starting and running a thread are separate events
   EventStore store (p);
   ExploreOptions o;
   o.prune = false;
   explore (store, o);
   CHECK (store.size () <= 2 * (2 * 3 + 3 * (3 + 1)));
}

TEST_CASE ("unsatisfiable formula still terminates")
{
   auto f = parse_dimacs ("p cnf 1 2\n1 0\n-1 0\n");
   auto p = generate_3sat (f);
   CHECK (p.num_threads () == 6);
   auto st = explore (p);
   CHECK (st.max_configs == 4);
   CHECK (st.ssbs == 0);
}

TEST_CASE ("empty formula")
{
   Formula3Sat f;
   f.num_vars = 2;
   auto p = generate_3sat (f);
   CHECK (p.num_threads () == 4);
   for (auto &t : p.threads) CHECK ((t.name[0] == 't' || t.name[0] == 'f'));
   auto st = explore (p);
   CHECK (st.max_configs == 4);
}

TEST_CASE ("malformed formulas")
{
   Formula3Sat f;
   f.num_vars = 2;
   f.clauses = {{{0, true}, {0, false}}};
   CHECK_THROWS_AS (validate (f), MalformedFormula);
   f.clauses = {{{0, true}, {1, true}, {0, true}, {1, false}}};
   CHECK_THROWS_AS (validate (f), MalformedFormula);
   f.clauses = {{{2, true}}};
   CHECK_THROWS_AS (validate (f), MalformedFormula);
   f.clauses = {{}};
   CHECK_THROWS_AS (validate (f), MalformedFormula);
   CHECK_THROWS_AS (parse_dimacs ("1 2 0\n"), MalformedFormula);
   CHECK_THROWS_AS (parse_dimacs ("p cnf 2 1\n1 x 0\n"), MalformedFormula);
}
