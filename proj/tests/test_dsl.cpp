#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "qpor/dsl.hpp"
#include "support.hpp"

using namespace qpor;

static ParseError parse_error (const std::string &src)
{
   try
   {
      parse_program (src);
   }
   catch (const ParseError &e)
   {
      return e;
   }
   FAIL ("expected a parse error for: " << src);
   return ParseError (ParseErrorKind::Syntax, {}, "");
}

TEST_CASE ("handoff listing")
{
   Program p = load ("handoff.qp");
   CHECK (p.num_threads () == 3);
   CHECK (p.num_mutexes () == 2);
   // the else keyword is a line of the listing but not a statement
   CHECK (count_statements (p.threads[0]) == 6);
   CHECK (count_statements (p.threads[1]) == 3);
   CHECK (count_statements (p.threads[2]) == 3);
}

TEST_CASE ("empty thread body")
{
   Program p = parse_program ("thread a { }\n");
   CHECK (p.num_threads () == 1);
   CHECK (p.threads[0].code.empty ());
   CHECK (enabled (initial_state (p), p).empty ());
}

TEST_CASE ("diagnostics")
{
   ParseError e = parse_error ("mutex m\nthread a {\n  lock(q)\n}\n");
   CHECK (e.kind == ParseErrorKind::UndeclaredIdentifier);
   CHECK (e.pos.line == 3);
   CHECK (e.pos.column == 8);

   e = parse_error ("var x\nmutex x\nthread a { }\n");
   CHECK (e.kind == ParseErrorKind::DuplicateDeclaration);
   CHECK (e.pos.line == 2);

   e = parse_error ("thread a { }\nthread a { }\n");
   CHECK (e.kind == ParseErrorKind::DuplicateDeclaration);

   e = parse_error ("mutex m\nmutex n\nthread a { lock(m, n) }\n");
   CHECK (e.kind == ParseErrorKind::LockArity);
   e = parse_error ("mutex m\nthread a { unlock() }\n");
   CHECK (e.kind == ParseErrorKind::LockArity);

   e = parse_error ("var x\nthread a {\n  x = (1 + \n}\n");
   CHECK (e.kind == ParseErrorKind::Syntax);
   CHECK (e.pos.line == 4);

   e = parse_error ("var x\nthread a { y = 1 }\n");
   CHECK (e.kind == ParseErrorKind::UndeclaredIdentifier);

   e = parse_error ("var x\n");
   CHECK (e.kind == ParseErrorKind::Syntax);

   e = parse_error ("var x\nthread a { x = 1 $ }\n");
   CHECK (e.kind == ParseErrorKind::Syntax);
   CHECK (e.pos.column == 18);

   CHECK (std::string (e.what ()).find ("2:18") != std::string::npos);
}

TEST_CASE ("declarations")
{
   Program p = parse_program ("var x = -3\narray a[4] = {1, 2}\nmutex m\nmutex s = 1\nthread t { }\n");
   State s = initial_state (p);
   CHECK (s.memory == std::vector<std::int64_t> {-3, 1, 2, 0, 0});
   CHECK (s.locks == std::vector<std::uint32_t> {0, State::kInitialHolder});
}

TEST_CASE ("precedence")
{
   Program p = parse_program (R"(
var x
var y
thread t {
  x = 1 + 2 * 3
  y = (1 + 2) * 3
  x = 10 - 4 - 3
  y = 10 - (4 - 3)
  x = !0 && 1 || 0
  y = 1 < 2 == 1
  x = -2 * -3
  y = 7 % 4 / 2
}
)");
   State s = initial_state (p);
   std::vector<std::int64_t> expect {7, 9, 3, 9, 1, 1, 6, 1};
   for (std::size_t i = 0; i < expect.size (); ++i)
   {
      apply (s, Action::local (0), p);
      CHECK (s.memory[i % 2] == expect[i]);
   }

   std::string printed = print_program (p);
   CHECK (printed.find ("x = 1 + 2 * 3") != std::string::npos);
   CHECK (printed.find ("y = (1 + 2) * 3") != std::string::npos);
   CHECK (printed.find ("y = 10 - (4 - 3)") != std::string::npos);
}

TEST_CASE ("print and parse round trip")
{
   int n = 0;
   for (const auto &entry : std::filesystem::directory_iterator (QPOR_FIXTURES))
   {
      if (entry.path ().extension () != ".qp") continue;
      CAPTURE (entry.path ().string ());
      Program p = parse_file (entry.path ().string ()).program;
      std::string once = print_program (p);
      Program q = parse_program (once);
      CHECK (print_program (q) == once);
      CHECK (q.num_threads () == p.num_threads ());
      CHECK (q.exprs.size () == p.exprs.size ());
      for (std::size_t t = 0; t < p.num_threads (); ++t)
         CHECK (count_statements (q.threads[t]) == count_statements (p.threads[t]));
      CHECK (initial_state (q) == initial_state (p));
      ++n;
   }
   CHECK (n >= 1);
}
