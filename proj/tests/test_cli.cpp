#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "support.hpp"

using namespace qpor;

namespace {

struct Result
{
   int code;
   std::string out, err;
};

Result run (std::vector<std::string> args, const std::string &input = "")
{
   args.insert (args.begin (), "qpor");
   std::vector<const char *> argv;
   for (auto &a : args) argv.push_back (a.c_str ());
   std::istringstream in (input);
   std::ostringstream out, err;
   int code = cli_main (int (argv.size ()), argv.data (), in, out, err);
   return {code, out.str (), err.str ()};
}

std::string temp (const std::string &name)
{
   return (std::filesystem::temp_directory_path () / ("qpor_test_" + name)).string ();
}

nlohmann::json read_json (const std::string &path)
{
   std::ifstream f (path);
   return nlohmann::json::parse (f);
}

} // namespace

TEST_CASE ("check writes stats")
{
   auto path = temp ("handoff.json");
   auto r = run ({"check", fixture ("handoff.qp"), "--k", "inf", "--stats-json", path});
   // one of the three maximal configurations leaves t1 waiting on m forever
   CHECK (r.code == kExitFindings);
   auto j = read_json (path);
   CHECK (j["max_configs"] == 3);
   CHECK (j["ssbs"] == 0);
   CHECK (j["blocked_deadlocks"] == 1);
   CHECK (run ({"check", fixture ("handoff.qp"), "--allow-deadlock"}).code == kExitOk);
   std::remove (path.c_str ());
}

TEST_CASE ("ssbs fall to zero from k=1 to k=2 on three writers")
{
   auto p1 = temp ("w1.json"), p2 = temp ("w2.json");
   CHECK (run ({"check", fixture ("writers3.qp"), "--k", "1", "--stats-json", p1}).code == kExitOk);
   CHECK (run ({"check", fixture ("writers3.qp"), "--k", "2", "--stats-json", p2}).code == kExitOk);
   auto s1 = read_json (p1)["ssbs"].get<int> (), s2 = read_json (p2)["ssbs"].get<int> ();
   CHECK (s1 > s2);
   CHECK (s2 == 0);
   std::remove (p1.c_str ());
   std::remove (p2.c_str ());
}

TEST_CASE ("generated writers piped into check")
{
   auto g = run ({"gen", "writers", "--n", "4"});
   REQUIRE (g.code == kExitOk);
   auto r = run ({"check", "-", "--k", "inf", "--stats-json", "-"}, g.out);
   CHECK (r.code == kExitOk);
   auto j = nlohmann::json::parse (r.out.substr (r.out.find ('{')));
   CHECK (j["max_configs"] == 8);
}

TEST_CASE ("exit codes")
{
   CHECK (run ({"check", fixture ("counter_assert.qp")}).code == kExitFindings);
   CHECK (run ({"check", fixture ("lock_order.qp")}).code == kExitFindings);
   CHECK (run ({"check", fixture ("lock_order.qp"), "--allow-deadlock"}).code == kExitOk);
   CHECK (run ({"check", "-"}, "thread t { lock(q) }\n").code == kExitUsage);
   CHECK (run ({"check", "-", "--k", "0"}, "var a\nthread t { a = 1 }\n").code == kExitUsage);
   CHECK (run ({"check", "-", "--k", "x"}, "var a\nthread t { a = 1 }\n").code == kExitUsage);
   CHECK (run ({"frobnicate"}).code == kExitUsage);
   CHECK (run ({"check", "/nonexistent/file.qp"}).code == kExitUsage);
   CHECK (run ({"check", "-", "--max-steps", "10"},
             "var i\nthread t { while (i < 100) { i = i + 1 } }\n").code == kExitGuard);
   CHECK (run ({"check", "-"}, "var a\nthread t { a = 1 / a }\n").code == kExitGuard);
   CHECK (run ({"oracle-check", fixture ("handoff.qp"), "--oracle-limit", "2"}).code == kExitGuard);
}

TEST_CASE ("parse errors carry a position")
{
   auto r = run ({"check", "-"}, "mutex m\nthread t {\n  lock(q)\n}\n");
   CHECK (r.code == kExitUsage);
   CHECK (r.err.find ("3:") != std::string::npos);
   CHECK (r.err.find ("undeclared-identifier") != std::string::npos);
}

TEST_CASE ("oracle-check agrees on handoff")
{
   auto r = run ({"oracle-check", fixture ("handoff.qp")});
   CHECK (r.code == kExitOk);
   CHECK (r.out.find ("agree") != std::string::npos);
}

TEST_CASE ("dot and 3sat generation")
{
   auto r = run ({"dot", fixture ("handoff.qp")});
   CHECK (r.code == kExitOk);
   CHECK (r.out.find ("digraph") == 0);

   auto g = run ({"gen", "3sat", "-"}, "p cnf 3 3\n1 -2 3 0\n-1 -2 0\n1 -3 0\n");
   CHECK (g.code == kExitOk);
   CHECK (g.out.find ("thread r1_3") != std::string::npos);
   CHECK (run ({"gen", "3sat", "-"}, "p cnf 1 1\n1 -1 0\n").code == kExitUsage);
}
