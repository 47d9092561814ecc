#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qpor/crosscheck.hpp"
#include "qpor/dsl.hpp"
#include "qpor/emit.hpp"
#include "qpor/explorer.hpp"
#include "qpor/generators.hpp"

namespace qpor {

namespace {

struct Usage : Error
{
   using Error::Error;
};

std::string slurp (const std::string &path, std::istream &in)
{
   std::stringstream ss;
   if (path == "-")
      ss << in.rdbuf ();
   else
   {
      std::ifstream f (path);
      if (!f) throw Usage ("cannot open " + path);
      ss << f.rdbuf ();
   }
   return ss.str ();
}

void write_file (const std::string &path, const std::string &text, std::ostream &out)
{
   if (path == "-")
   {
      out << text;
      return;
   }
   std::ofstream f (path);
   if (!f) throw Usage ("cannot write " + path);
   f << text;
}

AltConfig parse_k (const std::string &k)
{
   if (k == "inf") return AltConfig ();
   std::size_t n = 0, used = 0;
   try
   {
      n = std::stoul (k, &used);
   }
   catch (const std::exception &)
   {
      used = 0;
   }
   if (used != k.size () || n == 0) throw Usage ("--k expects a positive integer or inf, got " + k);
   return AltConfig (n);
}

std::string run_text (const Program &p, const std::vector<Action> &run)
{
   std::string s;
   for (const Action &a : run) s += "  " + p.describe (a) + "\n";
   return s;
}

struct Common
{
   std::string file;
   std::string k = "inf";
   unsigned skip_step = 4;
   std::uint64_t max_steps = 100000;
   std::uint64_t max_frames = 1000000;
   bool no_prune = false;
   std::string choice = "min";
   std::string stats_json;
   std::string dot;
   bool allow_deadlock = false;
   std::size_t oracle_limit = 10000;
   std::string oracle_k = "all";
};

void add_exploration_flags (CLI::App *cmd, Common &c)
{
   cmd->add_option ("--k", c.k, "alternatives look at the k most recent disabled events (N or inf)");
   cmd->add_option ("--skip-step", c.skip_step, "skip-link step of the causality trees")
      ->check (CLI::Range (2u, 1u << 16));
   cmd->add_option ("--max-steps", c.max_steps, "guard on the length of any execution");
   cmd->add_option ("--max-frames", c.max_frames, "guard on the number of exploration calls");
   cmd->add_flag ("--no-prune", c.no_prune, "keep every event in U");
   cmd->add_option ("--choice", c.choice, "which enabled event to try first")
      ->check (CLI::IsMember ({"min", "max"}));
}

ExploreOptions exploration_options (const Common &c)
{
   ExploreOptions o;
   o.alt = parse_k (c.k);
   o.limits.max_steps = c.max_steps;
   o.max_frames = c.max_frames;
   o.prune = !c.no_prune;
   o.choice = c.choice == "max" ? Choice::Max : Choice::Min;
   return o;
}

int do_check (const Common &c, std::istream &in, std::ostream &out)
{
   auto src = parse_source (slurp (c.file, in), c.file);
   const Program &p = src.program;
   ExploreOptions o = exploration_options (c);
   EventStore store (p, c.skip_step);
   ExplorationStats st = explore (store, o);

   out << "maximal configurations: " << st.max_configs << "\n";
   out << "sleep-set blocked: " << st.ssbs << "\n";
   out << "events: " << st.events << "\n";
   out << "deadlocks: " << st.blocked_deadlocks << "\n";
   out << "assertion violations: " << st.violations.size () << "\n";
   for (const Violation &v : st.violations)
      out << "assertion failed in thread " << p.threads[v.site.thread].name << " at "
          << v.site.pos.line << ":" << v.site.pos.column << ", witness:\n"
          << run_text (p, v.witness);
   out << "time: " << st.time_ms << " ms\n";

   if (!c.stats_json.empty ()) write_file (c.stats_json, stats_json (st, o.alt), out);
   if (!c.dot.empty ()) write_file (c.dot, export_dot (store), out);

   bool bad = !st.violations.empty () || (st.blocked_deadlocks && !c.allow_deadlock);
   return bad ? kExitFindings : kExitOk;
}

int do_oracle (const Common &c, std::istream &in, std::ostream &out)
{
   auto src = parse_source (slurp (c.file, in), c.file);
   CrossCheckOptions o;
   o.limits.max_runs = c.oracle_limit;
   o.limits.steps.max_steps = c.max_steps;
   o.skip_step = c.skip_step;
   if (c.oracle_k != "all") o.modes = {parse_k (c.oracle_k)};
   auto r = cross_check (src.program, o);
   out << describe (r);
   out << (r.ok () ? "agree\n" : "MISMATCH\n");
   return r.ok () ? kExitOk : kExitFindings;
}

int do_dot (const Common &c, std::istream &in, std::ostream &out)
{
   auto src = parse_source (slurp (c.file, in), c.file);
   ExploreOptions o = exploration_options (c);
   o.prune = false;
   EventStore store (src.program, c.skip_step);
   explore (store, o);
   write_file (c.dot.empty () ? "-" : c.dot, export_dot (store), out);
   return kExitOk;
}

} // namespace

int cli_main (int argc, const char *const *argv, std::istream &in, std::ostream &out,
   std::ostream &err)
{
   CLI::App app ("Stateless model checker for thread/mutex programs", "qpor");
   app.require_subcommand (1);

   Common c;
   auto *check = app.add_subcommand ("check", "explore every interleaving class of a program");
   check->add_option ("file", c.file, "program, or - for standard input")->required ();
   add_exploration_flags (check, c);
   check->add_option ("--stats-json", c.stats_json, "write statistics as JSON (- for stdout)");
   check->add_option ("--dot", c.dot, "write the events left in U as Graphviz");
   check->add_flag ("--allow-deadlock", c.allow_deadlock, "deadlocks do not make the exit code nonzero");

   auto *oracle = app.add_subcommand ("oracle-check", "compare the explorer against brute force");
   oracle->add_option ("file", c.file, "program, or - for standard input")->required ();
   oracle->add_option ("--k", c.oracle_k, "mode to compare (N, inf, or all)");
   oracle->add_option ("--skip-step", c.skip_step, "skip-link step of the causality trees")
      ->check (CLI::Range (2u, 1u << 16));
   oracle->add_option ("--max-steps", c.max_steps, "guard on the length of any execution");
   oracle->add_option ("--oracle-limit", c.oracle_limit, "bound on enumerated interleaving classes");

   auto *dot = app.add_subcommand ("dot", "explore without pruning and print the unfolding");
   dot->add_option ("file", c.file, "program, or - for standard input")->required ();
   add_exploration_flags (dot, c);
   dot->add_option ("-o,--out", c.dot, "output path (default stdout)");

   auto *gen = app.add_subcommand ("gen", "print a generated program");
   gen->require_subcommand (1);
   unsigned writers_n = 3;
   std::string dimacs, gen_out = "-";
   auto *writers = gen->add_subcommand ("writers", "n writers, a counter and a master");
   writers->add_option ("--n", writers_n, "number of writers")->check (CLI::PositiveNumber);
   writers->add_option ("-o,--out", gen_out, "output path (default stdout)");
   auto *sat = gen->add_subcommand ("3sat", "encoding of a CNF formula with clauses of up to 3 literals");
   sat->add_option ("formula", dimacs, "DIMACS file, or - for standard input")->required ();
   sat->add_option ("-o,--out", gen_out, "output path (default stdout)");

   try
   {
      app.parse (argc, argv);
   }
   catch (const CLI::ParseError &e)
   {
      int code = app.exit (e, out, err);
      return code == 0 ? kExitOk : kExitUsage;
   }

   try
   {
      if (*check) return do_check (c, in, out);
      if (*oracle) return do_oracle (c, in, out);
      if (*dot) return do_dot (c, in, out);
      if (*writers)
      {
         write_file (gen_out, writers_source (writers_n), out);
         return kExitOk;
      }
      if (*sat)
      {
         write_file (gen_out, threesat_source (parse_dimacs (slurp (dimacs, in))), out);
         return kExitOk;
      }
   }
   catch (const ParseError &e)
   {
      err << (c.file.empty () ? std::string ("<input>") : c.file) << ":" << e.what () << "\n";
      return kExitUsage;
   }
   catch (const MalformedFormula &e)
   {
      err << "malformed formula: " << e.what () << "\n";
      return kExitUsage;
   }
   catch (const Usage &e)
   {
      err << e.what () << "\n";
      return kExitUsage;
   }
   catch (const std::invalid_argument &e)
   {
      err << e.what () << "\n";
      return kExitUsage;
   }
   catch (const GuardExceeded &e)
   {
      err << "guard exceeded: " << e.what () << "\n";
      err << "after " << e.prefix.size () << " steps\n";
      return kExitGuard;
   }
   catch (const ExecutionError &e)
   {
      err << "execution error in thread " << e.thread << " at " << e.pos.line << ":"
          << e.pos.column << ": " << e.what () << "\n";
      return kExitGuard;
   }
   catch (const LimitExceeded &e)
   {
      err << "oracle limit exceeded: " << e.what () << "\n";
      return kExitGuard;
   }
   catch (const StepLimitExceeded &e)
   {
      err << "step limit exceeded: " << e.what () << "\n";
      return kExitGuard;
   }
   catch (const Error &e)
   {
      err << e.what () << "\n";
      return kExitUsage;
   }
   return kExitUsage;
}

} // namespace qpor
