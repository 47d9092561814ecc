#include "qpor/emit.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qpor/causality.hpp"

namespace qpor {

namespace {

std::string escape (const std::string &s)
{
   std::string out;
   for (char c : s)
   {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
   }
   return out;
}

} // namespace

std::string export_dot (const EventStore &s, std::span<const EventId> events)
{
   std::vector<EventId> ev (events.begin (), events.end ());
   std::sort (ev.begin (), ev.end ());
   ev.erase (std::unique (ev.begin (), ev.end ()), ev.end ());
   std::set<EventId> in (ev.begin (), ev.end ());

   std::set<std::pair<EventId, EventId>> solid, dotted;
   std::map<std::pair<MutexId, EventId>, std::vector<EventId>> siblings;
   for (EventId e : ev)
   {
      const Event &x = s[e];
      EventId pt = x.pt;
      EventId pm = x.pm == kNoEvent ? kBottom : x.pm;
      if (pt != kBottom && in.count (pt) && !(pm != kBottom && causally_less (s, pt, pm)))
         solid.insert ({pt, e});
      if (pm != kBottom && in.count (pm) && !(pt != kBottom && causally_leq (s, pm, pt)))
         solid.insert ({pm, e});
      if (!x.label.is_local ()) siblings[{x.label.mutex, pm}].push_back (e);
   }
   for (auto &[key, group] : siblings)
      for (std::size_t i = 0; i < group.size (); ++i)
         for (std::size_t j = i + 1; j < group.size (); ++j)
            dotted.insert ({group[i], group[j]});

   const Program &p = s.program ();
   std::ostringstream o;
   o << "digraph unfolding {\n";
   o << "  node [shape=box];\n";
   for (EventId e : ev)
      o << "  e" << e << " [label=\"" << e << ": " << escape (p.describe (s[e].label)) << "\"];\n";
   for (auto [a, b] : solid) o << "  e" << a << " -> e" << b << ";\n";
   for (auto [a, b] : dotted)
      o << "  e" << a << " -> e" << b << " [style=dotted, dir=none, constraint=false];\n";
   o << "}\n";
   return o.str ();
}

std::string export_dot (const EventStore &s)
{
   std::vector<EventId> live;
   for (EventId e : s.events ())
      if (s.is_live (e)) live.push_back (e);
   return export_dot (s, live);
}

std::string stats_json (const ExplorationStats &st, const AltConfig &alt)
{
   nlohmann::ordered_json j;
   if (alt.unbounded ()) j["k"] = "inf";
   else j["k"] = alt.k;
   j["max_configs"] = st.max_configs;
   j["ssbs"] = st.ssbs;
   j["events"] = st.events;
   j["assert_violations"] = st.violations.size ();
   j["blocked_deadlocks"] = st.blocked_deadlocks;
   j["time_ms"] = st.time_ms;
   j["phase_ms"] = {
      {"execute", st.phase_ms.execute},
      {"extensions", st.phase_ms.extensions},
      {"comb_build", st.phase_ms.comb_build},
      {"comb_search", st.phase_ms.comb_search},
   };
   j["frames"] = st.frames;
   j["peak_live"] = st.peak_live;
   j["cexp_iterations"] = st.cexp_iterations;
   j["alt"] = {
      {"calls", st.alt.calls},
      {"found", st.alt.found},
      {"visits", st.alt.visits},
      {"spike_events", st.alt.spike_events},
   };
   return j.dump (2) + "\n";
}

} // namespace qpor
