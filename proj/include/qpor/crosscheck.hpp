#pragma once

// Runs the explorer on a program and compares what it sees against the
// reference implementations: trace classes, the unfolding's events, the
// extension sets, causality and conflict, and the alternatives contract.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qpor/explorer.hpp"
#include "qpor/oracle.hpp"

namespace qpor {

struct ModeReport
{
   AltConfig alt;
   bool prune = true;
   ExplorationStats stats;

   std::size_t distinct_maximal = 0;

   std::size_t interned = 0;          // distinct event names seen
   std::size_t missing_events = 0;    // in the reference, never interned
   std::size_t extra_events = 0;      // interned, unknown to the reference

   std::size_t configurations = 0;
   std::size_t en_mismatches = 0;
   std::size_t cex_mismatches = 0;
   std::size_t non_lock_cex = 0;

   std::size_t pairs = 0;
   std::size_t causality_mismatches = 0;
   std::size_t conflict_mismatches = 0;

   std::size_t alt_calls = 0;
   std::size_t alt_certified = 0;       // calls where some maximal configuration avoids D
   std::size_t alt_contract_violations = 0;

   std::vector<std::string> problems;   // first few mismatches, described
};

struct CrossCheckReport
{
   std::size_t trace_classes = 0;
   std::size_t ref_events = 0;
   std::size_t ref_maximal = 0;
   std::vector<ModeReport> modes;

   bool ok () const;
};

struct CrossCheckOptions
{
   std::vector<AltConfig> modes {AltConfig (1), AltConfig (2), AltConfig (3), AltConfig ()};
   OracleLimits limits;
   unsigned skip_step = 4;
   bool check_pairs = true;
   // Also explore once with k unbounded and pruning off, which keeps every
   // event alive so that all pairs get compared.
   bool unpruned_pass = true;
};

CrossCheckReport cross_check (const Program &p, const CrossCheckOptions &opts = {});

std::string describe (const CrossCheckReport &r);

} // namespace qpor
