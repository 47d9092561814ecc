#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qpor/alternatives.hpp"
#include "qpor/event_store.hpp"

namespace qpor {

enum class Choice { Min, Max };

struct ExploreOptions
{
   AltConfig alt;
   StepLimits limits;
   std::uint64_t max_frames = 1000000;
   bool prune = true;
   Choice choice = Choice::Min;
   bool check_invariants = false;
};

// The step or frame budget ran out.
struct GuardExceeded : Error
{
   GuardExceeded (const std::string &what, std::vector<Action> prefix);
   std::vector<Action> prefix;
};

// Raised by check_invariants when a frame breaks one of the call
// invariants of the exploration.
struct InvariantViolation : Error
{
   using Error::Error;
};

struct Violation
{
   AssertSite site;
   std::vector<Action> witness;
};

struct PhaseTimes
{
   double execute = 0;
   double extensions = 0;
   double comb_build = 0;
   double comb_search = 0;
};

struct ExplorationStats
{
   std::uint64_t max_configs = 0;
   std::uint64_t ssbs = 0;
   std::uint64_t events = 0;           // events ever interned
   std::uint64_t frames = 0;
   std::uint64_t blocked_deadlocks = 0;
   std::vector<Violation> violations;
   std::uint64_t peak_live = 0;
   std::uint64_t cexp_iterations = 0;
   AltStats alt;
   double time_ms = 0;
   PhaseTimes phase_ms;
};

class ExploreObserver
{
public:
   virtual ~ExploreObserver () = default;
   // at every call, after ex(C) has been added to U
   virtual void on_configuration (const Configuration &, std::span<const EventId> /*en*/,
      std::span<const EventId> /*cex*/) {}
   virtual void on_alt (const Configuration &, std::span<const EventId> /*d*/,
      const std::optional<std::vector<EventId>> & /*j*/) {}
   virtual void on_maximal (const Configuration &) {}
   virtual void on_ssb (const Configuration &) {}
};

ExplorationStats explore (EventStore &store, const ExploreOptions &opts = {},
   ExploreObserver *observer = nullptr);

ExplorationStats explore (const Program &p, const ExploreOptions &opts = {});

} // namespace qpor
