#pragma once

#include <string>
#include <vector>

#include "qpor/dsl.hpp"
#include "qpor/event_store.hpp"

inline std::string fixture (const std::string &name)
{
   return std::string (QPOR_FIXTURES) + "/" + name;
}

inline qpor::Program load (const std::string &name)
{
   return qpor::parse_file (fixture (name)).program;
}

// Interns the 19 events of the unfolding of handoff.qp into a fresh store,
// so that e[i] == i for the numbering the tests use.
inline std::vector<qpor::EventId> intern_handoff (qpor::EventStore &s)
{
   using qpor::Action;
   using qpor::kBottom;
   const qpor::EventId B = kBottom;
   const qpor::MutexId m = 0, m2 = 1;
   std::vector<qpor::EventId> e (20, B);
   e[1] = s.intern (Action::local (0), B);
   e[2] = s.intern (Action::lock (0, m), e[1], B);
   e[3] = s.intern (Action::local (0), e[2]);
   e[4] = s.intern (Action::unlock (0, m), e[3], e[2]);
   e[5] = s.intern (Action::lock (1, m), B, e[4]);
   e[6] = s.intern (Action::local (1), e[5]);
   e[7] = s.intern (Action::unlock (1, m), e[6], e[5]);
   e[8] = s.intern (Action::lock (1, m), B, B);
   e[9] = s.intern (Action::local (1), e[8]);
   e[10] = s.intern (Action::unlock (1, m), e[9], e[8]);
   e[11] = s.intern (Action::lock (0, m), e[1], e[10]);
   e[12] = s.intern (Action::local (0), e[11]);
   e[13] = s.intern (Action::lock (0, m2), e[12], B);
   e[14] = s.intern (Action::local (0), e[13]);
   e[15] = s.intern (Action::lock (2, m2), B, B);
   e[16] = s.intern (Action::local (2), e[15]);
   e[17] = s.intern (Action::unlock (2, m2), e[16], e[15]);
   e[18] = s.intern (Action::lock (0, m2), e[12], e[17]);
   e[19] = s.intern (Action::local (0), e[18]);
   return e;
}
