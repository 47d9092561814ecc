#pragma once

#include <string>
#include <vector>

#include "qpor/program.hpp"

namespace qpor {

// n writers, each setting its own x[j] under mutex m_j; a count thread
// incrementing c n-1 times under mc; a master reading i = c and then
// writing x[i] = 0 under m_i.
std::string writers_source (unsigned n);
Program generate_writers (unsigned n);

struct Literal
{
   unsigned var = 0;    // 0-based
   bool positive = true;
};

struct Formula3Sat
{
   unsigned num_vars = 0;
   std::vector<std::vector<Literal>> clauses;
};

struct MalformedFormula : Error
{
   using Error::Error;
};

void validate (const Formula3Sat &f);

// DIMACS CNF: "p cnf V C" header, clauses as 0-terminated signed integers.
Formula3Sat parse_dimacs (const std::string &text);

// Threads t_i and f_i race on lock lv_i; the winner releases the start
// mutexes of the threads r_i_j, one per occurrence of v_i in clause j with
// the winning polarity; r_i_j then races with d_j on lock lc_j.
std::string threesat_source (const Formula3Sat &f);
Program generate_3sat (const Formula3Sat &f);

} // namespace qpor
