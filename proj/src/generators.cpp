#include "qpor/generators.hpp"

#include <set>
#include <sstream>

#include "qpor/dsl.hpp"

namespace qpor {

std::string writers_source (unsigned n)
{
   if (n == 0) throw std::invalid_argument ("writers needs n >= 1");
   std::ostringstream os;
   os << "# " << n << " writers, a counter and a master\n";
   os << "array x[" << n << "]\nvar c\nvar i\n";
   for (unsigned j = 0; j < n; ++j) os << "mutex m" << j << "\n";
   os << "mutex mc\n";

   for (unsigned j = 0; j < n; ++j)
      os << "\nthread w" << j << " {\n  lock(m" << j << ")\n  x[" << j << "] = " << 7 + j
         << "\n  unlock(m" << j << ")\n}\n";

   os << "\nthread count {\n";
   for (unsigned j = 0; j + 1 < n; ++j) os << "  lock(mc)\n  c = c + 1\n  unlock(mc)\n";
   os << "}\n";

   // x[i] = 0 under m_i, unrolled as a chain of tests on i
   os << "\nthread master {\n  lock(mc)\n  i = c\n  unlock(mc)\n";
   std::string indent = "  ";
   for (unsigned j = 0; j < n; ++j)
   {
      bool last = j + 1 == n;
      if (!last) os << indent << "if (i == " << j << ") {\n" << indent << "  ";
      else os << indent;
      std::string in = last ? indent : indent + "  ";
      os << "lock(m" << j << ")\n" << in << "x[i] = 0\n" << in << "unlock(m" << j << ")\n";
      if (!last)
      {
         os << indent << "} else {\n";
         indent += "  ";
      }
   }
   for (unsigned j = 0; j + 1 < n; ++j)
   {
      indent.resize (indent.size () - 2);
      os << indent << "}\n";
   }
   os << "}\n";
   return os.str ();
}

Program generate_writers (unsigned n)
{
   return parse_program (writers_source (n));
}

void validate (const Formula3Sat &f)
{
   for (std::size_t j = 0; j < f.clauses.size (); ++j)
   {
      const auto &c = f.clauses[j];
      std::string where = "clause " + std::to_string (j + 1);
      if (c.empty () || c.size () > 3) throw MalformedFormula (where + " must have 1 to 3 literals");
      std::set<unsigned> vars;
      for (const Literal &l : c)
      {
         if (l.var >= f.num_vars) throw MalformedFormula (where + " uses an undeclared variable");
         if (!vars.insert (l.var).second)
            throw MalformedFormula (where + " mentions variable " + std::to_string (l.var + 1) + " twice");
      }
   }
}

Formula3Sat parse_dimacs (const std::string &text)
{
   Formula3Sat f;
   std::istringstream in (text);
   std::string line;
   bool header = false;
   std::vector<Literal> cur;
   while (std::getline (in, line))
   {
      std::istringstream ls (line);
      std::string first;
      if (!(ls >> first) || first == "c" || first[0] == '%') continue;
      if (first == "p")
      {
         std::string fmt;
         long vars = 0, clauses = 0;
         if (!(ls >> fmt >> vars >> clauses) || fmt != "cnf" || vars < 0)
            throw MalformedFormula ("bad DIMACS header");
         f.num_vars = unsigned (vars);
         header = true;
         continue;
      }
      if (!header) throw MalformedFormula ("missing DIMACS header");
      std::istringstream all (line);
      long x;
      while (all >> x)
      {
         if (x == 0)
         {
            f.clauses.push_back (cur);
            cur.clear ();
            continue;
         }
         cur.push_back ({unsigned ((x < 0 ? -x : x) - 1), x > 0});
      }
      if (!all.eof ()) throw MalformedFormula ("bad literal in DIMACS input");
   }
   if (!cur.empty ()) f.clauses.push_back (cur);
   if (!header) throw MalformedFormula ("missing DIMACS header");
   validate (f);
   return f;
}

std::string threesat_source (const Formula3Sat &f)
{
   validate (f);
   std::ostringstream os;
   os << "# " << f.num_vars << " variables, " << f.clauses.size () << " clauses\n";
   for (unsigned i = 1; i <= f.num_vars; ++i) os << "mutex lv" << i << "\n";
   for (std::size_t j = 1; j <= f.clauses.size (); ++j) os << "mutex lc" << j << "\n";
   for (std::size_t j = 0; j < f.clauses.size (); ++j)
      for (const Literal &l : f.clauses[j])
         os << "mutex s" << l.var + 1 << "_" << j + 1 << " = 1\n";

   for (unsigned i = 0; i < f.num_vars; ++i)
      for (bool pos : {true, false})
      {
         os << "\nthread " << (pos ? "t" : "f") << i + 1 << " {\n  lock(lv" << i + 1 << ")\n";
         for (std::size_t j = 0; j < f.clauses.size (); ++j)
            for (const Literal &l : f.clauses[j])
               if (l.var == i && l.positive == pos)
                  os << "  unlock(s" << i + 1 << "_" << j + 1 << ")\n";
         os << "}\n";
      }
   for (std::size_t j = 1; j <= f.clauses.size (); ++j)
      os << "\nthread d" << j << " {\n  lock(lc" << j << ")\n}\n";
   for (std::size_t j = 0; j < f.clauses.size (); ++j)
      for (const Literal &l : f.clauses[j])
         os << "\nthread r" << l.var + 1 << "_" << j + 1 << " {\n  lock(s" << l.var + 1 << "_"
            << j + 1 << ")\n  lock(lc" << j + 1 << ")\n}\n";
   return os.str ();
}

Program generate_3sat (const Formula3Sat &f)
{
   return parse_program (threesat_source (f));
}

} // namespace qpor
