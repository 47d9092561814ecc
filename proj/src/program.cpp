#include "qpor/program.hpp"

#include <cassert>
#include <sstream>

namespace qpor {

ExecutionError::ExecutionError (const std::string &what, ThreadId t, SourcePos p) :
   Error (what),
   thread (t),
   pos (p)
{
}

StepLimitExceeded::StepLimitExceeded (std::uint64_t l) :
   Error ("step limit of " + std::to_string (l) + " actions exceeded"),
   limit (l)
{
}

NotARun::NotARun (std::size_t i) :
   Error ("action " + std::to_string (i) + " of the sequence is not enabled"),
   index (i)
{
}

bool independent (const Action &a, const Action &b)
{
   if (a.thread == b.thread) return false;
   if (a.is_local () || b.is_local ()) return true;
   // two synchronisation actions interfere only through a shared mutex
   return a.mutex != b.mutex;
}

//------------------------------------------------------------------------

namespace {

struct Compiler
{
   std::vector<Instr> &code;

   std::uint32_t here () const { return std::uint32_t (code.size ()); }

   void emit (Instr::Kind k, const Stmt &s) { code.push_back ({k, &s, 0}); }

   void block (const std::vector<Stmt> &stmts)
   {
      for (const Stmt &s : stmts) stmt (s);
   }

   void stmt (const Stmt &s)
   {
      switch (s.kind)
      {
      case StmtKind::Assign: emit (Instr::Kind::Assign, s); break;
      case StmtKind::Assert: emit (Instr::Kind::Assert, s); break;
      case StmtKind::Lock: emit (Instr::Kind::Lock, s); break;
      case StmtKind::Unlock: emit (Instr::Kind::Unlock, s); break;
      case StmtKind::If:
      {
         std::uint32_t branch = here ();
         emit (Instr::Kind::Branch, s);
         block (s.body);
         if (s.has_else)
         {
            std::uint32_t jump = here ();
            emit (Instr::Kind::Jump, s);
            code[branch].target = here ();
            block (s.orelse);
            code[jump].target = here ();
         }
         else
            code[branch].target = here ();
         break;
      }
      case StmtKind::While:
      {
         std::uint32_t head = here ();
         emit (Instr::Kind::Branch, s);
         block (s.body);
         emit (Instr::Kind::Jump, s);
         code.back ().target = head;
         code[head].target = here ();
         break;
      }
      }
   }
};

} // namespace

Program::Program (const Program &other) :
   vars (other.vars),
   mutexes (other.mutexes),
   threads (other.threads),
   exprs (other.exprs)
{
   rebind_code ();
}

Program &Program::operator= (const Program &other)
{
   if (this == &other) return *this;
   vars = other.vars;
   mutexes = other.mutexes;
   threads = other.threads;
   exprs = other.exprs;
   rebind_code ();
   return *this;
}

void Program::rebind_code ()
{
   for (Thread &t : threads)
   {
      t.code.clear ();
      Compiler c {t.code};
      c.block (t.body);
   }
}

std::size_t Program::memory_size () const
{
   return vars.empty () ? 0 : vars.back ().offset + vars.back ().size;
}

std::optional<VarId> Program::find_var (std::string_view name) const
{
   for (std::size_t i = 0; i < vars.size (); ++i)
      if (vars[i].name == name) return VarId (i);
   return std::nullopt;
}

std::optional<MutexId> Program::find_mutex (std::string_view name) const
{
   for (std::size_t i = 0; i < mutexes.size (); ++i)
      if (mutexes[i].name == name) return MutexId (i);
   return std::nullopt;
}

void Program::finalize ()
{
   std::uint32_t off = 0;
   for (VarDecl &v : vars)
   {
      v.offset = off;
      v.init.resize (v.size, 0);
      off += v.size;
   }
   rebind_code ();
}

std::string Program::describe (const Action &a) const
{
   std::ostringstream os;
   os << "<" << a.thread << ", ";
   switch (a.kind)
   {
   case EffectKind::Local: os << "local"; break;
   case EffectKind::Lock: os << "lock "; break;
   case EffectKind::Unlock: os << "unlock "; break;
   }
   if (!a.is_local ())
   {
      if (a.mutex < mutexes.size ()) os << mutexes[a.mutex].name;
      else os << "#" << a.mutex;
   }
   os << ">";
   return os.str ();
}

//------------------------------------------------------------------------

namespace {

struct Evaluator
{
   const Program &p;
   const State &s;
   ThreadId thread;
   SourcePos pos;

   [[noreturn]] void fail (const std::string &msg) const
   {
      throw ExecutionError ("thread " + p.threads[thread].name + ", line "
         + std::to_string (pos.line) + ": " + msg, thread, pos);
   }

   std::uint32_t address (VarId v, ExprRef index) const
   {
      const VarDecl &d = p.vars[v];
      if (index == kNoExpr) return d.offset;
      std::int64_t i = eval (index);
      if (i < 0 || i >= std::int64_t (d.size))
         fail ("array index " + std::to_string (i) + " out of bounds for "
            + d.name + "[" + std::to_string (d.size) + "]");
      return d.offset + std::uint32_t (i);
   }

   std::int64_t eval (ExprRef r) const
   {
      const ExprNode &n = p.expr (r);
      switch (n.kind)
      {
      case ExprKind::Const: return n.value;
      case ExprKind::Var: return s.memory[p.vars[n.var].offset];
      case ExprKind::Index: return s.memory[address (n.var, n.lhs)];
      case ExprKind::Unary:
      {
         std::int64_t v = eval (n.lhs);
         return n.op == Op::Neg ? -v : std::int64_t (v == 0);
      }
      case ExprKind::Binary: break;
      }

      // short-circuit connectives first
      if (n.op == Op::And) return eval (n.lhs) != 0 && eval (n.rhs) != 0;
      if (n.op == Op::Or) return eval (n.lhs) != 0 || eval (n.rhs) != 0;

      std::int64_t a = eval (n.lhs);
      std::int64_t b = eval (n.rhs);
      switch (n.op)
      {
      case Op::Mul: return a * b;
      case Op::Div:
         if (b == 0) fail ("division by zero");
         return a / b;
      case Op::Mod:
         if (b == 0) fail ("division by zero");
         return a % b;
      case Op::Add: return a + b;
      case Op::Sub: return a - b;
      case Op::Lt: return a < b;
      case Op::Le: return a <= b;
      case Op::Gt: return a > b;
      case Op::Ge: return a >= b;
      case Op::Eq: return a == b;
      case Op::Ne: return a != b;
      default: break;
      }
      assert (false);
      return 0;
   }
};

void skip_jumps (const Thread &t, std::uint32_t &pc)
{
   while (pc < t.code.size () && t.code[pc].kind == Instr::Kind::Jump)
      pc = t.code[pc].target;
}

} // namespace

State initial_state (const Program &p)
{
   State s;
   s.memory.reserve (p.memory_size ());
   for (const VarDecl &v : p.vars)
      s.memory.insert (s.memory.end (), v.init.begin (), v.init.end ());
   s.locks.reserve (p.mutexes.size ());
   for (const MutexDecl &m : p.mutexes) s.locks.push_back (m.initially_locked ? State::kInitialHolder : 0);
   s.pc.assign (p.threads.size (), 0);
   for (ThreadId t = 0; t < p.threads.size (); ++t) skip_jumps (p.threads[t], s.pc[t]);
   return s;
}

bool terminated (const State &s, const Program &p, ThreadId t)
{
   return s.pc[t] >= p.threads[t].code.size ();
}

std::optional<Action> next_action (const State &s, const Program &p, ThreadId t)
{
   if (terminated (s, p, t)) return std::nullopt;
   const Instr &in = p.threads[t].code[s.pc[t]];
   switch (in.kind)
   {
   case Instr::Kind::Lock: return Action::lock (t, in.stmt->mutex);
   case Instr::Kind::Unlock: return Action::unlock (t, in.stmt->mutex);
   default: return Action::local (t);
   }
}

bool is_enabled (const State &s, const Program &p, const Action &a)
{
   if (a.thread >= p.threads.size ()) return false;
   auto next = next_action (s, p, a.thread);
   if (!next || !(*next == a)) return false;
   return !a.is_lock () || s.locks[a.mutex] == 0;
}

std::vector<Action> enabled (const State &s, const Program &p)
{
   std::vector<Action> out;
   for (ThreadId t = 0; t < p.threads.size (); ++t)
   {
      auto a = next_action (s, p, t);
      if (a && (!a->is_lock () || s.locks[a->mutex] == 0)) out.push_back (*a);
   }
   return out;
}

std::optional<AssertSite> apply (State &s, const Action &a, const Program &p,
   const StepLimits &limits)
{
   if (!is_enabled (s, p, a))
      throw ActionNotEnabled ("action " + p.describe (a) + " is not enabled");
   if (s.steps >= limits.max_steps) throw StepLimitExceeded (limits.max_steps);

   const Thread &th = p.threads[a.thread];
   std::uint32_t &pc = s.pc[a.thread];
   const Instr &in = th.code[pc];
   const Stmt &st = *in.stmt;
   Evaluator ev {p, s, a.thread, st.pos};
   std::optional<AssertSite> failed;
   std::uint32_t next = pc + 1;

   switch (in.kind)
   {
   case Instr::Kind::Assign:
   {
      std::uint32_t addr = ev.address (st.var, st.index);
      s.memory[addr] = ev.eval (st.expr);
      break;
   }
   case Instr::Kind::Assert:
      if (ev.eval (st.expr) == 0) failed = AssertSite {a.thread, st.pos};
      break;
   case Instr::Kind::Branch:
      if (ev.eval (st.expr) == 0) next = in.target;
      break;
   case Instr::Kind::Lock:
      s.locks[st.mutex] = a.thread + 1;
      break;
   case Instr::Kind::Unlock:
   {
      // a mutex declared locked may be released by any thread, once
      std::uint32_t holder = s.locks[st.mutex];
      if (holder == 0)
         ev.fail ("unlock of mutex " + p.mutexes[st.mutex].name + " which is not locked");
      if (holder != a.thread + 1 && holder != State::kInitialHolder)
         ev.fail ("unlock of mutex " + p.mutexes[st.mutex].name + " held by another thread");
      s.locks[st.mutex] = 0;
      break;
   }
   case Instr::Kind::Jump:
      assert (false);
      break;
   }

   pc = next;
   skip_jumps (th, pc);
   ++s.steps;
   return failed;
}

State step (const State &s, const Action &a, const Program &p, const StepLimits &limits)
{
   State out = s;
   apply (out, a, p, limits);
   return out;
}

State run (const Program &p, std::span<const Action> seq, const StepLimits &limits)
{
   State s = initial_state (p);
   for (std::size_t i = 0; i < seq.size (); ++i)
   {
      if (!is_enabled (s, p, seq[i])) throw NotARun (i);
      apply (s, seq[i], p, limits);
   }
   return s;
}

} // namespace qpor
