#pragma once

// Program model: threads of statements over shared integer variables and
// mutexes, their interleaving semantics and the structural independence
// relation between actions.

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpor {

using ThreadId = std::uint32_t;
using MutexId = std::uint32_t;
using VarId = std::uint32_t;

//------------------------------------------------------------------------
// errors

struct Error : std::runtime_error
{
   using std::runtime_error::runtime_error;
};

struct SourcePos
{
   unsigned line = 0;
   unsigned column = 0;
   auto operator<=> (const SourcePos &) const = default;
};

// Division by zero, array index out of bounds, unlock of a mutex the
// thread does not hold.
struct ExecutionError : Error
{
   ExecutionError (const std::string &what, ThreadId thread, SourcePos pos);
   ThreadId thread;
   SourcePos pos;
};

struct ActionNotEnabled : Error
{
   using Error::Error;
};

struct StepLimitExceeded : Error
{
   explicit StepLimitExceeded (std::uint64_t limit);
   std::uint64_t limit;
};

struct NotARun : Error
{
   explicit NotARun (std::size_t index);
   std::size_t index;   // position of the first action that is not enabled
};

//------------------------------------------------------------------------
// actions

enum class EffectKind : std::uint8_t { Local, Lock, Unlock };

struct Action
{
   ThreadId thread = 0;
   EffectKind kind = EffectKind::Local;
   MutexId mutex = 0;   // meaningless for Local

   static Action local (ThreadId t) { return {t, EffectKind::Local, 0}; }
   static Action lock (ThreadId t, MutexId m) { return {t, EffectKind::Lock, m}; }
   static Action unlock (ThreadId t, MutexId m) { return {t, EffectKind::Unlock, m}; }

   bool is_local () const { return kind == EffectKind::Local; }
   bool is_lock () const { return kind == EffectKind::Lock; }
   bool is_unlock () const { return kind == EffectKind::Unlock; }
   bool touches (MutexId m) const { return !is_local () && mutex == m; }

   friend bool operator== (const Action &a, const Action &b)
   {
      return a.thread == b.thread && a.kind == b.kind
         && (a.kind == EffectKind::Local || a.mutex == b.mutex);
   }
   friend std::strong_ordering operator<=> (const Action &a, const Action &b)
   {
      if (auto c = a.thread <=> b.thread; c != 0) return c;
      if (auto c = a.kind <=> b.kind; c != 0) return c;
      return a.is_local () ? std::strong_ordering::equal : a.mutex <=> b.mutex;
   }
};

// The structural independence relation of thread/mutex programs.
bool independent (const Action &a, const Action &b);

//------------------------------------------------------------------------
// syntax

enum class ExprKind : std::uint8_t { Const, Var, Index, Unary, Binary };

enum class Op : std::uint8_t {
   Neg, Not,
   Mul, Div, Mod,
   Add, Sub,
   Lt, Le, Gt, Ge,
   Eq, Ne,
   And, Or,
};

using ExprRef = std::int32_t;
inline constexpr ExprRef kNoExpr = -1;

// Expression nodes live in an arena owned by the Program.
struct ExprNode
{
   ExprKind kind = ExprKind::Const;
   Op op = Op::Add;
   std::int64_t value = 0;   // Const
   VarId var = 0;            // Var, Index
   ExprRef lhs = kNoExpr;    // Index: the subscript; Unary: the operand
   ExprRef rhs = kNoExpr;
};

enum class StmtKind : std::uint8_t { Assign, Lock, Unlock, Assert, If, While };

struct Stmt
{
   StmtKind kind = StmtKind::Assign;
   SourcePos pos;
   VarId var = 0;                  // Assign target
   ExprRef index = kNoExpr;        // Assign to array element
   ExprRef expr = kNoExpr;         // Assign value, Assert / If / While condition
   MutexId mutex = 0;              // Lock, Unlock
   std::vector<Stmt> body;         // If-then, While body
   std::vector<Stmt> orelse;       // If-else
   bool has_else = false;
};

struct VarDecl
{
   std::string name;
   bool is_array = false;
   std::uint32_t size = 1;
   std::vector<std::int64_t> init;   // padded with zeros up to size
   std::uint32_t offset = 0;          // position in the flat memory vector
};

struct MutexDecl
{
   std::string name;
   bool initially_locked = false;
};

// Straight-line code a thread actually executes. Jumps are resolved eagerly
// after each step, so a control point never rests on a Jump.
struct Instr
{
   enum class Kind : std::uint8_t { Assign, Assert, Branch, Jump, Lock, Unlock };
   Kind kind = Kind::Assign;
   const Stmt *stmt = nullptr;
   std::uint32_t target = 0;   // Branch: taken when the condition is false
};

struct Thread
{
   std::string name;
   std::vector<Stmt> body;
   std::vector<Instr> code;
};

class Program
{
public:
   Program () = default;
   Program (const Program &other);
   Program &operator= (const Program &other);
   Program (Program &&) noexcept = default;
   Program &operator= (Program &&) noexcept = default;

   std::vector<VarDecl> vars;
   std::vector<MutexDecl> mutexes;
   std::vector<Thread> threads;
   std::vector<ExprNode> exprs;

   std::size_t num_threads () const { return threads.size (); }
   std::size_t num_mutexes () const { return mutexes.size (); }
   std::size_t memory_size () const;

   std::optional<VarId> find_var (std::string_view name) const;
   std::optional<MutexId> find_mutex (std::string_view name) const;

   // Assigns memory offsets and compiles every thread body into code.
   // Must be called after the declarations and bodies are in place.
   void finalize ();

   const ExprNode &expr (ExprRef r) const { return exprs[r]; }

   std::string describe (const Action &a) const;

private:
   void rebind_code ();
};

//------------------------------------------------------------------------
// semantics

struct State
{
   static constexpr std::uint32_t kInitialHolder = ~std::uint32_t (0);

   std::vector<std::int64_t> memory;
   std::vector<std::uint32_t> locks;   // 0 when free, else holder thread + 1
   std::vector<std::uint32_t> pc;   // == code size when terminated
   std::uint64_t steps = 0;

   friend bool operator== (const State &, const State &) = default;
};

struct StepLimits
{
   std::uint64_t max_steps = 100000;
};

struct AssertSite
{
   ThreadId thread = 0;
   SourcePos pos;
   friend bool operator== (const AssertSite &, const AssertSite &) = default;
};

State initial_state (const Program &p);

bool terminated (const State &s, const Program &p, ThreadId t);

// The effect of the statement thread t would execute next, regardless of
// whether the mutex it touches is available.
std::optional<Action> next_action (const State &s, const Program &p, ThreadId t);

// At most one action per thread, ordered by thread.
std::vector<Action> enabled (const State &s, const Program &p);

bool is_enabled (const State &s, const Program &p, const Action &a);

// In-place transition. Returns the failing assertion, if the executed
// statement was an assert whose condition evaluated to 0.
std::optional<AssertSite> apply (State &s, const Action &a, const Program &p,
   const StepLimits &limits = {});

State step (const State &s, const Action &a, const Program &p,
   const StepLimits &limits = {});

State run (const Program &p, std::span<const Action> seq,
   const StepLimits &limits = {});

} // namespace qpor

template <>
struct std::hash<qpor::Action>
{
   std::size_t operator() (const qpor::Action &a) const noexcept
   {
      std::size_t m = a.is_local () ? 0 : a.mutex;
      return (std::size_t (a.thread) * 0x9e3779b97f4a7c15ull) ^ (m << 3)
         ^ std::size_t (a.kind);
   }
};
