#include "qpor/dsl.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace qpor {

const char *to_string (ParseErrorKind k)
{
   switch (k)
   {
   case ParseErrorKind::Syntax: return "syntax-error";
   case ParseErrorKind::UndeclaredIdentifier: return "undeclared-identifier";
   case ParseErrorKind::DuplicateDeclaration: return "duplicate-declaration";
   case ParseErrorKind::LockArity: return "lock-arity";
   }
   return "?";
}

ParseError::ParseError (ParseErrorKind k, SourcePos p, const std::string &msg) :
   Error (std::to_string (p.line) + ":" + std::to_string (p.column) + ": "
      + to_string (k) + ": " + msg),
   kind (k),
   pos (p)
{
}

namespace {

enum class Tok { Ident, Int, Punct, End };

struct Token
{
   Tok kind;
   std::string text;
   std::int64_t value = 0;
   SourcePos pos;
};

std::vector<Token> lex (std::string_view src)
{
   std::vector<Token> out;
   unsigned line = 1, col = 1;
   std::size_t i = 0;

   auto advance = [&] (std::size_t n) {
      for (std::size_t k = 0; k < n; ++k, ++i)
      {
         if (src[i] == '\n') { ++line; col = 1; }
         else ++col;
      }
   };

   while (i < src.size ())
   {
      char c = src[i];
      if (std::isspace ((unsigned char) c)) { advance (1); continue; }
      if (c == '#')
      {
         while (i < src.size () && src[i] != '\n') advance (1);
         continue;
      }

      SourcePos pos {line, col};
      if (std::isalpha ((unsigned char) c) || c == '_')
      {
         std::size_t j = i;
         while (j < src.size () && (std::isalnum ((unsigned char) src[j]) || src[j] == '_')) ++j;
         out.push_back ({Tok::Ident, std::string (src.substr (i, j - i)), 0, pos});
         advance (j - i);
         continue;
      }
      if (std::isdigit ((unsigned char) c))
      {
         std::size_t j = i;
         while (j < src.size () && std::isdigit ((unsigned char) src[j])) ++j;
         std::string digits (src.substr (i, j - i));
         if (digits.size () > 18)
            throw ParseError (ParseErrorKind::Syntax, pos, "integer literal too large");
         out.push_back ({Tok::Int, digits, std::stoll (digits), pos});
         advance (j - i);
         continue;
      }

      static const char *two[] = {"==", "!=", "<=", ">=", "&&", "||"};
      bool matched = false;
      for (const char *t : two)
         if (src.substr (i, 2) == t)
         {
            out.push_back ({Tok::Punct, t, 0, pos});
            advance (2);
            matched = true;
            break;
         }
      if (matched) continue;

      if (std::string_view ("{}()[],=<>+-*/%!").find (c) != std::string_view::npos)
      {
         out.push_back ({Tok::Punct, std::string (1, c), 0, pos});
         advance (1);
         continue;
      }
      throw ParseError (ParseErrorKind::Syntax, pos,
         std::string ("unexpected character '") + c + "'");
   }
   out.push_back ({Tok::End, "", 0, {line, col}});
   return out;
}

const std::set<std::string, std::less<>> keywords = {
   "var", "array", "mutex", "thread", "lock", "unlock", "assert", "if", "else", "while",
};

class Parser
{
public:
   explicit Parser (std::string_view src) : toks_ (lex (src)) {}

   Program program ()
   {
      while (at_word ("var") || at_word ("array") || at_word ("mutex")) decl ();
      if (!at_word ("thread")) fail_here ("expected a declaration or 'thread'");
      while (at_word ("thread")) thread ();
      if (peek ().kind != Tok::End) fail_here ("expected 'thread'");
      p_.finalize ();
      return std::move (p_);
   }

private:
   std::vector<Token> toks_;
   std::size_t at_ = 0;
   Program p_;
   std::set<std::string, std::less<>> thread_names_;

   const Token &peek (std::size_t k = 0) const { return toks_[std::min (at_ + k, toks_.size () - 1)]; }
   const Token &next () { return toks_[at_ < toks_.size () - 1 ? at_++ : at_]; }

   bool at_word (std::string_view w) const { return peek ().kind == Tok::Ident && peek ().text == w; }
   bool at_punct (std::string_view p) const { return peek ().kind == Tok::Punct && peek ().text == p; }

   [[noreturn]] void fail (ParseErrorKind k, SourcePos pos, const std::string &msg) const
   {
      throw ParseError (k, pos, msg);
   }

   [[noreturn]] void fail_here (const std::string &msg) const
   {
      const Token &t = peek ();
      std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
      fail (ParseErrorKind::Syntax, t.pos, msg + ", found " + found);
   }

   void expect (std::string_view p)
   {
      if (!at_punct (p)) fail_here ("expected '" + std::string (p) + "'");
      next ();
   }

   const Token &ident (const char *what)
   {
      if (peek ().kind != Tok::Ident || keywords.count (peek ().text))
         fail_here (std::string ("expected ") + what);
      return next ();
   }

   std::int64_t integer ()
   {
      bool neg = false;
      if (at_punct ("-")) { next (); neg = true; }
      if (peek ().kind != Tok::Int) fail_here ("expected an integer");
      std::int64_t v = next ().value;
      return neg ? -v : v;
   }

   void declare (const Token &name)
   {
      if (p_.find_var (name.text) || p_.find_mutex (name.text))
         fail (ParseErrorKind::DuplicateDeclaration, name.pos, "'" + name.text + "' is already declared");
   }

   void decl ()
   {
      std::string kw = next ().text;
      const Token &name = ident ("a name");
      declare (name);

      if (kw == "mutex")
      {
         MutexDecl m {name.text, false};
         if (at_punct ("="))
         {
            next ();
            SourcePos pos = peek ().pos;
            std::int64_t v = integer ();
            if (v != 0 && v != 1) fail (ParseErrorKind::Syntax, pos, "a mutex starts as 0 or 1");
            m.initially_locked = v == 1;
         }
         p_.mutexes.push_back (m);
         return;
      }

      VarDecl v;
      v.name = name.text;
      if (kw == "var")
      {
         if (at_punct ("=")) { next (); v.init.push_back (integer ()); }
      }
      else
      {
         v.is_array = true;
         expect ("[");
         SourcePos pos = peek ().pos;
         std::int64_t n = integer ();
         if (n <= 0 || n > 1000000) fail (ParseErrorKind::Syntax, pos, "bad array size");
         v.size = std::uint32_t (n);
         expect ("]");
         if (at_punct ("="))
         {
            next ();
            expect ("{");
            SourcePos first = peek ().pos;
            v.init.push_back (integer ());
            while (at_punct (","))
            {
               next ();
               v.init.push_back (integer ());
            }
            expect ("}");
            if (v.init.size () > v.size)
               fail (ParseErrorKind::Syntax, first, "too many initial values for '" + v.name + "'");
         }
      }
      p_.vars.push_back (std::move (v));
   }

   void thread ()
   {
      next ();
      const Token &name = ident ("a thread name");
      if (!thread_names_.insert (name.text).second)
         fail (ParseErrorKind::DuplicateDeclaration, name.pos, "thread '" + name.text + "' is already declared");
      Thread t;
      t.name = name.text;
      t.body = block ();
      p_.threads.push_back (std::move (t));
   }

   std::vector<Stmt> block ()
   {
      expect ("{");
      std::vector<Stmt> out;
      while (!at_punct ("}"))
      {
         if (peek ().kind == Tok::End) fail_here ("expected '}'");
         out.push_back (stmt ());
      }
      next ();
      return out;
   }

   MutexId mutex_arg (const Token &kw)
   {
      expect ("(");
      if (at_punct (")"))
         fail (ParseErrorKind::LockArity, kw.pos, "'" + kw.text + "' takes exactly one mutex");
      const Token &name = ident ("a mutex name");
      if (at_punct (","))
         fail (ParseErrorKind::LockArity, kw.pos, "'" + kw.text + "' takes exactly one mutex");
      expect (")");
      auto m = p_.find_mutex (name.text);
      if (!m) fail (ParseErrorKind::UndeclaredIdentifier, name.pos, "no mutex named '" + name.text + "'");
      return *m;
   }

   Stmt stmt ()
   {
      Stmt s;
      const Token &t = peek ();
      s.pos = t.pos;
      if (t.kind != Tok::Ident) fail_here ("expected a statement");

      if (t.text == "lock" || t.text == "unlock")
      {
         const Token &kw = next ();
         s.kind = kw.text == "lock" ? StmtKind::Lock : StmtKind::Unlock;
         s.mutex = mutex_arg (kw);
      }
      else if (t.text == "assert")
      {
         next ();
         s.kind = StmtKind::Assert;
         expect ("(");
         s.expr = expr ();
         expect (")");
      }
      else if (t.text == "if" || t.text == "while")
      {
         bool is_if = next ().text == "if";
         s.kind = is_if ? StmtKind::If : StmtKind::While;
         expect ("(");
         s.expr = expr ();
         expect (")");
         s.body = block ();
         if (is_if && at_word ("else"))
         {
            next ();
            s.has_else = true;
            s.orelse = block ();
         }
      }
      else
      {
         const Token &name = ident ("a statement");
         s.kind = StmtKind::Assign;
         s.var = variable (name);
         const VarDecl &v = p_.vars[s.var];
         if (at_punct ("["))
         {
            if (!v.is_array) fail (ParseErrorKind::Syntax, name.pos, "'" + v.name + "' is not an array");
            next ();
            s.index = expr ();
            expect ("]");
         }
         else if (v.is_array)
            fail (ParseErrorKind::Syntax, name.pos, "array '" + v.name + "' needs an index");
         expect ("=");
         s.expr = expr ();
      }
      return s;
   }

   VarId variable (const Token &name)
   {
      auto v = p_.find_var (name.text);
      if (!v) fail (ParseErrorKind::UndeclaredIdentifier, name.pos, "no variable named '" + name.text + "'");
      return *v;
   }

   ExprRef add (ExprNode n)
   {
      p_.exprs.push_back (n);
      return ExprRef (p_.exprs.size () - 1);
   }

   ExprRef binary (Op op, ExprRef l, ExprRef r)
   {
      ExprNode n;
      n.kind = ExprKind::Binary;
      n.op = op;
      n.lhs = l;
      n.rhs = r;
      return add (n);
   }

   struct Level
   {
      std::vector<std::pair<const char *, Op>> ops;
   };

   // binary operator levels from loosest to tightest
   static const std::vector<Level> &levels ()
   {
      static const std::vector<Level> l = {
         {{{"||", Op::Or}}},
         {{{"&&", Op::And}}},
         {{{"==", Op::Eq}, {"!=", Op::Ne}}},
         {{{"<", Op::Lt}, {"<=", Op::Le}, {">", Op::Gt}, {">=", Op::Ge}}},
         {{{"+", Op::Add}, {"-", Op::Sub}}},
         {{{"*", Op::Mul}, {"/", Op::Div}, {"%", Op::Mod}}},
      };
      return l;
   }

   ExprRef expr (std::size_t level = 0)
   {
      if (level == levels ().size ()) return unary ();
      ExprRef lhs = expr (level + 1);
      for (;;)
      {
         const Level &lv = levels ()[level];
         const std::pair<const char *, Op> *hit = nullptr;
         for (const auto &o : lv.ops)
            if (at_punct (o.first)) hit = &o;
         if (!hit) return lhs;
         next ();
         ExprRef rhs = expr (level + 1);
         lhs = binary (hit->second, lhs, rhs);
      }
   }

   ExprRef unary ()
   {
      if (at_punct ("!") || at_punct ("-"))
      {
         Op op = next ().text == "!" ? Op::Not : Op::Neg;
         ExprRef e = unary ();
         ExprNode n;
         n.kind = ExprKind::Unary;
         n.op = op;
         n.lhs = e;
         return add (n);
      }
      return primary ();
   }

   ExprRef primary ()
   {
      if (peek ().kind == Tok::Int)
      {
         ExprNode n;
         n.kind = ExprKind::Const;
         n.value = next ().value;
         return add (n);
      }
      if (at_punct ("("))
      {
         next ();
         ExprRef e = expr ();
         expect (")");
         return e;
      }
      if (peek ().kind != Tok::Ident || keywords.count (peek ().text)) fail_here ("expected an expression");
      const Token &name = next ();
      VarId v = variable (name);
      ExprNode n;
      n.var = v;
      if (at_punct ("["))
      {
         if (!p_.vars[v].is_array) fail (ParseErrorKind::Syntax, name.pos, "'" + name.text + "' is not an array");
         next ();
         n.kind = ExprKind::Index;
         n.lhs = expr ();
         expect ("]");
      }
      else
      {
         if (p_.vars[v].is_array) fail (ParseErrorKind::Syntax, name.pos, "array '" + name.text + "' needs an index");
         n.kind = ExprKind::Var;
      }
      return add (n);
   }
};

//------------------------------------------------------------------------

int precedence (const ExprNode &n)
{
   switch (n.kind)
   {
   case ExprKind::Binary:
      switch (n.op)
      {
      case Op::Or: return 1;
      case Op::And: return 2;
      case Op::Eq: case Op::Ne: return 3;
      case Op::Lt: case Op::Le: case Op::Gt: case Op::Ge: return 4;
      case Op::Add: case Op::Sub: return 5;
      default: return 6;
      }
   case ExprKind::Unary: return 7;
   default: return 8;
   }
}

const char *op_text (Op op)
{
   switch (op)
   {
   case Op::Neg: return "-";
   case Op::Not: return "!";
   case Op::Mul: return "*";
   case Op::Div: return "/";
   case Op::Mod: return "%";
   case Op::Add: return "+";
   case Op::Sub: return "-";
   case Op::Lt: return "<";
   case Op::Le: return "<=";
   case Op::Gt: return ">";
   case Op::Ge: return ">=";
   case Op::Eq: return "==";
   case Op::Ne: return "!=";
   case Op::And: return "&&";
   case Op::Or: return "||";
   }
   return "?";
}

struct Printer
{
   const Program &p;
   std::ostringstream os;

   void expr (ExprRef r, int min_prec = 0)
   {
      const ExprNode &n = p.expr (r);
      int prec = precedence (n);
      bool paren = prec < min_prec;
      if (paren) os << "(";
      switch (n.kind)
      {
      case ExprKind::Const: os << n.value; break;
      case ExprKind::Var: os << p.vars[n.var].name; break;
      case ExprKind::Index:
         os << p.vars[n.var].name << "[";
         expr (n.lhs);
         os << "]";
         break;
      case ExprKind::Unary:
         os << op_text (n.op);
         expr (n.lhs, prec);
         break;
      case ExprKind::Binary:
         // left associative: the right operand binds one level tighter
         expr (n.lhs, prec);
         os << " " << op_text (n.op) << " ";
         expr (n.rhs, prec + 1);
         break;
      }
      if (paren) os << ")";
   }

   void indent (int depth) { os << std::string (2 * depth, ' '); }

   void block (const std::vector<Stmt> &body, int depth)
   {
      os << "{\n";
      for (const Stmt &s : body) stmt (s, depth + 1);
      indent (depth);
      os << "}";
   }

   void stmt (const Stmt &s, int depth)
   {
      indent (depth);
      switch (s.kind)
      {
      case StmtKind::Assign:
         os << p.vars[s.var].name;
         if (s.index != kNoExpr)
         {
            os << "[";
            expr (s.index);
            os << "]";
         }
         os << " = ";
         expr (s.expr);
         break;
      case StmtKind::Lock: os << "lock(" << p.mutexes[s.mutex].name << ")"; break;
      case StmtKind::Unlock: os << "unlock(" << p.mutexes[s.mutex].name << ")"; break;
      case StmtKind::Assert:
         os << "assert(";
         expr (s.expr);
         os << ")";
         break;
      case StmtKind::If:
      case StmtKind::While:
         os << (s.kind == StmtKind::If ? "if (" : "while (");
         expr (s.expr);
         os << ") ";
         block (s.body, depth);
         if (s.has_else)
         {
            os << " else ";
            block (s.orelse, depth);
         }
         break;
      }
      os << "\n";
   }

   std::string program ()
   {
      for (const VarDecl &v : p.vars)
      {
         if (!v.is_array)
         {
            os << "var " << v.name;
            if (!v.init.empty () && v.init[0] != 0) os << " = " << v.init[0];
            os << "\n";
            continue;
         }
         os << "array " << v.name << "[" << v.size << "]";
         std::size_t n = v.init.size ();
         while (n > 0 && v.init[n - 1] == 0) --n;
         if (n > 0)
         {
            os << " = {";
            for (std::size_t i = 0; i < n; ++i) os << (i ? ", " : "") << v.init[i];
            os << "}";
         }
         os << "\n";
      }
      for (const MutexDecl &m : p.mutexes)
         os << "mutex " << m.name << (m.initially_locked ? " = 1" : "") << "\n";
      for (const Thread &t : p.threads)
      {
         os << "\nthread " << t.name << " ";
         block (t.body, 0);
         os << "\n";
      }
      return os.str ();
   }
};

std::size_t count (const std::vector<Stmt> &body)
{
   std::size_t n = 0;
   for (const Stmt &s : body) n += 1 + count (s.body) + count (s.orelse);
   return n;
}

} // namespace

Program parse_program (std::string_view text)
{
   return Parser (text).program ();
}

SourceProgram parse_source (std::string_view text, std::string path)
{
   SourceProgram sp;
   sp.path = std::move (path);
   sp.text = std::string (text);
   sp.program = parse_program (sp.text);
   return sp;
}

SourceProgram parse_file (const std::string &path)
{
   std::ifstream in (path);
   if (!in) throw Error ("cannot open " + path);
   std::stringstream ss;
   ss << in.rdbuf ();
   return parse_source (ss.str (), path);
}

std::string print_program (const Program &p)
{
   Printer pr {p, {}};
   return pr.program ();
}

std::size_t count_statements (const Thread &t)
{
   return count (t.body);
}

} // namespace qpor
