#pragma once

#include <string>
#include <string_view>

#include "qpor/program.hpp"

namespace qpor {

enum class ParseErrorKind
{
   Syntax,
   UndeclaredIdentifier,
   DuplicateDeclaration,
   LockArity,
};

const char *to_string (ParseErrorKind k);

struct ParseError : Error
{
   ParseError (ParseErrorKind kind, SourcePos pos, const std::string &msg);
   ParseErrorKind kind;
   SourcePos pos;
};

struct SourceProgram
{
   std::string path;
   std::string text;
   Program program;
};

// Grammar:
//
//   program := decl* thread+
//   decl    := "var" ID ("=" INT)?
//            | "array" ID "[" INT "]" ("=" "{" INT ("," INT)* "}")?
//            | "mutex" ID ("=" ("0" | "1"))?
//   thread  := "thread" ID "{" stmt* "}"
//   stmt    := lvalue "=" expr | "lock" "(" ID ")" | "unlock" "(" ID ")"
//            | "assert" "(" expr ")" | "if" "(" expr ")" block ("else" block)?
//            | "while" "(" expr ")" block
//
// '#' starts a comment running to the end of the line. A mutex declared
// "= 1" starts out locked and can be released once, by any thread.
Program parse_program (std::string_view text);
SourceProgram parse_source (std::string_view text, std::string path = "<input>");
SourceProgram parse_file (const std::string &path);

// Prints a program in the DSL. Parsing the output yields the same program.
std::string print_program (const Program &p);

// Number of statements in a thread body, counting nested ones.
std::size_t count_statements (const Thread &t);

} // namespace qpor
