#pragma once

// Concrete syntax for source programs (`.dict`) and System F modules
// (`.sysf`), with deterministic pretty-printers that round-trip through the
// parsers.
//
// Source grammar (line comments start with `--`):
//
//   program   ::= decl*
//   decl      ::= 'class' CON ';'
//               | 'tycon' CON NAT ';'
//               | 'instance' EVNAME ':' axiom ';'
//               | 'prim' VAR ':' scheme ';'
//               | 'sig' VAR ':' scheme ';'
//               | 'def' VAR '=' expr ';'
//               | 'check' VAR '=' expr ';'
//   axiom     ::= ['forall' VAR+ '.'] [context '=>'] constraint
//   scheme    ::= ['forall' VAR+ '.'] [context '=>'] type
//   context   ::= constraint | '(' constraint (',' constraint)* ')'
//   constraint::= CON atype
//   type      ::= btype ['->' type]
//   btype     ::= 'Dict' CON atype | CON atype* | atype
//   atype     ::= VAR | CON | '(' type ')'
//   expr      ::= '\' VAR+ '.' expr | app
//   app       ::= postfix+
//   postfix   ::= aexpr ('[|' expr 'as' constraint '|]')*
//   aexpr     ::= VAR | '(' expr [':' scheme] ')'
//
// Target grammar:
//
//   module    ::= (tdecl)* | term
//   tdecl     ::= 'tycon' CON NAT ';' | 'val' NAME ':' ttype ';'
//               | 'def' NAME ':' ttype '=' term ';' | 'term' term ';'
//   ttype     ::= 'forall' VAR+ '.' ttype | tbtype ['->' ttype]
//   term      ::= '\' '(' NAME ':' ttype ')' '.' term
//               | '/\' VAR+ '.' term | tapp
//   tapp      ::= tatom (tatom | '[' ttype ']')*
//   tatom     ::= NAME | '(' term ')'

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dictapp/syntax.h"

namespace dictapp {

struct TypeConDecl {
  std::string name;
  int arity = 0;

  friend bool operator==(const TypeConDecl &, const TypeConDecl &) = default;
};

struct PrimDecl {
  std::string name;
  Scheme scheme;

  friend bool operator==(const PrimDecl &, const PrimDecl &) = default;
};

struct DefDecl {
  std::string name;
  std::optional<Scheme> signature;
  SrcExpr body;
  Span span;

  friend bool operator==(const DefDecl &a, const DefDecl &b) {
    return a.name == b.name && a.signature == b.signature && a.body == b.body;
  }
};

struct CheckDecl {
  std::string name;
  SrcExpr body;
  Span span;

  friend bool operator==(const CheckDecl &a, const CheckDecl &b) {
    return a.name == b.name && a.body == b.body;
  }
};

struct Program {
  std::vector<std::string> classes;
  std::vector<TypeConDecl> tycons;
  TopAxioms axioms;
  std::vector<PrimDecl> prims;
  std::vector<DefDecl> defs;
  std::vector<CheckDecl> checks;
  std::string filename;

  const DefDecl *find_def(std::string_view name) const;

  friend bool operator==(const Program &a, const Program &b) {
    return a.classes == b.classes && a.tycons == b.tycons &&
           a.axioms == b.axioms && a.prims == b.prims && a.defs == b.defs &&
           a.checks == b.checks;
  }
};

/// Parses and validates a `.dict` program. Throws SyntaxError or
/// ValidationError (DuplicateName, UnknownClass, UnknownTypeConstructor,
/// OverlappingInstances, ...).
Program parse_program(std::string_view text, std::string filename = "");

/// Parses a standalone scheme against the classes and constructors of
/// `context` (used by tests and the CLI).
Scheme parse_scheme(std::string_view text, const Program &context);

/// `.sysf` module: constructor declarations, typed value declarations,
/// typed definitions, and an optional main term.
struct SysfModule {
  struct Val {
    std::string name;
    TargetType type;
  };
  struct Def {
    std::string name;
    TargetType type;
    TargetTerm term;
  };
  std::vector<TypeConDecl> tycons;
  std::vector<Val> vals;
  std::vector<Def> defs;
  std::optional<TargetTerm> main;

  bool has_declarations() const {
    return !tycons.empty() || !vals.empty() || !defs.empty();
  }
  const Def *find_def(std::string_view name) const;
};

TargetTerm parse_target(std::string_view text);
TargetType parse_target_type(std::string_view text);
SysfModule parse_sysf(std::string_view text);

std::string pretty(const SrcType &t);
std::string pretty(const Constraint &c);
std::string pretty(const std::vector<Constraint> &context);
std::string pretty(const QualType &q);
std::string pretty(const Scheme &s);
std::string pretty(const LabelledConstraints &q);
std::string pretty(const AxiomScheme &a);
std::string pretty(const SrcExpr &e);
std::string pretty(const Program &p);
std::string pretty(const TargetType &t);
std::string pretty(const TargetTerm &t);
std::string pretty(const SysfModule &m);

}  // namespace dictapp
