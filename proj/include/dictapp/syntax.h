#pragma once

// Syntactic categories of the source language (monotypes, qualified types,
// schemes, class constraints, instance axioms, expressions) and of the
// System F target language, together with substitutions, free-variable
// computations and alpha-equivalence.
//
// Every tree is immutable after construction; nodes are shared through
// shared_ptr<const ...>, so copies are cheap and values may be shared across
// threads.

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dictapp/errors.h"

namespace dictapp {

// ---------------------------------------------------------------------------
// Source monotypes

/// Source-level monotype: a type variable, an arrow, a dictionary type
/// `Dict TC t`, or an opaque type constructor applied to arguments
/// (`Int`, `Maybe a`).
class SrcType {
 public:
  enum class Kind { kVar, kArrow, kDict, kCon };

  static SrcType var(std::string name);
  static SrcType arrow(SrcType dom, SrcType cod);
  static SrcType dict(std::string cls, SrcType arg);
  static SrcType con(std::string name, std::vector<SrcType> args = {});

  Kind kind() const { return node_->kind; }
  bool is_var() const { return kind() == Kind::kVar; }
  /// Variable name, class name (kDict) or constructor name (kCon).
  const std::string &name() const { return node_->name; }
  const std::vector<SrcType> &children() const { return node_->children; }
  const SrcType &dom() const { return node_->children[0]; }
  const SrcType &cod() const { return node_->children[1]; }
  const SrcType &arg() const { return node_->children[0]; }

  friend bool operator==(const SrcType &a, const SrcType &b);
  friend std::strong_ordering operator<=>(const SrcType &a, const SrcType &b);

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<SrcType> children;
  };
  explicit SrcType(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// `TC t`.
struct Constraint {
  std::string cls;
  SrcType arg;

  friend bool operator==(const Constraint &, const Constraint &) = default;
  friend std::strong_ordering operator<=>(const Constraint &a,
                                          const Constraint &b);
};

struct QualType {
  std::vector<Constraint> context;
  SrcType body;

  friend bool operator==(const QualType &, const QualType &) = default;
};

/// `forall a1 .. an. C1 => .. => Cm => t`.
struct Scheme {
  std::vector<std::string> quantified;
  QualType qual;

  static Scheme mono(SrcType t) { return Scheme{{}, QualType{{}, std::move(t)}}; }
  const SrcType &body() const { return qual.body; }
  const std::vector<Constraint> &context() const { return qual.context; }

  /// Structural equality; use `scheme_alpha_eq` for equality up to renaming.
  friend bool operator==(const Scheme &, const Scheme &) = default;
};

struct Labelled {
  std::string label;
  Constraint constraint;

  friend bool operator==(const Labelled &, const Labelled &) = default;
};

/// Flattened conjunction of labelled constraints `d1 : C1 /\ ...`.
/// Order is kept only so output is deterministic.
using LabelledConstraints = std::vector<Labelled>;

/// Instance declaration `name : forall as. premises => head`.
struct AxiomScheme {
  std::string name;
  std::vector<std::string> quantified;
  std::vector<Constraint> premises;
  Constraint head;

  friend bool operator==(const AxiomScheme &, const AxiomScheme &) = default;
};

struct TopAxioms {
  std::vector<AxiomScheme> axioms;

  const AxiomScheme *find(std::string_view name) const;
  friend bool operator==(const TopAxioms &, const TopAxioms &) = default;
};

/// Rejects axiom sets with duplicate evidence names, out-of-scope type
/// variables, premise variables not fixed by the head, or two heads that
/// unify after freshening. Throws ValidationError.
void validate_axioms(const TopAxioms &axioms);

// ---------------------------------------------------------------------------
// Source expressions

class SrcExpr {
 public:
  enum class Kind { kVar, kLam, kApp, kDictApp, kAnnot };

  static SrcExpr var(std::string name, Span span = {});
  static SrcExpr lam(std::string binder, SrcExpr body, Span span = {});
  static SrcExpr app(SrcExpr fn, SrcExpr arg, Span span = {});
  /// `fn [| dict as at |]`.
  static SrcExpr dict_app(SrcExpr fn, SrcExpr dict, Constraint at,
                          Span span = {});
  static SrcExpr annot(SrcExpr expr, Scheme scheme, Span span = {});

  Kind kind() const { return node_->kind; }
  /// Variable name or lambda binder.
  const std::string &name() const { return node_->name; }
  const SrcExpr &body() const { return node_->children[0]; }
  const SrcExpr &fn() const { return node_->children[0]; }
  const SrcExpr &arg() const { return node_->children[1]; }
  const SrcExpr &dict() const { return node_->children[1]; }
  const SrcExpr &expr() const { return node_->children[0]; }
  const Constraint &at() const { return *node_->at; }
  const Scheme &scheme() const { return *node_->scheme; }
  const Span &span() const { return node_->span; }

  /// Structural equality ignoring spans.
  friend bool operator==(const SrcExpr &a, const SrcExpr &b);

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<SrcExpr> children;
    std::optional<Constraint> at;
    std::optional<Scheme> scheme;
    Span span;
  };
  explicit SrcExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Typing environment: term bindings interleaved with bound type variables.
class TypeEnv {
 public:
  struct TermBinding {
    std::string name;
    Scheme scheme;
  };
  struct TypeVarBinding {
    std::string name;
  };
  using Entry = std::variant<TermBinding, TypeVarBinding>;

  TypeEnv() = default;

  /// Returns a copy with `name : scheme` in front; shadowing an existing
  /// term variable is rejected (Barendregt convention).
  TypeEnv extend(std::string name, Scheme scheme) const;
  TypeEnv extend_tyvar(std::string name) const;

  const Scheme *lookup(std::string_view name) const;
  /// Most recent binding first.
  const std::vector<Entry> &entries() const { return entries_; }
  bool contains_tyvar(std::string_view name) const;

 private:
  std::vector<Entry> entries_;
};

using TySubst = std::map<std::string, SrcType>;

// ---------------------------------------------------------------------------
// Target (System F) types and terms

class TargetType {
 public:
  enum class Kind { kVar, kArrow, kForall, kDict, kCon };

  static TargetType var(std::string name);
  static TargetType arrow(TargetType dom, TargetType cod);
  static TargetType forall(std::string binder, TargetType body);
  static TargetType dict(std::string cls, TargetType arg);
  static TargetType con(std::string name, std::vector<TargetType> args = {});

  Kind kind() const { return node_->kind; }
  /// Variable name, binder (kForall), class (kDict) or constructor name.
  const std::string &name() const { return node_->name; }
  const std::vector<TargetType> &children() const { return node_->children; }
  const TargetType &dom() const { return node_->children[0]; }
  const TargetType &cod() const { return node_->children[1]; }
  const TargetType &body() const { return node_->children[0]; }
  const TargetType &arg() const { return node_->children[0]; }

  /// Structural equality (bound names must coincide); see `alpha_eq`.
  friend bool operator==(const TargetType &a, const TargetType &b);

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<TargetType> children;
  };
  explicit TargetType(std::shared_ptr<const Node> node)
      : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

class TargetTerm {
 public:
  enum class Kind { kVar, kLam, kApp, kTyLam, kTyApp };

  static TargetTerm var(std::string name);
  static TargetTerm lam(std::string binder, TargetType annot, TargetTerm body);
  static TargetTerm app(TargetTerm fn, TargetTerm arg);
  static TargetTerm ty_lam(std::string binder, TargetTerm body);
  static TargetTerm ty_app(TargetTerm fn, TargetType arg);

  Kind kind() const { return node_->kind; }
  /// Variable name or binder.
  const std::string &name() const { return node_->name; }
  /// Binder annotation (kLam) or type argument (kTyApp).
  const TargetType &type() const { return *node_->type; }
  const TargetTerm &body() const { return node_->children[0]; }
  const TargetTerm &fn() const { return node_->children[0]; }
  const TargetTerm &arg() const { return node_->children[1]; }

  friend bool operator==(const TargetTerm &a, const TargetTerm &b);

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::optional<TargetType> type;
    std::vector<TargetTerm> children;
  };
  explicit TargetTerm(std::shared_ptr<const Node> node)
      : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Dictionary evidence substitution: evidence variable -> evidence term.
using EvSubst = std::map<std::string, TargetTerm>;
using TargetTySubst = std::map<std::string, TargetType>;

// ---------------------------------------------------------------------------
// Free variables

std::set<std::string> ftv(const SrcType &t);
std::set<std::string> ftv(const Constraint &c);
std::set<std::string> ftv(const QualType &q);
std::set<std::string> ftv(const Scheme &s);
std::set<std::string> ftv(const LabelledConstraints &q);
std::set<std::string> ftv(const TypeEnv &env);
std::set<std::string> ftv(const TargetType &t);

/// Free type variables of `t` in first-occurrence (left-to-right) order.
std::vector<std::string> ftv_ordered(const SrcType &t);
void ftv_ordered(const SrcType &t, std::vector<std::string> &out);

/// Free term variables (including evidence variables) of a target term.
std::set<std::string> free_vars(const TargetTerm &t);
/// Free type variables occurring in annotations and type arguments.
std::set<std::string> free_tyvars(const TargetTerm &t);
/// Every name, bound or free, occurring anywhere in the term or its types.
std::set<std::string> all_names(const TargetTerm &t);

// ---------------------------------------------------------------------------
// Substitution

SrcType apply_tysubst(const TySubst &theta, const SrcType &t);
Constraint apply_tysubst(const TySubst &theta, const Constraint &c);
QualType apply_tysubst(const TySubst &theta, const QualType &q);
/// Capture-avoiding: quantified variables clashing with the substitution's
/// domain or range are renamed first.
Scheme apply_tysubst(const TySubst &theta, const Scheme &s);
LabelledConstraints apply_tysubst(const TySubst &theta,
                                  const LabelledConstraints &q);

TargetType subst_type(const TargetTySubst &theta, const TargetType &t);
/// Substitutes free type variables in every annotation and type argument,
/// renaming type binders as needed.
TargetTerm subst_type(const TargetTySubst &theta, const TargetTerm &t);
/// Capture-avoiding replacement of free (evidence) variables.
TargetTerm apply_evsubst(const EvSubst &eta, const TargetTerm &t);

// ---------------------------------------------------------------------------
// Alpha-equivalence

bool alpha_eq(const TargetType &a, const TargetType &b);
bool alpha_eq(const TargetTerm &a, const TargetTerm &b);
/// Equal up to consistent renaming of the quantified variables, respecting
/// their order.
bool scheme_alpha_eq(const Scheme &a, const Scheme &b);

// ---------------------------------------------------------------------------
// Evidence terms

/// Recognizes evidence: a variable applied, in any order, to types and to
/// other evidence terms.
bool is_evidence_term(const TargetTerm &t);

// ---------------------------------------------------------------------------
// Matching and unification on source monotypes

/// One-way matching: finds theta with theta(pattern) == target, binding only
/// variables in `bindable`. Other variables are rigid. Extends `theta`.
bool match_type(const SrcType &pattern, const SrcType &target,
                const std::set<std::string> &bindable, TySubst &theta);
bool match_constraint(const Constraint &pattern, const Constraint &target,
                      const std::set<std::string> &bindable, TySubst &theta);

/// Most general unifier treating every variable as flexible; used for the
/// no-overlap check. Returns nullopt when the types do not unify.
std::optional<TySubst> unify_types(const SrcType &a, const SrcType &b);

// ---------------------------------------------------------------------------
// Fresh names

/// Produces names not yet handed out and not reserved: `base` itself if
/// free, else `base1`, `base2`, ...
class NameSupply {
 public:
  NameSupply() = default;
  explicit NameSupply(std::set<std::string> reserved)
      : used_(std::move(reserved)) {}

  void reserve(const std::string &name) { used_.insert(name); }
  void reserve_all(const std::set<std::string> &names);
  bool is_used(const std::string &name) const { return used_.count(name) > 0; }
  std::string fresh(const std::string &base);

 private:
  std::set<std::string> used_;
  std::map<std::string, int> next_;
};

/// Fresh name derived from `base` avoiding `avoid`; does not record anything.
std::string fresh_name(const std::string &base,
                       const std::set<std::string> &avoid);

}  // namespace dictapp
