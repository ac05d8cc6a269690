#pragma once

// Internal inference state shared by the typechecking translation units.

#include <optional>
#include <string>
#include <vector>

#include "dictapp/typecheck.h"

namespace dictapp::detail {

struct EnvEntry {
  std::string name;
  Scheme scheme;
  /// The scheme was written by the programmer (prim or signature).
  bool specified = false;
};

struct Wanted {
  std::string label;
  Constraint constraint;
  Span span;
};

TargetTerm replace_vars(const TargetTerm &t, const EvSubst &eta);

class Inferencer {
 public:
  struct Mono {
    SrcType type;
    TargetTerm term;
  };
  struct Poly {
    Scheme scheme;
    TargetTerm term;
    Span span;
  };

  Inferencer(const TopAxioms &axioms, const TypecheckOptions &options,
             std::vector<EnvEntry> env, NameSupply names);

  Mono infer(const SrcExpr &e);
  /// Variables, annotations and dictionary applications keep their
  /// polytype; other forms are not accepted.
  Poly infer_poly(const SrcExpr &e);

  Derivation top(const SrcExpr &e);
  Derivation top_specified(const SrcExpr &body, const Scheme &signature, Span span);
  Derivation raw(const SrcExpr &e);

 private:
  SrcType fresh_meta();
  static int meta_id(const std::string &name);
  SrcType zonk(const SrcType &t) const;
  Constraint zonk(const Constraint &c) const;
  void unify(const SrcType &a, const SrcType &b, Span span);
  void bind(const std::string &meta, const SrcType &t, Span span);
  LabelledConstraints given_list() const;
  std::optional<TargetTerm> resolve(const Constraint &c);
  Mono instantiate(const Poly &p);

  Poly infer_annot(const SrcExpr &e);
  Poly infer_dict_app(const SrcExpr &e);
  TargetTerm discharge_eagerly(TargetTerm term, const std::vector<std::string> &before);

  /// Applies collected evidence and replaces metas by the given names
  /// (fresh free names for any others).
  TargetTerm finish_term(const TargetTerm &t, std::map<std::string, TargetType> names);
  std::string next_tyvar_name();

  const TopAxioms &axioms_;
  const TypecheckOptions &opts_;
  std::vector<EnvEntry> env_;
  /// Term-level names (variables and evidence labels).
  NameSupply names_;
  /// Type variable names introduced by skolemization and generalization.
  NameSupply types_;
  int meta_count_ = 0;
  TySubst subst_;
  std::vector<Wanted> wanteds_;
  std::vector<Labelled> givens_;
  EvSubst eta_;
  std::set<std::string> used_givens_;
  std::vector<std::string> trace_;
};

}  // namespace dictapp::detail
