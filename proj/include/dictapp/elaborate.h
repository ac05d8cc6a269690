#pragma once

// Type-level elaboration: source types, constraints, axioms and
// environments into System F types and environments.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dictapp/syntax.h"

namespace dictapp {

/// System F typing environment. Later bindings shadow earlier ones.
class TargetEnv {
 public:
  struct Binding {
    std::string name;
    TargetType type;
  };
  struct TyVar {
    std::string name;
  };
  using Entry = std::variant<Binding, TyVar>;

  TargetEnv() = default;

  TargetEnv extend(std::string name, TargetType type) const;
  TargetEnv extend_tyvar(std::string name) const;
  void push(std::string name, TargetType type);
  void push_tyvar(std::string name);

  const TargetType *lookup(std::string_view name) const;
  const std::vector<Entry> &entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

TargetType elab_type(const SrcType &t);
TargetType elab_type(const QualType &q);
TargetType elab_type(const Scheme &s);
TargetType elab_constraint(const Constraint &c);
TargetType elab_axiom(const AxiomScheme &a);

/// Axiom names and local evidence labels become value bindings; term
/// bindings are elaborated pointwise and type variables pass through.
TargetEnv elab_env(const TopAxioms &axioms, const LabelledConstraints &q,
                   const TypeEnv &g);

}  // namespace dictapp
