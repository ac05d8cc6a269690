#include "dictapp/elaborate.h"

namespace dictapp {

TargetEnv TargetEnv::extend(std::string name, TargetType type) const {
  TargetEnv out = *this;
  out.push(std::move(name), std::move(type));
  return out;
}

TargetEnv TargetEnv::extend_tyvar(std::string name) const {
  TargetEnv out = *this;
  out.push_tyvar(std::move(name));
  return out;
}

void TargetEnv::push(std::string name, TargetType type) {
  entries_.emplace_back(Binding{std::move(name), std::move(type)});
}

void TargetEnv::push_tyvar(std::string name) {
  entries_.emplace_back(TyVar{std::move(name)});
}

const TargetType *TargetEnv::lookup(std::string_view name) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
    if (const auto *b = std::get_if<Binding>(&*it); b && b->name == name)
      return &b->type;
  return nullptr;
}

TargetType elab_type(const SrcType &t) {
  switch (t.kind()) {
    case SrcType::Kind::kVar:
      return TargetType::var(t.name());
    case SrcType::Kind::kArrow:
      return TargetType::arrow(elab_type(t.dom()), elab_type(t.cod()));
    case SrcType::Kind::kDict:
      return TargetType::dict(t.name(), elab_type(t.arg()));
    case SrcType::Kind::kCon: {
      std::vector<TargetType> args;
      for (const auto &c : t.children()) args.push_back(elab_type(c));
      return TargetType::con(t.name(), std::move(args));
    }
  }
  return TargetType::var(t.name());
}

TargetType elab_constraint(const Constraint &c) {
  return TargetType::dict(c.cls, elab_type(c.arg));
}

TargetType elab_type(const QualType &q) {
  TargetType out = elab_type(q.body);
  for (auto it = q.context.rbegin(); it != q.context.rend(); ++it)
    out = TargetType::arrow(elab_constraint(*it), std::move(out));
  return out;
}

TargetType elab_type(const Scheme &s) {
  TargetType out = elab_type(s.qual);
  for (auto it = s.quantified.rbegin(); it != s.quantified.rend(); ++it)
    out = TargetType::forall(*it, std::move(out));
  return out;
}

TargetType elab_axiom(const AxiomScheme &a) {
  return elab_type(Scheme{a.quantified, QualType{a.premises, SrcType::dict(
                                                                 a.head.cls, a.head.arg)}});
}

TargetEnv elab_env(const TopAxioms &axioms, const LabelledConstraints &q,
                   const TypeEnv &g) {
  TargetEnv env;
  for (const auto &a : axioms.axioms) env.push(a.name, elab_axiom(a));
  for (const auto &l : q) env.push(l.label, elab_constraint(l.constraint));
  for (auto it = g.entries().rbegin(); it != g.entries().rend(); ++it) {
    const auto &e = *it;
    if (const auto *b = std::get_if<TypeEnv::TermBinding>(&e))
      env.push(b->name, elab_type(b->scheme));
    else
      env.push_tyvar(std::get<TypeEnv::TypeVarBinding>(e).name);
  }
  return env;
}

}  // namespace dictapp
