#include "infer.h"

namespace dictapp {

namespace {

void expr_names(const SrcExpr &e, std::set<std::string> &out) {
  switch (e.kind()) {
    case SrcExpr::Kind::kVar:
      out.insert(e.name());
      return;
    case SrcExpr::Kind::kLam:
      out.insert(e.name());
      expr_names(e.body(), out);
      return;
    case SrcExpr::Kind::kApp:
      expr_names(e.fn(), out);
      expr_names(e.arg(), out);
      return;
    case SrcExpr::Kind::kDictApp:
      expr_names(e.fn(), out);
      expr_names(e.dict(), out);
      return;
    case SrcExpr::Kind::kAnnot:
      expr_names(e.expr(), out);
      return;
  }
}

std::set<std::string> term_names(const TopAxioms &axioms) {
  std::set<std::string> out;
  for (const auto &a : axioms.axioms) out.insert(a.name);
  return out;
}

std::vector<detail::EnvEntry> entries_of(const TypeEnv &env, std::set<std::string> &names) {
  std::vector<detail::EnvEntry> out;
  for (const auto &e : env.entries()) {
    if (const auto *b = std::get_if<TypeEnv::TermBinding>(&e)) {
      out.push_back({b->name, b->scheme, true});
      names.insert(b->name);
    } else {
      names.insert(std::get<TypeEnv::TypeVarBinding>(e).name);
    }
  }
  return out;
}

}  // namespace

Derivation infer(const TopAxioms &axioms, const TypeEnv &env, const SrcExpr &e,
                 const TypecheckOptions &options) {
  std::set<std::string> names = term_names(axioms);
  auto entries = entries_of(env, names);
  expr_names(e, names);
  detail::Inferencer inf(axioms, options, std::move(entries), NameSupply(names));
  return inf.raw(e);
}

Derivation check_top(const TopAxioms &axioms, const TypeEnv &env, const SrcExpr &e,
                     const TypecheckOptions &options) {
  std::set<std::string> names = term_names(axioms);
  auto entries = entries_of(env, names);
  expr_names(e, names);
  detail::Inferencer inf(axioms, options, std::move(entries), NameSupply(names));
  return inf.top(e);
}

const ItemResult *ProgramResult::find(std::string_view name) const {
  for (const auto &item : items)
    if (item.name == name) return &item;
  return nullptr;
}

TargetEnv ProgramResult::target_env(const TopAxioms &axioms) const {
  return elab_env(axioms, {}, env);
}

ProgramResult check_program(const Program &program, const TypecheckOptions &options,
                            const std::map<std::string, TypecheckOptions> &overrides) {
  std::set<std::string> names = term_names(program.axioms);
  for (const auto &p : program.prims) names.insert(p.name);
  for (const auto &d : program.defs) {
    names.insert(d.name);
    expr_names(d.body, names);
  }
  for (const auto &c : program.checks) {
    names.insert(c.name);
    expr_names(c.body, names);
  }

  ProgramResult result;
  std::vector<detail::EnvEntry> env;
  for (const auto &p : program.prims) {
    env.push_back({p.name, p.scheme, true});
    result.env = result.env.extend(p.name, p.scheme);
  }
  auto options_for = [&](const std::string &name) -> const TypecheckOptions & {
    auto it = overrides.find(name);
    return it != overrides.end() ? it->second : options;
  };

  for (const auto &d : program.defs) {
    detail::Inferencer inf(program.axioms, options_for(d.name), env, NameSupply(names));
    Derivation der = d.signature ? inf.top_specified(d.body, *d.signature, d.span)
                                 : inf.top(d.body);
    env.push_back({d.name, der.scheme, d.signature.has_value()});
    result.env = result.env.extend(d.name, der.scheme);
    result.items.push_back(
        {d.name, ItemResult::Kind::kDef, d.signature.has_value(), std::move(der)});
  }
  for (const auto &c : program.checks) {
    detail::Inferencer inf(program.axioms, options_for(c.name), env, NameSupply(names));
    result.items.push_back({c.name, ItemResult::Kind::kCheck, false, inf.top(c.body)});
  }
  return result;
}

}  // namespace dictapp
