#include "dictapp/typecheck.h"

#include <fmt/core.h>

#include "infer.h"

namespace dictapp {

namespace detail {

namespace {

bool is_meta(const std::string &name) { return !name.empty() && name[0] == '?'; }

}  // namespace

// Labels are unique per inference run, so evidence is substituted without
// renaming binders: the givens it mentions are meant to be captured.
TargetTerm replace_vars(const TargetTerm &t, const EvSubst &eta) {
  switch (t.kind()) {
    case TargetTerm::Kind::kVar: {
      auto it = eta.find(t.name());
      return it != eta.end() ? it->second : t;
    }
    case TargetTerm::Kind::kLam:
      return TargetTerm::lam(t.name(), t.type(), replace_vars(t.body(), eta));
    case TargetTerm::Kind::kApp:
      return TargetTerm::app(replace_vars(t.fn(), eta), replace_vars(t.arg(), eta));
    case TargetTerm::Kind::kTyLam:
      return TargetTerm::ty_lam(t.name(), replace_vars(t.body(), eta));
    case TargetTerm::Kind::kTyApp:
      return TargetTerm::ty_app(replace_vars(t.fn(), eta), t.type());
  }
  return t;
}

Inferencer::Inferencer(const TopAxioms &axioms, const TypecheckOptions &options,
                       std::vector<EnvEntry> env, NameSupply names)
    : axioms_(axioms), opts_(options), env_(std::move(env)), names_(std::move(names)) {}

SrcType Inferencer::fresh_meta() {
  return SrcType::var(fmt::format("?{}", ++meta_count_));
}

int Inferencer::meta_id(const std::string &name) { return std::stoi(name.substr(1)); }

SrcType Inferencer::zonk(const SrcType &t) const {
  switch (t.kind()) {
    case SrcType::Kind::kVar: {
      auto it = subst_.find(t.name());
      return it != subst_.end() ? zonk(it->second) : t;
    }
    case SrcType::Kind::kArrow:
      return SrcType::arrow(zonk(t.dom()), zonk(t.cod()));
    case SrcType::Kind::kDict:
      return SrcType::dict(t.name(), zonk(t.arg()));
    case SrcType::Kind::kCon: {
      std::vector<SrcType> args;
      for (const auto &c : t.children()) args.push_back(zonk(c));
      return SrcType::con(t.name(), std::move(args));
    }
  }
  return t;
}

Constraint Inferencer::zonk(const Constraint &c) const { return {c.cls, zonk(c.arg)}; }

void Inferencer::unify(const SrcType &a, const SrcType &b, Span span) {
  SrcType x = zonk(a), y = zonk(b);
  if (x.is_var() && is_meta(x.name())) return bind(x.name(), y, span);
  if (y.is_var() && is_meta(y.name())) return bind(y.name(), x, span);
  if (x.kind() == y.kind() && x.name() == y.name() &&
      x.children().size() == y.children().size()) {
    for (std::size_t i = 0; i < x.children().size(); ++i)
      unify(x.children()[i], y.children()[i], span);
    return;
  }
  throw TypeError("UnificationFail",
                  fmt::format("cannot match type {} with {}", pretty(x), pretty(y)),
                  span);
}

void Inferencer::bind(const std::string &meta, const SrcType &t, Span span) {
  if (t.is_var() && t.name() == meta) return;
  if (ftv(t).count(meta))
    throw TypeError("OccursCheck",
                    fmt::format("cannot construct the infinite type {} ~ {}", meta,
                                pretty(t)),
                    span);
  subst_.insert_or_assign(meta, t);
}

LabelledConstraints Inferencer::given_list() const {
  LabelledConstraints out;
  for (const auto &g : givens_) out.push_back(g);
  return out;
}

std::optional<TargetTerm> Inferencer::resolve(const Constraint &c) {
  LabelledConstraints givens = given_list();
  if (!opts_.choices) {
    auto r = solve(axioms_, givens, c, opts_.solve_depth);
    if (!r) return std::nullopt;
    for (const auto &s : r->steps)
      if (!axioms_.find(s)) used_givens_.insert(s);
    trace_.push_back(fmt::format("resolved {} with {}", pretty(c), pretty(r->evidence)));
    return r->evidence;
  }

  // Alternatives: every given equal to the wanted, then the instances.
  std::vector<SolveResult> alternatives;
  LabelledConstraints others;
  for (const auto &g : givens) {
    if (g.constraint == c)
      alternatives.push_back({TargetTerm::var(g.label), {g.label}});
    else
      others.push_back(g);
  }
  if (auto r = solve(axioms_, others, c, opts_.solve_depth)) {
    bool duplicate = false;
    for (const auto &alt : alternatives)
      if (alpha_eq(alt.evidence, r->evidence)) duplicate = true;
    if (!duplicate) alternatives.push_back(std::move(*r));
  }
  if (alternatives.empty()) return std::nullopt;
  std::size_t k = 0;
  if (alternatives.size() > 1)
    k = static_cast<std::size_t>(opts_.choices->choose(static_cast<int>(alternatives.size())));
  for (const auto &s : alternatives[k].steps)
    if (!axioms_.find(s)) used_givens_.insert(s);
  trace_.push_back(fmt::format("resolved {} with {} (alternative {} of {})", pretty(c),
                               pretty(alternatives[k].evidence), k + 1,
                               alternatives.size()));
  return alternatives[k].evidence;
}

Inferencer::Mono Inferencer::instantiate(const Poly &p) {
  TySubst theta;
  TargetTerm term = p.term;
  for (const auto &a : p.scheme.quantified) {
    SrcType m = fresh_meta();
    theta.insert_or_assign(a, m);
    term = TargetTerm::ty_app(std::move(term), elab_type(m));
  }
  for (const auto &c : p.scheme.context()) {
    std::string label = names_.fresh("d");
    wanteds_.push_back({label, apply_tysubst(theta, c), p.span});
    term = TargetTerm::app(std::move(term), TargetTerm::var(label));
  }
  return {apply_tysubst(theta, p.scheme.body()), std::move(term)};
}

}  // namespace detail

}  // namespace dictapp
