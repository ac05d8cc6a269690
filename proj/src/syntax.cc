#include "dictapp/syntax.h"

#include <fmt/core.h>

#include <algorithm>
#include <cctype>
#include <functional>

#include "dictapp/surface.h"

namespace dictapp {

// ---------------------------------------------------------------------------
// Constructors

SrcType SrcType::var(std::string name) {
  return SrcType(std::make_shared<const Node>(Node{Kind::kVar, std::move(name), {}}));
}

SrcType SrcType::arrow(SrcType dom, SrcType cod) {
  return SrcType(std::make_shared<const Node>(
      Node{Kind::kArrow, "", {std::move(dom), std::move(cod)}}));
}

SrcType SrcType::dict(std::string cls, SrcType arg) {
  return SrcType(std::make_shared<const Node>(
      Node{Kind::kDict, std::move(cls), {std::move(arg)}}));
}

SrcType SrcType::con(std::string name, std::vector<SrcType> args) {
  return SrcType(std::make_shared<const Node>(
      Node{Kind::kCon, std::move(name), std::move(args)}));
}

bool operator==(const SrcType &a, const SrcType &b) {
  if (a.node_ == b.node_) return true;
  return a.kind() == b.kind() && a.name() == b.name() &&
         a.children() == b.children();
}

std::strong_ordering operator<=>(const SrcType &a, const SrcType &b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = static_cast<int>(a.kind()) <=> static_cast<int>(b.kind()); c != 0)
    return c;
  if (auto c = a.name() <=> b.name(); c != 0) return c;
  return std::lexicographical_compare_three_way(
      a.children().begin(), a.children().end(), b.children().begin(),
      b.children().end());
}

std::strong_ordering operator<=>(const Constraint &a, const Constraint &b) {
  if (auto c = a.cls <=> b.cls; c != 0) return c;
  return a.arg <=> b.arg;
}

const AxiomScheme *TopAxioms::find(std::string_view name) const {
  for (const auto &a : axioms)
    if (a.name == name) return &a;
  return nullptr;
}

SrcExpr SrcExpr::var(std::string name, Span span) {
  return SrcExpr(std::make_shared<const Node>(
      Node{Kind::kVar, std::move(name), {}, std::nullopt, std::nullopt, span}));
}

SrcExpr SrcExpr::lam(std::string binder, SrcExpr body, Span span) {
  return SrcExpr(std::make_shared<const Node>(Node{
      Kind::kLam, std::move(binder), {std::move(body)}, std::nullopt,
      std::nullopt, span}));
}

SrcExpr SrcExpr::app(SrcExpr fn, SrcExpr arg, Span span) {
  return SrcExpr(std::make_shared<const Node>(
      Node{Kind::kApp, "", {std::move(fn), std::move(arg)}, std::nullopt,
           std::nullopt, span}));
}

SrcExpr SrcExpr::dict_app(SrcExpr fn, SrcExpr dict, Constraint at, Span span) {
  return SrcExpr(std::make_shared<const Node>(
      Node{Kind::kDictApp, "", {std::move(fn), std::move(dict)}, std::move(at),
           std::nullopt, span}));
}

SrcExpr SrcExpr::annot(SrcExpr expr, Scheme scheme, Span span) {
  return SrcExpr(std::make_shared<const Node>(
      Node{Kind::kAnnot, "", {std::move(expr)}, std::nullopt, std::move(scheme),
           span}));
}

bool operator==(const SrcExpr &a, const SrcExpr &b) {
  if (a.node_ == b.node_) return true;
  return a.kind() == b.kind() && a.name() == b.name() &&
         a.node_->children == b.node_->children && a.node_->at == b.node_->at &&
         a.node_->scheme == b.node_->scheme;
}

TypeEnv TypeEnv::extend(std::string name, Scheme scheme) const {
  if (lookup(name))
    throw ValidationError("DuplicateName", fmt::format("{} is already bound", name));
  TypeEnv out = *this;
  out.entries_.insert(out.entries_.begin(),
                      TermBinding{std::move(name), std::move(scheme)});
  return out;
}

TypeEnv TypeEnv::extend_tyvar(std::string name) const {
  TypeEnv out = *this;
  out.entries_.insert(out.entries_.begin(), TypeVarBinding{std::move(name)});
  return out;
}

const Scheme *TypeEnv::lookup(std::string_view name) const {
  for (const auto &e : entries_)
    if (const auto *b = std::get_if<TermBinding>(&e); b && b->name == name)
      return &b->scheme;
  return nullptr;
}

bool TypeEnv::contains_tyvar(std::string_view name) const {
  for (const auto &e : entries_)
    if (const auto *b = std::get_if<TypeVarBinding>(&e); b && b->name == name)
      return true;
  return false;
}

TargetType TargetType::var(std::string name) {
  return TargetType(std::make_shared<const Node>(Node{Kind::kVar, std::move(name), {}}));
}

TargetType TargetType::arrow(TargetType dom, TargetType cod) {
  return TargetType(std::make_shared<const Node>(
      Node{Kind::kArrow, "", {std::move(dom), std::move(cod)}}));
}

TargetType TargetType::forall(std::string binder, TargetType body) {
  return TargetType(std::make_shared<const Node>(
      Node{Kind::kForall, std::move(binder), {std::move(body)}}));
}

TargetType TargetType::dict(std::string cls, TargetType arg) {
  return TargetType(std::make_shared<const Node>(
      Node{Kind::kDict, std::move(cls), {std::move(arg)}}));
}

TargetType TargetType::con(std::string name, std::vector<TargetType> args) {
  return TargetType(std::make_shared<const Node>(
      Node{Kind::kCon, std::move(name), std::move(args)}));
}

bool operator==(const TargetType &a, const TargetType &b) {
  if (a.node_ == b.node_) return true;
  return a.kind() == b.kind() && a.name() == b.name() &&
         a.children() == b.children();
}

TargetTerm TargetTerm::var(std::string name) {
  return TargetTerm(std::make_shared<const Node>(
      Node{Kind::kVar, std::move(name), std::nullopt, {}}));
}

TargetTerm TargetTerm::lam(std::string binder, TargetType annot, TargetTerm body) {
  return TargetTerm(std::make_shared<const Node>(
      Node{Kind::kLam, std::move(binder), std::move(annot), {std::move(body)}}));
}

TargetTerm TargetTerm::app(TargetTerm fn, TargetTerm arg) {
  return TargetTerm(std::make_shared<const Node>(
      Node{Kind::kApp, "", std::nullopt, {std::move(fn), std::move(arg)}}));
}

TargetTerm TargetTerm::ty_lam(std::string binder, TargetTerm body) {
  return TargetTerm(std::make_shared<const Node>(
      Node{Kind::kTyLam, std::move(binder), std::nullopt, {std::move(body)}}));
}

TargetTerm TargetTerm::ty_app(TargetTerm fn, TargetType arg) {
  return TargetTerm(std::make_shared<const Node>(
      Node{Kind::kTyApp, "", std::move(arg), {std::move(fn)}}));
}

bool operator==(const TargetTerm &a, const TargetTerm &b) {
  if (a.node_ == b.node_) return true;
  return a.kind() == b.kind() && a.name() == b.name() &&
         a.node_->type == b.node_->type && a.node_->children == b.node_->children;
}

// ---------------------------------------------------------------------------
// Free variables

void ftv_ordered(const SrcType &t, std::vector<std::string> &out) {
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t.name()) == out.end())
      out.push_back(t.name());
    return;
  }
  for (const auto &c : t.children()) ftv_ordered(c, out);
}

std::vector<std::string> ftv_ordered(const SrcType &t) {
  std::vector<std::string> out;
  ftv_ordered(t, out);
  return out;
}

namespace {

void collect_ftv(const SrcType &t, std::set<std::string> &out) {
  if (t.is_var()) {
    out.insert(t.name());
    return;
  }
  for (const auto &c : t.children()) collect_ftv(c, out);
}

void collect_ftv(const TargetType &t, std::set<std::string> &bound,
                 std::set<std::string> &out) {
  switch (t.kind()) {
    case TargetType::Kind::kVar:
      if (!bound.count(t.name())) out.insert(t.name());
      return;
    case TargetType::Kind::kForall: {
      bool fresh = bound.insert(t.name()).second;
      collect_ftv(t.body(), bound, out);
      if (fresh) bound.erase(t.name());
      return;
    }
    default:
      for (const auto &c : t.children()) collect_ftv(c, bound, out);
  }
}

}  // namespace

std::set<std::string> ftv(const SrcType &t) {
  std::set<std::string> out;
  collect_ftv(t, out);
  return out;
}

std::set<std::string> ftv(const Constraint &c) { return ftv(c.arg); }

std::set<std::string> ftv(const QualType &q) {
  std::set<std::string> out;
  for (const auto &c : q.context) collect_ftv(c.arg, out);
  collect_ftv(q.body, out);
  return out;
}

std::set<std::string> ftv(const Scheme &s) {
  auto out = ftv(s.qual);
  for (const auto &a : s.quantified) out.erase(a);
  return out;
}

std::set<std::string> ftv(const LabelledConstraints &q) {
  std::set<std::string> out;
  for (const auto &l : q) collect_ftv(l.constraint.arg, out);
  return out;
}

std::set<std::string> ftv(const TypeEnv &env) {
  std::set<std::string> out;
  for (const auto &e : env.entries()) {
    if (const auto *b = std::get_if<TypeEnv::TermBinding>(&e)) {
      auto f = ftv(b->scheme);
      out.insert(f.begin(), f.end());
    } else {
      out.insert(std::get<TypeEnv::TypeVarBinding>(e).name);
    }
  }
  return out;
}

std::set<std::string> ftv(const TargetType &t) {
  std::set<std::string> bound, out;
  collect_ftv(t, bound, out);
  return out;
}

namespace {

void collect_free_vars(const TargetTerm &t, std::multiset<std::string> &bound,
                       std::set<std::string> &out) {
  switch (t.kind()) {
    case TargetTerm::Kind::kVar:
      if (!bound.count(t.name())) out.insert(t.name());
      return;
    case TargetTerm::Kind::kLam: {
      auto it = bound.insert(t.name());
      collect_free_vars(t.body(), bound, out);
      bound.erase(it);
      return;
    }
    case TargetTerm::Kind::kApp:
      collect_free_vars(t.fn(), bound, out);
      collect_free_vars(t.arg(), bound, out);
      return;
    case TargetTerm::Kind::kTyLam:
      collect_free_vars(t.body(), bound, out);
      return;
    case TargetTerm::Kind::kTyApp:
      collect_free_vars(t.fn(), bound, out);
      return;
  }
}

void collect_free_tyvars(const TargetTerm &t, std::set<std::string> &bound,
                         std::set<std::string> &out) {
  switch (t.kind()) {
    case TargetTerm::Kind::kVar:
      return;
    case TargetTerm::Kind::kLam:
      collect_ftv(t.type(), bound, out);
      collect_free_tyvars(t.body(), bound, out);
      return;
    case TargetTerm::Kind::kApp:
      collect_free_tyvars(t.fn(), bound, out);
      collect_free_tyvars(t.arg(), bound, out);
      return;
    case TargetTerm::Kind::kTyLam: {
      bool fresh = bound.insert(t.name()).second;
      collect_free_tyvars(t.body(), bound, out);
      if (fresh) bound.erase(t.name());
      return;
    }
    case TargetTerm::Kind::kTyApp:
      collect_free_tyvars(t.fn(), bound, out);
      collect_ftv(t.type(), bound, out);
      return;
  }
}

void collect_type_names(const TargetType &t, std::set<std::string> &out) {
  if (t.kind() == TargetType::Kind::kVar || t.kind() == TargetType::Kind::kForall)
    out.insert(t.name());
  for (const auto &c : t.children()) collect_type_names(c, out);
}

void collect_all_names(const TargetTerm &t, std::set<std::string> &out) {
  switch (t.kind()) {
    case TargetTerm::Kind::kVar:
      out.insert(t.name());
      return;
    case TargetTerm::Kind::kLam:
      out.insert(t.name());
      collect_type_names(t.type(), out);
      collect_all_names(t.body(), out);
      return;
    case TargetTerm::Kind::kApp:
      collect_all_names(t.fn(), out);
      collect_all_names(t.arg(), out);
      return;
    case TargetTerm::Kind::kTyLam:
      out.insert(t.name());
      collect_all_names(t.body(), out);
      return;
    case TargetTerm::Kind::kTyApp:
      collect_type_names(t.type(), out);
      collect_all_names(t.fn(), out);
      return;
  }
}

}  // namespace

std::set<std::string> free_vars(const TargetTerm &t) {
  std::multiset<std::string> bound;
  std::set<std::string> out;
  collect_free_vars(t, bound, out);
  return out;
}

std::set<std::string> free_tyvars(const TargetTerm &t) {
  std::set<std::string> bound, out;
  collect_free_tyvars(t, bound, out);
  return out;
}

std::set<std::string> all_names(const TargetTerm &t) {
  std::set<std::string> out;
  collect_all_names(t, out);
  return out;
}

// ---------------------------------------------------------------------------
// Fresh names

std::string fresh_name(const std::string &base, const std::set<std::string> &avoid) {
  if (!avoid.count(base)) return base;
  std::string root = base;
  while (root.size() > 1 && std::isdigit(static_cast<unsigned char>(root.back())))
    root.pop_back();
  for (int i = 1;; ++i) {
    std::string candidate = root + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

void NameSupply::reserve_all(const std::set<std::string> &names) {
  used_.insert(names.begin(), names.end());
}

std::string NameSupply::fresh(const std::string &base) {
  if (!used_.count(base)) {
    used_.insert(base);
    return base;
  }
  int &n = next_[base];
  for (;;) {
    std::string candidate = base + std::to_string(++n);
    if (used_.insert(candidate).second) return candidate;
  }
}

// ---------------------------------------------------------------------------
// Substitution

SrcType apply_tysubst(const TySubst &theta, const SrcType &t) {
  if (theta.empty()) return t;
  switch (t.kind()) {
    case SrcType::Kind::kVar: {
      auto it = theta.find(t.name());
      return it == theta.end() ? t : it->second;
    }
    case SrcType::Kind::kArrow:
      return SrcType::arrow(apply_tysubst(theta, t.dom()),
                            apply_tysubst(theta, t.cod()));
    case SrcType::Kind::kDict:
      return SrcType::dict(t.name(), apply_tysubst(theta, t.arg()));
    case SrcType::Kind::kCon: {
      std::vector<SrcType> args;
      args.reserve(t.children().size());
      for (const auto &a : t.children()) args.push_back(apply_tysubst(theta, a));
      return SrcType::con(t.name(), std::move(args));
    }
  }
  return t;
}

Constraint apply_tysubst(const TySubst &theta, const Constraint &c) {
  return Constraint{c.cls, apply_tysubst(theta, c.arg)};
}

QualType apply_tysubst(const TySubst &theta, const QualType &q) {
  QualType out{{}, apply_tysubst(theta, q.body)};
  out.context.reserve(q.context.size());
  for (const auto &c : q.context) out.context.push_back(apply_tysubst(theta, c));
  return out;
}

Scheme apply_tysubst(const TySubst &theta, const Scheme &s) {
  TySubst inner = theta;
  for (const auto &a : s.quantified) inner.erase(a);
  if (inner.empty()) return s;

  std::set<std::string> range;
  auto free = ftv(s);
  for (const auto &[v, t] : inner) {
    if (!free.count(v)) continue;
    auto f = ftv(t);
    range.insert(f.begin(), f.end());
  }
  std::set<std::string> avoid = range;
  auto all = ftv(s.qual);
  avoid.insert(all.begin(), all.end());
  for (const auto &[v, t] : inner) avoid.insert(v);

  std::vector<std::string> quantified;
  for (const auto &a : s.quantified) {
    if (range.count(a)) {
      std::string renamed = fresh_name(a, avoid);
      avoid.insert(renamed);
      inner.insert_or_assign(a, SrcType::var(renamed));
      quantified.push_back(renamed);
    } else {
      quantified.push_back(a);
    }
  }
  return Scheme{std::move(quantified), apply_tysubst(inner, s.qual)};
}

LabelledConstraints apply_tysubst(const TySubst &theta, const LabelledConstraints &q) {
  LabelledConstraints out;
  out.reserve(q.size());
  for (const auto &l : q) out.push_back({l.label, apply_tysubst(theta, l.constraint)});
  return out;
}

namespace {

std::set<std::string> range_ftv(const TargetTySubst &theta) {
  std::set<std::string> out;
  for (const auto &[v, t] : theta) {
    auto f = ftv(t);
    out.insert(f.begin(), f.end());
  }
  return out;
}

TargetType subst_type_impl(const TargetTySubst &theta, const TargetType &t,
                           const std::set<std::string> &range) {
  if (theta.empty()) return t;
  switch (t.kind()) {
    case TargetType::Kind::kVar: {
      auto it = theta.find(t.name());
      return it == theta.end() ? t : it->second;
    }
    case TargetType::Kind::kArrow:
      return TargetType::arrow(subst_type_impl(theta, t.dom(), range),
                               subst_type_impl(theta, t.cod(), range));
    case TargetType::Kind::kDict:
      return TargetType::dict(t.name(), subst_type_impl(theta, t.arg(), range));
    case TargetType::Kind::kCon: {
      std::vector<TargetType> args;
      for (const auto &a : t.children())
        args.push_back(subst_type_impl(theta, a, range));
      return TargetType::con(t.name(), std::move(args));
    }
    case TargetType::Kind::kForall: {
      TargetTySubst inner = theta;
      inner.erase(t.name());
      if (inner.empty()) return t;
      std::string binder = t.name();
      if (range.count(binder)) {
        std::set<std::string> avoid = range;
        auto f = ftv(t.body());
        avoid.insert(f.begin(), f.end());
        for (const auto &[v, _] : inner) avoid.insert(v);
        binder = fresh_name(binder, avoid);
        inner.insert_or_assign(t.name(), TargetType::var(binder));
        auto r = range;
        r.insert(binder);
        return TargetType::forall(binder, subst_type_impl(inner, t.body(), r));
      }
      return TargetType::forall(binder, subst_type_impl(inner, t.body(), range));
    }
  }
  return t;
}

TargetTerm subst_term_types(const TargetTySubst &theta, const TargetTerm &t,
                            const std::set<std::string> &range) {
  if (theta.empty()) return t;
  switch (t.kind()) {
    case TargetTerm::Kind::kVar:
      return t;
    case TargetTerm::Kind::kLam:
      return TargetTerm::lam(t.name(), subst_type_impl(theta, t.type(), range),
                             subst_term_types(theta, t.body(), range));
    case TargetTerm::Kind::kApp:
      return TargetTerm::app(subst_term_types(theta, t.fn(), range),
                             subst_term_types(theta, t.arg(), range));
    case TargetTerm::Kind::kTyApp:
      return TargetTerm::ty_app(subst_term_types(theta, t.fn(), range),
                                subst_type_impl(theta, t.type(), range));
    case TargetTerm::Kind::kTyLam: {
      TargetTySubst inner = theta;
      inner.erase(t.name());
      if (inner.empty()) return t;
      if (range.count(t.name())) {
        std::set<std::string> avoid = range;
        auto f = free_tyvars(t.body());
        avoid.insert(f.begin(), f.end());
        for (const auto &[v, _] : inner) avoid.insert(v);
        std::string binder = fresh_name(t.name(), avoid);
        inner.insert_or_assign(t.name(), TargetType::var(binder));
        auto r = range;
        r.insert(binder);
        return TargetTerm::ty_lam(binder, subst_term_types(inner, t.body(), r));
      }
      return TargetTerm::ty_lam(t.name(), subst_term_types(inner, t.body(), range));
    }
  }
  return t;
}

TargetTerm evsubst_impl(const EvSubst &eta, const TargetTerm &t,
                        const std::set<std::string> &range_vars,
                        const std::set<std::string> &range_tyvars) {
  if (eta.empty()) return t;
  switch (t.kind()) {
    case TargetTerm::Kind::kVar: {
      auto it = eta.find(t.name());
      return it == eta.end() ? t : it->second;
    }
    case TargetTerm::Kind::kApp:
      return TargetTerm::app(evsubst_impl(eta, t.fn(), range_vars, range_tyvars),
                             evsubst_impl(eta, t.arg(), range_vars, range_tyvars));
    case TargetTerm::Kind::kTyApp:
      return TargetTerm::ty_app(
          evsubst_impl(eta, t.fn(), range_vars, range_tyvars), t.type());
    case TargetTerm::Kind::kLam: {
      EvSubst inner = eta;
      inner.erase(t.name());
      if (inner.empty()) return t;
      if (range_vars.count(t.name())) {
        std::set<std::string> avoid = range_vars;
        auto f = free_vars(t.body());
        avoid.insert(f.begin(), f.end());
        for (const auto &[v, _] : inner) avoid.insert(v);
        std::string binder = fresh_name(t.name(), avoid);
        inner.insert_or_assign(t.name(), TargetTerm::var(binder));
        auto r = range_vars;
        r.insert(binder);
        return TargetTerm::lam(binder, t.type(),
                               evsubst_impl(inner, t.body(), r, range_tyvars));
      }
      return TargetTerm::lam(t.name(), t.type(),
                             evsubst_impl(inner, t.body(), range_vars, range_tyvars));
    }
    case TargetTerm::Kind::kTyLam: {
      if (range_tyvars.count(t.name())) {
        std::set<std::string> avoid = range_tyvars;
        auto f = free_tyvars(t.body());
        avoid.insert(f.begin(), f.end());
        std::string binder = fresh_name(t.name(), avoid);
        TargetTerm body = subst_type({{t.name(), TargetType::var(binder)}}, t.body());
        return TargetTerm::ty_lam(binder,
                                  evsubst_impl(eta, body, range_vars, range_tyvars));
      }
      return TargetTerm::ty_lam(t.name(),
                                evsubst_impl(eta, t.body(), range_vars, range_tyvars));
    }
  }
  return t;
}

}  // namespace

TargetType subst_type(const TargetTySubst &theta, const TargetType &t) {
  return subst_type_impl(theta, t, range_ftv(theta));
}

TargetTerm subst_type(const TargetTySubst &theta, const TargetTerm &t) {
  return subst_term_types(theta, t, range_ftv(theta));
}

TargetTerm apply_evsubst(const EvSubst &eta, const TargetTerm &t) {
  std::set<std::string> vars, tyvars;
  for (const auto &[d, ev] : eta) {
    auto f = free_vars(ev);
    vars.insert(f.begin(), f.end());
    auto g = free_tyvars(ev);
    tyvars.insert(g.begin(), g.end());
  }
  return evsubst_impl(eta, t, vars, tyvars);
}

// ---------------------------------------------------------------------------
// Alpha-equivalence

namespace {

// Position of `name` counted from the innermost binder, or -1 when free.
int binder_index(const std::vector<std::string> &stack, const std::string &name) {
  for (std::size_t i = stack.size(); i-- > 0;)
    if (stack[i] == name) return static_cast<int>(stack.size() - 1 - i);
  return -1;
}

bool same_occurrence(const std::vector<std::string> &s1, const std::string &n1,
                     const std::vector<std::string> &s2, const std::string &n2) {
  int i1 = binder_index(s1, n1), i2 = binder_index(s2, n2);
  if (i1 != i2) return false;
  return i1 >= 0 || n1 == n2;
}

bool alpha_type(const TargetType &a, const TargetType &b,
                std::vector<std::string> &sa, std::vector<std::string> &sb) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TargetType::Kind::kVar:
      return same_occurrence(sa, a.name(), sb, b.name());
    case TargetType::Kind::kForall: {
      sa.push_back(a.name());
      sb.push_back(b.name());
      bool ok = alpha_type(a.body(), b.body(), sa, sb);
      sa.pop_back();
      sb.pop_back();
      return ok;
    }
    case TargetType::Kind::kDict:
    case TargetType::Kind::kCon:
      if (a.name() != b.name()) return false;
      [[fallthrough]];
    case TargetType::Kind::kArrow:
      if (a.children().size() != b.children().size()) return false;
      for (std::size_t i = 0; i < a.children().size(); ++i)
        if (!alpha_type(a.children()[i], b.children()[i], sa, sb)) return false;
      return true;
  }
  return false;
}

struct AlphaTermState {
  std::vector<std::string> vars_a, vars_b, tys_a, tys_b;
};

bool alpha_term(const TargetTerm &a, const TargetTerm &b, AlphaTermState &st) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TargetTerm::Kind::kVar:
      return same_occurrence(st.vars_a, a.name(), st.vars_b, b.name());
    case TargetTerm::Kind::kLam: {
      if (!alpha_type(a.type(), b.type(), st.tys_a, st.tys_b)) return false;
      st.vars_a.push_back(a.name());
      st.vars_b.push_back(b.name());
      bool ok = alpha_term(a.body(), b.body(), st);
      st.vars_a.pop_back();
      st.vars_b.pop_back();
      return ok;
    }
    case TargetTerm::Kind::kApp:
      return alpha_term(a.fn(), b.fn(), st) && alpha_term(a.arg(), b.arg(), st);
    case TargetTerm::Kind::kTyLam: {
      st.tys_a.push_back(a.name());
      st.tys_b.push_back(b.name());
      bool ok = alpha_term(a.body(), b.body(), st);
      st.tys_a.pop_back();
      st.tys_b.pop_back();
      return ok;
    }
    case TargetTerm::Kind::kTyApp:
      return alpha_type(a.type(), b.type(), st.tys_a, st.tys_b) &&
             alpha_term(a.fn(), b.fn(), st);
  }
  return false;
}

}  // namespace

bool alpha_eq(const TargetType &a, const TargetType &b) {
  std::vector<std::string> sa, sb;
  return alpha_type(a, b, sa, sb);
}

bool alpha_eq(const TargetTerm &a, const TargetTerm &b) {
  AlphaTermState st;
  return alpha_term(a, b, st);
}

bool scheme_alpha_eq(const Scheme &a, const Scheme &b) {
  if (a.quantified.size() != b.quantified.size()) return false;
  if (a.context().size() != b.context().size()) return false;
  // Rename both sides' quantifiers to a common set of fresh names.
  std::set<std::string> avoid = ftv(a.qual);
  auto fb = ftv(b.qual);
  avoid.insert(fb.begin(), fb.end());
  TySubst ra, rb;
  for (std::size_t i = 0; i < a.quantified.size(); ++i) {
    std::string common = fresh_name("q" + std::to_string(i), avoid);
    avoid.insert(common);
    ra.insert_or_assign(a.quantified[i], SrcType::var(common));
    rb.insert_or_assign(b.quantified[i], SrcType::var(common));
  }
  return apply_tysubst(ra, a.qual) == apply_tysubst(rb, b.qual);
}

// ---------------------------------------------------------------------------
// Evidence terms

bool is_evidence_term(const TargetTerm &t) {
  const TargetTerm *cur = &t;
  while (cur->kind() == TargetTerm::Kind::kApp || cur->kind() == TargetTerm::Kind::kTyApp) {
    if (cur->kind() == TargetTerm::Kind::kApp && !is_evidence_term(cur->arg())) return false;
    cur = &cur->fn();
  }
  return cur->kind() == TargetTerm::Kind::kVar;
}

// ---------------------------------------------------------------------------
// Matching and unification

bool match_type(const SrcType &pattern, const SrcType &target,
                const std::set<std::string> &bindable, TySubst &theta) {
  if (pattern.is_var() && bindable.count(pattern.name())) {
    auto it = theta.find(pattern.name());
    if (it != theta.end()) return it->second == target;
    theta.emplace(pattern.name(), target);
    return true;
  }
  if (pattern.kind() != target.kind() || pattern.name() != target.name() ||
      pattern.children().size() != target.children().size())
    return false;
  for (std::size_t i = 0; i < pattern.children().size(); ++i)
    if (!match_type(pattern.children()[i], target.children()[i], bindable, theta))
      return false;
  return true;
}

bool match_constraint(const Constraint &pattern, const Constraint &target,
                      const std::set<std::string> &bindable, TySubst &theta) {
  return pattern.cls == target.cls &&
         match_type(pattern.arg, target.arg, bindable, theta);
}

namespace {

SrcType walk(const TySubst &s, SrcType t) {
  while (t.is_var()) {
    auto it = s.find(t.name());
    if (it == s.end()) break;
    t = it->second;
  }
  return t;
}

bool occurs(const TySubst &s, const std::string &v, const SrcType &t) {
  SrcType w = walk(s, t);
  if (w.is_var()) return w.name() == v;
  for (const auto &c : w.children())
    if (occurs(s, v, c)) return true;
  return false;
}

bool unify_into(TySubst &s, const SrcType &a0, const SrcType &b0) {
  SrcType a = walk(s, a0), b = walk(s, b0);
  if (a.is_var() && b.is_var() && a.name() == b.name()) return true;
  if (a.is_var()) {
    if (occurs(s, a.name(), b)) return false;
    s.emplace(a.name(), b);
    return true;
  }
  if (b.is_var()) return unify_into(s, b, a);
  if (a.kind() != b.kind() || a.name() != b.name() ||
      a.children().size() != b.children().size())
    return false;
  for (std::size_t i = 0; i < a.children().size(); ++i)
    if (!unify_into(s, a.children()[i], b.children()[i])) return false;
  return true;
}

}  // namespace

std::optional<TySubst> unify_types(const SrcType &a, const SrcType &b) {
  TySubst s;
  if (!unify_into(s, a, b)) return std::nullopt;
  return s;
}

// ---------------------------------------------------------------------------
// Axiom validation

void validate_axioms(const TopAxioms &axioms) {
  std::set<std::string> names;
  for (const auto &a : axioms.axioms) {
    if (!names.insert(a.name).second)
      throw ValidationError("DuplicateName",
                            fmt::format("duplicate instance name {}", a.name));
    std::set<std::string> quantified(a.quantified.begin(), a.quantified.end());
    if (quantified.size() != a.quantified.size())
      throw ValidationError(
          "DuplicateName",
          fmt::format("instance {} quantifies a variable twice", a.name));
    auto head_vars = ftv(a.head);
    for (const auto &v : a.quantified)
      if (!head_vars.count(v))
        throw ValidationError(
            "AmbiguousInstance",
            fmt::format("type variable {} of instance {} does not occur in its head",
                        v, a.name));
    for (const auto &v : head_vars)
      if (!quantified.count(v))
        throw ValidationError(
            "UnboundTypeVariable",
            fmt::format("type variable {} is not quantified in instance {}", v,
                        a.name));
    for (const auto &p : a.premises)
      for (const auto &v : ftv(p)) {
        if (!quantified.count(v))
          throw ValidationError(
              "UnboundTypeVariable",
              fmt::format("type variable {} is not quantified in instance {}", v,
                          a.name));
        if (!head_vars.count(v))
          throw ValidationError(
              "AmbiguousInstance",
              fmt::format("premise variable {} of instance {} does not occur in "
                          "its head",
                          v, a.name));
      }
  }

  const auto &list = axioms.axioms;
  for (std::size_t i = 0; i < list.size(); ++i) {
    for (std::size_t j = i + 1; j < list.size(); ++j) {
      if (list[i].head.cls != list[j].head.cls) continue;
      // Freshen the second head apart from the first before unifying.
      std::set<std::string> avoid(list[i].quantified.begin(), list[i].quantified.end());
      avoid.insert(list[j].quantified.begin(), list[j].quantified.end());
      TySubst rename;
      for (const auto &v : list[j].quantified) {
        std::string n = fresh_name(v + "'", avoid);
        avoid.insert(n);
        rename.insert_or_assign(v, SrcType::var(n));
      }
      if (unify_types(list[i].head.arg, apply_tysubst(rename, list[j].head.arg)))
        throw ValidationError(
            "OverlappingInstances",
            fmt::format("instances {} and {} overlap: {} and {}", list[i].name,
                        list[j].name, pretty(list[i].head), pretty(list[j].head)));
    }
  }
}

}  // namespace dictapp
