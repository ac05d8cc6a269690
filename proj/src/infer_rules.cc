#include <fmt/core.h>

#include <algorithm>
#include <functional>
#include <random>

#include "infer.h"

namespace dictapp::detail {

namespace {

bool is_meta(const std::string &name) { return !name.empty() && name[0] == '?'; }

bool has_meta(const Constraint &c) {
  for (const auto &v : ftv(c))
    if (is_meta(v)) return true;
  return false;
}

bool mentions(const Constraint &c, const std::set<std::string> &names) {
  for (const auto &v : ftv(c))
    if (names.count(v)) return true;
  return false;
}

TargetType map_vars(const TargetType &t,
                    const std::function<std::optional<TargetType>(const std::string &)> &f) {
  switch (t.kind()) {
    case TargetType::Kind::kVar:
      if (auto r = f(t.name())) return *r;
      return t;
    case TargetType::Kind::kArrow:
      return TargetType::arrow(map_vars(t.dom(), f), map_vars(t.cod(), f));
    case TargetType::Kind::kForall:
      return TargetType::forall(t.name(), map_vars(t.body(), f));
    case TargetType::Kind::kDict:
      return TargetType::dict(t.name(), map_vars(t.arg(), f));
    case TargetType::Kind::kCon: {
      std::vector<TargetType> args;
      for (const auto &c : t.children()) args.push_back(map_vars(c, f));
      return TargetType::con(t.name(), std::move(args));
    }
  }
  return t;
}

TargetTerm map_term_types(const TargetTerm &t,
                          const std::function<TargetType(const TargetType &)> &f) {
  switch (t.kind()) {
    case TargetTerm::Kind::kVar:
      return t;
    case TargetTerm::Kind::kLam:
      return TargetTerm::lam(t.name(), f(t.type()), map_term_types(t.body(), f));
    case TargetTerm::Kind::kApp:
      return TargetTerm::app(map_term_types(t.fn(), f), map_term_types(t.arg(), f));
    case TargetTerm::Kind::kTyLam:
      return TargetTerm::ty_lam(t.name(), map_term_types(t.body(), f));
    case TargetTerm::Kind::kTyApp:
      return TargetTerm::ty_app(map_term_types(t.fn(), f), f(t.type()));
  }
  return t;
}

void metas_in(const TargetType &t, std::vector<std::string> &out) {
  if (t.kind() == TargetType::Kind::kVar) {
    if (is_meta(t.name()) && std::find(out.begin(), out.end(), t.name()) == out.end())
      out.push_back(t.name());
    return;
  }
  for (const auto &c : t.children()) metas_in(c, out);
}

void metas_in(const TargetTerm &t, std::vector<std::string> &out) {
  switch (t.kind()) {
    case TargetTerm::Kind::kVar:
      return;
    case TargetTerm::Kind::kLam:
      metas_in(t.type(), out);
      metas_in(t.body(), out);
      return;
    case TargetTerm::Kind::kApp:
      metas_in(t.fn(), out);
      metas_in(t.arg(), out);
      return;
    case TargetTerm::Kind::kTyLam:
      metas_in(t.body(), out);
      return;
    case TargetTerm::Kind::kTyApp:
      metas_in(t.fn(), out);
      metas_in(t.type(), out);
      return;
  }
}

void metas_in(const SrcType &t, std::vector<std::string> &out) {
  for (const auto &v : ftv_ordered(t))
    if (is_meta(v) && std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
}

std::string safety_message(const SafetyReport &r, const Constraint &at, int depth) {
  if (r.verdict == SafetyVerdict::kInconclusive)
    return fmt::format(
        "cannot establish that the dictionary for {} is coherent: the constraints "
        "derivable from it do not settle within depth {}",
        pretty(at), depth);
  const SafetyWitness &w = *r.witness;
  std::string tail =
      w.from_global
          ? fmt::format("; the instances alone give {}", pretty(*w.from_global))
          : std::string();
  return fmt::format(
      "unsafe dictionary for {}: {} follows from the dictionary ({}) and also from "
      "the remaining constraints ({}){}",
      pretty(at), pretty(w.constraint), pretty(w.from_dict), pretty(w.from_rest), tail);
}

}  // namespace

Inferencer::Mono Inferencer::infer(const SrcExpr &e) {
  switch (e.kind()) {
    case SrcExpr::Kind::kVar:
    case SrcExpr::Kind::kAnnot:
    case SrcExpr::Kind::kDictApp:
      return instantiate(infer_poly(e));
    case SrcExpr::Kind::kLam: {
      SrcType m = fresh_meta();
      env_.push_back({e.name(), Scheme::mono(m), false});
      Mono body = infer(e.body());
      env_.pop_back();
      return {SrcType::arrow(m, body.type),
              TargetTerm::lam(e.name(), elab_type(m), std::move(body.term))};
    }
    case SrcExpr::Kind::kApp: {
      std::vector<std::string> before;
      for (const auto &w : wanteds_) before.push_back(w.label);
      Mono f = infer(e.fn());
      Mono x = infer(e.arg());
      SrcType ft = zonk(f.type);
      if (ft.kind() != SrcType::Kind::kArrow && !(ft.is_var() && is_meta(ft.name())))
        throw TypeError("NotAFunction",
                        fmt::format("{} has type {} and cannot be applied", pretty(e.fn()),
                                    pretty(ft)),
                        e.span());
      SrcType result = fresh_meta();
      unify(ft, SrcType::arrow(x.type, result), e.span());
      TargetTerm term = TargetTerm::app(std::move(f.term), std::move(x.term));
      if (opts_.eager) term = discharge_eagerly(std::move(term), before);
      return {result, std::move(term)};
    }
  }
  throw TypeError("UnboundVar", "malformed expression", e.span());
}

Inferencer::Poly Inferencer::infer_poly(const SrcExpr &e) {
  switch (e.kind()) {
    case SrcExpr::Kind::kVar:
      for (auto it = env_.rbegin(); it != env_.rend(); ++it)
        if (it->name == e.name()) return {it->scheme, TargetTerm::var(e.name()), e.span()};
      throw TypeError("UnboundVar", fmt::format("unbound variable {}", e.name()), e.span());
    case SrcExpr::Kind::kAnnot:
      return infer_annot(e);
    case SrcExpr::Kind::kDictApp:
      return infer_dict_app(e);
    default:
      throw TypeError("UnspecifiedType", "expression has no specified type", e.span());
  }
}

Inferencer::Poly Inferencer::infer_annot(const SrcExpr &e) {
  const Scheme &sig = e.scheme();
  TySubst skolemize;
  std::vector<std::string> skolems;
  for (const auto &a : sig.quantified) {
    std::string s = types_.fresh(a);
    skolems.push_back(s);
    skolemize.insert_or_assign(a, SrcType::var(s));
  }
  std::vector<Constraint> context;
  for (const auto &c : sig.context()) context.push_back(apply_tysubst(skolemize, c));
  SrcType body = apply_tysubst(skolemize, sig.body());

  std::size_t given_mark = givens_.size();
  std::vector<std::string> labels;
  for (const auto &c : context) {
    labels.push_back(names_.fresh("d"));
    givens_.push_back({labels.back(), c});
  }
  int meta_mark = meta_count_;
  std::set<std::string> before;
  for (const auto &w : wanteds_) before.insert(w.label);

  Mono r = infer(e.expr());
  unify(r.type, body, e.span());

  std::set<std::string> local(skolems.begin(), skolems.end());
  std::vector<Wanted> keep;
  for (auto w : wanteds_) {
    if (before.count(w.label)) {
      keep.push_back(std::move(w));
      continue;
    }
    w.constraint = zonk(w.constraint);
    if (has_meta(w.constraint)) {
      if (mentions(w.constraint, local))
        throw TypeError("AmbiguousPrincipalType",
                        fmt::format("constraint {} is not determined by the type",
                                    pretty(w.constraint)),
                        w.span);
      keep.push_back(std::move(w));
      continue;
    }
    if (auto ev = resolve(w.constraint)) {
      eta_.insert_or_assign(w.label, *ev);
      continue;
    }
    if (mentions(w.constraint, local))
      throw TypeError("UnsolvableConstraint",
                      fmt::format("could not deduce {} from the context {}",
                                  pretty(w.constraint), pretty(context)),
                      w.span);
    keep.push_back(std::move(w));
  }
  wanteds_ = std::move(keep);
  givens_.erase(givens_.begin() + static_cast<std::ptrdiff_t>(given_mark), givens_.end());

  for (const auto &[m, t] : subst_) {
    if (meta_id(m) > meta_mark) continue;
    for (const auto &v : ftv(zonk(t)))
      if (local.count(v))
        throw TypeError("SkolemEscape",
                        fmt::format("type variable {} would escape its scope", v),
                        e.span());
  }

  TargetTerm term = std::move(r.term);
  for (std::size_t i = labels.size(); i-- > 0;)
    term = TargetTerm::lam(labels[i], elab_constraint(context[i]), std::move(term));
  for (std::size_t i = skolems.size(); i-- > 0;)
    term = TargetTerm::ty_lam(skolems[i], std::move(term));
  return {Scheme{skolems, QualType{context, body}}, std::move(term), e.span()};
}

Inferencer::Poly Inferencer::infer_dict_app(const SrcExpr &e) {
  const SrcExpr &fn = e.fn();
  Poly f{Scheme::mono(SrcType::var("?")), TargetTerm::var(""), e.span()};
  Constraint at = e.at();
  std::string what;
  if (fn.kind() == SrcExpr::Kind::kVar) {
    const EnvEntry *entry = nullptr;
    for (auto it = env_.rbegin(); it != env_.rend() && !entry; ++it)
      if (it->name == fn.name()) entry = &*it;
    if (!entry)
      throw TypeError("UnboundVar", fmt::format("unbound variable {}", fn.name()),
                      fn.span());
    if (!entry->specified)
      throw TypeError("UnspecifiedType",
                      fmt::format("{} needs a type signature before a dictionary can be "
                                  "passed to it",
                                  fn.name()),
                      e.span());
    f = {entry->scheme, TargetTerm::var(fn.name()), fn.span()};
    what = fn.name();
  } else if (fn.kind() == SrcExpr::Kind::kAnnot) {
    f = infer_annot(fn);
    TySubst to_skolems;
    for (std::size_t i = 0; i < f.scheme.quantified.size(); ++i)
      to_skolems.insert_or_assign(fn.scheme().quantified[i],
                                  SrcType::var(f.scheme.quantified[i]));
    at = apply_tysubst(to_skolems, at);
    what = "the annotated expression";
  } else {
    throw TypeError("UnspecifiedType",
                    "a dictionary can only be passed to a variable with a signature or "
                    "an annotated expression",
                    e.span());
  }
  const Scheme written = f.scheme;

  TySubst rename;
  std::vector<std::string> quantified;
  for (const auto &a : f.scheme.quantified) {
    quantified.push_back(types_.fresh(a));
    rename.insert_or_assign(a, SrcType::var(quantified.back()));
  }
  std::vector<Constraint> context;
  for (const auto &c : f.scheme.context()) context.push_back(apply_tysubst(rename, c));
  SrcType tau1 = apply_tysubst(rename, f.scheme.body());
  at = apply_tysubst(rename, at);

  if (!is_unambiguous(Scheme{quantified, QualType{context, tau1}}))
    throw TypeError("AmbiguousPrincipalType",
                    fmt::format("the type {} of {} is ambiguous", pretty(written), what),
                    e.span());
  auto pos = std::find(context.begin(), context.end(), at);
  if (pos == context.end())
    throw TypeError("Mismatch",
                    fmt::format("the type {} of {} has no constraint {}", pretty(written),
                                what, pretty(e.at())),
                    e.span());
  std::vector<Constraint> c1(context.begin(), pos), c2(pos + 1, context.end());

  std::optional<std::string> a;
  std::vector<std::string> b1 = quantified, b2;
  if (at.arg.is_var()) {
    auto q = std::find(quantified.begin(), quantified.end(), at.arg.name());
    if (q != quantified.end()) {
      a = *q;
      b1.assign(quantified.begin(), q);
      b2.assign(q + 1, quantified.end());
    }
  }

  Mono dict = infer(e.dict());
  SrcType tau2 = a ? fresh_meta() : at.arg;
  unify(dict.type, SrcType::dict(at.cls, tau2), e.dict().span());

  if (opts_.guard) {
    SafetyReport report = dictapp_safety(axioms_, given_list(), c1, c2, at,
                                         opts_.closure_depth);
    if (report.verdict != SafetyVerdict::kSafe)
      throw SafetyViolation(safety_message(report, at, opts_.closure_depth), e.span());
    trace_.push_back(fmt::format("dictionary for {} is safe ({} derivable constraints)",
                                 pretty(at), report.closure_size));
  }

  TySubst inst;
  if (a) inst.insert_or_assign(*a, tau2);
  std::vector<Constraint> rest;
  std::vector<std::string> labels;
  TargetTerm term = f.term;
  for (const auto &b : b1) term = TargetTerm::ty_app(std::move(term), TargetType::var(b));
  if (a) term = TargetTerm::ty_app(std::move(term), elab_type(tau2));
  for (const auto &b : b2) term = TargetTerm::ty_app(std::move(term), TargetType::var(b));
  for (const auto &c : c1) {
    rest.push_back(apply_tysubst(inst, c));
    labels.push_back(names_.fresh("d"));
    term = TargetTerm::app(std::move(term), TargetTerm::var(labels.back()));
  }
  term = TargetTerm::app(std::move(term), std::move(dict.term));
  for (std::size_t i = labels.size(); i-- > 0;)
    term = TargetTerm::lam(labels[i], elab_constraint(rest[i]), std::move(term));
  std::vector<std::string> bs = b1;
  bs.insert(bs.end(), b2.begin(), b2.end());
  for (std::size_t i = bs.size(); i-- > 0;) term = TargetTerm::ty_lam(bs[i], std::move(term));
  for (const auto &c : c2) rest.push_back(apply_tysubst(inst, c));
  return {Scheme{bs, QualType{rest, apply_tysubst(inst, tau1)}}, std::move(term), e.span()};
}

TargetTerm Inferencer::discharge_eagerly(TargetTerm term,
                                         const std::vector<std::string> &before) {
  std::set<std::string> old(before.begin(), before.end());
  std::vector<Wanted> keep;
  for (auto w : wanteds_) {
    if (!old.count(w.label)) {
      Constraint c = zonk(w.constraint);
      if (!has_meta(c)) {
        if (auto ev = resolve(c)) {
          term = TargetTerm::app(TargetTerm::lam(w.label, elab_constraint(c), std::move(term)),
                                 *ev);
          continue;
        }
      }
    }
    keep.push_back(std::move(w));
  }
  wanteds_ = std::move(keep);
  return term;
}

std::string Inferencer::next_tyvar_name() {
  for (int suffix = 0;; ++suffix) {
    for (char c = 'a'; c <= 'z'; ++c) {
      std::string name = suffix ? fmt::format("{}{}", c, suffix) : std::string(1, c);
      if (!types_.is_used(name)) {
        types_.reserve(name);
        return name;
      }
    }
  }
}

TargetTerm Inferencer::finish_term(const TargetTerm &t,
                                   std::map<std::string, TargetType> names) {
  TargetTerm out = replace_vars(t, eta_);
  out = map_term_types(out, [&](const TargetType &ty) {
    return map_vars(ty, [&](const std::string &v) -> std::optional<TargetType> {
      if (!is_meta(v)) return std::nullopt;
      return elab_type(zonk(SrcType::var(v)));
    });
  });
  std::vector<std::string> leftover;
  metas_in(out, leftover);
  for (const auto &m : leftover)
    if (!names.count(m)) names.insert_or_assign(m, TargetType::var(next_tyvar_name()));
  return map_term_types(out, [&](const TargetType &ty) {
    return map_vars(ty, [&](const std::string &v) -> std::optional<TargetType> {
      auto it = names.find(v);
      if (it == names.end()) return std::nullopt;
      return it->second;
    });
  });
}

Derivation Inferencer::top(const SrcExpr &e) {
  Mono r = infer(e);
  LabelledConstraints wanted;
  for (const auto &w : wanteds_) wanted.push_back({w.label, zonk(w.constraint)});
  Simplified s = simplify(axioms_, wanted, names_, opts_.solve_depth);
  for (const auto &res : s.residual) {
    if (!ftv(res.constraint).empty()) continue;
    Span span = e.span();
    for (const auto &w : wanteds_)
      if (w.label == res.label) span = w.span;
    throw TypeError("UnsolvableConstraint",
                    fmt::format("no instance for {}", pretty(res.constraint)), span);
  }
  for (const auto &[label, ev] : s.eta) {
    eta_.insert_or_assign(label, ev);
    trace_.push_back(fmt::format("simplified {} to {}", label, pretty(ev)));
  }

  SrcType tau = zonk(r.type);
  std::vector<std::string> order;
  metas_in(tau, order);
  LabelledConstraints residual = s.residual;
  for (const auto &res : residual) metas_in(res.constraint.arg, order);
  if (opts_.permute_seed) {
    std::mt19937_64 rng(*opts_.permute_seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::shuffle(residual.begin(), residual.end(), rng);
  }

  TySubst gen;
  std::map<std::string, TargetType> names;
  std::vector<std::string> quantified;
  for (const auto &m : order) {
    quantified.push_back(next_tyvar_name());
    gen.insert_or_assign(m, SrcType::var(quantified.back()));
    names.insert_or_assign(m, TargetType::var(quantified.back()));
  }
  std::vector<Constraint> context;
  for (auto &res : residual) {
    res.constraint = apply_tysubst(gen, res.constraint);
    context.push_back(res.constraint);
  }

  TargetTerm term = finish_term(r.term, names);
  for (std::size_t i = residual.size(); i-- > 0;)
    term = TargetTerm::lam(residual[i].label, elab_constraint(residual[i].constraint),
                           std::move(term));
  for (std::size_t i = quantified.size(); i-- > 0;)
    term = TargetTerm::ty_lam(quantified[i], std::move(term));

  return Derivation{{}, Scheme{quantified, QualType{context, apply_tysubst(gen, tau)}},
                    std::move(term), used_givens_, trace_};
}

Derivation Inferencer::top_specified(const SrcExpr &body, const Scheme &signature,
                                     Span span) {
  Poly p = infer_annot(SrcExpr::annot(body, signature, span));
  for (const auto &w : wanteds_) {
    Constraint c = zonk(w.constraint);
    if (has_meta(c))
      throw TypeError("AmbiguousPrincipalType",
                      fmt::format("constraint {} is not determined by the type", pretty(c)),
                      w.span);
    throw TypeError("UnsolvableConstraint",
                    fmt::format("could not deduce {} from the context {}", pretty(c),
                                pretty(signature.context())),
                    w.span);
  }
  return Derivation{{}, signature, finish_term(p.term, {}), used_givens_, trace_};
}

Derivation Inferencer::raw(const SrcExpr &e) {
  Scheme scheme = Scheme::mono(SrcType::var("?"));
  TargetTerm term = TargetTerm::var("");
  if (e.kind() == SrcExpr::Kind::kVar || e.kind() == SrcExpr::Kind::kAnnot ||
      e.kind() == SrcExpr::Kind::kDictApp) {
    Poly p = infer_poly(e);
    std::vector<Constraint> context;
    for (const auto &c : p.scheme.context()) context.push_back(zonk(c));
    scheme = Scheme{p.scheme.quantified, QualType{context, zonk(p.scheme.body())}};
    term = p.term;
  } else {
    Mono m = infer(e);
    scheme = Scheme::mono(zonk(m.type));
    term = m.term;
  }
  LabelledConstraints residual;
  for (const auto &w : wanteds_) residual.push_back({w.label, zonk(w.constraint)});

  std::vector<std::string> order;
  metas_in(scheme.body(), order);
  for (const auto &c : scheme.context()) metas_in(c.arg, order);
  for (const auto &r : residual) metas_in(r.constraint.arg, order);
  TySubst free_names;
  std::map<std::string, TargetType> names;
  for (const auto &m : order) {
    std::string n = next_tyvar_name();
    free_names.insert_or_assign(m, SrcType::var(n));
    names.insert_or_assign(m, TargetType::var(n));
  }
  std::vector<Constraint> context;
  for (const auto &c : scheme.context()) context.push_back(apply_tysubst(free_names, c));
  Scheme out{scheme.quantified,
             QualType{context, apply_tysubst(free_names, scheme.body())}};
  for (auto &r : residual) r.constraint = apply_tysubst(free_names, r.constraint);
  return Derivation{residual, out, finish_term(term, names), used_givens_, trace_};
}

}  // namespace dictapp::detail
