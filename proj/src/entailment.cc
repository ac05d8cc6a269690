#include "dictapp/entailment.h"

#include <fmt/core.h>

#include <functional>
#include <set>

#include "dictapp/elaborate.h"
#include "dictapp/surface.h"

namespace dictapp {

namespace {

TargetTerm axiom_evidence(const AxiomScheme &ax, const TySubst &theta,
                          const std::vector<TargetTerm> &premise_ev) {
  TargetTerm t = TargetTerm::var(ax.name);
  for (const auto &a : ax.quantified) {
    auto it = theta.find(a);
    t = TargetTerm::ty_app(std::move(t),
                           elab_type(it != theta.end() ? it->second : SrcType::var(a)));
  }
  for (const auto &e : premise_ev) t = TargetTerm::app(std::move(t), e);
  return t;
}

// The axiom whose head matches `c`, with the matching substitution.
const AxiomScheme *match_axiom(const TopAxioms &axioms, const Constraint &c,
                               TySubst &theta) {
  for (const auto &ax : axioms.axioms) {
    TySubst local;
    std::set<std::string> bindable(ax.quantified.begin(), ax.quantified.end());
    if (match_constraint(ax.head, c, bindable, local)) {
      theta = std::move(local);
      return &ax;
    }
  }
  return nullptr;
}

[[noreturn]] void depth_exceeded(const Constraint &c, int max_depth) {
  throw BoundExceeded(
      "DepthExceeded",
      fmt::format("instance resolution for {} exceeded depth {}", pretty(c), max_depth));
}

std::optional<TargetTerm> solve_rec(const TopAxioms &axioms,
                                    const LabelledConstraints &givens,
                                    const Constraint &wanted, int depth,
                                    int max_depth, std::vector<std::string> &steps) {
  for (const auto &g : givens) {
    if (g.constraint == wanted) {
      steps.push_back(g.label);
      return TargetTerm::var(g.label);
    }
  }
  TySubst theta;
  const AxiomScheme *ax = match_axiom(axioms, wanted, theta);
  if (!ax) return std::nullopt;
  if (depth >= max_depth) depth_exceeded(wanted, max_depth);
  steps.push_back(ax->name);
  std::vector<TargetTerm> premise_ev;
  for (const auto &p : ax->premises) {
    auto ev = solve_rec(axioms, givens, apply_tysubst(theta, p), depth + 1, max_depth,
                        steps);
    if (!ev) return std::nullopt;
    premise_ev.push_back(std::move(*ev));
  }
  return axiom_evidence(*ax, theta, premise_ev);
}

}  // namespace

std::optional<SolveResult> solve(const TopAxioms &axioms,
                                 const LabelledConstraints &givens,
                                 const Constraint &wanted, int max_depth) {
  std::vector<std::string> steps;
  auto ev = solve_rec(axioms, givens, wanted, 0, max_depth, steps);
  if (!ev) return std::nullopt;
  return SolveResult{std::move(*ev), std::move(steps)};
}

SolveAllResult solve_all(const TopAxioms &axioms, const LabelledConstraints &givens,
                         const LabelledConstraints &wanteds, int max_depth) {
  SolveAllResult out;
  for (const auto &w : wanteds) {
    auto r = solve(axioms, givens, w.constraint, max_depth);
    if (!r) {
      out.failed = w;
      return out;
    }
    out.subst.insert_or_assign(w.label, std::move(r->evidence));
  }
  return out;
}

Simplified simplify(const TopAxioms &axioms, const LabelledConstraints &wanteds,
                    NameSupply &supply, int max_depth) {
  Simplified out;
  for (const auto &w : wanteds) supply.reserve(w.label);

  auto residual_label = [&](const Constraint &c) -> const std::string * {
    for (const auto &r : out.residual)
      if (r.constraint == c) return &r.label;
    return nullptr;
  };

  // Evidence for `c`; `label` names the constraint when it becomes residual.
  std::function<TargetTerm(const Constraint &, const std::string *, int)> rewrite =
      [&](const Constraint &c, const std::string *label, int depth) -> TargetTerm {
    TySubst theta;
    if (const AxiomScheme *ax = match_axiom(axioms, c, theta)) {
      if (depth >= max_depth) depth_exceeded(c, max_depth);
      std::vector<TargetTerm> premise_ev;
      for (const auto &p : ax->premises)
        premise_ev.push_back(rewrite(apply_tysubst(theta, p), nullptr, depth + 1));
      return axiom_evidence(*ax, theta, premise_ev);
    }
    if (const std::string *existing = residual_label(c))
      return TargetTerm::var(*existing);
    std::string name = label ? *label : supply.fresh("d");
    out.residual.push_back(Labelled{name, c});
    return TargetTerm::var(name);
  };

  for (const auto &w : wanteds)
    out.eta.insert_or_assign(w.label, rewrite(w.constraint, &w.label, 0));
  return out;
}

const ClosureEntry *Closure::find(const Constraint &c) const {
  for (const auto &e : entries)
    if (e.constraint == c) return &e;
  return nullptr;
}

Closure derivable_closure(const TopAxioms &axioms, const LabelledConstraints &seeds,
                          int depth, std::size_t cap) {
  Closure out;
  std::set<Constraint> present;
  for (const auto &s : seeds) {
    if (present.insert(s.constraint).second)
      out.entries.push_back({s.constraint, TargetTerm::var(s.label)});
  }

  for (int round = 1; round <= depth; ++round) {
    const std::vector<ClosureEntry> snapshot = out.entries;
    bool added = false;
    for (const auto &ax : axioms.axioms) {
      if (ax.premises.empty()) continue;
      std::set<std::string> bindable(ax.quantified.begin(), ax.quantified.end());
      std::vector<TargetTerm> premise_ev;
      std::function<void(std::size_t, const TySubst &)> chain =
          [&](std::size_t i, const TySubst &theta) {
            if (i == ax.premises.size()) {
              for (const auto &a : ax.quantified)
                if (!theta.count(a)) return;
              Constraint head = apply_tysubst(theta, ax.head);
              if (!present.insert(head).second) return;
              out.entries.push_back({head, axiom_evidence(ax, theta, premise_ev)});
              added = true;
              if (out.entries.size() > cap)
                throw BoundExceeded(
                    "ClosureExploded",
                    fmt::format("derivable constraint set exceeded {} entries", cap));
              return;
            }
            for (const auto &e : snapshot) {
              TySubst next = theta;
              if (!match_constraint(ax.premises[i], e.constraint, bindable, next))
                continue;
              premise_ev.push_back(e.evidence);
              chain(i + 1, next);
              premise_ev.pop_back();
            }
          };
      chain(0, {});
    }
    if (added) out.depth_reached = round;
    if (!added) break;
    if (round == depth) out.truncated = true;
  }
  return out;
}

}  // namespace dictapp
