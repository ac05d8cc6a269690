#include <fmt/core.h>

#include "dictapp/typecheck.h"

namespace dictapp {

SafetyReport dictapp_safety(const TopAxioms &axioms, const LabelledConstraints &q,
                            const std::vector<Constraint> &c1,
                            const std::vector<Constraint> &c2, const Constraint &at,
                            int closure_depth) {
  SafetyReport report;
  Closure closure =
      derivable_closure(axioms, {Labelled{kDictSeedLabel, at}}, closure_depth);
  report.closure_truncated = closure.truncated;
  report.closure_size = closure.entries.size();

  LabelledConstraints rest = q;
  int position = 1;
  for (const auto &c : c1) rest.push_back({fmt::format("$c{}", position++), c});
  ++position;
  for (const auto &c : c2) rest.push_back({fmt::format("$c{}", position++), c});

  for (const auto &entry : closure.entries) {
    auto from_rest = solve(axioms, rest, entry.constraint);
    if (!from_rest) continue;
    auto global = solve(axioms, {}, entry.constraint);
    if (global && alpha_eq(global->evidence, entry.evidence)) continue;
    report.verdict = SafetyVerdict::kUnsafe;
    report.witness = SafetyWitness{
        entry.constraint, entry.evidence, from_rest->evidence,
        global ? std::optional<TargetTerm>(global->evidence) : std::nullopt};
    return report;
  }
  if (closure.truncated) report.verdict = SafetyVerdict::kInconclusive;
  return report;
}

bool is_unambiguous(const Scheme &s) {
  auto body = ftv(s.body());
  for (const auto &a : s.quantified) {
    bool constrained = false;
    for (const auto &c : s.context())
      if (ftv(c).count(a)) constrained = true;
    if (constrained && !body.count(a)) return false;
  }
  return true;
}

bool is_context_unambiguous(const Scheme &s, const TypeEnv &env) {
  auto visible = ftv(s.body());
  auto in_env = ftv(env);
  visible.insert(in_env.begin(), in_env.end());
  for (const auto &a : s.quantified) {
    bool constrained = false;
    for (const auto &c : s.context())
      if (ftv(c).count(a)) constrained = true;
    if (constrained && !visible.count(a)) return false;
  }
  return true;
}

bool more_general(const LabelledConstraints &q1, const Scheme &s1,
                  const LabelledConstraints &q2, const Scheme &s2,
                  const TopAxioms &axioms) {
  // Rename s1's quantifiers apart from every other name in play.
  std::set<std::string> avoid = ftv(q1);
  for (const auto &v : ftv(q2)) avoid.insert(v);
  for (const auto &v : ftv(s2.body())) avoid.insert(v);
  for (const auto &c : s2.context())
    for (const auto &v : ftv(c)) avoid.insert(v);
  for (const auto &v : ftv(s1)) avoid.insert(v);
  TySubst rename;
  std::vector<std::string> bound;
  for (const auto &a : s1.quantified) {
    std::string n = fresh_name(a, avoid);
    avoid.insert(n);
    rename.insert_or_assign(a, SrcType::var(n));
    bound.push_back(n);
  }
  SrcType body1 = apply_tysubst(rename, s1.body());
  std::vector<Constraint> context1;
  for (const auto &c : s1.context()) context1.push_back(apply_tysubst(rename, c));

  std::set<std::string> bindable(bound.begin(), bound.end());
  TySubst theta;
  if (!match_type(body1, s2.body(), bindable, theta)) return false;
  for (const auto &c : context1)
    for (const auto &v : ftv(c))
      if (bindable.count(v) && !theta.count(v))
        throw BoundExceeded(
            "SearchExceeded",
            fmt::format("quantified variable {} is not determined by the type", v));

  LabelledConstraints givens = q2;
  int n = 0;
  for (const auto &c : s2.context()) givens.push_back({fmt::format("$g{}", ++n), c});
  LabelledConstraints wanted = q1;
  n = 0;
  for (const auto &c : context1)
    wanted.push_back({fmt::format("$w{}", ++n), apply_tysubst(theta, c)});
  return solve_all(axioms, givens, wanted).ok();
}

int ChoiceOracle::choose(int alternatives) {
  std::size_t k = arities_.size();
  arities_.push_back(alternatives);
  if (k < script_.size() && script_[k] < alternatives) return script_[k];
  return 0;
}

}  // namespace dictapp
