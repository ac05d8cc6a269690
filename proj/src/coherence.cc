#include "dictapp/coherence.h"

#include <deque>
#include <functional>

#include <fmt/core.h>
#include <fmt/ranges.h>

#include "dictapp/errors.h"

namespace dictapp {

namespace {

using Strategy = DerivationVariant::Strategy;

// Attempts are run program-wide; each produces one derivation per item.
using Runner = std::function<std::vector<Derivation>(const TypecheckOptions &)>;

constexpr int kPermutations = 4;

bool same_derivation(const Derivation &a, const Derivation &b) {
  return scheme_alpha_eq(a.scheme, b.scheme) && alpha_eq(a.term, b.term);
}

struct Attempt {
  Strategy strategy;
  std::uint64_t seed = 0;
  std::vector<int> script;
};

// Runs every strategy against `run` and collects, per item, the distinct
// derivations. The canonical attempt must succeed; other attempts that
// fail are not valid derivations and are dropped.
std::vector<Enumeration> enumerate_all(const Runner &run, std::size_t items,
                                       std::size_t limit, const EnumerateOptions &options) {
  TypecheckOptions base;
  base.guard = !options.unsafe;
  base.closure_depth = options.closure_depth;

  std::vector<Enumeration> out(items);
  auto record = [&](const Attempt &attempt, std::vector<Derivation> derivations) {
    for (std::size_t i = 0; i < items; ++i) {
      auto &variants = out[i].variants;
      bool seen = false;
      for (const auto &v : variants)
        if (same_derivation(v.derivation, derivations[i])) seen = true;
      if (seen) continue;
      if (variants.size() >= limit) {
        out[i].limit_exceeded = true;
        continue;
      }
      variants.push_back(
          {attempt.strategy, attempt.seed, attempt.script, std::move(derivations[i])});
    }
  };
  auto all_full = [&] {
    for (const auto &e : out)
      if (e.variants.size() < limit) return false;
    return true;
  };

  record({Strategy::kCanonical, 0, {}}, run(base));

  auto try_run = [&](const Attempt &attempt, const TypecheckOptions &opts) {
    try {
      record(attempt, run(opts));
    } catch (const Error &) {
    }
  };

  TypecheckOptions eager = base;
  eager.eager = true;
  try_run({Strategy::kEagerInstantiate, 0, {}}, eager);

  for (int k = 0; k < kPermutations; ++k) {
    TypecheckOptions permuted = base;
    permuted.permute_seed = options.seed + static_cast<std::uint64_t>(k);
    try_run({Strategy::kPermuteQuantifiers, *permuted.permute_seed, {}}, permuted);
  }

  if (!options.unsafe) return out;

  // Breadth-first over choice scripts. A script fixes a prefix of choices;
  // later choice points take their first alternative. Each assignment is
  // reached once, from the prefix ending at its last non-zero choice.
  std::deque<std::vector<int>> queue{{}};
  std::size_t budget = 8 * limit + 16;
  while (!queue.empty() && budget-- > 0) {
    std::vector<int> script = std::move(queue.front());
    queue.pop_front();
    ChoiceOracle oracle(script);
    TypecheckOptions opts = base;
    opts.choices = &oracle;
    try {
      std::vector<Derivation> derivations = run(opts);
      if (!script.empty()) record({Strategy::kLocalVsGlobal, 0, script}, std::move(derivations));
    } catch (const Error &) {
      continue;
    }
    if (all_full()) {
      for (auto &e : out) e.limit_exceeded = e.limit_exceeded || !queue.empty();
      break;
    }
    const auto &arities = oracle.arities();
    for (std::size_t j = script.size(); j < arities.size(); ++j) {
      for (int v = 1; v < arities[j]; ++v) {
        std::vector<int> next = script;
        next.resize(j, 0);
        next.push_back(v);
        queue.push_back(std::move(next));
      }
    }
  }
  for (auto &e : out)
    if (!queue.empty() && e.variants.size() >= limit) e.limit_exceeded = true;
  return out;
}

// Replaces every def by its elaboration, latest first, so that references
// to earlier defs inside later ones are replaced too.
TargetTerm inline_defs(const ProgramResult &result, TargetTerm term) {
  for (auto it = result.items.rbegin(); it != result.items.rend(); ++it) {
    if (it->kind != ItemResult::Kind::kDef) continue;
    term = apply_evsubst({{it->name, it->derivation.term}}, term);
  }
  return term;
}

struct Saturated {
  std::optional<TargetTerm> term;
  std::string mismatch;
};

class Saturator {
 public:
  explicit Saturator(const Derivation &canonical) {
    TySubst theta;
    for (const auto &a : canonical.scheme.quantified) {
      std::string s = next_skolem();
      theta.insert_or_assign(a, SrcType::var(s));
    }
    target_ = apply_tysubst(theta, canonical.scheme.body());
    for (const auto &c : canonical.scheme.context()) evidence_for(apply_tysubst(theta, c));
  }

  Saturated run(const Derivation &d) {
    const Scheme &s = d.scheme;
    std::set<std::string> bindable(s.quantified.begin(), s.quantified.end());
    TySubst theta;
    if (!match_type(s.body(), target_, bindable, theta))
      return {std::nullopt, fmt::format("type {} does not match {}", pretty(s.body()),
                                        pretty(target_))};
    std::vector<std::string> skolems;
    for (const auto &a : s.quantified) {
      auto it = theta.find(a);
      if (it == theta.end()) {
        std::string sk = next_skolem();
        theta.insert_or_assign(a, SrcType::var(sk));
        skolems.push_back(sk);
      } else if (it->second.is_var()) {
        skolems.push_back(it->second.name());
      } else {
        return {std::nullopt,
                fmt::format("quantified variable {} is fixed to {}", a, pretty(it->second))};
      }
    }
    for (const auto &c : s.context()) evidence_for(apply_tysubst(theta, c));
    return {saturate(d, skolems, evidence_), {}};
  }

  const std::map<Constraint, std::string> &evidence() const { return evidence_; }
  const std::vector<std::string> &skolems() const { return skolems_; }

 private:
  std::string next_skolem() {
    skolems_.push_back(fmt::format("sk{}", skolems_.size() + 1));
    return skolems_.back();
  }
  void evidence_for(const Constraint &c) {
    if (!evidence_.count(c)) evidence_.emplace(c, fmt::format("$ev{}", evidence_.size() + 1));
  }

  SrcType target_ = SrcType::var("_");
  std::vector<std::string> skolems_;
  std::map<Constraint, std::string> evidence_;
};

}  // namespace

std::string DerivationVariant::describe() const {
  switch (strategy) {
    case Strategy::kCanonical:
      return "canonical";
    case Strategy::kEagerInstantiate:
      return "eager";
    case Strategy::kPermuteQuantifiers:
      return fmt::format("permute(seed={})", seed);
    case Strategy::kLocalVsGlobal:
      return fmt::format("choices({})", fmt::join(choices, ","));
  }
  return "";
}

std::string to_string(CoherenceReport::Verdict v) {
  switch (v) {
    case CoherenceReport::Verdict::kCoherent:
      return "Coherent";
    case CoherenceReport::Verdict::kIncoherent:
      return "Incoherent";
    case CoherenceReport::Verdict::kSkipped:
      return "Skipped";
  }
  return "";
}

Enumeration enumerate_derivations(const TopAxioms &axioms, const TypeEnv &env,
                                  const SrcExpr &e, std::size_t limit,
                                  const EnumerateOptions &options) {
  Runner run = [&](const TypecheckOptions &opts) {
    return std::vector<Derivation>{check_top(axioms, env, e, opts)};
  };
  return enumerate_all(run, 1, limit, options).front();
}

TargetTerm saturate(const Derivation &d, const std::vector<std::string> &skolems,
                    const std::map<Constraint, std::string> &shared_evidence) {
  const Scheme &s = d.scheme;
  if (skolems.size() != s.quantified.size())
    throw ValidationError("ArityMismatch",
                          fmt::format("{} skolems for {} quantified variables",
                                      skolems.size(), s.quantified.size()));
  TySubst theta;
  TargetTerm term = d.term;
  for (std::size_t i = 0; i < skolems.size(); ++i) {
    theta.insert_or_assign(s.quantified[i], SrcType::var(skolems[i]));
    term = TargetTerm::ty_app(std::move(term), TargetType::var(skolems[i]));
  }
  for (const auto &c : s.context()) {
    Constraint inst = apply_tysubst(theta, c);
    auto it = shared_evidence.find(inst);
    if (it == shared_evidence.end())
      throw ValidationError("MissingEvidence",
                            fmt::format("no shared evidence variable for {}", pretty(inst)));
    term = TargetTerm::app(std::move(term), TargetTerm::var(it->second));
  }
  return term;
}

std::vector<CoherenceReport> coherence_check(const Program &program, std::size_t limit,
                                             long fuel, const EnumerateOptions &options) {
  std::vector<const CheckDecl *> checks;
  for (const auto &c : program.checks) checks.push_back(&c);
  std::vector<CoherenceReport> reports;
  if (checks.empty()) return reports;

  Runner run = [&](const TypecheckOptions &opts) {
    ProgramResult result = check_program(program, opts);
    std::vector<Derivation> out;
    for (const auto *c : checks) {
      Derivation d = result.find(c->name)->derivation;
      d.term = inline_defs(result, d.term);
      out.push_back(std::move(d));
    }
    return out;
  };

  std::vector<Enumeration> enumerations;
  try {
    enumerations = enumerate_all(run, checks.size(), limit, options);
  } catch (const SafetyViolation &e) {
    for (const auto *c : checks) {
      CoherenceReport r;
      r.id = c->name;
      r.verdict = CoherenceReport::Verdict::kSkipped;
      r.reason = fmt::format("safety violation: {}", e.what());
      reports.push_back(std::move(r));
    }
    return reports;
  }

  TypecheckOptions base;
  base.guard = !options.unsafe;
  base.closure_depth = options.closure_depth;
  TypeEnv env = check_program(program, base).env;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    CoherenceReport r;
    r.id = checks[i]->name;
    const auto &variants = enumerations[i].variants;
    r.variants = variants.size();
    r.limit_exceeded = enumerations[i].limit_exceeded;
    if (!is_context_unambiguous(variants.front().derivation.scheme, env)) {
      r.verdict = CoherenceReport::Verdict::kSkipped;
      r.reason = "ambiguous principal type";
      reports.push_back(std::move(r));
      continue;
    }

    Saturator saturator(variants.front().derivation);
    std::vector<UntypedTerm> normal;
    std::vector<std::string> mismatch(variants.size());
    for (std::size_t k = 0; k < variants.size(); ++k) {
      Saturated s = saturator.run(variants[k].derivation);
      if (s.term) {
        normal.push_back(normalize(erase(*s.term), fuel));
      } else {
        normal.push_back(UntypedTerm::free("<ill-typed>"));
        mismatch[k] = s.mismatch;
      }
    }
    for (std::size_t a = 0; a < variants.size() && !r.witness; ++a) {
      for (std::size_t b = a + 1; b < variants.size(); ++b) {
        ++r.pairs_checked;
        if (mismatch[a].empty() && mismatch[b].empty() && normal[a] == normal[b]) continue;
        r.witness = CoherenceWitness{variants[a].describe(), variants[b].describe(),
                                     normal[a], normal[b]};
        break;
      }
    }
    if (r.witness) {
      r.verdict = CoherenceReport::Verdict::kIncoherent;
      for (const auto &m : mismatch)
        if (!m.empty()) r.reason = m;
    } else {
      r.pairs_checked = variants.size() * (variants.size() - 1) / 2;
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace dictapp
