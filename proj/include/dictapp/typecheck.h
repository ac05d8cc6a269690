#pragma once

// Algorithm-W style inference with elaboration into System F: instance
// resolution at annotation boundaries, the dictionary-application rule with
// its safety check, and generalization at top level.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dictapp/elaborate.h"
#include "dictapp/entailment.h"
#include "dictapp/surface.h"
#include "dictapp/syntax.h"

namespace dictapp {

struct Derivation {
  /// Constraints the term still abstracts over (Q).
  LabelledConstraints residual;
  Scheme scheme;
  TargetTerm term;
  /// Labels of local givens consumed by instance resolution.
  std::set<std::string> used_givens;
  /// Human-readable account of resolution and safety decisions.
  std::vector<std::string> trace;
};

enum class SafetyVerdict { kSafe, kUnsafe, kInconclusive };

struct SafetyWitness {
  Constraint constraint;
  /// Evidence for `constraint` built from the passed dictionary.
  TargetTerm from_dict;
  /// Evidence for `constraint` from the remaining constraints.
  TargetTerm from_rest;
  /// Evidence from the instances alone, when they entail `constraint`.
  std::optional<TargetTerm> from_global;
};

struct SafetyReport {
  SafetyVerdict verdict = SafetyVerdict::kSafe;
  std::optional<SafetyWitness> witness;
  bool closure_truncated = false;
  std::size_t closure_size = 0;
};

/// Label of the dictionary seed in safety witnesses.
inline constexpr const char *kDictSeedLabel = "$d";

/// Decides whether passing a dictionary for `at` is coherent: no
/// constraint derivable from `at` may also follow from `q`, `c1` and `c2`
/// unless the instances alone give it the same evidence. The remaining
/// constraints are labelled `$c1`, `$c2`, ... by their position in the
/// context (c1 first, then c2, skipping `at`'s own slot).
SafetyReport dictapp_safety(const TopAxioms &axioms, const LabelledConstraints &q,
                            const std::vector<Constraint> &c1,
                            const std::vector<Constraint> &c2, const Constraint &at,
                            int closure_depth = kDefaultClosureDepth);

bool is_unambiguous(const Scheme &s);
bool is_context_unambiguous(const Scheme &s, const TypeEnv &env);

/// True iff some instantiation of s1's quantifiers, found by one-way
/// matching of the bodies, makes q2 together with s2's context entail q1
/// and s1's instantiated context. Throws BoundExceeded("SearchExceeded")
/// when a constrained quantifier of s1 is not fixed by the match.
bool more_general(const LabelledConstraints &q1, const Scheme &s1,
                  const LabelledConstraints &q2, const Scheme &s2,
                  const TopAxioms &axioms = {});

/// Picks among alternative evidence sources. Records the number of
/// alternatives at every choice point so callers can enumerate them.
class ChoiceOracle {
 public:
  explicit ChoiceOracle(std::vector<int> script = {}) : script_(std::move(script)) {}

  int choose(int alternatives);
  const std::vector<int> &arities() const { return arities_; }
  const std::vector<int> &script() const { return script_; }

 private:
  std::vector<int> script_;
  std::vector<int> arities_;
};

struct TypecheckOptions {
  /// Enforce the dictionary-application safety condition.
  bool guard = true;
  int closure_depth = kDefaultClosureDepth;
  int solve_depth = kDefaultSolveDepth;
  /// Discharge ground wanteds at the application that introduces them.
  bool eager = false;
  /// When set, wanteds with several evidence sources consult the oracle.
  ChoiceOracle *choices = nullptr;
  /// Shuffle quantifier and constraint order at generalization.
  std::optional<std::uint64_t> permute_seed;
};

/// Infers without generalizing. Variables and annotations at the root keep
/// their polytype; otherwise the monotype's unresolved variables are
/// returned free, with every collected wanted in the residual.
Derivation infer(const TopAxioms &axioms, const TypeEnv &env, const SrcExpr &e,
                 const TypecheckOptions &options = {});

/// The top-level rule: infer a monotype, simplify the wanteds with the
/// instances and generalize. Throws TypeError, SafetyViolation or
/// BoundExceeded.
Derivation check_top(const TopAxioms &axioms, const TypeEnv &env, const SrcExpr &e,
                     const TypecheckOptions &options = {});

struct ItemResult {
  enum class Kind { kDef, kCheck };
  std::string name;
  Kind kind = Kind::kDef;
  /// Defs with a signature and prims may receive explicit dictionaries.
  bool specified = false;
  Derivation derivation;
};

struct ProgramResult {
  std::vector<ItemResult> items;
  /// Prims followed by every def at its scheme.
  TypeEnv env;

  const ItemResult *find(std::string_view name) const;
  /// System F environment in which every item's term typechecks.
  TargetEnv target_env(const TopAxioms &axioms) const;
};

/// Checks defs in order, then checks. `overrides` replaces the options
/// for the named items.
ProgramResult check_program(const Program &program,
                            const TypecheckOptions &options = {},
                            const std::map<std::string, TypecheckOptions> &overrides = {});

}  // namespace dictapp
