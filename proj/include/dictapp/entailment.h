#pragma once

// Evidence-producing constraint solver: discharges wanted constraints from
// local givens and instance axioms, simplifies residual constraints for
// generalization, and computes the bounded set of constraints derivable
// from a seed (used by the dictionary-application safety check).

#include <optional>
#include <string>
#include <vector>

#include "dictapp/syntax.h"

namespace dictapp {

inline constexpr int kDefaultSolveDepth = 32;
inline constexpr int kDefaultClosureDepth = 5;
inline constexpr std::size_t kDefaultClosureCap = 10000;

struct SolveResult {
  TargetTerm evidence;
  /// Given labels and axiom names in the order they were used.
  std::vector<std::string> steps;
};

/// Givens are tried first (leftmost exact match), then the unique axiom
/// whose head matches. Returns nullopt when no derivation exists. Throws
/// BoundExceeded("DepthExceeded") past `max_depth` nested axiom uses.
std::optional<SolveResult> solve(const TopAxioms &axioms,
                                 const LabelledConstraints &givens,
                                 const Constraint &wanted,
                                 int max_depth = kDefaultSolveDepth);

struct SolveAllResult {
  EvSubst subst;
  /// First wanted (in order) that could not be solved.
  std::optional<Labelled> failed;

  bool ok() const { return !failed.has_value(); }
};

SolveAllResult solve_all(const TopAxioms &axioms,
                         const LabelledConstraints &givens,
                         const LabelledConstraints &wanteds,
                         int max_depth = kDefaultSolveDepth);

struct Simplified {
  /// Constraints no axiom head matches. Duplicates are merged.
  LabelledConstraints residual;
  /// Maps every wanted label to evidence over axiom names and residual
  /// labels.
  EvSubst eta;
};

/// Rewrites each wanted through the axiom matching its head; premises
/// that cannot be rewritten further become residual constraints labelled
/// from `supply`.
Simplified simplify(const TopAxioms &axioms, const LabelledConstraints &wanteds,
                    NameSupply &supply, int max_depth = kDefaultSolveDepth);

struct ClosureEntry {
  Constraint constraint;
  TargetTerm evidence;
};

struct Closure {
  std::vector<ClosureEntry> entries;
  /// Last round that added entries (0 when only the seeds are present).
  int depth_reached = 0;
  /// True iff the final permitted round still added entries.
  bool truncated = false;

  const ClosureEntry *find(const Constraint &c) const;
};

/// Forward-chains axioms with at least one premise whose premises all
/// match current entries, for up to `depth` rounds. Throws
/// BoundExceeded("ClosureExploded") when more than `cap` entries arise.
Closure derivable_closure(const TopAxioms &axioms,
                          const LabelledConstraints &seeds,
                          int depth = kDefaultClosureDepth,
                          std::size_t cap = kDefaultClosureCap);

}  // namespace dictapp
