#pragma once

// Coherence testing: elaborate a program along several valid typing
// derivations, saturate each elaboration with shared skolems and evidence
// variables, and compare the erased normal forms pairwise.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dictapp/systemf.h"
#include "dictapp/typecheck.h"

namespace dictapp {

inline constexpr std::size_t kDefaultVariantLimit = 16;

struct DerivationVariant {
  enum class Strategy { kCanonical, kEagerInstantiate, kPermuteQuantifiers, kLocalVsGlobal };
  Strategy strategy = Strategy::kCanonical;
  /// Seed of a quantifier permutation.
  std::uint64_t seed = 0;
  /// Alternative picked at each choice point, in resolution order.
  std::vector<int> choices;
  Derivation derivation;

  std::string describe() const;
};

struct EnumerateOptions {
  /// Disable the dictionary-application guard and branch between local
  /// givens and instances wherever both apply.
  bool unsafe = false;
  std::uint64_t seed = 0;
  int closure_depth = kDefaultClosureDepth;
};

struct Enumeration {
  std::vector<DerivationVariant> variants;
  bool limit_exceeded = false;
};

/// Distinct derivations of `e`: the canonical one, eager discharge,
/// permuted generalization and, when unsafe, every local/global choice in
/// breadth-first order. Stops after `limit` variants.
Enumeration enumerate_derivations(const TopAxioms &axioms, const TypeEnv &env,
                                  const SrcExpr &e, std::size_t limit = kDefaultVariantLimit,
                                  const EnumerateOptions &options = {});

/// Applies the elaboration to `skolems` (one per quantifier, in order) and
/// to the shared evidence variable of each instantiated constraint. Throws
/// ValidationError("ArityMismatch") on a wrong skolem count.
TargetTerm saturate(const Derivation &d, const std::vector<std::string> &skolems,
                    const std::map<Constraint, std::string> &shared_evidence);

struct CoherenceWitness {
  std::string first;
  std::string second;
  UntypedTerm first_normal;
  UntypedTerm second_normal;
};

struct CoherenceReport {
  enum class Verdict { kCoherent, kIncoherent, kSkipped };
  std::string id;
  std::size_t variants = 0;
  std::size_t pairs_checked = 0;
  bool limit_exceeded = false;
  Verdict verdict = Verdict::kCoherent;
  std::optional<CoherenceWitness> witness;
  std::string reason;
};

std::string to_string(CoherenceReport::Verdict v);

/// One report per `check` item. Each item's variants come from whole-program
/// derivations with every def inlined into the item's elaboration.
std::vector<CoherenceReport> coherence_check(const Program &program,
                                             std::size_t limit = kDefaultVariantLimit,
                                             long fuel = kDefaultFuel,
                                             const EnumerateOptions &options = {});

}  // namespace dictapp
