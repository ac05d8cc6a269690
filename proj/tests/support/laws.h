#pragma once

// Randomized and corpus-wide law checks shared by the unit tests and the
// acceptance binary. Each returns the number of cases examined and a
// description of the first few failures.

#include <cstdint>
#include <string>
#include <vector>

namespace dictapp::testing {

struct LawResult {
  int cases = 0;
  int failures = 0;
  std::vector<std::string> details;

  bool ok() const { return failures == 0; }
  void fail(std::string detail);
  std::string summary() const;
};

/// Every given solves from its own context with the leftmost equal label.
LawResult law_reflexivity(std::uint64_t seed, int cases);
/// Evidence for Q3 over Q2, with Q2's evidence over Q1 substituted,
/// typechecks as evidence for Q3 over Q1.
LawResult law_transitivity(std::uint64_t seed, int cases);
/// A solvable wanted stays solvable under a ground substitution; when the
/// substitution identifies no two subterms the evidence is the
/// substituted original.
LawResult law_substitution(std::uint64_t seed, int cases);
/// solve_all succeeds iff each wanted solves, with the same evidence.
LawResult law_conjunction(std::uint64_t seed, int cases);
/// Two solver runs agree; evidence typechecks at the constraint's type.
LawResult law_determinism(std::uint64_t seed, int cases);

/// Reflexivity, symmetry and transitivity of equiv on generated
/// well-typed terms and rewrites that preserve the relation, plus
/// application congruence.
LawResult law_equivalence(std::uint64_t seed, int cases);
/// Elaborated corpus terms are equivalent to their type-substituted
/// images.
LawResult law_erase_theta_corpus();
/// Every derivation of every guarded corpus program typechecks at its
/// elaborated scheme. `programs` receives the number of programs.
LawResult law_type_preservation_corpus(int *programs = nullptr);

LawResult law_roundtrip_programs(std::uint64_t seed, int cases);
LawResult law_roundtrip_terms(std::uint64_t seed, int cases);

}  // namespace dictapp::testing
