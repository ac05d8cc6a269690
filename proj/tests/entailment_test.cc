#include <gtest/gtest.h>

#include <fmt/core.h>

#include "dictapp/elaborate.h"
#include "dictapp/entailment.h"
#include "dictapp/errors.h"
#include "dictapp/systemf.h"
#include "support/build.h"
#include "support/generators.h"
#include "support/laws.h"

namespace dictapp {
namespace {

using namespace testing;

const TopAxioms &list_axioms() {
  static const TopAxioms q = axioms(
      "instance $fEqInt : Eq Int;"
      "instance $fEqList : forall a. Eq a => Eq (List a);");
  return q;
}

const TopAxioms &maybe_axioms() {
  static const TopAxioms q = axioms("instance $fEqMaybe : forall a. Eq a => Eq (Maybe a);");
  return q;
}

TEST(Solve, ListOfInt) {
  auto r = solve(list_axioms(), {}, con("Eq (List Int)"));
  ASSERT_TRUE(r);
  EXPECT_TRUE(alpha_eq(r->evidence, tt("$fEqList [Int] $fEqInt")));
}

TEST(Solve, MaybeFromGiven) {
  auto r = solve(maybe_axioms(), givens({{"d", "Eq a"}}), con("Eq (Maybe a)"));
  ASSERT_TRUE(r);
  EXPECT_TRUE(alpha_eq(r->evidence, tt("$fEqMaybe [a] d")));
  EXPECT_EQ(r->steps, (std::vector<std::string>{"$fEqMaybe", "d"}));
}

TEST(Solve, Reflexivity) {
  auto r = solve({}, givens({{"d", "Eq a"}}), con("Eq a"));
  ASSERT_TRUE(r);
  EXPECT_TRUE(alpha_eq(r->evidence, tt("d")));
}

TEST(Solve, Unsolvable) { EXPECT_FALSE(solve({}, {}, con("Eq Int"))); }

TEST(Solve, GivensBeforeAxioms) {
  auto r = solve(list_axioms(), givens({{"d", "Eq Int"}}), con("Eq Int"));
  ASSERT_TRUE(r);
  EXPECT_TRUE(alpha_eq(r->evidence, tt("d")));
}

TEST(Solve, LeftmostGiven) {
  auto r = solve({}, givens({{"d1", "Eq a"}, {"d2", "Eq a"}}), con("Eq a"));
  ASSERT_TRUE(r);
  EXPECT_TRUE(alpha_eq(r->evidence, tt("d1")));
}

TEST(Solve, VariablesAreRigid) {
  EXPECT_FALSE(solve(list_axioms(), {}, con("Eq a")));
  EXPECT_FALSE(solve(list_axioms(), givens({{"d", "Eq b"}}), con("Eq (List a)")));
}

TEST(Solve, DepthBound) {
  TopAxioms q = axioms("instance $fEqList : forall a. Eq a => Eq (List a);");
  auto r = solve(q, givens({{"d", "Eq a"}}), con("Eq (List (List a))"), 2);
  ASSERT_TRUE(r);
  EXPECT_TRUE(alpha_eq(r->evidence, tt("$fEqList [List a] ($fEqList [a] d)")));
  EXPECT_FALSE(solve(q, givens({{"d", "Eq a"}}), con("Eq (List b)"), 2));
  EXPECT_THROW(solve(q, {}, con("Eq (List (List (List (List a))))"), 2), BoundExceeded);
}

TEST(SolveAll, SameEvidenceTwice) {
  auto r = solve_all(list_axioms(), {}, givens({{"d1", "Eq Int"}, {"d2", "Eq Int"}}));
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(alpha_eq(r.subst.at("d1"), tt("$fEqInt")));
  EXPECT_TRUE(alpha_eq(r.subst.at("d2"), tt("$fEqInt")));
}

TEST(SolveAll, Empty) {
  auto r = solve_all(list_axioms(), {}, {});
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.subst.empty());
}

TEST(SolveAll, ReportsFirstFailure) {
  auto r = solve_all(list_axioms(), {}, givens({{"d0", "Eq Int"}, {"d", "Ord Int"}}));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.failed->constraint, con("Ord Int"));
  EXPECT_EQ(r.failed->label, "d");
}

TEST(Simplify, MaybeBecomesResidual) {
  NameSupply supply({"d'"});
  Simplified s = simplify(maybe_axioms(), givens({{"d'", "Eq (Maybe a)"}}), supply);
  ASSERT_EQ(s.residual.size(), 1u);
  EXPECT_EQ(s.residual[0].constraint, con("Eq a"));
  const std::string &d = s.residual[0].label;
  EXPECT_TRUE(alpha_eq(s.eta.at("d'"), tt(fmt::format("$fEqMaybe [a] {}", d))));
}

TEST(Simplify, GroundDischarged) {
  NameSupply supply({"d"});
  Simplified s = simplify(list_axioms(), givens({{"d", "Eq Int"}}), supply);
  EXPECT_TRUE(s.residual.empty());
  EXPECT_TRUE(alpha_eq(s.eta.at("d"), tt("$fEqInt")));
}

TEST(Simplify, VariableHeadKept) {
  NameSupply supply({"d"});
  Simplified s = simplify(list_axioms(), givens({{"d", "Eq a"}}), supply);
  ASSERT_EQ(s.residual.size(), 1u);
  EXPECT_EQ(s.residual[0].constraint, con("Eq a"));
  EXPECT_TRUE(alpha_eq(s.eta.at("d"), TargetTerm::var(s.residual[0].label)));
}

TEST(Simplify, DuplicatesMerged) {
  NameSupply supply({"d1", "d2"});
  Simplified s =
      simplify(maybe_axioms(), givens({{"d1", "Eq (Maybe a)"}, {"d2", "Eq a"}}), supply);
  EXPECT_EQ(s.residual.size(), 1u);
}

TEST(Closure, SuperclassFixedPoint) {
  TopAxioms q = axioms("instance $fOrdEq : forall a. Ord a => Eq a;");
  Closure c = derivable_closure(q, givens({{"d", "Ord a"}}), 3);
  ASSERT_EQ(c.entries.size(), 2u);
  ASSERT_NE(c.find(con("Ord a")), nullptr);
  EXPECT_TRUE(alpha_eq(c.find(con("Ord a"))->evidence, tt("d")));
  ASSERT_NE(c.find(con("Eq a")), nullptr);
  EXPECT_TRUE(alpha_eq(c.find(con("Eq a"))->evidence, tt("$fOrdEq [a] d")));
  EXPECT_FALSE(c.truncated);
}

TEST(Closure, SeedsOnly) {
  Closure c = derivable_closure({}, givens({{"d", "Eq a"}}), 3);
  ASSERT_EQ(c.entries.size(), 1u);
  EXPECT_EQ(c.depth_reached, 0);
  EXPECT_FALSE(c.truncated);
}

TEST(Closure, RecursiveInstanceTruncates) {
  TopAxioms q = axioms("instance $fEqList : forall a. Eq a => Eq (List a);");
  Closure c = derivable_closure(q, givens({{"d", "Eq Int"}}), 2);
  ASSERT_NE(c.find(con("Eq (List Int)")), nullptr);
  EXPECT_TRUE(alpha_eq(c.find(con("Eq (List Int)"))->evidence, tt("$fEqList [Int] d")));
  ASSERT_NE(c.find(con("Eq (List (List Int))")), nullptr);
  EXPECT_TRUE(c.truncated);
  EXPECT_EQ(c.depth_reached, 2);
}

TEST(Closure, Cap) {
  TopAxioms q = axioms(
      "instance $fEqList : forall a. Eq a => Eq (List a);"
      "instance $fEqMaybe : forall a. Eq a => Eq (Maybe a);");
  EXPECT_THROW(derivable_closure(q, givens({{"d", "Eq Int"}}), 30, 100), BoundExceeded);
}

// Randomized laws. Axioms come from the generator (no overlap); givens and
// wanteds range over the variables a, b, c.

constexpr int kCases = 500;

TEST(EntailmentLaw, R1Reflexivity) {
  LawResult r = law_reflexivity(31, kCases);
  EXPECT_EQ(r.cases, kCases);
  EXPECT_TRUE(r.ok()) << r.summary();
}

TEST(EntailmentLaw, R2Transitivity) {
  LawResult r = law_transitivity(32, kCases);
  EXPECT_EQ(r.cases, kCases);
  EXPECT_TRUE(r.ok()) << r.summary();
}

TEST(EntailmentLaw, R3Substitution) {
  LawResult r = law_substitution(33, kCases);
  EXPECT_EQ(r.cases, kCases);
  EXPECT_TRUE(r.ok()) << r.summary();
}

TEST(EntailmentLaw, R7Conjunctions) {
  LawResult r = law_conjunction(34, kCases);
  EXPECT_EQ(r.cases, kCases);
  EXPECT_TRUE(r.ok()) << r.summary();
}

TEST(EntailmentLaw, DeterminismAndTypability) {
  LawResult r = law_determinism(35, kCases);
  EXPECT_EQ(r.cases, kCases);
  EXPECT_TRUE(r.ok()) << r.summary();
}

void expect_typed_evidence(const TopAxioms &axioms, const LabelledConstraints &q,
                           const Constraint &c, const TargetTerm &ev) {
  TargetType t = tc_target(elab_env(axioms, q, {}), ev);
  EXPECT_TRUE(alpha_eq(t, elab_constraint(c)))
      << pretty(ev) << " : " << pretty(t) << " for " << pretty(c);
}

TEST(EntailmentLaw, ClosureEntriesAreSolvable) {
  Rng rng(36);
  for (int i = 0; i < 200; ++i) {
    TopAxioms axioms = random_axioms(rng);
    LabelledConstraints seeds;
    for (int k = 1 + pick(rng, 2); k > 0; --k)
      seeds.push_back({fmt::format("d{}", k), random_constraint(rng, {"a", "b"}, 1)});
    Closure c = derivable_closure(axioms, seeds, 3);
    for (const auto &e : c.entries) {
      expect_typed_evidence(axioms, seeds, e.constraint, e.evidence);
      EXPECT_TRUE(solve(axioms, seeds, e.constraint)) << pretty(e.constraint);
    }
    if (!c.truncated) {
      Closure again = derivable_closure(axioms, seeds, c.depth_reached + 2);
      EXPECT_EQ(again.entries.size(), c.entries.size());
    }
  }
}

}  // namespace
}  // namespace dictapp
