#include <gtest/gtest.h>

#include <fmt/core.h>

#include "dictapp/errors.h"
#include "dictapp/surface.h"
#include "dictapp/systemf.h"
#include "dictapp/typecheck.h"
#include "support/build.h"
#include "support/corpus.h"
#include "support/generators.h"

namespace dictapp {
namespace {

using namespace testing;

const char *kEqPrims =
    "prim eq : forall a. Eq a => a -> a -> Bool;"
    "prim one : Int; prim three : Int;";

TEST(Infer, VariableKeepsScheme) {
  Derivation d = infer({}, env_of("prim id : forall a. a -> a;"), expr("id"));
  EXPECT_TRUE(d.residual.empty());
  EXPECT_TRUE(scheme_alpha_eq(d.scheme, sch("forall a. a -> a")));
  EXPECT_TRUE(alpha_eq(d.term, tt("id")));
}

TEST(Infer, GroundWantedBeforeTop) {
  Derivation d = infer(axioms("instance $fEqInt : Eq Int;"), env_of(kEqPrims),
                       expr("eq one three"));
  ASSERT_EQ(d.residual.size(), 1u);
  EXPECT_EQ(d.residual[0].constraint, con("Eq Int"));
  EXPECT_TRUE(scheme_alpha_eq(d.scheme, sch("Bool")));
  EXPECT_TRUE(alpha_eq(d.term, tt(fmt::format("eq [Int] {} one three", d.residual[0].label))));
}

TEST(CheckTop, LambdaWithConstraint) {
  Derivation d = check_top({}, env_of(kEqPrims), expr("\\x. eq x x"));
  EXPECT_TRUE(scheme_alpha_eq(d.scheme, sch("forall a. Eq a => a -> Bool")));
  EXPECT_TRUE(alpha_eq(d.term, tt("/\\a. \\(d : Dict Eq a). \\(x : a). eq [a] d x x")));
  EXPECT_TRUE(d.residual.empty());
}

TEST(CheckTop, MaybeSimplifiedThroughInstance) {
  TypeEnv env = env_of(
      "prim eq : forall a. Eq a => a -> a -> Bool;"
      "prim just : forall a. a -> Maybe a;");
  TopAxioms q = axioms("instance $fEqMaybe : forall a. Eq a => Eq (Maybe a);");
  Derivation d = check_top(q, env, expr("\\x. eq (just x) (just x)"));
  EXPECT_TRUE(scheme_alpha_eq(d.scheme, sch("forall a. Eq a => a -> Bool")));
  // Independently: the unsimplified term under eta = [d' := $fEqMaybe a d].
  TargetTerm t = tt("\\(x : a). eq [Maybe a] d' (just [a] x) (just [a] x)");
  TargetTerm expected = TargetTerm::ty_lam(
      "a", TargetTerm::lam("d", tty("Dict Eq a"),
                           apply_evsubst({{"d'", tt("$fEqMaybe [a] d")}}, t)));
  EXPECT_TRUE(alpha_eq(d.term, expected)) << pretty(d.term);
}

TEST(CheckTop, ClosedGroundConstraintDischarged) {
  Derivation d = check_top(axioms("instance $fEqInt : Eq Int;"), env_of(kEqPrims),
                           expr("eq one three"));
  EXPECT_TRUE(scheme_alpha_eq(d.scheme, sch("Bool")));
  EXPECT_TRUE(alpha_eq(d.term, tt("eq [Int] $fEqInt one three")));
}

TEST(CheckTop, Identity) {
  Derivation d = check_top({}, {}, expr("\\x. x"));
  EXPECT_TRUE(scheme_alpha_eq(d.scheme, sch("forall a. a -> a")));
  EXPECT_TRUE(alpha_eq(d.term, tt("/\\a. \\(x : a). x")));
}

TEST(CheckTop, GeneralizationOrderIsFirstOccurrence) {
  Derivation d = check_top({}, {}, expr("\\x. \\y. \\z. y"));
  EXPECT_EQ(pretty(d.scheme), "forall a b c. a -> b -> c -> b");
}

TEST(CheckTop, Errors) {
  auto kind_of = [](const std::string &prims, const std::string &e, const TopAxioms &q = {}) {
    try {
      check_top(q, env_of(prims), expr(e));
    } catch (const Error &err) {
      return err.kind();
    }
    return std::string("ok");
  };
  EXPECT_EQ(kind_of("", "\\x. x x"), "OccursCheck");
  EXPECT_EQ(kind_of("", "f"), "UnboundVar");
  EXPECT_EQ(kind_of(kEqPrims, "eq one three"), "UnsolvableConstraint");
  EXPECT_EQ(kind_of("prim one : Int; prim b : Bool; prim eq : forall a. a -> a -> Bool;",
                    "eq one b"),
            "UnificationFail");
}

TEST(Unambiguous, Examples) {
  EXPECT_FALSE(is_unambiguous(sch("forall a. (Show a, Read a) => String -> String")));
  EXPECT_TRUE(is_unambiguous(sch("forall a. Eq a => a -> Bool")));
  EXPECT_FALSE(is_unambiguous(sch("forall a. Eq a => Bool")));
}

TEST(ContextUnambiguous, Examples) {
  // The constrained variable is free in the environment.
  Scheme s{{}, QualType{{con("Eq a")}, ty("Bool")}};
  EXPECT_TRUE(is_context_unambiguous(s, env_of("").extend("x", Scheme::mono(ty("a")))));
  // Closed environment: same as is_unambiguous.
  TypeEnv closed = env_of("prim id : forall a. a -> a;");
  for (const char *text : {"forall a. Eq a => Bool", "forall a. Eq a => a -> Bool"}) {
    Scheme t = sch(text);
    EXPECT_EQ(is_context_unambiguous(t, closed), is_unambiguous(t)) << text;
  }
  // Bound variable distinct from the environment's free one.
  TypeEnv env = env_of("").extend("x", Scheme::mono(ty("a -> a")));
  EXPECT_FALSE(is_context_unambiguous(sch("forall c. Eq c => Bool"), env));
}

TEST(Safety, TwoEqualConstraints) {
  SafetyReport r = dictapp_safety({}, {}, {}, {con("Eq a")}, con("Eq a"));
  EXPECT_EQ(r.verdict, SafetyVerdict::kUnsafe);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->constraint, con("Eq a"));
  EXPECT_TRUE(alpha_eq(r.witness->from_dict, tt(kDictSeedLabel)));
}

TEST(Safety, SuperclassAxiom) {
  TopAxioms q = axioms("instance $fOrdEq : forall a. Ord a => Eq a;");
  SafetyReport r = dictapp_safety(q, {}, {}, {con("Ord a")}, con("Eq a"));
  EXPECT_EQ(r.verdict, SafetyVerdict::kUnsafe);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->constraint, con("Eq a"));
  EXPECT_TRUE(alpha_eq(r.witness->from_rest, tt("$fOrdEq [a] $c2")));
}

TEST(Safety, SingleConstraintIsSafe) {
  TopAxioms q = axioms("instance $fEqInt : Eq Int;");
  SafetyReport r = dictapp_safety(q, {}, {}, {}, con("Eq a"));
  EXPECT_EQ(r.verdict, SafetyVerdict::kSafe);
  EXPECT_EQ(r.closure_size, 1u);
}

TEST(Safety, GroundConstraintWithInstance) {
  TopAxioms q = axioms("instance $fEqInt : Eq Int;");
  SafetyReport r = dictapp_safety(q, {}, {}, {}, con("Eq Int"));
  EXPECT_EQ(r.verdict, SafetyVerdict::kUnsafe);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->constraint, con("Eq Int"));
  ASSERT_TRUE(r.witness->from_global);
  EXPECT_TRUE(alpha_eq(*r.witness->from_global, tt("$fEqInt")));
}

TEST(Safety, UniversalInstance) {
  TopAxioms q = axioms("instance $fEqAll : forall a. Eq a;");
  SafetyReport r = dictapp_safety(q, {}, {}, {}, con("Eq a"));
  EXPECT_EQ(r.verdict, SafetyVerdict::kUnsafe);
  ASSERT_TRUE(r.witness && r.witness->from_global);
  EXPECT_TRUE(alpha_eq(*r.witness->from_global, tt("$fEqAll [a]")));
}

TEST(Safety, EnclosingGivens) {
  SafetyReport r = dictapp_safety({}, givens({{"g", "Eq a"}}), {}, {}, con("Eq a"));
  EXPECT_EQ(r.verdict, SafetyVerdict::kUnsafe);
}

TEST(Safety, TruncatedClosureIsInconclusive) {
  TopAxioms q = axioms("instance $fEqList : forall a. Eq a => Eq (List a);");
  SafetyReport r = dictapp_safety(q, {}, {}, {}, con("Eq a"), 3);
  EXPECT_EQ(r.verdict, SafetyVerdict::kInconclusive);
  EXPECT_TRUE(r.closure_truncated);
}

TEST(MoreGeneral, Examples) {
  TopAxioms q = axioms("instance $fEqInt : Eq Int;");
  EXPECT_TRUE(more_general({}, sch("forall a. a -> a"), {}, sch("Int -> Int")));
  EXPECT_TRUE(more_general({}, sch("forall a. Eq a => a -> Bool"), givens({{"d", "Eq Int"}}),
                           sch("Int -> Bool")));
  EXPECT_FALSE(more_general({}, sch("Int -> Int"), {}, sch("forall a. a -> a")));
  EXPECT_TRUE(more_general({}, sch("forall a. Eq a => a -> Bool"), {}, sch("Int -> Bool"), q));
  EXPECT_FALSE(more_general({}, sch("forall a. Eq a => a -> Bool"), {}, sch("Int -> Bool")));
}

TEST(MoreGeneral, UnfixedConstrainedQuantifier) {
  EXPECT_THROW(more_general({}, sch("forall a. Eq a => Bool"), {}, sch("Bool")), BoundExceeded);
}

TEST(ChoiceOracle, RecordsArities) {
  ChoiceOracle o({1});
  EXPECT_EQ(o.choose(2), 1);
  EXPECT_EQ(o.choose(3), 0);
  EXPECT_EQ(o.arities(), (std::vector<int>{2, 3}));
}

// Corpus-wide checks.

TEST(Corpus, AtLeastThirtyPrograms) { EXPECT_GE(corpus_stems().size(), 30u); }

TEST(Corpus, ErrorPrograms) {
  const std::map<std::string, std::string> expected{
      {"err_ambiguous_dictapp", "AmbiguousPrincipalType"},
      {"err_dict_type", "UnificationFail"},
      {"err_mismatch", "UnificationFail"},
      {"err_no_instance", "UnsolvableConstraint"},
      {"err_occurs", "OccursCheck"},
      {"err_recursive_closure", "SafetyViolation"},
      {"err_sig_missing_constraint", "UnsolvableConstraint"},
      {"err_sig_too_general", "UnificationFail"},
      {"err_unbound", "UnboundVar"},
      {"err_unspecified", "UnspecifiedType"},
      {"err_wrong_constraint", "Mismatch"},
      {"foo", "SafetyViolation"},
      {"two", "SafetyViolation"},
      {"three", "SafetyViolation"},
      {"five", "SafetyViolation"},
  };
  for (const auto &[stem, kind] : expected) {
    Program p = load_corpus(stem);
    try {
      check_program(p);
      ADD_FAILURE() << stem << " was accepted";
    } catch (const Error &e) {
      EXPECT_EQ(e.kind(), kind) << stem << ": " << e.message();
      EXPECT_TRUE(e.span().known()) << stem;
    }
  }
}

TEST(Corpus, LoadErrors) {
  const std::map<std::string, std::string> expected{{"err_chained", "SyntaxError"},
                                                    {"err_overlap", "OverlappingInstances"},
                                                    {"err_unknown_class", "UnknownClass"},
                                                    {"four", "SyntaxError"}};
  for (const auto &[stem, kind] : expected) {
    try {
      load_corpus(stem);
      ADD_FAILURE() << stem << " was accepted";
    } catch (const Error &e) {
      EXPECT_EQ(e.kind(), kind) << stem;
    }
  }
}

TEST(Corpus, SafeApply) {
  ProgramResult r = check_program(load_corpus("safe_apply"));
  EXPECT_FALSE(r.items.empty());
}

TEST(Corpus, RejectedExamplesAcceptedWithoutGuard) {
  TypecheckOptions unsafe;
  unsafe.guard = false;
  for (const char *stem : {"foo", "two", "three", "five"})
    EXPECT_NO_THROW(check_program(load_corpus(stem), unsafe)) << stem;
}

TEST(Corpus, TypePreservation) {
  int derivations = 0;
  for (const auto &stem : guarded_stems()) {
    Program p = load_corpus(stem);
    ProgramResult r = check_program(p);
    TargetEnv env = r.target_env(p.axioms);
    for (const auto &item : r.items) {
      const Derivation &d = item.derivation;
      EXPECT_TRUE(d.residual.empty()) << stem << "." << item.name;
      TargetType t = tc_target(env, d.term);
      EXPECT_TRUE(alpha_eq(t, elab_type(d.scheme)))
          << stem << "." << item.name << ": " << pretty(t) << " vs " << pretty(d.scheme);
      ++derivations;
    }
  }
  EXPECT_GE(derivations, 30);
}

TEST(Corpus, ShowReadScheme) {
  ProgramResult r = check_program(load_corpus("showread"));
  const ItemResult *f = r.find("f");
  ASSERT_NE(f, nullptr);
  EXPECT_TRUE(scheme_alpha_eq(f->derivation.scheme,
                              sch("forall a. (Show a, Read a) => String -> String")));
  EXPECT_FALSE(is_unambiguous(f->derivation.scheme));
}

TEST(Corpus, Determinism) {
  for (const auto &stem : guarded_stems()) {
    Program p = load_corpus(stem);
    ProgramResult a = check_program(p);
    ProgramResult b = check_program(p);
    ASSERT_EQ(a.items.size(), b.items.size());
    for (std::size_t i = 0; i < a.items.size(); ++i) {
      EXPECT_EQ(a.items[i].derivation.term, b.items[i].derivation.term) << stem;
      EXPECT_EQ(a.items[i].derivation.scheme, b.items[i].derivation.scheme) << stem;
    }
  }
}

// Randomized properties.

TEST(TypecheckProperty, SafetyMonotoneInRest) {
  Rng rng(61);
  const std::vector<std::string> vars{"a", "b"};
  int unsafe_seen = 0;
  for (int i = 0; i < 500; ++i) {
    TopAxioms q = random_axioms(rng);
    std::vector<Constraint> c1, c2;
    for (int k = pick(rng, 3); k > 0; --k) c1.push_back(random_constraint(rng, vars, 1));
    for (int k = pick(rng, 3); k > 0; --k) c2.push_back(random_constraint(rng, vars, 1));
    Constraint at = random_constraint(rng, {"a"}, 0);
    SafetyReport before = dictapp_safety(q, {}, c1, c2, at, 3);
    if (before.verdict != SafetyVerdict::kUnsafe) continue;
    ++unsafe_seen;
    std::vector<Constraint> more1 = c1, more2 = c2;
    more1.push_back(random_constraint(rng, vars, 1));
    more2.insert(more2.begin(), random_constraint(rng, vars, 1));
    EXPECT_EQ(dictapp_safety(q, {}, more1, c2, at, 3).verdict, SafetyVerdict::kUnsafe);
    EXPECT_EQ(dictapp_safety(q, {}, c1, more2, at, 3).verdict, SafetyVerdict::kUnsafe);
    EXPECT_EQ(dictapp_safety(q, givens({{"g", "Eq b"}}), c1, c2, at, 3).verdict,
              SafetyVerdict::kUnsafe);
  }
  EXPECT_GT(unsafe_seen, 50);
}

TEST(TypecheckProperty, UnsafeWitnessReplays) {
  Rng rng(62);
  for (int i = 0; i < 500; ++i) {
    TopAxioms q = random_axioms(rng);
    std::vector<Constraint> rest;
    for (int k = pick(rng, 3); k > 0; --k) rest.push_back(random_constraint(rng, {"a"}, 1));
    Constraint at = random_constraint(rng, {"a"}, 0);
    SafetyReport r = dictapp_safety(q, {}, {}, rest, at, 3);
    if (r.verdict != SafetyVerdict::kUnsafe) continue;
    ASSERT_TRUE(r.witness);
    LabelledConstraints rest_labelled;
    for (std::size_t k = 0; k < rest.size(); ++k)
      rest_labelled.push_back({fmt::format("$c{}", k + 2), rest[k]});
    auto from_rest = solve(q, rest_labelled, r.witness->constraint);
    ASSERT_TRUE(from_rest);
    EXPECT_TRUE(alpha_eq(from_rest->evidence, r.witness->from_rest));
    Closure c = derivable_closure(q, {{kDictSeedLabel, at}}, 3);
    const ClosureEntry *e = c.find(r.witness->constraint);
    ASSERT_NE(e, nullptr);
    EXPECT_TRUE(alpha_eq(e->evidence, r.witness->from_dict));
  }
}

TEST(TypecheckProperty, UnambiguousImpliesContextUnambiguous) {
  Rng rng(63);
  for (int i = 0; i < 500; ++i) {
    Scheme s = random_closed_scheme(rng);
    TypeEnv env;
    for (int k = pick(rng, 3); k > 0; --k)
      env = env.extend(fmt::format("v{}", k), Scheme::mono(random_type(rng, {"x", "y"}, 2)));
    if (is_unambiguous(s)) {
      EXPECT_TRUE(is_context_unambiguous(s, env)) << pretty(s);
    }
  }
}

TEST(TypecheckProperty, GeneratedProgramsPreserveTypes) {
  Rng rng(64);
  int accepted = 0;
  for (int i = 0; i < 1000; ++i) {
    Program p = random_program(rng);
    ProgramResult r;
    try {
      r = check_program(p);
    } catch (const Error &) {
      continue;
    }
    ++accepted;
    TargetEnv env = r.target_env(p.axioms);
    for (const auto &item : r.items)
      EXPECT_TRUE(alpha_eq(tc_target(env, item.derivation.term),
                           elab_type(item.derivation.scheme)))
          << pretty(p) << "\n" << item.name;
  }
  EXPECT_GT(accepted, 50);
}

}  // namespace
}  // namespace dictapp
