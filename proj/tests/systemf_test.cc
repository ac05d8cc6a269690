#include <gtest/gtest.h>

#include "dictapp/errors.h"
#include "dictapp/surface.h"
#include "dictapp/systemf.h"
#include "dictapp/typecheck.h"
#include "support/build.h"
#include "support/corpus.h"
#include "support/generators.h"
#include "support/laws.h"

namespace dictapp {
namespace {

using namespace testing;

UntypedTerm ufree(const std::string &n) { return UntypedTerm::free(n); }
UntypedTerm ulam(UntypedTerm body) { return UntypedTerm::lam("x", std::move(body)); }
UntypedTerm uapp(UntypedTerm f, UntypedTerm a) { return UntypedTerm::app(std::move(f), std::move(a)); }
UntypedTerm ubound(int i) { return UntypedTerm::bound(i); }

TEST(TcTarget, InstantiatedIdentity) {
  EXPECT_TRUE(alpha_eq(tc_target({}, tt("(/\\a. \\(x : a). x) [Int]")), tty("Int -> Int")));
}

TEST(TcTarget, EvidenceVariable) {
  TargetEnv env;
  env.push("eqInt", tty("Dict Eq Int"));
  EXPECT_EQ(tc_target(env, tt("eqInt")), tty("Dict Eq Int"));
}

TEST(TcTarget, ArgumentMismatch) {
  TargetEnv env;
  env.push("b", tty("Bool"));
  try {
    tc_target(env, tt("(\\(x : Int). x) b"));
    FAIL() << "expected a mismatch";
  } catch (const TypeError &e) {
    EXPECT_EQ(e.kind(), "Mismatch");
  }
}

TEST(TcTarget, ErrorKinds) {
  TargetEnv env;
  env.push("i", tty("Int"));
  auto kind_of = [&](const std::string &text) {
    try {
      tc_target(env, tt(text));
    } catch (const TypeError &e) {
      return e.kind();
    }
    return std::string("ok");
  };
  EXPECT_EQ(kind_of("y"), "UnboundVar");
  EXPECT_EQ(kind_of("i i"), "NotAFunction");
  EXPECT_EQ(kind_of("i [Int]"), "NotAForall");
  EXPECT_EQ(kind_of("\\(x : Int). x"), "ok");
}

TEST(TcTarget, TypeApplicationAvoidsCapture) {
  TargetEnv env;
  env.push("k", tty("forall a. forall b. a -> b -> a"));
  TargetType t = tc_target(env, tt("/\\b. k [b]"));
  EXPECT_TRUE(alpha_eq(t, tty("forall c. forall b. c -> b -> c")));
}

TEST(Erase, TypeAbstraction) { EXPECT_EQ(erase(tt("/\\a. x")), ufree("x")); }

TEST(Erase, TypeApplication) { EXPECT_EQ(erase(tt("f [Int] [Bool]")), ufree("f")); }

TEST(Erase, Annotation) { EXPECT_EQ(erase(tt("\\(x : Int). x")), ulam(ubound(0))); }

TEST(Erase, NamesFreeAndBound) {
  EXPECT_EQ(erase(tt("\\(x : Int). \\(y : Int). x y z")),
            ulam(ulam(uapp(uapp(ubound(1), ubound(0)), ufree("z")))));
}

TEST(Normalize, Beta) { EXPECT_EQ(normalize(erase(tt("(\\(x : Int). x) y"))), ufree("y")); }

TEST(Normalize, Eta) { EXPECT_EQ(normalize(erase(tt("\\(x : Int). f x"))), ufree("f")); }

TEST(Normalize, EtaSideCondition) {
  UntypedTerm u = erase(tt("\\(x : Int). x x"));
  EXPECT_EQ(normalize(u), u);
}

TEST(Normalize, Omega) {
  UntypedTerm w = ulam(uapp(ubound(0), ubound(0)));
  try {
    normalize(uapp(w, w), 1000);
    FAIL() << "expected fuel exhaustion";
  } catch (const BoundExceeded &e) {
    EXPECT_EQ(e.kind(), "FuelExhausted");
  }
}

TEST(Normalize, NormalOrderDiscardsDivergentArgument) {
  UntypedTerm w = ulam(uapp(ubound(0), ubound(0)));
  UntypedTerm k = ulam(ulam(ubound(1)));
  EXPECT_EQ(normalize(uapp(uapp(k, ufree("y")), uapp(w, w)), 1000), ufree("y"));
}

TEST(Normalize, UnderBinders) {
  // \x. \y. (\z. z) x y  ~>  \x. \y. x y  ~>  \x. x
  UntypedTerm r = normalize(erase(tt("\\(x : Int). \\(y : Int). (\\(z : Int). z) x y")));
  EXPECT_EQ(r, ulam(ubound(0)));
}

TEST(Normalize, SubstitutionAvoidsCapture) {
  // (\x. \y. x) y  ~>  \y'. y  (the free y must stay free)
  UntypedTerm r = normalize(erase(tt("(\\(x : Int). \\(y : Int). x) y")));
  EXPECT_EQ(r, ulam(ufree("y")));
}

TEST(Equiv, ShowExample) {
  TargetTerm t = tt("show [Int] d");
  EXPECT_TRUE(equiv(tt("show [Int] eqInt"), apply_evsubst({{"d", tt("eqInt")}}, t)));
}

TEST(Equiv, TypesErased) {
  EXPECT_TRUE(equiv(tt("\\(x : Int). x"), tt("\\(y : Bool). y")));
  EXPECT_TRUE(equiv(tt("show [Int] eqInt"), tt("show [Bool] eqInt")));
}

TEST(Equiv, FreeVariablesByName) { EXPECT_FALSE(equiv(tt("x"), tt("y"))); }

TEST(Equiv, TypeRedexes) {
  EXPECT_TRUE(equiv(tt("(/\\a. \\(x : a). x) [Int] y"), tt("y")));
  EXPECT_TRUE(equiv(tt("/\\a. /\\b. f [a] [b]"), tt("f")));
}

// Properties on generated well-typed terms.

constexpr int kCases = 500;

/// Rewrites that preserve the relation by construction: an identity
/// beta-redex, a type beta-redex or an eta-expansion at the root.
TargetTerm equivalent_variant(Rng &rng, const TargetTerm &t, const TargetType &type, int tag) {
  std::string x = "w" + std::to_string(tag);
  switch (pick(rng, 3)) {
    case 0:
      return TargetTerm::app(TargetTerm::lam(x, type, TargetTerm::var(x)), t);
    case 1: {
      std::string a = "tv" + std::to_string(tag);
      TargetTerm poly = TargetTerm::ty_lam(a, TargetTerm::lam(x, TargetType::var(a), TargetTerm::var(x)));
      return TargetTerm::app(TargetTerm::ty_app(poly, type), t);
    }
    default:
      if (type.kind() == TargetType::Kind::kArrow)
        return TargetTerm::lam(x, type.dom(), TargetTerm::app(t, TargetTerm::var(x)));
      if (type.kind() == TargetType::Kind::kForall) {
        std::string a = "tv" + std::to_string(tag);
        return TargetTerm::ty_lam(a, TargetTerm::ty_app(t, TargetType::var(a)));
      }
      return TargetTerm::app(TargetTerm::lam(x, type, TargetTerm::var(x)), t);
  }
}

TEST(EquivProperty, GeneratedTermsTypecheck) {
  Rng rng(51);
  for (int i = 0; i < kCases; ++i) {
    std::vector<std::string> tyvars;
    if (coin(rng)) tyvars.push_back("a");
    TypedTerm g = random_well_typed(rng, 4, tyvars);
    TargetType t = tc_target(base_target_env(tyvars), g.term);
    ASSERT_TRUE(alpha_eq(t, g.type)) << pretty(g.term) << " : " << pretty(t);
  }
}

TEST(EquivProperty, EquivalenceLaws) {
  LawResult r = law_equivalence(52, kCases);
  EXPECT_EQ(r.cases, kCases);
  EXPECT_TRUE(r.ok()) << r.summary();
}

TEST(EquivProperty, Congruence) {
  Rng rng(53);
  TargetEnv env = base_target_env();
  int applied = 0;
  for (int i = 0; applied < kCases && i < 20 * kCases; ++i) {
    TypedTerm f = random_well_typed(rng, 4);
    if (f.type.kind() != TargetType::Kind::kArrow) continue;
    ++applied;
    TypedTerm a{TargetTerm::var("x_arg"), f.type.dom()};
    TargetEnv arg_env = env.extend("x_arg", f.type.dom());
    TargetTerm f2 = equivalent_variant(rng, f.term, f.type, 1);
    TargetTerm a2 = equivalent_variant(rng, a.term, a.type, 2);
    TargetTerm lhs = TargetTerm::app(f.term, a.term);
    TargetTerm rhs = TargetTerm::app(f2, a2);
    ASSERT_TRUE(alpha_eq(tc_target(arg_env, rhs), f.type.cod()));
    EXPECT_TRUE(equiv(lhs, rhs)) << pretty(lhs) << " vs " << pretty(rhs);
    // Lambda congruence.
    EXPECT_TRUE(equiv(TargetTerm::lam("x_arg", f.type.dom(), lhs),
                      TargetTerm::lam("x_arg", f.type.dom(), rhs)));
  }
  EXPECT_EQ(applied, kCases);
}

TEST(EquivProperty, SubstitutionTyping) {
  Rng rng(54);
  TargetEnv env = base_target_env();
  const std::vector<std::pair<std::string, TargetType>> replaceable{
      {"i0", tty("Int")}, {"i1", tty("Int")}, {"b0", tty("Bool")}, {"not", tty("Bool -> Bool")}};
  for (int i = 0; i < kCases; ++i) {
    TypedTerm g = random_well_typed(rng, 4);
    EvSubst eta;
    for (const auto &[name, type] : replaceable) {
      if (!coin(rng)) continue;
      // A generated term of the variable's type, found by rejection.
      for (int tries = 0; tries < 50; ++tries) {
        TypedTerm image = random_well_typed(rng, 2);
        if (alpha_eq(image.type, type)) {
          eta.insert_or_assign(name, image.term);
          break;
        }
      }
    }
    TargetTerm substituted = apply_evsubst(eta, g.term);
    EXPECT_TRUE(alpha_eq(tc_target(env, substituted), g.type)) << pretty(substituted);
  }
}

TEST(EquivProperty, ContextWeakening) {
  Rng rng(55);
  TargetEnv env = base_target_env({"a"});
  for (int i = 0; i < kCases; ++i) {
    TypedTerm g = random_well_typed(rng, 4, {"a"});
    TargetType base = tc_target(env, g.term);
    TargetEnv wider = env.extend("fresh_value", random_target_type(rng, {"a"}, 2))
                          .extend_tyvar("fresh_type");
    EXPECT_TRUE(alpha_eq(tc_target(wider, g.term), base));
  }
}

TEST(EquivProperty, EraseThetaOnGeneratedTerms) {
  Rng rng(56);
  for (int i = 0; i < kCases; ++i) {
    TypedTerm g = random_well_typed(rng, 4, {"a"});
    TargetTySubst theta{{"a", random_target_type(rng, {}, 2)}};
    TargetTerm t = subst_type(theta, g.term);
    TargetEnv env = base_target_env().extend("x_a", theta.at("a"));
    EXPECT_TRUE(alpha_eq(tc_target(env, t), subst_type(theta, g.type))) << pretty(t);
    EXPECT_TRUE(equiv(g.term, t));
  }
}

TEST(EquivProperty, EraseThetaOnCorpus) {
  LawResult r = law_erase_theta_corpus();
  EXPECT_GE(r.cases, 40);
  EXPECT_TRUE(r.ok()) << r.summary();
}

}  // namespace
}  // namespace dictapp
