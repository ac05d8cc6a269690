#pragma once

// System F kernel: the syntax-directed type checker, type erasure,
// normal-order beta-eta normalization with fuel, and the equivalence test
// on erased normal forms.

#include <memory>
#include <string>
#include <vector>

#include "dictapp/elaborate.h"
#include "dictapp/syntax.h"

namespace dictapp {

inline constexpr long kDefaultFuel = 100000;

/// Throws TypeError (Mismatch, UnboundVar, NotAFunction, NotAForall).
TargetType tc_target(const TargetEnv &env, const TargetTerm &t);

/// Untyped lambda term with de Bruijn indices for bound variables and
/// names for free ones. Binder hints are kept for printing only.
class UntypedTerm {
 public:
  enum class Kind { kFree, kBound, kLam, kApp };

  static UntypedTerm free(std::string name);
  static UntypedTerm bound(int index);
  static UntypedTerm lam(std::string hint, UntypedTerm body);
  static UntypedTerm app(UntypedTerm fn, UntypedTerm arg);

  Kind kind() const { return node_->kind; }
  /// Free variable name or binder hint.
  const std::string &name() const { return node_->name; }
  int index() const { return node_->index; }
  const UntypedTerm &body() const { return node_->children[0]; }
  const UntypedTerm &fn() const { return node_->children[0]; }
  const UntypedTerm &arg() const { return node_->children[1]; }

  /// Alpha-equivalence: binder hints are ignored.
  friend bool operator==(const UntypedTerm &a, const UntypedTerm &b);

 private:
  struct Node {
    Kind kind;
    std::string name;
    int index = 0;
    std::vector<UntypedTerm> children;
  };
  explicit UntypedTerm(std::shared_ptr<const Node> node)
      : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

UntypedTerm erase(const TargetTerm &t);

/// Leftmost-outermost beta reduction with eta contraction after each
/// lambda body is normalized. Each beta or eta step consumes one unit of
/// fuel; throws BoundExceeded("FuelExhausted") when none is left.
UntypedTerm normalize(const UntypedTerm &u, long fuel = kDefaultFuel);

/// Compares erased normal forms; free variables are compared by name.
bool equiv(const TargetTerm &a, const TargetTerm &b, long fuel = kDefaultFuel);

std::string pretty(const UntypedTerm &u);

}  // namespace dictapp
