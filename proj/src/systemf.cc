#include "dictapp/systemf.h"

#include <fmt/core.h>

#include <set>

#include "dictapp/surface.h"

namespace dictapp {

// ---- type checking -----------------------------------------------------------

namespace {

class Checker {
 public:
  explicit Checker(const TargetEnv &env) {
    for (const auto &e : env.entries()) {
      if (const auto *b = std::get_if<TargetEnv::Binding>(&e)) {
        scope_.push_back(*b);
        add_names(b->type);
      } else {
        tyvars_.insert(std::get<TargetEnv::TyVar>(e).name);
      }
    }
  }

  TargetType check(const TargetTerm &t) {
    switch (t.kind()) {
      case TargetTerm::Kind::kVar:
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
          if (it->name == t.name()) return it->type;
        throw TypeError("UnboundVar", fmt::format("unbound variable {}", t.name()));
      case TargetTerm::Kind::kLam: {
        scope_.push_back({t.name(), t.type()});
        add_names(t.type());
        TargetType body = check(t.body());
        scope_.pop_back();
        return TargetType::arrow(t.type(), std::move(body));
      }
      case TargetTerm::Kind::kApp: {
        TargetType fn = check(t.fn());
        TargetType arg = check(t.arg());
        if (fn.kind() != TargetType::Kind::kArrow)
          throw TypeError("NotAFunction",
                          fmt::format("{} has type {}, which is not a function type",
                                      pretty(t.fn()), pretty(fn)));
        if (!alpha_eq(fn.dom(), arg))
          throw TypeError("Mismatch",
                          fmt::format("argument {} has type {} but {} was expected",
                                      pretty(t.arg()), pretty(arg), pretty(fn.dom())));
        return fn.cod();
      }
      case TargetTerm::Kind::kTyLam: {
        // Rename the binder when it would capture a type variable already
        // in scope.
        std::string a = t.name();
        TargetTerm body = t.body();
        if (names_.count(a) || tyvars_.count(a)) {
          std::set<std::string> avoid = names_;
          avoid.insert(tyvars_.begin(), tyvars_.end());
          auto inner = all_names(body);
          avoid.insert(inner.begin(), inner.end());
          std::string fresh = fresh_name(a, avoid);
          body = subst_type(TargetTySubst{{a, TargetType::var(fresh)}}, body);
          a = fresh;
        }
        bool inserted = tyvars_.insert(a).second;
        TargetType result = TargetType::forall(a, check(body));
        if (inserted) tyvars_.erase(a);
        return result;
      }
      case TargetTerm::Kind::kTyApp: {
        TargetType fn = check(t.fn());
        if (fn.kind() != TargetType::Kind::kForall)
          throw TypeError("NotAForall",
                          fmt::format("{} has type {}, which is not polymorphic",
                                      pretty(t.fn()), pretty(fn)));
        add_names(t.type());
        return subst_type(TargetTySubst{{fn.name(), t.type()}}, fn.body());
      }
    }
    throw TypeError("UnboundVar", "malformed term");
  }

 private:
  void add_names(const TargetType &t) {
    auto f = ftv(t);
    names_.insert(f.begin(), f.end());
  }

  std::vector<TargetEnv::Binding> scope_;
  std::set<std::string> tyvars_;
  // Free type variables of every type bound so far (conservative).
  std::set<std::string> names_;
};

}  // namespace

TargetType tc_target(const TargetEnv &env, const TargetTerm &t) {
  return Checker(env).check(t);
}

// ---- untyped terms -----------------------------------------------------------

UntypedTerm UntypedTerm::free(std::string name) {
  return UntypedTerm(std::make_shared<const Node>(Node{Kind::kFree, std::move(name), 0, {}}));
}

UntypedTerm UntypedTerm::bound(int index) {
  return UntypedTerm(std::make_shared<const Node>(Node{Kind::kBound, "", index, {}}));
}

UntypedTerm UntypedTerm::lam(std::string hint, UntypedTerm body) {
  return UntypedTerm(
      std::make_shared<const Node>(Node{Kind::kLam, std::move(hint), 0, {std::move(body)}}));
}

UntypedTerm UntypedTerm::app(UntypedTerm fn, UntypedTerm arg) {
  return UntypedTerm(std::make_shared<const Node>(
      Node{Kind::kApp, "", 0, {std::move(fn), std::move(arg)}}));
}

bool operator==(const UntypedTerm &a, const UntypedTerm &b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case UntypedTerm::Kind::kFree:
      return a.name() == b.name();
    case UntypedTerm::Kind::kBound:
      return a.index() == b.index();
    case UntypedTerm::Kind::kLam:
      return a.body() == b.body();
    case UntypedTerm::Kind::kApp:
      return a.fn() == b.fn() && a.arg() == b.arg();
  }
  return false;
}

namespace {

UntypedTerm erase_in(const TargetTerm &t, std::vector<std::string> &ctx) {
  switch (t.kind()) {
    case TargetTerm::Kind::kVar:
      for (std::size_t i = ctx.size(); i-- > 0;)
        if (ctx[i] == t.name())
          return UntypedTerm::bound(static_cast<int>(ctx.size() - 1 - i));
      return UntypedTerm::free(t.name());
    case TargetTerm::Kind::kLam: {
      ctx.push_back(t.name());
      UntypedTerm body = erase_in(t.body(), ctx);
      ctx.pop_back();
      return UntypedTerm::lam(t.name(), std::move(body));
    }
    case TargetTerm::Kind::kApp:
      return UntypedTerm::app(erase_in(t.fn(), ctx), erase_in(t.arg(), ctx));
    case TargetTerm::Kind::kTyLam:
    case TargetTerm::Kind::kTyApp:
      return erase_in(t.kind() == TargetTerm::Kind::kTyLam ? t.body() : t.fn(), ctx);
  }
  return UntypedTerm::free(t.name());
}

UntypedTerm shift(const UntypedTerm &t, int d, int cutoff) {
  switch (t.kind()) {
    case UntypedTerm::Kind::kFree:
      return t;
    case UntypedTerm::Kind::kBound:
      return t.index() >= cutoff ? UntypedTerm::bound(t.index() + d) : t;
    case UntypedTerm::Kind::kLam:
      return UntypedTerm::lam(t.name(), shift(t.body(), d, cutoff + 1));
    case UntypedTerm::Kind::kApp:
      return UntypedTerm::app(shift(t.fn(), d, cutoff), shift(t.arg(), d, cutoff));
  }
  return t;
}

// Replaces index `j` by `s` (already shifted to the current depth).
UntypedTerm subst_at(const UntypedTerm &t, int j, const UntypedTerm &s) {
  switch (t.kind()) {
    case UntypedTerm::Kind::kFree:
      return t;
    case UntypedTerm::Kind::kBound:
      return t.index() == j ? s : t;
    case UntypedTerm::Kind::kLam:
      return UntypedTerm::lam(t.name(), subst_at(t.body(), j + 1, shift(s, 1, 0)));
    case UntypedTerm::Kind::kApp:
      return UntypedTerm::app(subst_at(t.fn(), j, s), subst_at(t.arg(), j, s));
  }
  return t;
}

UntypedTerm beta(const UntypedTerm &body, const UntypedTerm &arg) {
  return shift(subst_at(body, 0, shift(arg, 1, 0)), -1, 0);
}

bool occurs_bound(const UntypedTerm &t, int j) {
  switch (t.kind()) {
    case UntypedTerm::Kind::kFree:
      return false;
    case UntypedTerm::Kind::kBound:
      return t.index() == j;
    case UntypedTerm::Kind::kLam:
      return occurs_bound(t.body(), j + 1);
    case UntypedTerm::Kind::kApp:
      return occurs_bound(t.fn(), j) || occurs_bound(t.arg(), j);
  }
  return false;
}

class Normalizer {
 public:
  explicit Normalizer(long fuel) : fuel_(fuel) {}

  UntypedTerm whnf(UntypedTerm t) {
    if (t.kind() != UntypedTerm::Kind::kApp) return t;
    UntypedTerm fn = whnf(t.fn());
    if (fn.kind() == UntypedTerm::Kind::kLam) {
      spend();
      return whnf(beta(fn.body(), t.arg()));
    }
    return UntypedTerm::app(std::move(fn), t.arg());
  }

  UntypedTerm nf(const UntypedTerm &t) {
    UntypedTerm w = whnf(t);
    switch (w.kind()) {
      case UntypedTerm::Kind::kFree:
      case UntypedTerm::Kind::kBound:
        return w;
      case UntypedTerm::Kind::kLam: {
        UntypedTerm body = nf(w.body());
        if (body.kind() == UntypedTerm::Kind::kApp &&
            body.arg().kind() == UntypedTerm::Kind::kBound && body.arg().index() == 0 &&
            !occurs_bound(body.fn(), 0)) {
          spend();
          return shift(body.fn(), -1, 0);
        }
        return UntypedTerm::lam(w.name(), std::move(body));
      }
      case UntypedTerm::Kind::kApp:
        return UntypedTerm::app(nf_spine(w.fn()), nf(w.arg()));
    }
    return w;
  }

 private:
  // The head of a weak-head-normal spine is never a lambda.
  UntypedTerm nf_spine(const UntypedTerm &t) {
    if (t.kind() == UntypedTerm::Kind::kApp)
      return UntypedTerm::app(nf_spine(t.fn()), nf(t.arg()));
    return t;
  }

  void spend() {
    if (fuel_ <= 0)
      throw BoundExceeded("FuelExhausted", "normalization ran out of fuel");
    --fuel_;
  }

  long fuel_;
};

void collect_free(const UntypedTerm &t, std::set<std::string> &out) {
  switch (t.kind()) {
    case UntypedTerm::Kind::kFree:
      out.insert(t.name());
      return;
    case UntypedTerm::Kind::kBound:
      return;
    case UntypedTerm::Kind::kLam:
      collect_free(t.body(), out);
      return;
    case UntypedTerm::Kind::kApp:
      collect_free(t.fn(), out);
      collect_free(t.arg(), out);
      return;
  }
}

std::string print_untyped(const UntypedTerm &t, std::vector<std::string> &ctx,
                          std::set<std::string> &used, int prec) {
  switch (t.kind()) {
    case UntypedTerm::Kind::kFree:
      return t.name();
    case UntypedTerm::Kind::kBound: {
      int k = static_cast<int>(ctx.size()) - 1 - t.index();
      return k >= 0 ? ctx[k] : fmt::format("#{}", t.index());
    }
    case UntypedTerm::Kind::kLam: {
      std::string name = fresh_name(t.name().empty() ? "x" : t.name(), used);
      used.insert(name);
      ctx.push_back(name);
      std::string s = "\\" + name + ". " + print_untyped(t.body(), ctx, used, 0);
      ctx.pop_back();
      used.erase(name);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case UntypedTerm::Kind::kApp: {
      std::string s = print_untyped(t.fn(), ctx, used, 1) + " " +
                      print_untyped(t.arg(), ctx, used, 2);
      return prec > 1 ? "(" + s + ")" : s;
    }
  }
  return "";
}

}  // namespace

UntypedTerm erase(const TargetTerm &t) {
  std::vector<std::string> ctx;
  return erase_in(t, ctx);
}

UntypedTerm normalize(const UntypedTerm &u, long fuel) {
  return Normalizer(fuel).nf(u);
}

bool equiv(const TargetTerm &a, const TargetTerm &b, long fuel) {
  return normalize(erase(a), fuel) == normalize(erase(b), fuel);
}

std::string pretty(const UntypedTerm &u) {
  std::set<std::string> used;
  collect_free(u, used);
  std::vector<std::string> ctx;
  return print_untyped(u, ctx, used, 0);
}

}  // namespace dictapp
