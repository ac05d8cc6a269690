#include <fmt/core.h>

#include "dictapp/surface.h"

namespace dictapp {

namespace {

// Precedence levels shared by both type printers.
enum Prec { kTop = 0, kApp = 1, kAtom = 2 };

std::string paren_if(bool cond, std::string s) {
  return cond ? "(" + s + ")" : s;
}

std::string src_type(const SrcType &t, Prec ctx) {
  switch (t.kind()) {
    case SrcType::Kind::kVar:
      return t.name();
    case SrcType::Kind::kArrow:
      return paren_if(ctx > kTop,
                      src_type(t.dom(), kApp) + " -> " + src_type(t.cod(), kTop));
    case SrcType::Kind::kDict:
      return paren_if(ctx > kApp,
                      "Dict " + t.name() + " " + src_type(t.arg(), kAtom));
    case SrcType::Kind::kCon: {
      if (t.children().empty()) return t.name();
      std::string s = t.name();
      for (const auto &c : t.children()) s += " " + src_type(c, kAtom);
      return paren_if(ctx > kApp, s);
    }
  }
  return "";
}

std::string context_prefix(const std::vector<Constraint> &context) {
  if (context.empty()) return "";
  if (context.size() == 1) return pretty(context[0]) + " => ";
  return pretty(context) + " => ";
}

std::string forall_prefix(const std::vector<std::string> &vars) {
  if (vars.empty()) return "";
  std::string s = "forall";
  for (const auto &v : vars) s += " " + v;
  return s + ". ";
}

std::string src_expr(const SrcExpr &e, Prec ctx);

// Operand of `[| .. |]`: only variables and annotations are printed bare.
std::string src_postfix(const SrcExpr &e) {
  switch (e.kind()) {
    case SrcExpr::Kind::kVar:
    case SrcExpr::Kind::kAnnot:
    case SrcExpr::Kind::kDictApp:
      return src_expr(e, kAtom);
    default:
      return "(" + src_expr(e, kTop) + ")";
  }
}

std::string src_expr(const SrcExpr &e, Prec ctx) {
  switch (e.kind()) {
    case SrcExpr::Kind::kVar:
      return e.name();
    case SrcExpr::Kind::kLam: {
      std::string s = "\\" + e.name();
      const SrcExpr *body = &e.body();
      while (body->kind() == SrcExpr::Kind::kLam) {
        s += " " + body->name();
        body = &body->body();
      }
      return paren_if(ctx > kTop, s + ". " + src_expr(*body, kTop));
    }
    case SrcExpr::Kind::kApp:
      return paren_if(ctx > kApp,
                      src_expr(e.fn(), kApp) + " " + src_expr(e.arg(), kAtom));
    case SrcExpr::Kind::kDictApp:
      return src_postfix(e.fn()) + " [| " + src_expr(e.dict(), kTop) + " as " +
             pretty(e.at()) + " |]";
    case SrcExpr::Kind::kAnnot:
      return "(" + src_expr(e.expr(), kTop) + " : " + pretty(e.scheme()) + ")";
  }
  return "";
}

std::string target_type(const TargetType &t, Prec ctx) {
  switch (t.kind()) {
    case TargetType::Kind::kVar:
      return t.name();
    case TargetType::Kind::kForall: {
      std::string s = "forall " + t.name();
      const TargetType *body = &t.body();
      while (body->kind() == TargetType::Kind::kForall) {
        s += " " + body->name();
        body = &body->body();
      }
      return paren_if(ctx > kTop, s + ". " + target_type(*body, kTop));
    }
    case TargetType::Kind::kArrow:
      return paren_if(ctx > kTop, target_type(t.dom(), kApp) + " -> " +
                                      target_type(t.cod(), kTop));
    case TargetType::Kind::kDict:
      return paren_if(ctx > kApp,
                      "Dict " + t.name() + " " + target_type(t.arg(), kAtom));
    case TargetType::Kind::kCon: {
      if (t.children().empty()) return t.name();
      std::string s = t.name();
      for (const auto &c : t.children()) s += " " + target_type(c, kAtom);
      return paren_if(ctx > kApp, s);
    }
  }
  return "";
}

std::string target_term(const TargetTerm &t, Prec ctx) {
  switch (t.kind()) {
    case TargetTerm::Kind::kVar:
      return t.name();
    case TargetTerm::Kind::kLam:
      return paren_if(ctx > kTop, fmt::format("\\({} : {}). {}", t.name(),
                                              target_type(t.type(), kTop),
                                              target_term(t.body(), kTop)));
    case TargetTerm::Kind::kTyLam: {
      std::string s = "/\\" + t.name();
      const TargetTerm *body = &t.body();
      while (body->kind() == TargetTerm::Kind::kTyLam) {
        s += " " + body->name();
        body = &body->body();
      }
      return paren_if(ctx > kTop, s + ". " + target_term(*body, kTop));
    }
    case TargetTerm::Kind::kApp:
      return paren_if(ctx > kApp, target_term(t.fn(), kApp) + " " +
                                      target_term(t.arg(), kAtom));
    case TargetTerm::Kind::kTyApp:
      return paren_if(ctx > kApp, target_term(t.fn(), kApp) + " [" +
                                      target_type(t.type(), kTop) + "]");
  }
  return "";
}

}  // namespace

std::string pretty(const SrcType &t) { return src_type(t, kTop); }

std::string pretty(const Constraint &c) {
  return c.cls + " " + src_type(c.arg, kAtom);
}

std::string pretty(const std::vector<Constraint> &context) {
  std::string s = "(";
  for (std::size_t i = 0; i < context.size(); ++i) {
    if (i) s += ", ";
    s += pretty(context[i]);
  }
  return s + ")";
}

std::string pretty(const QualType &q) {
  return context_prefix(q.context) + pretty(q.body);
}

std::string pretty(const Scheme &s) {
  return forall_prefix(s.quantified) + pretty(s.qual);
}

std::string pretty(const LabelledConstraints &q) {
  if (q.empty()) return "(empty)";
  std::string s;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (i) s += ", ";
    s += q[i].label + " : " + pretty(q[i].constraint);
  }
  return s;
}

std::string pretty(const AxiomScheme &a) {
  return a.name + " : " + forall_prefix(a.quantified) +
         context_prefix(a.premises) + pretty(a.head);
}

std::string pretty(const SrcExpr &e) { return src_expr(e, kTop); }

std::string pretty(const Program &p) {
  std::string out;
  for (const auto &c : p.classes) out += "class " + c + ";\n";
  for (const auto &t : p.tycons)
    out += fmt::format("tycon {} {};\n", t.name, t.arity);
  for (const auto &a : p.axioms.axioms) out += "instance " + pretty(a) + ";\n";
  for (const auto &pr : p.prims)
    out += "prim " + pr.name + " : " + pretty(pr.scheme) + ";\n";
  for (const auto &d : p.defs) {
    if (d.signature) out += "sig " + d.name + " : " + pretty(*d.signature) + ";\n";
    out += "def " + d.name + " = " + pretty(d.body) + ";\n";
  }
  for (const auto &c : p.checks)
    out += "check " + c.name + " = " + pretty(c.body) + ";\n";
  return out;
}

std::string pretty(const TargetType &t) { return target_type(t, kTop); }

std::string pretty(const TargetTerm &t) { return target_term(t, kTop); }

std::string pretty(const SysfModule &m) {
  if (!m.has_declarations()) return m.main ? pretty(*m.main) + "\n" : "";
  std::string out;
  for (const auto &t : m.tycons)
    out += fmt::format("tycon {} {};\n", t.name, t.arity);
  for (const auto &v : m.vals) out += "val " + v.name + " : " + pretty(v.type) + ";\n";
  for (const auto &d : m.defs)
    out += "def " + d.name + " : " + pretty(d.type) + " = " + pretty(d.term) + ";\n";
  if (m.main) out += "term " + pretty(*m.main) + ";\n";
  return out;
}

}  // namespace dictapp
