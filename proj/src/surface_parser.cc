#include <fmt/core.h>

#include <map>
#include <set>

#include "dictapp/surface.h"
#include "lexer.h"

namespace dictapp {

using detail::Tok;
using detail::Token;

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(detail::lex(text)) {}

  const Token &peek(std::size_t ahead = 0) const {
    std::size_t k = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[k];
  }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_keyword(std::string_view kw) const {
    return at(Tok::kKeyword) && peek().text == kw;
  }
  bool at_end() const { return at(Tok::kEnd); }
  std::size_t mark() const { return pos_; }
  void reset(std::size_t m) { pos_ = m; }

  Token take() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string &expected) const {
    throw SyntaxError(
        fmt::format("expected {} but found {}", expected, detail::describe(peek())),
        peek().span);
  }

  Token expect(Tok kind, const std::string &what) {
    if (!at(kind)) fail(what);
    return take();
  }
  void expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) fail(fmt::format("'{}'", kw));
    take();
  }

  // ---- source types --------------------------------------------------------

  SrcType atype() {
    if (at(Tok::kVarId)) return SrcType::var(take().text);
    if (at(Tok::kConId)) return SrcType::con(take().text);
    if (at(Tok::kLParen)) {
      take();
      SrcType t = type();
      expect(Tok::kRParen, "')'");
      return t;
    }
    fail("a type");
  }

  bool starts_atype() const {
    return at(Tok::kVarId) || at(Tok::kConId) || at(Tok::kLParen);
  }

  SrcType btype() {
    if (at_keyword("Dict")) {
      take();
      std::string cls = expect(Tok::kConId, "a class name").text;
      return SrcType::dict(std::move(cls), atype());
    }
    if (at(Tok::kConId)) {
      std::string name = take().text;
      std::vector<SrcType> args;
      while (starts_atype()) args.push_back(atype());
      return SrcType::con(std::move(name), std::move(args));
    }
    return atype();
  }

  SrcType type() {
    SrcType dom = btype();
    if (at(Tok::kArrow)) {
      take();
      return SrcType::arrow(std::move(dom), type());
    }
    return dom;
  }

  Constraint constraint() {
    std::string cls = expect(Tok::kConId, "a class name").text;
    return Constraint{std::move(cls), atype()};
  }

  // context '=>' where context is `C` or `(C, ..)`; restores on failure.
  std::optional<std::vector<Constraint>> try_context() {
    std::size_t m = mark();
    try {
      std::vector<Constraint> cs;
      if (at(Tok::kLParen)) {
        take();
        if (!at(Tok::kRParen)) {
          cs.push_back(constraint());
          while (at(Tok::kComma)) {
            take();
            cs.push_back(constraint());
          }
        }
        expect(Tok::kRParen, "')'");
      } else {
        cs.push_back(constraint());
      }
      if (!at(Tok::kFatArrow)) {
        reset(m);
        return std::nullopt;
      }
      take();
      return cs;
    } catch (const SyntaxError &) {
      reset(m);
      return std::nullopt;
    }
  }

  std::vector<std::string> forall_binders() {
    std::vector<std::string> vars;
    if (at_keyword("forall")) {
      take();
      while (at(Tok::kVarId)) vars.push_back(take().text);
      if (vars.empty()) fail("a type variable");
      expect(Tok::kDot, "'.'");
    }
    return vars;
  }

  Scheme scheme() {
    std::vector<std::string> vars = forall_binders();
    std::vector<Constraint> context;
    while (auto cs = try_context())
      context.insert(context.end(), cs->begin(), cs->end());
    return Scheme{std::move(vars), QualType{std::move(context), type()}};
  }

  AxiomScheme axiom(std::string name) {
    std::vector<std::string> vars = forall_binders();
    std::vector<Constraint> premises;
    while (auto cs = try_context())
      premises.insert(premises.end(), cs->begin(), cs->end());
    Constraint head = constraint();
    return AxiomScheme{std::move(name), std::move(vars), std::move(premises),
                       std::move(head)};
  }

  // ---- source expressions --------------------------------------------------

  SrcExpr expr() {
    if (at(Tok::kBackslash)) {
      Span span = take().span;
      std::vector<std::string> binders;
      while (at(Tok::kVarId)) binders.push_back(take().text);
      if (binders.empty()) fail("a variable");
      expect(Tok::kDot, "'.'");
      SrcExpr body = expr();
      for (auto it = binders.rbegin(); it != binders.rend(); ++it)
        body = SrcExpr::lam(*it, std::move(body), span);
      return body;
    }
    SrcExpr fn = postfix();
    while (at(Tok::kVarId) || at(Tok::kLParen)) {
      Span span = peek().span;
      fn = SrcExpr::app(std::move(fn), postfix(), span);
    }
    return fn;
  }

  SrcExpr postfix() {
    SrcExpr e = aexpr();
    while (at(Tok::kLDictBrack)) {
      Span span = take().span;
      if (e.kind() == SrcExpr::Kind::kDictApp)
        throw SyntaxError("dictionary applications cannot be chained", span);
      if (e.kind() != SrcExpr::Kind::kVar && e.kind() != SrcExpr::Kind::kAnnot)
        throw SyntaxError(
            "a dictionary can only be applied to a variable or an annotated "
            "expression",
            span);
      SrcExpr dict = expr();
      expect_keyword("as");
      Constraint at_constraint = constraint();
      expect(Tok::kRDictBrack, "'|]'");
      e = SrcExpr::dict_app(std::move(e), std::move(dict), std::move(at_constraint),
                            span);
    }
    return e;
  }

  SrcExpr aexpr() {
    if (at(Tok::kVarId)) {
      Token t = take();
      return SrcExpr::var(t.text, t.span);
    }
    if (at(Tok::kLParen)) {
      Span span = take().span;
      SrcExpr e = expr();
      if (at(Tok::kColon)) {
        take();
        Scheme s = scheme();
        expect(Tok::kRParen, "')'");
        return SrcExpr::annot(std::move(e), std::move(s), span);
      }
      expect(Tok::kRParen, "')'");
      return e;
    }
    fail("an expression");
  }

  // ---- target types and terms ---------------------------------------------

  TargetType t_atype() {
    if (at(Tok::kVarId)) return TargetType::var(take().text);
    if (at(Tok::kConId)) return TargetType::con(take().text);
    if (at(Tok::kLParen)) {
      take();
      TargetType t = t_type();
      expect(Tok::kRParen, "')'");
      return t;
    }
    fail("a type");
  }

  TargetType t_btype() {
    if (at_keyword("Dict")) {
      take();
      std::string cls = expect(Tok::kConId, "a class name").text;
      return TargetType::dict(std::move(cls), t_atype());
    }
    if (at(Tok::kConId)) {
      std::string name = take().text;
      std::vector<TargetType> args;
      while (starts_atype()) args.push_back(t_atype());
      return TargetType::con(std::move(name), std::move(args));
    }
    return t_atype();
  }

  TargetType t_type() {
    if (at_keyword("forall")) {
      auto vars = forall_binders();
      TargetType body = t_type();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        body = TargetType::forall(*it, std::move(body));
      return body;
    }
    TargetType dom = t_btype();
    if (at(Tok::kArrow)) {
      take();
      return TargetType::arrow(std::move(dom), t_type());
    }
    return dom;
  }

  TargetTerm term() {
    if (at(Tok::kBackslash)) {
      take();
      expect(Tok::kLParen, "'('");
      std::string x = expect(Tok::kVarId, "a variable").text;
      expect(Tok::kColon, "':'");
      TargetType annot = t_type();
      expect(Tok::kRParen, "')'");
      expect(Tok::kDot, "'.'");
      return TargetTerm::lam(std::move(x), std::move(annot), term());
    }
    if (at(Tok::kTyLambda)) {
      take();
      std::vector<std::string> vars;
      while (at(Tok::kVarId)) vars.push_back(take().text);
      if (vars.empty()) fail("a type variable");
      expect(Tok::kDot, "'.'");
      TargetTerm body = term();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        body = TargetTerm::ty_lam(*it, std::move(body));
      return body;
    }
    TargetTerm fn = t_atom();
    for (;;) {
      if (at(Tok::kLBrack)) {
        take();
        TargetType t = t_type();
        expect(Tok::kRBrack, "']'");
        fn = TargetTerm::ty_app(std::move(fn), std::move(t));
      } else if (at(Tok::kVarId) || at(Tok::kLParen)) {
        fn = TargetTerm::app(std::move(fn), t_atom());
      } else {
        return fn;
      }
    }
  }

  TargetTerm t_atom() {
    if (at(Tok::kVarId)) return TargetTerm::var(take().text);
    if (at(Tok::kLParen)) {
      take();
      TargetTerm t = term();
      expect(Tok::kRParen, "')'");
      return t;
    }
    fail("a term");
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---- program validation ------------------------------------------------------

struct Validator {
  std::set<std::string> classes;
  std::map<std::string, int> tycons;

  void type(const SrcType &t, Span span) const {
    switch (t.kind()) {
      case SrcType::Kind::kVar:
        return;
      case SrcType::Kind::kArrow:
        type(t.dom(), span);
        type(t.cod(), span);
        return;
      case SrcType::Kind::kDict:
        cls(t.name(), span);
        type(t.arg(), span);
        return;
      case SrcType::Kind::kCon: {
        auto it = tycons.find(t.name());
        if (it == tycons.end())
          throw ValidationError("UnknownTypeConstructor",
                                fmt::format("unknown type constructor {}", t.name()),
                                span);
        if (static_cast<std::size_t>(it->second) != t.children().size())
          throw ValidationError(
              "ArityMismatch",
              fmt::format("type constructor {} expects {} argument(s), got {}",
                          t.name(), it->second, t.children().size()),
              span);
        for (const auto &c : t.children()) type(c, span);
        return;
      }
    }
  }

  void cls(const std::string &name, Span span) const {
    if (!classes.count(name))
      throw ValidationError("UnknownClass", fmt::format("unknown class {}", name),
                            span);
  }

  void constraint(const Constraint &c, Span span) const {
    cls(c.cls, span);
    type(c.arg, span);
  }

  void scheme(const Scheme &s, Span span) const {
    std::set<std::string> seen;
    for (const auto &a : s.quantified)
      if (!seen.insert(a).second)
        throw ValidationError("DuplicateName",
                              fmt::format("type variable {} quantified twice", a),
                              span);
    for (const auto &c : s.context()) constraint(c, span);
    type(s.body(), span);
    for (const auto &v : ftv(s))
      throw ValidationError(
          "UnboundTypeVariable",
          fmt::format("type variable {} is not quantified in {}", v, pretty(s)),
          span);
  }

  void expr(const SrcExpr &e) const {
    switch (e.kind()) {
      case SrcExpr::Kind::kVar:
        return;
      case SrcExpr::Kind::kLam:
        expr(e.body());
        return;
      case SrcExpr::Kind::kApp:
        expr(e.fn());
        expr(e.arg());
        return;
      case SrcExpr::Kind::kDictApp:
        expr(e.fn());
        expr(e.dict());
        constraint(e.at(), e.span());
        return;
      case SrcExpr::Kind::kAnnot:
        scheme(e.scheme(), e.span());
        expr(e.expr());
        return;
    }
  }
};

void validate_program(const Program &p, const std::vector<Span> &prim_spans,
                      const std::vector<Span> &axiom_spans) {
  Validator v;
  for (const auto &c : p.classes)
    if (!v.classes.insert(c).second)
      throw ValidationError("DuplicateName", fmt::format("duplicate class {}", c));
  for (const auto &t : p.tycons)
    if (!v.tycons.emplace(t.name, t.arity).second)
      throw ValidationError("DuplicateName",
                            fmt::format("duplicate type constructor {}", t.name));

  std::set<std::string> terms;
  auto claim = [&](const std::string &name, Span span) {
    if (!terms.insert(name).second)
      throw ValidationError("DuplicateName", fmt::format("duplicate name {}", name),
                            span);
  };
  for (std::size_t i = 0; i < p.axioms.axioms.size(); ++i) {
    const auto &a = p.axioms.axioms[i];
    claim(a.name, axiom_spans[i]);
    for (const auto &c : a.premises) v.constraint(c, axiom_spans[i]);
    v.constraint(a.head, axiom_spans[i]);
  }
  try {
    validate_axioms(p.axioms);
  } catch (const ValidationError &e) {
    throw ValidationError(e.kind(), e.message(),
                          axiom_spans.empty() ? Span{} : axiom_spans.front());
  }
  for (std::size_t i = 0; i < p.prims.size(); ++i) {
    claim(p.prims[i].name, prim_spans[i]);
    v.scheme(p.prims[i].scheme, prim_spans[i]);
  }
  for (const auto &d : p.defs) {
    claim(d.name, d.span);
    if (d.signature) v.scheme(*d.signature, d.span);
    v.expr(d.body);
  }
  for (const auto &c : p.checks) {
    claim(c.name, c.span);
    v.expr(c.body);
  }
}

}  // namespace

const DefDecl *Program::find_def(std::string_view name) const {
  for (const auto &d : defs)
    if (d.name == name) return &d;
  return nullptr;
}

const SysfModule::Def *SysfModule::find_def(std::string_view name) const {
  for (const auto &d : defs)
    if (d.name == name) return &d;
  return nullptr;
}

Program parse_program(std::string_view text, std::string filename) {
  Parser ps(text);
  Program p;
  p.filename = std::move(filename);
  std::vector<Span> prim_spans, axiom_spans;
  std::map<std::string, std::pair<Scheme, Span>> pending_sigs;

  while (!ps.at_end()) {
    if (!ps.at(Tok::kKeyword)) ps.fail("a declaration");
    Token kw = ps.take();
    if (kw.text == "class") {
      p.classes.push_back(ps.expect(Tok::kConId, "a class name").text);
    } else if (kw.text == "tycon") {
      std::string name = ps.expect(Tok::kConId, "a type constructor name").text;
      int arity = std::stoi(ps.expect(Tok::kNat, "an arity").text);
      p.tycons.push_back({std::move(name), arity});
    } else if (kw.text == "instance") {
      std::string name = ps.expect(Tok::kVarId, "an instance name").text;
      ps.expect(Tok::kColon, "':'");
      p.axioms.axioms.push_back(ps.axiom(std::move(name)));
      axiom_spans.push_back(kw.span);
    } else if (kw.text == "prim") {
      std::string name = ps.expect(Tok::kVarId, "a name").text;
      ps.expect(Tok::kColon, "':'");
      p.prims.push_back({std::move(name), ps.scheme()});
      prim_spans.push_back(kw.span);
    } else if (kw.text == "sig") {
      std::string name = ps.expect(Tok::kVarId, "a name").text;
      ps.expect(Tok::kColon, "':'");
      Scheme s = ps.scheme();
      if (pending_sigs.count(name) || p.find_def(name))
        throw ValidationError("DuplicateName",
                              fmt::format("duplicate signature for {}", name),
                              kw.span);
      pending_sigs.emplace(name, std::make_pair(std::move(s), kw.span));
    } else if (kw.text == "def" || kw.text == "check") {
      Token name = ps.expect(Tok::kVarId, "a name");
      ps.expect(Tok::kEquals, "'='");
      SrcExpr body = ps.expr();
      if (kw.text == "def") {
        std::optional<Scheme> sig;
        if (auto it = pending_sigs.find(name.text); it != pending_sigs.end()) {
          sig = it->second.first;
          pending_sigs.erase(it);
        }
        p.defs.push_back(DefDecl{name.text, std::move(sig), std::move(body), kw.span});
      } else {
        p.checks.push_back(CheckDecl{name.text, std::move(body), kw.span});
      }
    } else {
      throw SyntaxError(fmt::format("unexpected keyword '{}'", kw.text), kw.span);
    }
    ps.expect(Tok::kSemi, "';'");
  }
  if (!pending_sigs.empty()) {
    const auto &[name, sig] = *pending_sigs.begin();
    throw ValidationError("MissingDefinition",
                          fmt::format("signature for {} lacks a definition", name),
                          sig.second);
  }
  validate_program(p, prim_spans, axiom_spans);
  return p;
}

Scheme parse_scheme(std::string_view text, const Program &context) {
  Parser ps(text);
  Scheme s = ps.scheme();
  if (!ps.at_end()) ps.fail("end of input");
  Validator v;
  v.classes.insert(context.classes.begin(), context.classes.end());
  for (const auto &t : context.tycons) v.tycons.emplace(t.name, t.arity);
  v.scheme(s, {});
  return s;
}

TargetTerm parse_target(std::string_view text) {
  Parser ps(text);
  TargetTerm t = ps.term();
  if (!ps.at_end()) ps.fail("end of input");
  return t;
}

TargetType parse_target_type(std::string_view text) {
  Parser ps(text);
  TargetType t = ps.t_type();
  if (!ps.at_end()) ps.fail("end of input");
  return t;
}

SysfModule parse_sysf(std::string_view text) {
  Parser ps(text);
  SysfModule m;
  if (!ps.at_end() && !ps.at(Tok::kKeyword)) {
    m.main = ps.term();
    if (!ps.at_end()) ps.fail("end of input");
    return m;
  }
  std::set<std::string> names;
  while (!ps.at_end()) {
    if (!ps.at(Tok::kKeyword)) ps.fail("a declaration");
    Token kw = ps.take();
    if (kw.text == "tycon") {
      std::string name = ps.expect(Tok::kConId, "a type constructor name").text;
      int arity = std::stoi(ps.expect(Tok::kNat, "an arity").text);
      m.tycons.push_back({std::move(name), arity});
    } else if (kw.text == "val" || kw.text == "def") {
      std::string name = ps.expect(Tok::kVarId, "a name").text;
      if (!names.insert(name).second)
        throw ValidationError("DuplicateName", fmt::format("duplicate name {}", name),
                              kw.span);
      ps.expect(Tok::kColon, "':'");
      TargetType type = ps.t_type();
      if (kw.text == "val") {
        m.vals.push_back({std::move(name), std::move(type)});
      } else {
        ps.expect(Tok::kEquals, "'='");
        m.defs.push_back({std::move(name), std::move(type), ps.term()});
      }
    } else if (kw.text == "term") {
      if (m.main) throw SyntaxError("more than one main term", kw.span);
      m.main = ps.term();
    } else {
      throw SyntaxError(fmt::format("unexpected keyword '{}'", kw.text), kw.span);
    }
    ps.expect(Tok::kSemi, "';'");
  }
  return m;
}

}  // namespace dictapp
