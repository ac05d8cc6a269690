#include <fmt/core.h>

#include <array>
#include <cctype>

#include "lexer.h"

namespace dictapp::detail {

namespace {

constexpr std::array<std::string_view, 14> kKeywords = {
    "class", "tycon", "instance", "prim", "sig",  "def",  "check",
    "forall", "as",   "Dict",     "val",  "term", "where", "let"};

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' ||
         c == '$';
}

}  // namespace

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto push = [&](Tok kind, std::size_t len) {
    out.push_back(Token{kind, std::string(text.substr(i, len)), Span{line, col}});
    advance(len);
  };

  while (i < text.size()) {
    char c = text[i];
    char next = i + 1 < text.size() ? text[i + 1] : '\0';
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '-' && next == '-') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (c == '~')
      throw SyntaxError("equality constraints (~) are not supported",
                        Span{line, col});
    if (c == '-' && next == '>') { push(Tok::kArrow, 2); continue; }
    if (c == '=' && next == '>') { push(Tok::kFatArrow, 2); continue; }
    if (c == '/' && next == '\\') { push(Tok::kTyLambda, 2); continue; }
    if (c == '[' && next == '|') { push(Tok::kLDictBrack, 2); continue; }
    if (c == '|' && next == ']') { push(Tok::kRDictBrack, 2); continue; }
    switch (c) {
      case ';': push(Tok::kSemi, 1); continue;
      case ':': push(Tok::kColon, 1); continue;
      case '.': push(Tok::kDot, 1); continue;
      case ',': push(Tok::kComma, 1); continue;
      case '=': push(Tok::kEquals, 1); continue;
      case '\\': push(Tok::kBackslash, 1); continue;
      case '(': push(Tok::kLParen, 1); continue;
      case ')': push(Tok::kRParen, 1); continue;
      case '[': push(Tok::kLBrack, 1); continue;
      case ']': push(Tok::kRBrack, 1); continue;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t len = 0;
      while (i + len < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i + len])))
        ++len;
      push(Tok::kNat, len);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      std::size_t len = 1;
      while (i + len < text.size() && is_ident_char(text[i + len])) ++len;
      std::string_view word = text.substr(i, len);
      Tok kind = std::isupper(static_cast<unsigned char>(c)) ? Tok::kConId
                                                              : Tok::kVarId;
      for (auto kw : kKeywords)
        if (word == kw) kind = Tok::kKeyword;
      push(kind, len);
      continue;
    }
    throw SyntaxError(fmt::format("unexpected character '{}'", c), Span{line, col});
  }
  out.push_back(Token{Tok::kEnd, "", Span{line, col}});
  return out;
}

std::string describe(const Token &t) {
  if (t.kind == Tok::kEnd) return "end of input";
  return fmt::format("'{}'", t.text);
}

}  // namespace dictapp::detail
