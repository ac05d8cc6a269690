#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dictapp/errors.h"

namespace dictapp::detail {

enum class Tok {
  kVarId,     // lower-case or $-prefixed identifier
  kConId,     // upper-case identifier
  kNat,
  kKeyword,
  kSemi,
  kColon,
  kDot,
  kComma,
  kEquals,
  kBackslash,
  kTyLambda,  // /\ .
  kArrow,     // ->
  kFatArrow,  // =>
  kLParen,
  kRParen,
  kLBrack,
  kRBrack,
  kLDictBrack,  // [|
  kRDictBrack,  // |]
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

/// Tokenizes `text`; accepts LF and CRLF line endings and `--` comments.
/// Throws SyntaxError on stray characters and on `~` (equality constraints
/// are not part of the language).
std::vector<Token> lex(std::string_view text);

std::string describe(const Token &t);

}  // namespace dictapp::detail
