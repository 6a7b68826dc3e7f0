#pragma once

// Tokenizer shared by the global-type and GTIR parsers.

#include <string>
#include <string_view>
#include <vector>

#include "cfsmkit/parse_error.hpp"

namespace cfsmkit::detail {

enum class Tok { Ident, String, Arrow, BiArrow, Colon, Semi, Comma, Equals, LBrace, RBrace, LParen, RParen, Eof };

const char* to_string(Tok t);

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

/// `#` and `//` start comments running to the end of the line.
std::vector<Token> tokenize(std::string_view src);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_keyword(std::string_view kw) const { return peek().kind == Tok::Ident && peek().text == kw; }

  const Token& expect(Tok k, std::string_view what);
  void expect_keyword(std::string_view kw);
  [[noreturn]] void fail(const std::string& msg) const;
  [[noreturn]] static void fail_at(const Token& t, const std::string& msg);

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace cfsmkit::detail
