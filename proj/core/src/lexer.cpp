#include "cfsmkit/detail/lexer.hpp"

#include <cctype>

namespace cfsmkit::detail {

const char* to_string(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::String: return "string";
    case Tok::Arrow: return "'->'";
    case Tok::BiArrow: return "'<->'";
    case Tok::Colon: return "':'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::Equals: return "'='";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Eof: return "end of input";
  }
  return "?";
}

static bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const int tl = line, tc = col;
    auto push = [&](Tok k, std::size_t len) {
      out.push_back({k, std::string(src.substr(i, len)), tl, tc});
      advance(len);
    };
    if (src.substr(i, 3) == "<->") {
      push(Tok::BiArrow, 3);
    } else if (src.substr(i, 2) == "->") {
      push(Tok::Arrow, 2);
    } else if (c == ':') {
      push(Tok::Colon, 1);
    } else if (c == ';') {
      push(Tok::Semi, 1);
    } else if (c == ',') {
      push(Tok::Comma, 1);
    } else if (c == '=') {
      push(Tok::Equals, 1);
    } else if (c == '{') {
      push(Tok::LBrace, 1);
    } else if (c == '}') {
      push(Tok::RBrace, 1);
    } else if (c == '(') {
      push(Tok::LParen, 1);
    } else if (c == ')') {
      push(Tok::RParen, 1);
    } else if (c == '"') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"' && src[j] != '\n') ++j;
      if (j >= src.size() || src[j] != '"') throw ParseError("unterminated string literal", tl, tc);
      out.push_back({Tok::String, std::string(src.substr(i + 1, j - i - 1)), tl, tc});
      advance(j - i + 1);
    } else if (ident_char(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      push(Tok::Ident, j - i);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", tl, tc);
    }
  }
  out.push_back({Tok::Eof, "", line, col});
  return out;
}

const Token& TokenStream::expect(Tok k, std::string_view what) {
  if (!at(k)) {
    fail("expected " + std::string(what) + ", found " +
         (peek().kind == Tok::Eof ? std::string("end of input") : "'" + peek().text + "'"));
  }
  return next();
}

void TokenStream::expect_keyword(std::string_view kw) {
  if (!at_keyword(kw)) {
    fail("expected '" + std::string(kw) + "', found " +
         (peek().kind == Tok::Eof ? std::string("end of input") : "'" + peek().text + "'"));
  }
  next();
}

void TokenStream::fail(const std::string& msg) const { fail_at(peek(), msg); }

void TokenStream::fail_at(const Token& t, const std::string& msg) { throw ParseError(msg, t.line, t.column); }

}  // namespace cfsmkit::detail
