#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "vmz/error.hpp"
#include "vmz/fq.hpp"

namespace vmz {

// Recursive-descent parser for the shared expression grammar
//   expr  := term (('+'|'-') term)*
//   term  := unary (('*'|'/') unary)*
//   unary := ('-'|'+') unary | power
//   power := atom ('^' '-'? integer)?
//   atom  := integer | identifier | '(' expr ')' | '[' F_q element ']'
// The algebra policy Alg supplies the value type and the operations.
template <class Alg>
class ExprParser {
 public:
  using Value = typename Alg::Value;

  ExprParser(const Alg& alg, std::string_view text) : alg_(alg) {
    for (char ch : text) {
      if (!std::isspace(static_cast<unsigned char>(ch))) s_ += ch;
    }
  }

  Value parse() {
    if (s_.empty()) fail("empty expression");
    Value v = expr();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
  }
  bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }

  Value expr() {
    Value v = term();
    while (peek('+') || peek('-')) {
      const char op = s_[pos_++];
      Value r = term();
      v = op == '+' ? alg_.add(v, r) : alg_.sub(v, r);
    }
    return v;
  }

  Value term() {
    Value v = unary();
    while (peek('*') || peek('/')) {
      const char op = s_[pos_++];
      Value r = unary();
      v = op == '*' ? alg_.mul(v, r) : alg_.div(v, r);
    }
    return v;
  }

  Value unary() {
    if (peek('-')) {
      ++pos_;
      return alg_.neg(unary());
    }
    if (peek('+')) {
      ++pos_;
      return unary();
    }
    return power();
  }

  Value power() {
    Value v = atom();
    if (peek('^')) {
      ++pos_;
      bool negative = false;
      if (peek('-')) {
        negative = true;
        ++pos_;
      }
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        fail("expected integer exponent");
      }
      std::int64_t n = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        n = n * 10 + (s_[pos_++] - '0');
        if (n > (std::int64_t{1} << 40)) fail("exponent too large");
      }
      v = alg_.pow(v, negative ? -n : n);
    }
    return v;
  }

  Value atom() {
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Value v = expr();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return v;
    }
    if (c == '[') {
      const std::size_t close = s_.find(']', pos_);
      if (close == std::string::npos) fail("expected ']'");
      const Code code = alg_.ctx().parse(std::string_view(s_).substr(pos_ + 1, close - pos_ - 1));
      pos_ = close + 1;
      return alg_.from_fq(code);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::int64_t n = 0;
      const std::int64_t p = alg_.ctx().p();
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        n = (n * 10 + (s_[pos_++] - '0')) % p;
      }
      return alg_.from_fq(alg_.ctx().from_int(n));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        name += s_[pos_++];
      }
      if (name == "x") return alg_.from_fq(alg_.ctx().generator());
      return alg_.symbol(name);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const Alg& alg_;
  std::string s_;
  std::size_t pos_ = 0;
};

template <class Alg>
typename Alg::Value parse_expression(const Alg& alg, std::string_view text) {
  return ExprParser<Alg>(alg, text).parse();
}

}  // namespace vmz
