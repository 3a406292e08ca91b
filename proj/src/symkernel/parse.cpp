#include "cdgkit/symkernel/parse.hpp"

#include <cctype>
#include <string>

#include "cdgkit/errors.hpp"

namespace cdg::sym {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ParamPoly parse() {
    ParamPoly value = expression();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return value;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ParamPoly expression() {
    ParamPoly value = term();
    for (;;) {
      if (accept('+')) {
        value += term();
      } else if (accept('-')) {
        value -= term();
      } else {
        return value;
      }
    }
  }

  ParamPoly term() {
    ParamPoly value = unary();
    for (;;) {
      if (accept('*')) {
        value *= unary();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        ParamPoly divisor = unary();
        if (!divisor.is_constant() || divisor.is_zero()) {
          pos_ = at;
          fail("division by a non-constant or zero");
        }
        value *= divisor.constant_value().inverse();
      } else {
        return value;
      }
    }
  }

  ParamPoly unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  ParamPoly power() {
    ParamPoly base = atom();
    if (!accept('^')) return base;
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    return pow(base, static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start)))));
  }

  ParamPoly atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ParamPoly inner = expression();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return ParamPoly(GaussianRational(Rational(std::string(text_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "i") return ParamPoly(GaussianRational::i());
      if (auto s = symbol_from_name(name)) return ParamPoly::symbol(*s);
      pos_ = start;
      fail("unknown symbol '" + std::string(name) + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

ParamPoly parse_param_poly(std::string_view text) { return Parser(text).parse(); }

}  // namespace cdg::sym
