#include <cctype>
#include <charconv>
#include <cstdlib>
#include <optional>
#include <string>

#include "distdeg/errors.hpp"
#include "distdeg/polynomial.hpp"

namespace distdeg {

namespace {

// Recursive-descent parser:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' integer)?
//   primary := number | name | '(' expr ')'
class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> vars)
      : text_(text), vars_(vars) {}

  Polynomial parse() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    Polynomial p = expr();
    skip_space();
    if (pos_ < text_.size()) {
      throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
    }
    return p;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial acc = term();
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Polynomial term() {
    Polynomial acc = unary();
    for (;;) {
      if (accept('*')) {
        acc *= unary();
      } else if (accept('/')) {
        skip_space();
        const std::size_t at = pos_;
        Polynomial divisor = unary();
        if (!divisor.is_constant()) throw ParseError("division by a non-constant", at);
        const Complex d = divisor.coefficient(Exponent(vars_.size(), 0));
        if (d == Complex{}) throw ParseError("division by zero", at);
        acc *= 1.0 / d;
      } else {
        return acc;
      }
    }
  }

  Polynomial unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t at = pos_;
    std::size_t end = pos_;
    while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    // Reject signs, decimals and anything else that is not a plain positive integer.
    const bool followed_by_fraction =
        end < text_.size() && (text_[end] == '.' || text_[end] == 'e' || text_[end] == 'E');
    if (end == pos_ || followed_by_fraction) {
      throw ParseError("exponent must be a positive integer", at);
    }
    unsigned long value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + end, value);
    if (ec != std::errc{} || value == 0 || value > 1000) {
      throw ParseError("exponent must be a positive integer", at);
    }
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return pow(base, static_cast<std::uint32_t>(value));
  }

  Polynomial primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      const std::size_t open = pos_;
      ++pos_;
      Polynomial inner = expr();
      if (!accept(')')) throw ParseError("unbalanced parenthesis opened", open);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  Polynomial number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t exp_end = end + 1;
      if (exp_end < text_.size() && (text_[exp_end] == '+' || text_[exp_end] == '-')) ++exp_end;
      if (exp_end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp_end]))) {
        while (exp_end < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[exp_end]))) {
          ++exp_end;
        }
        end = exp_end;
      }
    }
    const std::string literal(text_.substr(start, end - start));
    if (literal == ".") throw ParseError("malformed number", start);
    char* parsed_end = nullptr;
    const double value = std::strtod(literal.c_str(), &parsed_end);
    if (parsed_end != literal.c_str() + literal.size()) throw ParseError("malformed number", start);
    pos_ = end;
    if (pos_ < text_.size() &&
        (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      throw ParseError("missing operator between number and name", pos_);
    }
    return Polynomial::constant(vars_.size(), value);
  }

  Polynomial name() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    while (end < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
      ++end;
    }
    const std::string_view ident = text_.substr(start, end - start);
    pos_ = end;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == ident) return Polynomial::variable(vars_.size(), i);
    }
    if (ident == "I") return Polynomial::constant(vars_.size(), Complex{0.0, 1.0});
    throw ParseError("unknown identifier '" + std::string(ident) + "'", start);
  }

  std::string_view text_;
  std::span<const std::string> vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, std::span<const std::string> vars) {
  return Parser(text, vars).parse();
}

}  // namespace distdeg
