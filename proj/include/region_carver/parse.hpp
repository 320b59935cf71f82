#pragma once

#include <cctype>
#include <charconv>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "region_carver/errors.hpp"
#include "region_carver/polynomial.hpp"

namespace region_carver {

namespace detail {

// Grammar:
//   expr    := ['+'|'-'] term (('+'|'-') term)*
//   term    := factor (('*' factor) | ('/' factor) | factor)*     -- juxtaposition only after a literal
//   factor  := '-' factor | power
//   power   := primary ['^' integer]
//   primary := number | identifier | '(' expr ')'
class ExpressionParser {
 public:
  ExpressionParser(std::string_view src, std::span<const std::string> vars) : src_(src), vars_(vars) {}

  Polynomial<double> parse() {
    skip_ws();
    if (at_end()) throw ParseError("empty expression", pos_);
    Polynomial<double> p = expr();
    skip_ws();
    if (!at_end()) throw ParseError(std::string("unexpected character '") + src_[pos_] + "'", pos_);
    return p;
  }

 private:
  struct Factor {
    Polynomial<double> poly;
    bool is_literal = false;
  };

  bool at_end() const { return pos_ >= src_.size(); }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return at_end() ? '\0' : src_[pos_];
  }

  Polynomial<double> expr() {
    Polynomial<double> acc(vars_.size());
    bool negate = false;
    if (char c = peek(); c == '+' || c == '-') {
      negate = c == '-';
      ++pos_;
    }
    acc = term();
    if (negate) acc = -acc;
    for (;;) {
      char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      Polynomial<double> t = term();
      if (c == '+') acc += t;
      else acc -= t;
    }
    return acc;
  }

  Polynomial<double> term() {
    Factor f = factor();
    Polynomial<double> acc = std::move(f.poly);
    bool last_literal = f.is_literal;
    for (;;) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        Factor g = factor();
        acc *= g.poly;
        last_literal = false;
      } else if (c == '/') {
        const std::size_t at = ++pos_;
        Factor g = factor();
        if (!g.poly.is_constant() || g.poly.is_zero())
          throw ParseError("division is only allowed by a nonzero constant", at);
        acc *= 1.0 / g.poly.coefficient(Monomial::one(vars_.size()));
        last_literal = g.is_literal;
      } else if (last_literal && (std::isalpha(static_cast<unsigned char>(c)) || c == '_')) {
        // "3x" and "3/2z^2": a literal directly followed by a variable
        Factor g = factor();
        acc *= g.poly;
        last_literal = false;
      } else {
        break;
      }
    }
    return acc;
  }

  Factor factor() {
    if (peek() == '-') {
      ++pos_;
      Factor f = factor();
      f.poly = -f.poly;
      f.is_literal = false;
      return f;
    }
    return power();
  }

  Factor power() {
    Factor base = primary();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      const std::size_t at = pos_;
      bool paren = false;
      if (!at_end() && src_[pos_] == '(') {
        paren = true;
        ++pos_;
        skip_ws();
      }
      if (!at_end() && src_[pos_] == '-') throw ParseError("negative exponent", at);
      if (at_end() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
        throw ParseError("expected a non-negative integer exponent", pos_);
      int e = 0;
      auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), e);
      if (ec != std::errc{}) throw ParseError("exponent out of range", pos_);
      pos_ = static_cast<std::size_t>(ptr - src_.data());
      if (paren) {
        if (peek() != ')') throw ParseError("expected ')'", pos_);
        ++pos_;
      }
      base.poly = pow(base.poly, e);
    }
    return base;
  }

  Factor primary() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Polynomial<double> inner = expr();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
      return {std::move(inner), false};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return {Polynomial<double>::constant(vars_.size(), number()), true};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
      const std::string_view name = src_.substr(start, pos_ - start);
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return {Polynomial<double>::variable(vars_.size(), i), false};
      throw ParseError("unknown variable '" + std::string(name) + "'", start);
    }
    if (c == '\0') throw ParseError("unexpected end of expression", pos_);
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  double number() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (!at_end() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc{} || ptr != src_.data() + pos_) throw ParseError("malformed number", start);
    return v;
  }

  std::string_view src_;
  std::span<const std::string> vars_;
  std::size_t pos_ = 0;
};

inline std::string format_coefficient(double c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", c);
  return buf;
}

}  // namespace detail

inline Polynomial<double> parse_polynomial(std::string_view src, std::span<const std::string> vars) {
  return detail::ExpressionParser(src, vars).parse();
}

inline Polynomial<double> parse_polynomial(std::string_view src, const std::vector<std::string>& vars) {
  return parse_polynomial(src, std::span<const std::string>(vars));
}

/// Canonical text form: terms in descending graded-lex order, coefficients
/// printed with enough digits to round-trip exactly.
inline std::string to_string(const Polynomial<double>& p, std::span<const std::string> vars) {
  if (vars.size() != p.nvars()) throw DimensionError("variable names do not match polynomial");
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    double mag = c;
    if (first) {
      if (c < 0) {
        out += "-";
        mag = -c;
      }
    } else {
      out += c < 0 ? " - " : " + ";
      mag = std::abs(c);
    }
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars[i];
      if (m[i] > 1) mono += "^" + std::to_string(m[i]);
    }
    if (mono.empty()) {
      out += detail::format_coefficient(mag);
    } else if (mag == 1.0) {
      out += mono;
    } else {
      out += detail::format_coefficient(mag) + "*" + mono;
    }
  }
  return out;
}

inline std::string to_string(const Polynomial<double>& p, const std::vector<std::string>& vars) {
  return to_string(p, std::span<const std::string>(vars));
}

inline std::vector<std::string> default_variable_names(std::size_t n, std::string_view stem = "x") {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) names.push_back(std::string(stem) + std::to_string(i));
  return names;
}

}  // namespace region_carver
