// Copyright 2026 The lindgauss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Recursive-descent parser and printer for the textual symbol notation.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (['*' | '/'] unary)*      juxtaposition multiplies
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' integer)?
//   primary := number | 'i' | variable | 'sqrt' '(' expr ')' | '(' expr ')'

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "lindgauss/symbols.hpp"

namespace lindgauss {

namespace {

class Parser {
 public:
  Parser(const std::string& text, Chart chart, int n) : text_(text), chart_(chart), n_(n) {}

  PolySymbol parse() {
    PolySymbol r = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw SymbolError("parse_symbol: " + what + " at offset " + std::to_string(pos_) + " in \"" +
                      text_ + "\"");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool starts_factor() {
    char c = peek();
    return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '(';
  }

  PolySymbol expr() {
    PolySymbol r = term();
    for (;;) {
      char c = peek();
      if (c == '+') {
        ++pos_;
        r = r + term();
      } else if (c == '-') {
        ++pos_;
        r = r - term();
      } else {
        return r;
      }
    }
  }

  PolySymbol term() {
    PolySymbol r = unary();
    for (;;) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        r = r * unary();
      } else if (c == '/') {
        ++pos_;
        PolySymbol d = unary();
        if (d.degree() > 0 || d.is_zero()) fail("division by a non-constant or zero");
        r = (Complex(1.0) / d.coefficient(Exponents(d.dimension(), 0))) * r;
      } else if (starts_factor()) {
        r = r * unary();
      } else {
        return r;
      }
    }
  }

  PolySymbol unary() {
    char c = peek();
    if (c == '-') {
      ++pos_;
      return -unary();
    }
    if (c == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  PolySymbol power() {
    PolySymbol base = primary();
    if (peek() != '^') return base;
    ++pos_;
    skip_space();
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be a non-negative integer");
    int e = std::atoi(text_.substr(start, pos_ - start).c_str());
    PolySymbol r = PolySymbol::constant(chart_, n_, 1.0);
    for (int k = 0; k < e; ++k) r = r * base;
    return r;
  }

  PolySymbol primary() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      PolySymbol r = expr();
      if (peek() != ')') fail("missing ')'");
      ++pos_;
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(c == '\0' ? "unexpected end of input" : "unexpected '" + std::string(1, c) + "'");
  }

  PolySymbol number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) fail("bad number");
    pos_ += static_cast<size_t>(end - begin);
    return PolySymbol::constant(chart_, n_, v);
  }

  PolySymbol identifier() {
    size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string id = text_.substr(start, pos_ - start);
    if (id == "i") return PolySymbol::constant(chart_, n_, Complex(0.0, 1.0));
    if (id == "sqrt") {
      if (peek() != '(') fail("sqrt needs parentheses");
      PolySymbol arg = primary();
      if (arg.degree() > 0) fail("sqrt of a non-constant");
      Complex v = arg.coefficient(Exponents(arg.dimension(), 0));
      return PolySymbol::constant(chart_, n_, std::sqrt(v));
    }
    int index = variable_index(id);
    if (index < 0) {
      pos_ = start;
      fail("unknown variable '" + id + "' for chart " + chart_name(chart_) + " with " +
           std::to_string(n_) + " mode(s)");
    }
    return PolySymbol::variable(chart_, n_, index);
  }

  // Splits "q12" into ("q", 12); bare names return mode 1 when n == 1.
  int indexed(const std::string& id, const std::string& stem, const std::string& suffix,
              int count) const {
    if (id.size() < stem.size() + suffix.size()) return -1;
    if (id.compare(0, stem.size(), stem) != 0) return -1;
    if (id.compare(id.size() - suffix.size(), suffix.size(), suffix) != 0) return -1;
    std::string digits = id.substr(stem.size(), id.size() - stem.size() - suffix.size());
    if (digits.empty()) return n_ == 1 && count == 1 ? 0 : -1;
    for (char d : digits) {
      if (!std::isdigit(static_cast<unsigned char>(d))) return -1;
    }
    int k = std::atoi(digits.c_str());
    return (k >= 1 && k <= count) ? k - 1 : -1;
  }

  int variable_index(const std::string& id) const {
    int k;
    switch (chart_) {
      case Chart::RealQP:
        if ((k = indexed(id, "q", "", n_)) >= 0) return k;
        if ((k = indexed(id, "p", "", n_)) >= 0) return n_ + k;
        break;
      case Chart::ComplexAAbar:
        if ((k = indexed(id, "a", "bar", n_)) >= 0) return n_ + k;
        if ((k = indexed(id, "a", "", n_)) >= 0) return k;
        break;
      case Chart::DoubledXY:
        if ((k = indexed(id, "x", "", 2 * n_)) >= 0) return k;
        if ((k = indexed(id, "y", "", 2 * n_)) >= 0) return 2 * n_ + k;
        break;
    }
    return -1;
  }

  const std::string& text_;
  Chart chart_;
  int n_;
  size_t pos_ = 0;
};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_coefficient(Complex c) {
  if (c.imag() == 0.0) return format_double(c.real());
  if (c.real() == 0.0) return "(" + format_double(c.imag()) + "i)";
  std::string im = format_double(c.imag());
  if (im[0] != '-') im = "+" + im;
  return "(" + format_double(c.real()) + im + "i)";
}

std::string variable_name(Chart chart, int n, int v) {
  switch (chart) {
    case Chart::RealQP:
      return (v < n ? "q" : "p") + std::to_string(v % n + 1);
    case Chart::ComplexAAbar:
      return v < n ? "a" + std::to_string(v + 1) : "a" + std::to_string(v - n + 1) + "bar";
    case Chart::DoubledXY:
      return (v < 2 * n ? "x" : "y") + std::to_string(v % (2 * n) + 1);
  }
  return "?";
}

}  // namespace

PolySymbol parse_symbol(const std::string& text, Chart chart, int num_modes) {
  if (num_modes <= 0) throw SymbolError("parse_symbol: number of modes must be positive");
  return Parser(text, chart, num_modes).parse();
}

std::string to_string(const PolySymbol& f) {
  if (f.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : f.terms()) {
    if (!first) out << " + ";
    first = false;
    out << format_coefficient(c);
    for (int v = 0; v < f.dimension(); ++v) {
      if (e[v] == 0) continue;
      out << '*' << variable_name(f.chart(), f.num_modes(), v);
      if (e[v] > 1) out << '^' << e[v];
    }
  }
  return out.str();
}

}  // namespace lindgauss
