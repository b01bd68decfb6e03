#include <cctype>
#include <cstdlib>

#include "expr.hpp"

namespace laxquad {

namespace {

struct Parser {
  const std::string& text;
  size_t pos = 0;

  explicit Parser(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!accept(c)) throw ParseError(std::string("expected ") + what, pos);
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + parse_term();
      } else if (accept('-')) {
        lhs = lhs - parse_term();
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * parse_unary();
      } else if (accept('/')) {
        lhs = lhs / parse_unary();
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (accept('^')) {
      size_t at = pos;
      Expr exponent = parse_unary();  // right-associative
      if (!exponent.is_constant() || !exponent.node().exact)
        throw ParseError("non-rational exponent", at);
      return Expr::pow(base, exponent.node().rat);
    }
    return base;
  }

  Expr parse_atom() {
    skip_ws();
    if (pos >= text.size()) throw ParseError("unexpected end of input", pos);
    char c = text[pos];

    if (c == '(') {
      ++pos;
      Expr inner = parse_expr();
      expect(')', "')'");
      return inner;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_identifier();

    throw ParseError(std::string("unexpected character '") + c + "'", pos);
  }

  Expr parse_number() {
    size_t start = pos;
    long long mantissa = 0;
    int frac_digits = 0;
    bool any = false, seen_dot = false, overflow = false;
    while (pos < text.size()) {
      char c = text[pos];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        any = true;
        if (mantissa > (INT64_MAX - 9) / 10)
          overflow = true;
        else
          mantissa = mantissa * 10 + (c - '0');
        if (seen_dot) ++frac_digits;
        ++pos;
      } else if (c == '.' && !seen_dot) {
        seen_dot = true;
        ++pos;
      } else {
        break;
      }
    }
    if (!any) throw ParseError("malformed number", start);
    if (overflow || frac_digits > 18) {
      // Too many digits for exact form; keep the IEEE value.
      return Expr::real(std::strtod(text.substr(start, pos - start).c_str(),
                                    nullptr));
    }
    long long den = 1;
    for (int i = 0; i < frac_digits; ++i) den *= 10;
    return Expr::rational(Rational(mantissa, den));
  }

  Expr parse_identifier() {
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '_'))
      ++pos;
    std::string name = text.substr(start, pos - start);

    if (peek() == '(') {
      if (name == "exp" || name == "ln" || name == "sqrt") {
        expect('(', "'('");
        Expr arg = parse_expr();
        expect(')', "')'");
        if (name == "exp") return Expr::exp(arg);
        if (name == "ln") return Expr::ln(arg);
        return Expr::sqrt(arg);
      }
      throw ParseError("unknown function name '" + name + "'", start);
    }

    if (name == "z") return Expr::z();
    if (name == "y") return Expr::y();
    if (name == "exp" || name == "ln" || name == "sqrt")
      throw ParseError("reserved function name '" + name + "' used as value",
                       start);
    return Expr::param(name);
  }
};

}  // namespace

Expr parse(const std::string& text) {
  Parser p(text);
  Expr e = p.parse_expr();
  if (!p.eof()) throw ParseError("trailing input", p.pos);
  return e;
}

}  // namespace laxquad
