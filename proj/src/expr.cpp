#include "expr.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace laxquad {

namespace {

NodePtr make_number(Rational r) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Number;
  n->exact = true;
  n->rat = r;
  return n;
}

NodePtr make_float(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Number;
  n->exact = false;
  n->flt = v;
  return n;
}

bool is_exact_const(const Node& n) {
  return n.kind == Node::Kind::Number && n.exact;
}

bool is_zero_const(const Node& n) {
  return n.kind == Node::Kind::Number &&
         (n.exact ? n.rat.is_zero() : n.flt == 0.0);
}

bool is_one_const(const Node& n) {
  return n.kind == Node::Kind::Number && n.exact && n.rat.is_one();
}

}  // namespace

Expr Expr::integer(long long v) { return Expr(make_number(Rational(v))); }
Expr Expr::rational(const Rational& r) { return Expr(make_number(r)); }
Expr Expr::real(double v) { return Expr(make_float(v)); }

Expr Expr::param(const std::string& name) {
  if (name.empty()) throw std::invalid_argument("empty parameter name");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Param;
  n->name = name;
  return Expr(n);
}

Expr Expr::variable(Var v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Variable;
  n->var = v;
  return Expr(n);
}

Expr Expr::add(const Expr& a, const Expr& b) {
  if (is_zero_const(a.node())) return b;
  if (is_zero_const(b.node())) return a;
  if (is_exact_const(a.node()) && is_exact_const(b.node())) {
    try {
      return rational(a.node().rat + b.node().rat);
    } catch (const ExactOverflow&) {
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Binary;
  n->bin = BinOp::Add;
  n->a = a.ptr();
  n->b = b.ptr();
  return Expr(n);
}

Expr Expr::sub(const Expr& a, const Expr& b) {
  if (is_zero_const(b.node())) return a;
  if (is_zero_const(a.node())) return neg(b);
  if (is_exact_const(a.node()) && is_exact_const(b.node())) {
    try {
      return rational(a.node().rat - b.node().rat);
    } catch (const ExactOverflow&) {
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Binary;
  n->bin = BinOp::Sub;
  n->a = a.ptr();
  n->b = b.ptr();
  return Expr(n);
}

Expr Expr::mul(const Expr& a, const Expr& b) {
  if (is_zero_const(a.node()) || is_zero_const(b.node())) return integer(0);
  if (is_one_const(a.node())) return b;
  if (is_one_const(b.node())) return a;
  if (is_exact_const(a.node()) && is_exact_const(b.node())) {
    try {
      return rational(a.node().rat * b.node().rat);
    } catch (const ExactOverflow&) {
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Binary;
  n->bin = BinOp::Mul;
  n->a = a.ptr();
  n->b = b.ptr();
  return Expr(n);
}

Expr Expr::div(const Expr& a, const Expr& b) {
  if (is_zero_const(a.node()) && !is_zero_const(b.node())) return integer(0);
  if (is_one_const(b.node())) return a;
  if (is_exact_const(a.node()) && is_exact_const(b.node()) &&
      !b.node().rat.is_zero()) {
    try {
      return rational(a.node().rat / b.node().rat);
    } catch (const ExactOverflow&) {
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Binary;
  n->bin = BinOp::Div;
  n->a = a.ptr();
  n->b = b.ptr();
  return Expr(n);
}

Expr Expr::neg(const Expr& a) {
  if (is_exact_const(a.node())) return rational(-a.node().rat);
  if (a.node().kind == Node::Kind::Number) return real(-a.node().flt);
  if (a.node().kind == Node::Kind::Unary && a.node().un == UnOp::Neg)
    return Expr(a.node().a);
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Unary;
  n->un = UnOp::Neg;
  n->a = a.ptr();
  return Expr(n);
}

Expr Expr::pow(const Expr& base, const Rational& exponent) {
  if (exponent.is_zero()) return integer(1);
  if (exponent.is_one()) return base;
  if (is_exact_const(base.node()) && exponent.is_integer()) {
    try {
      if (!(base.node().rat.is_zero() && exponent.num() < 0))
        return rational(base.node().rat.pow_int(exponent.num()));
    } catch (const ExactOverflow&) {
    } catch (const std::domain_error&) {
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Binary;
  n->bin = BinOp::Pow;
  n->a = base.ptr();
  n->b = make_number(exponent);
  return Expr(n);
}

Expr Expr::exp(const Expr& a) {
  if (is_zero_const(a.node())) return integer(1);
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Unary;
  n->un = UnOp::Exp;
  n->a = a.ptr();
  return Expr(n);
}

Expr Expr::ln(const Expr& a) {
  if (is_one_const(a.node())) return integer(0);
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Unary;
  n->un = UnOp::Ln;
  n->a = a.ptr();
  return Expr(n);
}

Expr Expr::sqrt(const Expr& a) {
  if (is_zero_const(a.node())) return integer(0);
  if (is_one_const(a.node())) return integer(1);
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Unary;
  n->un = UnOp::Sqrt;
  n->a = a.ptr();
  return Expr(n);
}

bool Expr::is_zero() const { return is_zero_const(*node_); }

namespace {

bool same_node(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Node::Kind::Number:
      if (a->exact != b->exact) return false;
      return a->exact ? a->rat == b->rat : a->flt == b->flt;
    case Node::Kind::Param:
      return a->name == b->name;
    case Node::Kind::Variable:
      return a->var == b->var;
    case Node::Kind::Unary:
      return a->un == b->un && same_node(a->a, b->a);
    case Node::Kind::Binary:
      return a->bin == b->bin && same_node(a->a, b->a) && same_node(a->b, b->b);
  }
  return false;
}

}  // namespace

bool Expr::same(const Expr& o) const { return same_node(node_, o.node_); }

namespace {

// Differentiation memoized over shared subtrees, so derivative graphs stay
// proportional to the input graph rather than to its unfolded tree.
struct Differ {
  Var v;
  std::unordered_map<const Node*, NodePtr> memo;

  Expr run(const NodePtr& node) {
    auto it = memo.find(node.get());
    if (it != memo.end()) return Expr(it->second);
    Expr result = derive(node);
    memo.emplace(node.get(), result.ptr());
    return result;
  }

  Expr derive(const NodePtr& np) {
    const Node& n = *np;
    switch (n.kind) {
      case Node::Kind::Number:
      case Node::Kind::Param:
        return Expr::integer(0);
      case Node::Kind::Variable:
        return Expr::integer(n.var == v ? 1 : 0);
      case Node::Kind::Unary: {
        Expr child(n.a);
        Expr dchild = run(n.a);
        switch (n.un) {
          case UnOp::Neg:
            return Expr::neg(dchild);
          case UnOp::Exp:
            return Expr::mul(Expr::exp(child), dchild);
          case UnOp::Ln:
            return Expr::div(dchild, child);
          case UnOp::Sqrt:
            return Expr::div(dchild,
                             Expr::mul(Expr::integer(2), Expr::sqrt(child)));
        }
        break;
      }
      case Node::Kind::Binary: {
        Expr a(n.a), b(n.b);
        switch (n.bin) {
          case BinOp::Add:
            return Expr::add(run(n.a), run(n.b));
          case BinOp::Sub:
            return Expr::sub(run(n.a), run(n.b));
          case BinOp::Mul:
            return Expr::add(Expr::mul(run(n.a), b), Expr::mul(a, run(n.b)));
          case BinOp::Div:
            return Expr::div(
                Expr::sub(Expr::mul(run(n.a), b), Expr::mul(a, run(n.b))),
                Expr::pow(b, Rational(2)));
          case BinOp::Pow: {
            // Exponent is an exact rational constant by construction.
            Rational r = n.b->rat;
            return Expr::mul(
                Expr::mul(Expr::rational(r), Expr::pow(a, r - Rational(1))),
                run(n.a));
          }
        }
        break;
      }
    }
    throw std::logic_error("malformed expression node");
  }
};

}  // namespace

Expr Expr::diff(Var v) const {
  Differ d{v, {}};
  return d.run(node_);
}

namespace {

struct RealEval {
  const EvalPoint& p;
  double guard;
  double scale = 0.0;
  std::unordered_map<const Node*, double> cache;

  void note(double v) {
    double a = std::fabs(v);
    if (a > scale) scale = a;
  }

  double run(const NodePtr& n) {
    auto it = cache.find(n.get());
    if (it != cache.end()) return it->second;
    double v = visit(n);
    if (!std::isfinite(v))
      throw GuardViolation("non-finite value", Expr(n).print_preview());
    note(v);
    cache.emplace(n.get(), v);
    return v;
  }

  double visit(const NodePtr& n) {
    switch (n->kind) {
      case Node::Kind::Number:
        return n->exact ? n->rat.to_double() : n->flt;
      case Node::Kind::Param: {
        if (!p.params)
          throw EvalError("unbound parameter '" + n->name + "'");
        auto it = p.params->find(n->name);
        if (it == p.params->end())
          throw EvalError("unbound parameter '" + n->name + "'");
        return it->second;
      }
      case Node::Kind::Variable:
        return n->var == Var::Z ? p.z : p.y;
      case Node::Kind::Unary: {
        double a = run(n->a);
        switch (n->un) {
          case UnOp::Neg:
            return -a;
          case UnOp::Exp:
            return std::exp(a);
          case UnOp::Ln:
            if (a < guard || a <= 0.0)
              throw GuardViolation("ln argument below guard",
                                   Expr(n->a).print_preview());
            return std::log(a);
          case UnOp::Sqrt:
            if (a < guard || a < 0.0)
              throw GuardViolation("sqrt argument below guard",
                                   Expr(n->a).print_preview());
            return std::sqrt(a);
        }
        break;
      }
      case Node::Kind::Binary: {
        double a = run(n->a);
        switch (n->bin) {
          case BinOp::Add:
            return a + run(n->b);
          case BinOp::Sub:
            return a - run(n->b);
          case BinOp::Mul:
            return a * run(n->b);
          case BinOp::Div: {
            double b = run(n->b);
            if (std::fabs(b) < guard || b == 0.0)
              throw GuardViolation("denominator below guard",
                                   Expr(n->b).print_preview());
            return a / b;
          }
          case BinOp::Pow: {
            Rational r = n->b->rat;
            if (r.is_integer()) {
              if (r.num() < 0 && (std::fabs(a) < guard || a == 0.0))
                throw GuardViolation("denominator below guard",
                                     Expr(n->a).print_preview());
              return std::pow(a, static_cast<double>(r.num()));
            }
            if (a < guard || a < 0.0)
              throw GuardViolation("fractional power base below guard",
                                   Expr(n->a).print_preview());
            return std::pow(a, r.to_double());
          }
        }
        break;
      }
    }
    throw std::logic_error("malformed expression node");
  }
};

struct ComplexEval {
  const EvalPoint& p;
  using C = std::complex<double>;
  std::unordered_map<const Node*, C> cache;

  C run(const NodePtr& n) {
    auto it = cache.find(n.get());
    if (it != cache.end()) return it->second;
    C v = visit(n);
    cache.emplace(n.get(), v);
    return v;
  }

  C visit(const NodePtr& n) {
    switch (n->kind) {
      case Node::Kind::Number:
        return n->exact ? C(n->rat.to_double()) : C(n->flt);
      case Node::Kind::Param: {
        if (!p.params) throw EvalError("unbound parameter '" + n->name + "'");
        auto it = p.params->find(n->name);
        if (it == p.params->end())
          throw EvalError("unbound parameter '" + n->name + "'");
        return C(it->second);
      }
      case Node::Kind::Variable:
        return C(n->var == Var::Z ? p.z : p.y);
      case Node::Kind::Unary: {
        C a = run(n->a);
        switch (n->un) {
          case UnOp::Neg:
            return -a;
          case UnOp::Exp:
            return std::exp(a);
          case UnOp::Ln:
            if (a == C(0.0)) throw EvalError("ln of zero");
            return std::log(a);
          case UnOp::Sqrt:
            return std::sqrt(a);
        }
        break;
      }
      case Node::Kind::Binary: {
        C a = run(n->a);
        switch (n->bin) {
          case BinOp::Add:
            return a + run(n->b);
          case BinOp::Sub:
            return a - run(n->b);
          case BinOp::Mul:
            return a * run(n->b);
          case BinOp::Div: {
            C b = run(n->b);
            if (b == C(0.0))
              throw GuardViolation("division by zero", Expr(n->b).print_preview());
            return a / b;
          }
          case BinOp::Pow: {
            Rational r = n->b->rat;
            if (r.is_integer()) {
              C out(1.0);
              long long k = r.num() < 0 ? -r.num() : r.num();
              C base = a;
              if (r.num() < 0) {
                if (a == C(0.0))
                  throw GuardViolation("division by zero", Expr(n->a).print_preview());
                base = C(1.0) / a;
              }
              while (k > 0) {
                if (k & 1) out *= base;
                base *= base;
                k >>= 1;
              }
              return out;
            }
            return std::pow(a, C(r.to_double()));
          }
        }
        break;
      }
    }
    throw std::logic_error("malformed expression node");
  }
};

}  // namespace

double Expr::eval(const EvalPoint& p, double guard, double* scale_out) const {
  RealEval ev{p, guard};
  double v = ev.run(node_);
  if (scale_out) *scale_out = ev.scale;
  return v;
}

std::complex<double> Expr::eval_complex(const EvalPoint& p) const {
  ComplexEval ev{p};
  return ev.run(node_);
}

// --- printing ------------------------------------------------------------

namespace {

// Precedence levels used by the canonical printer.  A node is parenthesised
// when its level is below the minimum its context requires, which is exactly
// what the parser needs to rebuild the same tree.
constexpr int kPrecAdd = 10;
constexpr int kPrecNeg = 15;
constexpr int kPrecMul = 20;
constexpr int kPrecPow = 30;
constexpr int kPrecAtom = 40;

std::string format_double(double v) {
  // Shortest form that round-trips and stays inside the grammar (no
  // exponent notation).
  for (int prec = 1; prec <= 17; ++prec) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    std::string s(buf);
    if (s.find('e') != std::string::npos || s.find('E') != std::string::npos)
      continue;
    if (std::strtod(s.c_str(), nullptr) == v) {
      if (s.find('.') == std::string::npos && s.find('n') == std::string::npos)
        s += ".0";
      return s;
    }
  }
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%.40f", v);
  return std::string(buf);
}

int node_prec(const Node& n) {
  switch (n.kind) {
    case Node::Kind::Number: {
      bool negative = n.exact ? n.rat.num() < 0 : n.flt < 0;
      if (negative) return kPrecNeg;
      if (n.exact && !n.rat.is_integer()) return kPrecMul;  // prints as p/q
      return kPrecAtom;
    }
    case Node::Kind::Param:
    case Node::Kind::Variable:
      return kPrecAtom;
    case Node::Kind::Unary:
      return n.un == UnOp::Neg ? kPrecNeg : kPrecAtom;
    case Node::Kind::Binary:
      switch (n.bin) {
        case BinOp::Add:
        case BinOp::Sub:
          return kPrecAdd;
        case BinOp::Mul:
        case BinOp::Div:
          return kPrecMul;
        case BinOp::Pow:
          return kPrecPow;
      }
  }
  return kPrecAtom;
}

void print_node(const NodePtr& n, int minprec, std::string& out) {
  int prec = node_prec(*n);
  bool parens = prec < minprec;
  if (parens) out += '(';
  switch (n->kind) {
    case Node::Kind::Number:
      out += n->exact ? n->rat.str() : format_double(n->flt);
      break;
    case Node::Kind::Param:
      out += n->name;
      break;
    case Node::Kind::Variable:
      out += n->var == Var::Z ? 'z' : 'y';
      break;
    case Node::Kind::Unary:
      switch (n->un) {
        case UnOp::Neg:
          // The grammar binds unary minus tighter than '*' and '/', so any
          // multiplicative child needs parentheses to survive a round trip.
          out += '-';
          print_node(n->a, kPrecMul + 1, out);
          break;
        case UnOp::Exp:
          out += "exp(";
          print_node(n->a, 0, out);
          out += ')';
          break;
        case UnOp::Ln:
          out += "ln(";
          print_node(n->a, 0, out);
          out += ')';
          break;
        case UnOp::Sqrt:
          out += "sqrt(";
          print_node(n->a, 0, out);
          out += ')';
          break;
      }
      break;
    case Node::Kind::Binary: {
      const char* op = nullptr;
      int lp = 0, rp = 0;
      switch (n->bin) {
        case BinOp::Add: op = "+"; lp = kPrecAdd; rp = kPrecAdd + 1; break;
        case BinOp::Sub: op = "-"; lp = kPrecAdd; rp = kPrecAdd + 1; break;
        case BinOp::Mul: op = "*"; lp = kPrecMul; rp = kPrecMul + 1; break;
        case BinOp::Div: op = "/"; lp = kPrecMul; rp = kPrecMul + 1; break;
        case BinOp::Pow: op = "^"; lp = kPrecPow + 1; rp = kPrecPow; break;
      }
      print_node(n->a, lp, out);
      out += op;
      print_node(n->b, rp, out);
      break;
    }
  }
  if (parens) out += ')';
}

void latex_node(const NodePtr& n, int minprec, std::string& out) {
  int prec = node_prec(*n);
  // \frac and function forms never need parentheses of their own.
  if (n->kind == Node::Kind::Binary && n->bin == BinOp::Div) prec = kPrecAtom;
  if (n->kind == Node::Kind::Unary && n->un != UnOp::Neg) prec = kPrecAtom;
  bool parens = prec < minprec;
  if (parens) out += "\\left(";
  switch (n->kind) {
    case Node::Kind::Number:
      if (n->exact && !n->rat.is_integer()) {
        out += "\\frac{" + std::to_string(n->rat.num()) + "}{" +
               std::to_string(n->rat.den()) + "}";
      } else {
        out += n->exact ? n->rat.str() : format_double(n->flt);
      }
      break;
    case Node::Kind::Param:
      // Greek-letter parameter names render as LaTeX commands.
      if (n->name == "alpha" || n->name == "beta" || n->name == "delta" ||
          n->name == "kappa" || n->name == "mu" || n->name == "nu" ||
          n->name == "lambda" || n->name == "gamma") {
        out += "\\" + n->name + " ";
      } else {
        out += n->name;
      }
      break;
    case Node::Kind::Variable:
      out += n->var == Var::Z ? 'z' : 'y';
      break;
    case Node::Kind::Unary:
      switch (n->un) {
        case UnOp::Neg:
          out += '-';
          latex_node(n->a, kPrecNeg + 1, out);
          break;
        case UnOp::Exp:
          out += "{\\rm e}^{";
          latex_node(n->a, 0, out);
          out += '}';
          break;
        case UnOp::Ln:
          out += "\\ln\\left(";
          latex_node(n->a, 0, out);
          out += "\\right)";
          break;
        case UnOp::Sqrt:
          out += "\\sqrt{";
          latex_node(n->a, 0, out);
          out += '}';
          break;
      }
      break;
    case Node::Kind::Binary:
      switch (n->bin) {
        case BinOp::Add:
          latex_node(n->a, kPrecAdd, out);
          out += '+';
          latex_node(n->b, kPrecAdd + 1, out);
          break;
        case BinOp::Sub:
          latex_node(n->a, kPrecAdd, out);
          out += '-';
          latex_node(n->b, kPrecAdd + 1, out);
          break;
        case BinOp::Mul:
          latex_node(n->a, kPrecMul, out);
          out += ' ';
          latex_node(n->b, kPrecMul + 1, out);
          break;
        case BinOp::Div:
          out += "\\frac{";
          latex_node(n->a, 0, out);
          out += "}{";
          latex_node(n->b, 0, out);
          out += '}';
          break;
        case BinOp::Pow:
          latex_node(n->a, kPrecPow + 1, out);
          out += "^{";
          latex_node(n->b, 0, out);
          out += '}';
          break;
      }
      break;
  }
  if (parens) out += "\\right)";
}

}  // namespace

std::string Expr::print() const {
  std::string out;
  print_node(node_, 0, out);
  return out;
}

namespace {

struct PrintOverflow {};

void print_node_capped(const NodePtr& n, int minprec, size_t cap,
                       std::string& out) {
  if (out.size() > cap) throw PrintOverflow{};
  size_t before = out.size();
  int prec = node_prec(*n);
  bool parens = prec < minprec;
  (void)before;
  if (parens) out += '(';
  switch (n->kind) {
    case Node::Kind::Number:
    case Node::Kind::Param:
    case Node::Kind::Variable:
      print_node(n, kPrecAtom, out);
      break;
    case Node::Kind::Unary:
      switch (n->un) {
        case UnOp::Neg:
          out += '-';
          print_node_capped(n->a, kPrecMul + 1, cap, out);
          break;
        case UnOp::Exp:
          out += "exp(";
          print_node_capped(n->a, 0, cap, out);
          out += ')';
          break;
        case UnOp::Ln:
          out += "ln(";
          print_node_capped(n->a, 0, cap, out);
          out += ')';
          break;
        case UnOp::Sqrt:
          out += "sqrt(";
          print_node_capped(n->a, 0, cap, out);
          out += ')';
          break;
      }
      break;
    case Node::Kind::Binary: {
      const char* op = nullptr;
      int lp = 0, rp = 0;
      switch (n->bin) {
        case BinOp::Add: op = "+"; lp = kPrecAdd; rp = kPrecAdd + 1; break;
        case BinOp::Sub: op = "-"; lp = kPrecAdd; rp = kPrecAdd + 1; break;
        case BinOp::Mul: op = "*"; lp = kPrecMul; rp = kPrecMul + 1; break;
        case BinOp::Div: op = "/"; lp = kPrecMul; rp = kPrecMul + 1; break;
        case BinOp::Pow: op = "^"; lp = kPrecPow + 1; rp = kPrecPow; break;
      }
      print_node_capped(n->a, lp, cap, out);
      out += op;
      print_node_capped(n->b, rp, cap, out);
      break;
    }
  }
  if (parens) out += ')';
}

}  // namespace

std::optional<std::string> Expr::print_bounded(size_t max_len) const {
  std::string out;
  try {
    print_node_capped(node_, 0, max_len, out);
  } catch (const PrintOverflow&) {
    return std::nullopt;
  }
  return out;
}

namespace {

void preview_node(const NodePtr& n, int minprec, size_t max_len,
                  std::string& out) {
  if (out.size() >= max_len) return;
  // Reuse the canonical printer on small nodes; recurse with the cap
  // otherwise.
  int prec = node_prec(*n);
  bool parens = prec < minprec;
  if (parens) out += '(';
  switch (n->kind) {
    case Node::Kind::Number:
    case Node::Kind::Param:
    case Node::Kind::Variable:
      print_node(n, kPrecAtom, out);
      break;
    case Node::Kind::Unary:
      switch (n->un) {
        case UnOp::Neg: out += '-'; break;
        case UnOp::Exp: out += "exp("; break;
        case UnOp::Ln: out += "ln("; break;
        case UnOp::Sqrt: out += "sqrt("; break;
      }
      preview_node(n->a, n->un == UnOp::Neg ? kPrecMul + 1 : 0, max_len, out);
      if (n->un != UnOp::Neg) out += ')';
      break;
    case Node::Kind::Binary: {
      const char* op = nullptr;
      int lp = 0, rp = 0;
      switch (n->bin) {
        case BinOp::Add: op = "+"; lp = kPrecAdd; rp = kPrecAdd + 1; break;
        case BinOp::Sub: op = "-"; lp = kPrecAdd; rp = kPrecAdd + 1; break;
        case BinOp::Mul: op = "*"; lp = kPrecMul; rp = kPrecMul + 1; break;
        case BinOp::Div: op = "/"; lp = kPrecMul; rp = kPrecMul + 1; break;
        case BinOp::Pow: op = "^"; lp = kPrecPow + 1; rp = kPrecPow; break;
      }
      preview_node(n->a, lp, max_len, out);
      if (out.size() < max_len) {
        out += op;
        preview_node(n->b, rp, max_len, out);
      }
      break;
    }
  }
  if (parens && out.size() < max_len) out += ')';
  if (out.size() >= max_len && out.substr(out.size() - 3) != "...")
    out += "...";
}

}  // namespace

std::string Expr::print_preview(size_t max_len) const {
  std::string out;
  preview_node(node_, 0, max_len, out);
  return out;
}

std::string Expr::to_latex() const {
  std::string out;
  latex_node(node_, 0, out);
  return out;
}

namespace {

bool rational_walk(const NodePtr& np,
                   std::unordered_map<const Node*, bool>& memo) {
  auto it = memo.find(np.get());
  if (it != memo.end()) return it->second;
  const Node& n = *np;
  bool out = false;
  switch (n.kind) {
    case Node::Kind::Number:
      out = n.exact;
      break;
    case Node::Kind::Param:
    case Node::Kind::Variable:
      out = true;
      break;
    case Node::Kind::Unary:
      out = n.un == UnOp::Neg && rational_walk(n.a, memo);
      break;
    case Node::Kind::Binary:
      if (n.bin == BinOp::Pow)
        out = n.b->rat.is_integer() && rational_walk(n.a, memo);
      else
        out = rational_walk(n.a, memo) && rational_walk(n.b, memo);
      break;
  }
  memo.emplace(np.get(), out);
  return out;
}

bool depends_walk(const NodePtr& np, Var v,
                  std::unordered_set<const Node*>& seen) {
  if (!seen.insert(np.get()).second) return false;
  const Node& n = *np;
  switch (n.kind) {
    case Node::Kind::Number:
    case Node::Kind::Param:
      return false;
    case Node::Kind::Variable:
      return n.var == v;
    case Node::Kind::Unary:
      return depends_walk(n.a, v, seen);
    case Node::Kind::Binary:
      return depends_walk(n.a, v, seen) || depends_walk(n.b, v, seen);
  }
  return false;
}

}  // namespace

bool Expr::is_rational_tree() const {
  std::unordered_map<const Node*, bool> memo;
  return rational_walk(node_, memo);
}

bool Expr::depends_on(Var v) const {
  std::unordered_set<const Node*> seen;
  return depends_walk(node_, v, seen);
}

namespace {

void count_nodes(const NodePtr& n, std::unordered_set<const Node*>& seen) {
  if (!seen.insert(n.get()).second) return;
  if (n->a) count_nodes(n->a, seen);
  if (n->b) count_nodes(n->b, seen);
}

}  // namespace

size_t Expr::node_count() const {
  std::unordered_set<const Node*> seen;
  count_nodes(node_, seen);
  return seen.size();
}

}  // namespace laxquad
