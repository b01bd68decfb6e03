#include "polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace laxquad {

namespace {

Poly::Monomial padded(const Poly::Monomial& m, size_t nvars) {
  Poly::Monomial out = m;
  out.resize(nvars, 0);
  return out;
}

}  // namespace

Poly Poly::constant(const Coeff& c, size_t nvars) {
  Poly p;
  p.nvars_ = nvars;
  if (!c.is_zero()) p.terms_[Monomial(nvars, 0)] = c;
  return p;
}

Poly Poly::variable(size_t idx, size_t nvars) {
  Poly p;
  p.nvars_ = nvars;
  Monomial m(nvars, 0);
  m[idx] = 1;
  p.terms_[m] = Coeff(1);
  return p;
}

void Poly::add_term(const Monomial& m, const Coeff& c) {
  if (c.is_zero()) return;
  Monomial key = padded(m, nvars_);
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly Poly::padded_to(size_t nvars) const {
  Poly out;
  out.nvars_ = nvars;
  for (const auto& [m, c] : terms_) out.terms_[padded(m, nvars)] = c;
  return out;
}

Poly Poly::operator-() const {
  Poly out;
  out.nvars_ = nvars_;
  for (const auto& [m, c] : terms_) out.terms_[m] = -c;
  return out;
}

Poly operator+(const Poly& a, const Poly& b) {
  size_t nv = std::max(a.nvars_, b.nvars_);
  Poly out = a.padded_to(nv);
  for (const auto& [m, c] : b.terms_) out.add_term(m, c);
  return out;
}

Poly operator-(const Poly& a, const Poly& b) {
  size_t nv = std::max(a.nvars_, b.nvars_);
  Poly out = a.padded_to(nv);
  for (const auto& [m, c] : b.terms_) out.add_term(m, -c);
  return out;
}

Poly operator*(const Poly& a, const Poly& b) {
  size_t nv = std::max(a.nvars_, b.nvars_);
  Poly out;
  out.set_nvars(nv);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Poly::Monomial m(nv, 0);
      for (size_t i = 0; i < ma.size(); ++i) m[i] += ma[i];
      for (size_t i = 0; i < mb.size(); ++i) m[i] += mb[i];
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

Poly Poly::pow_int(long long k) const {
  if (k < 0) throw std::domain_error("negative polynomial power");
  Poly out = Poly::constant(Coeff(1), nvars_);
  Poly base = *this;
  while (k > 0) {
    if (k & 1) out = out * base;
    if (k > 1) base = base * base;
    k >>= 1;
  }
  return out;
}

int Poly::degree_in(size_t var) const {
  int deg = 0;
  for (const auto& [m, c] : terms_)
    if (var < m.size()) deg = std::max(deg, m[var]);
  return deg;
}

bool Poly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() != 1) return false;
  for (int e : terms_.begin()->first)
    if (e != 0) return false;
  return true;
}

namespace {

std::pair<Poly::Monomial, Poly::Coeff> leading(const Poly& p) {
  auto it = p.terms().rbegin();
  return {it->first, it->second};
}

bool mono_divides(const Poly::Monomial& a, const Poly::Monomial& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > (i < b.size() ? b[i] : 0)) return false;
  return true;
}

Poly::Monomial mono_div(const Poly::Monomial& b, const Poly::Monomial& a,
                        size_t nvars) {
  Poly::Monomial out(nvars, 0);
  for (size_t i = 0; i < nvars; ++i)
    out[i] = (i < b.size() ? b[i] : 0) - (i < a.size() ? a[i] : 0);
  return out;
}

bool leading_lt(const Poly& a, const Poly& b) {
  // a's leading monomial strictly below b's; zero counts as smallest.
  if (a.is_zero()) return !b.is_zero();
  if (b.is_zero()) return false;
  return leading(a).first < leading(b).first;
}

}  // namespace

Poly::Monomial Poly::content_monomial() const {
  Monomial content(nvars_, 0);
  bool first = true;
  for (const auto& [m, c] : terms_) {
    for (size_t i = 0; i < nvars_; ++i) {
      int e = i < m.size() ? m[i] : 0;
      content[i] = first ? e : std::min(content[i], e);
    }
    first = false;
  }
  return content;
}

Poly Poly::divided_by_monomial(const Monomial& m) const {
  Poly out;
  out.set_nvars(nvars_);
  for (const auto& [mm, c] : terms_) {
    Monomial k = padded(mm, nvars_);
    for (size_t i = 0; i < nvars_ && i < m.size(); ++i) k[i] -= m[i];
    out.terms_[k] = c;
  }
  return out;
}

std::optional<Poly> Poly::try_divide(const Poly& num, const Poly& den) {
  if (den.is_zero()) return std::nullopt;
  size_t nvars = std::max(num.nvars_, den.nvars_);
  Poly rem = num.padded_to(nvars);
  Poly d = den.padded_to(nvars);
  Poly quot;
  quot.set_nvars(nvars);
  auto [dlm, dlc] = leading(d);
  size_t limit = num.term_count() * (den.term_count() + 2) + 64;
  while (!rem.is_zero()) {
    if (limit-- == 0) return std::nullopt;
    auto [rlm, rlc] = leading(rem);
    if (!mono_divides(dlm, rlm)) return std::nullopt;
    Poly t;
    t.set_nvars(nvars);
    t.add_term(mono_div(rlm, dlm, nvars), rlc / dlc);
    quot = quot + t;
    rem = rem - t * d;
  }
  return quot;
}

std::optional<BigInt> bigint_sqrt(const BigInt& v) {
  if (v.negative()) return std::nullopt;
  if (v.is_zero()) return BigInt(0);
  // Newton iteration seeded from the double value.
  double d = v.to_double();
  BigInt x(static_cast<long long>(std::sqrt(d) + 1));
  for (int i = 0; i < 64; ++i) {
    BigInt nx = (x + v / x) / BigInt(2);
    if (BigInt::cmp_mag(nx, x) >= 0) break;
    x = nx;
  }
  for (int d2 = -2; d2 <= 2; ++d2) {
    BigInt cand = x + BigInt(d2);
    if (!cand.negative() && cand * cand == v) return cand;
  }
  return std::nullopt;
}

std::optional<Poly> Poly::sqrt_exact() const {
  if (is_zero()) return Poly::constant(Coeff(0), nvars_);
  auto [lm, lc] = leading(*this);
  Monomial half(nvars_, 0);
  for (size_t i = 0; i < lm.size(); ++i) {
    if (lm[i] % 2) return std::nullopt;
    half[i] = lm[i] / 2;
  }
  if (lc.num().negative()) return std::nullopt;
  auto sn = bigint_sqrt(lc.num());
  auto sd = bigint_sqrt(lc.den());
  if (!sn || !sd) return std::nullopt;
  Coeff root_lead(*sn, *sd);

  Poly root;
  root.set_nvars(nvars_);
  root.add_term(half, root_lead);
  Poly rem = *this - root * root;
  size_t limit = term_count() * 4 + 32;
  while (!rem.is_zero()) {
    if (limit-- == 0) return std::nullopt;
    auto [rm, rc] = leading(rem);
    if (!mono_divides(half, rm)) return std::nullopt;
    Poly t;
    t.set_nvars(nvars_);
    t.add_term(mono_div(rm, half, nvars_), rc / (Coeff(2) * root_lead));
    Poly next = root + t;
    Poly nrem = *this - next * next;
    if (!leading_lt(nrem, rem)) return std::nullopt;
    root = next;
    rem = nrem;
  }
  return root;
}

Expr Poly::to_expr(const VarTable& vars) const {
  if (is_zero()) return Expr::integer(0);
  Expr out = Expr::integer(0);
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    Expr term = Expr::rational(c.to_rational());
    bool coeff_only = true;
    for (size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      Expr v = i == 0   ? Expr::z()
               : i == 1 ? Expr::y()
                        : Expr::param(vars.names[i]);
      Expr p = m[i] == 1 ? v : Expr::pow(v, Rational(m[i]));
      term = (coeff_only && c.is_one()) ? p : Expr::mul(term, p);
      coeff_only = false;
    }
    out = first ? term : Expr::add(out, term);
    first = false;
  }
  return out;
}

namespace {

struct PolyFraction {
  Poly num, den;
};

void spend(size_t& budget, size_t cost) {
  if (cost > budget) throw ExactOverflow();
  budget -= cost;
}

struct ConvertCtx {
  VarTable& vars;
  size_t& budget;
  std::map<const Node*, PolyFraction> memo;
};

PolyFraction convert_impl(const NodePtr& n, ConvertCtx& ctx);

// Shared subtrees convert once; machine-built expressions are graphs.
PolyFraction convert(const NodePtr& n, ConvertCtx& ctx) {
  auto it = ctx.memo.find(n.get());
  if (it != ctx.memo.end()) return it->second;
  PolyFraction out = convert_impl(n, ctx);
  ctx.memo.emplace(n.get(), out);
  return out;
}

PolyFraction convert_impl(const NodePtr& n, ConvertCtx& ctx) {
  VarTable& vars = ctx.vars;
  size_t& budget = ctx.budget;
  spend(budget, 1);
  switch (n->kind) {
    case Node::Kind::Number: {
      if (!n->exact) throw NotRational();
      size_t nv = vars.names.size();
      return {Poly::constant(Poly::Coeff(n->rat), nv),
              Poly::constant(Poly::Coeff(1), nv)};
    }
    case Node::Kind::Param: {
      size_t idx = vars.index_of(n->name);
      size_t nv = vars.names.size();
      return {Poly::variable(idx, nv), Poly::constant(Poly::Coeff(1), nv)};
    }
    case Node::Kind::Variable: {
      size_t nv = vars.names.size();
      return {Poly::variable(n->var == Var::Z ? 0 : 1, nv),
              Poly::constant(Poly::Coeff(1), nv)};
    }
    case Node::Kind::Unary: {
      if (n->un != UnOp::Neg) throw NotRational();
      PolyFraction a = convert(n->a, ctx);
      return {-a.num, a.den};
    }
    case Node::Kind::Binary: {
      if (n->bin == BinOp::Pow) {
        if (!n->b->rat.is_integer()) throw NotRational();
        PolyFraction a = convert(n->a, ctx);
        long long k = n->b->rat.num();
        bool invert = k < 0;
        if (invert) k = -k;
        if (k > 64) throw ExactOverflow();
        // Pre-charge with a geometric size estimate so oversized powers are
        // refused before the work is done.
        double est = 1.0;
        double base_sz = static_cast<double>(a.num.term_count() +
                                             a.den.term_count() + 1);
        for (long long i = 0; i < k && est < 1e9; ++i) est *= base_sz;
        spend(budget, est > 1e8 ? static_cast<size_t>(budget) + 1
                                : static_cast<size_t>(est) + 1);
        PolyFraction out{a.num.pow_int(k), a.den.pow_int(k)};
        if (invert) {
          if (out.num.is_zero()) throw NotRational();
          std::swap(out.num, out.den);
        }
        return out;
      }
      PolyFraction a = convert(n->a, ctx);
      PolyFraction b = convert(n->b, ctx);
      // Pre-charge by the work the cross products imply.
      spend(budget, a.num.term_count() * b.den.term_count() +
                        b.num.term_count() * a.den.term_count() +
                        a.den.term_count() * b.den.term_count() +
                        a.num.term_count() * b.num.term_count() + 1);
      PolyFraction out;
      switch (n->bin) {
        case BinOp::Add:
          out = {a.num * b.den + b.num * a.den, a.den * b.den};
          break;
        case BinOp::Sub:
          out = {a.num * b.den - b.num * a.den, a.den * b.den};
          break;
        case BinOp::Mul:
          out = {a.num * b.num, a.den * b.den};
          break;
        case BinOp::Div:
          if (b.num.is_zero()) throw NotRational();
          out = {a.num * b.den, a.den * b.num};
          break;
        default:
          throw NotRational();
      }
      return out;
    }
  }
  throw NotRational();
}

}  // namespace

RationalForm to_rational_form(const Expr& e, size_t node_budget) {
  VarTable vars;
  size_t budget = node_budget;
  ConvertCtx ctx{vars, budget, {}};
  PolyFraction f = convert(e.ptr(), ctx);
  size_t nv = vars.names.size();
  Poly num = f.num.padded_to(nv);
  Poly den = f.den.padded_to(nv);

  if (den.is_zero()) throw NotRational();
  if (num.is_zero()) return {num, Poly::constant(Poly::Coeff(1), nv), vars};

  // Split off monomial contents, cancel the shared part, then try exact
  // division between the primitive parts in either direction.
  {
    Poly::Monomial cn = num.content_monomial();
    Poly::Monomial cd = den.content_monomial();
    Poly nhat = num.divided_by_monomial(cn);
    Poly dhat = den.divided_by_monomial(cd);
    for (size_t i = 0; i < nv; ++i) {
      int m = std::min(i < cn.size() ? cn[i] : 0, i < cd.size() ? cd[i] : 0);
      if (i < cn.size()) cn[i] -= m;
      if (i < cd.size()) cd[i] -= m;
    }
    if (auto q = Poly::try_divide(nhat, dhat)) {
      nhat = *q;
      dhat = Poly::constant(Poly::Coeff(1), nv);
    } else if (auto qd = Poly::try_divide(dhat, nhat)) {
      nhat = Poly::constant(Poly::Coeff(1), nv);
      dhat = *qd;
    }
    Poly cnum, cden;
    cnum.set_nvars(nv);
    cden.set_nvars(nv);
    cnum.add_term(cn, Poly::Coeff(1));
    cden.add_term(cd, Poly::Coeff(1));
    num = cnum * nhat;
    den = cden * dhat;
  }

  // Canonical scaling: denominator's leading coefficient becomes 1.
  Poly::Coeff lead = den.terms().rbegin()->second;
  if (!lead.is_one()) {
    Poly scale = Poly::constant(Poly::Coeff(1) / lead, nv);
    num = num * scale;
    den = den * scale;
  }
  return {num, den, vars};
}

NormalizedRational normalize_rational(const Expr& e) {
  try {
    RationalForm f = to_rational_form(e);
    if (f.num.is_zero()) return {Expr::integer(0), true};
    Expr num = f.num.to_expr(f.vars);
    if (f.den.is_constant()) return {num, true};
    return {Expr::div(num, f.den.to_expr(f.vars)), true};
  } catch (const NotRational&) {
    return {e, false};
  } catch (const ExactOverflow&) {
    return {e, false};
  }
}

}  // namespace laxquad
