#include "qpb/scalar.hpp"

#include <cctype>
#include <utility>

#include "qpb/errors.hpp"

namespace qpb {

// ---------------------------------------------------------------- GaussRat

GaussRat GaussRat::inv() const {
  if (is_zero()) throw DivisionByZero();
  if (sgn(im) == 0) return GaussRat(mpq_class(1 / re));
  mpq_class n = re * re + im * im;
  return {re / n, -im / n};
}

GaussRat operator/(const GaussRat& a, const GaussRat& b) {
  if (sgn(b.im) == 0) {
    if (sgn(b.re) == 0) throw DivisionByZero();
    return {a.re / b.re, a.im / b.re};
  }
  return a * b.inv();
}

std::string GaussRat::str() const {
  if (sgn(im) == 0) return re.get_str();
  std::string ipart;
  if (im == 1) {
    ipart = "i";
  } else if (im == -1) {
    ipart = "-i";
  } else {
    ipart = im.get_str() + "*i";
  }
  if (sgn(re) == 0) return ipart;
  std::string s = "(" + re.get_str();
  if (ipart[0] != '-') s += "+";
  return s + ipart + ")";
}

// ---------------------------------------------------------------- polynomials

namespace poly {

void trim(Poly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

Poly add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()));
  for (size_t k = 0; k < r.size(); ++k) {
    if (k < a.size() && k < b.size()) {
      r[k] = a[k] + b[k];
    } else if (k < a.size()) {
      r[k] = a[k];
    } else {
      r[k] = b[k];
    }
  }
  trim(r);
  return r;
}

Poly sub(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()));
  for (size_t k = 0; k < r.size(); ++k) {
    if (k < a.size() && k < b.size()) {
      r[k] = a[k] - b[k];
    } else if (k < a.size()) {
      r[k] = a[k];
    } else {
      r[k] = -b[k];
    }
  }
  trim(r);
  return r;
}

Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1);
  for (size_t x = 0; x < a.size(); ++x) {
    if (a[x].is_zero()) continue;
    for (size_t y = 0; y < b.size(); ++y) {
      if (b[y].is_zero()) continue;
      r[x + y] += a[x] * b[y];
    }
  }
  trim(r);
  return r;
}

Poly scale(const Poly& a, const Scalar& s) {
  if (s.is_zero()) return {};
  if (s.is_one()) return a;
  Poly r(a.size());
  for (size_t k = 0; k < a.size(); ++k) r[k] = a[k] * s;
  trim(r);
  return r;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.empty()) throw DivisionByZero();
  if (a.size() < b.size()) return {{}, a};
  Poly rem = a;
  Poly q(a.size() - b.size() + 1);
  Scalar lead_inv = b.back().inv();
  while (!rem.empty() && rem.size() >= b.size()) {
    size_t shift = rem.size() - b.size();
    Scalar c = rem.back() * lead_inv;
    q[shift] = c;
    for (size_t k = 0; k < b.size(); ++k) rem[shift + k] -= c * b[k];
    rem.pop_back();  // leading term cancels exactly
    trim(rem);
  }
  trim(q);
  return {q, rem};
}

Poly monic(const Poly& a) {
  if (a.empty() || a.back().is_one()) return a;
  return scale(a, a.back().inv());
}

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a;
  Poly y = b;
  if (x.size() < y.size()) std::swap(x, y);
  while (!y.empty()) {
    if (y.size() == 1) return {Scalar(1)};
    Poly r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return monic(x);
}

bool is_one(const Poly& p) { return p.size() == 1 && p[0].is_one(); }

Scalar eval(const Poly& p, const Scalar& x) {
  Scalar acc;
  for (size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
  return acc;
}

Poly derivative(const Poly& p) {
  if (p.size() <= 1) return {};
  Poly r(p.size() - 1);
  for (size_t k = 1; k < p.size(); ++k) r[k - 1] = p[k] * Scalar(static_cast<long>(k));
  trim(r);
  return r;
}

namespace {
bool needs_parens_as_factor(const Scalar& c) {
  if (c.is_const()) {
    const GaussRat& g = c.constant();
    return sgn(g.re) != 0 && sgn(g.im) != 0;  // str() already parenthesizes those
  }
  return true;
}

// True when the outermost parentheses enclose the whole string.
bool fully_wrapped(const std::string& s) {
  if (s.empty() || s.front() != '(') return false;
  int depth = 0;
  for (size_t k = 0; k < s.size(); ++k) {
    if (s[k] == '(') ++depth;
    if (s[k] == ')' && --depth == 0) return k + 1 == s.size();
  }
  return false;
}
}  // namespace

std::string str(const Poly& p, int v) {
  if (p.empty()) return "0";
  std::string out;
  std::string name = var_name(v);
  for (size_t k = 0; k < p.size(); ++k) {
    const Scalar& c = p[k];
    if (c.is_zero()) continue;
    std::string term;
    std::string mono = k == 0 ? "" : (k == 1 ? name : name + "^" + std::to_string(k));
    if (k == 0) {
      term = c.str();
    } else if (c.is_one()) {
      term = mono;
    } else if (c == Scalar(-1)) {
      term = "-" + mono;
    } else {
      std::string cs = c.str();
      if (needs_parens_as_factor(c) && !fully_wrapped(cs)) cs = "(" + cs + ")";
      term = cs + "*" + mono;
    }
    if (out.empty()) {
      out = term;
    } else if (term[0] == '-') {
      out += term;
    } else {
      out += "+" + term;
    }
  }
  return out;
}

}  // namespace poly

// ---------------------------------------------------------------- Scalar

using Poly = Scalar::Poly;

std::string var_name(int v) {
  switch (v) {
    case kMu:
      return "mu";
    case kLambda:
      return "lambda";
    case kT:
      return "t";
    default:
      return "?";
  }
}

Scalar Scalar::var(int v) {
  if (v < kMu || v > kT) throw DomainMismatch("unknown variable index " + std::to_string(v));
  return make(v, {Scalar(0), Scalar(1)}, {Scalar(1)});
}

Scalar Scalar::make(int v, Poly num, Poly den) {
  if (num.empty()) return {};
  if (den.size() == 1 && num.size() == 1) return num[0];  // den is monic, hence 1
  Scalar s;
  s.v_ = v;
  s.f_ = std::make_shared<Frac>(Frac{std::move(num), std::move(den)});
  return s;
}

Scalar Scalar::fraction(int v, Poly num, Poly den) {
  poly::trim(num);
  poly::trim(den);
  if (den.empty()) throw DivisionByZero();
  if (num.empty()) return {};
  if (den.size() > 1 && num.size() > 1) {
    Poly g = poly::gcd(num, den);
    if (!poly::is_one(g)) {
      num = poly::divmod(num, g).first;
      den = poly::divmod(den, g).first;
    }
  }
  if (!den.back().is_one()) {
    Scalar li = den.back().inv();
    num = poly::scale(num, li);
    den = poly::scale(den, li);
  }
  return make(v, std::move(num), std::move(den));
}

const Scalar::Poly& Scalar::num() const {
  if (!f_) throw DomainMismatch("num() on a constant");
  return f_->num;
}

const Scalar::Poly& Scalar::den() const {
  if (!f_) throw DomainMismatch("den() on a constant");
  return f_->den;
}

bool Scalar::depends_on(int v) const {
  if (v_ < v) return false;
  if (v_ == v) return true;
  for (const auto& c : f_->num)
    if (c.depends_on(v)) return true;
  for (const auto& c : f_->den)
    if (c.depends_on(v)) return true;
  return false;
}

Scalar Scalar::operator-() const {
  if (v_ == kConst) return Scalar(-c_);
  Poly n(f_->num.size());
  for (size_t k = 0; k < n.size(); ++k) n[k] = -f_->num[k];
  return make(v_, std::move(n), f_->den);
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.v_ == kConst && b.v_ == kConst) return Scalar(a.c_ + b.c_);
  if (a.v_ != b.v_) {
    const Scalar& hi = a.v_ > b.v_ ? a : b;
    const Scalar& lo = a.v_ > b.v_ ? b : a;
    Poly n = poly::add(hi.f_->num, poly::scale(hi.f_->den, lo));
    return Scalar::make(hi.v_, std::move(n), hi.f_->den);
  }
  const int v = a.v_;
  const Poly& da = a.f_->den;
  const Poly& db = b.f_->den;
  if (poly::is_one(da) && poly::is_one(db)) {
    Poly n = poly::add(a.f_->num, b.f_->num);
    return Scalar::make(v, std::move(n), {Scalar(1)});
  }
  if (da.size() == db.size() && std::equal(da.begin(), da.end(), db.begin())) {
    return Scalar::fraction(v, poly::add(a.f_->num, b.f_->num), da);
  }
  if (poly::is_one(db)) {
    return Scalar::make(v, poly::add(a.f_->num, poly::mul(b.f_->num, da)), da);
  }
  if (poly::is_one(da)) {
    return Scalar::make(v, poly::add(poly::mul(a.f_->num, db), b.f_->num), db);
  }
  Poly g = poly::gcd(da, db);
  if (poly::is_one(g)) {
    Poly n = poly::add(poly::mul(a.f_->num, db), poly::mul(b.f_->num, da));
    return Scalar::fraction(v, std::move(n), poly::mul(da, db));
  }
  Poly da_g = poly::divmod(da, g).first;
  Poly db_g = poly::divmod(db, g).first;
  Poly n = poly::add(poly::mul(a.f_->num, db_g), poly::mul(b.f_->num, da_g));
  return Scalar::fraction(v, std::move(n), poly::mul(da_g, db));
}

Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (a.v_ == kConst && b.v_ == kConst) return Scalar(a.c_ * b.c_);
  if (a.v_ != b.v_) {
    const Scalar& hi = a.v_ > b.v_ ? a : b;
    const Scalar& lo = a.v_ > b.v_ ? b : a;
    return Scalar::make(hi.v_, poly::scale(hi.f_->num, lo), hi.f_->den);
  }
  const int v = a.v_;
  const Poly& na = a.f_->num;
  const Poly& nb = b.f_->num;
  const Poly& da = a.f_->den;
  const Poly& db = b.f_->den;
  if (poly::is_one(da) && poly::is_one(db)) return Scalar::make(v, poly::mul(na, nb), {Scalar(1)});
  Poly g1 = poly::is_one(db) ? Poly{Scalar(1)} : poly::gcd(na, db);
  Poly g2 = poly::is_one(da) ? Poly{Scalar(1)} : poly::gcd(nb, da);
  Poly n1 = poly::is_one(g1) ? na : poly::divmod(na, g1).first;
  Poly d2 = poly::is_one(g1) ? db : poly::divmod(db, g1).first;
  Poly n2 = poly::is_one(g2) ? nb : poly::divmod(nb, g2).first;
  Poly d1 = poly::is_one(g2) ? da : poly::divmod(da, g2).first;
  return Scalar::make(v, poly::mul(n1, n2), poly::mul(d1, d2));
}

Scalar Scalar::inv() const {
  if (v_ == kConst) return Scalar(c_.inv());
  Scalar li = f_->num.back().inv();
  return make(v_, poly::scale(f_->den, li), poly::scale(f_->num, li));
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (b.is_zero()) throw DivisionByZero();
  if (b.is_one()) return a;
  return a * b.inv();
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.v_ != b.v_) return false;
  if (a.v_ == kConst) return a.c_ == b.c_;
  if (a.f_ == b.f_) return true;
  return a.f_->num == b.f_->num && a.f_->den == b.f_->den;
}

Scalar Scalar::pow(long e) const {
  if (e < 0) return inv().pow(-e);
  Scalar base = *this;
  Scalar acc(1);
  while (e > 0) {
    if (e & 1) acc *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return acc;
}

Scalar Scalar::conj() const {
  if (v_ == kConst) return Scalar(c_.conj());
  Poly n(f_->num.size());
  Poly d(f_->den.size());
  for (size_t k = 0; k < n.size(); ++k) n[k] = f_->num[k].conj();
  for (size_t k = 0; k < d.size(); ++k) d[k] = f_->den[k].conj();
  return make(v_, std::move(n), std::move(d));
}

Scalar Scalar::subst(int v, const Scalar& value) const {
  if (v_ < v) return *this;
  if (v_ == v) {
    Scalar d = poly::eval(f_->den, value);
    if (d.is_zero()) throw PoleError(poly::str(f_->den, v_));
    return poly::eval(f_->num, value) / d;
  }
  Poly n(f_->num.size());
  Poly d(f_->den.size());
  for (size_t k = 0; k < n.size(); ++k) n[k] = f_->num[k].subst(v, value);
  for (size_t k = 0; k < d.size(); ++k) d[k] = f_->den[k].subst(v, value);
  poly::trim(d);
  if (d.empty()) throw PoleError(poly::str(f_->den, v_));
  return fraction(v_, std::move(n), std::move(d));
}

GaussRat Scalar::eval_mu(const mpq_class& mu0) const {
  if (v_ > kMu) throw DomainMismatch("eval_mu on an element depending on " + var_name(v_));
  Scalar r = subst(kMu, Scalar(GaussRat(mu0)));
  return r.c_;
}

Scalar Scalar::diff(int v) const {
  if (v_ < v) return {};
  const Poly& n = f_->num;
  const Poly& d = f_->den;
  if (v_ == v) {
    Poly top = poly::sub(poly::mul(poly::derivative(n), d), poly::mul(n, poly::derivative(d)));
    return fraction(v_, std::move(top), poly::mul(d, d));
  }
  auto coeff_diff = [v](const Poly& p) {
    Poly r(p.size());
    for (size_t k = 0; k < p.size(); ++k) r[k] = p[k].diff(v);
    poly::trim(r);
    return r;
  };
  Poly top = poly::sub(poly::mul(coeff_diff(n), d), poly::mul(n, coeff_diff(d)));
  return fraction(v_, std::move(top), poly::mul(d, d));
}

Scalar Scalar::integrate01(int v) const {
  if (v_ < v) return *this;
  if (v_ > v || !poly::is_one(f_->den))
    throw DomainMismatch("integrate01 needs a polynomial in " + var_name(v));
  Scalar acc;
  for (size_t k = 0; k < f_->num.size(); ++k)
    acc += f_->num[k] / Scalar(static_cast<long>(k + 1));
  return acc;
}

std::pair<Scalar::Poly, Scalar::Poly> Scalar::as_fraction_in(int v) const {
  if (v_ > v) throw DomainMismatch("as_fraction_in: element depends on " + var_name(v_));
  if (v_ == v) return {f_->num, f_->den};
  if (is_zero()) return {{}, {Scalar(1)}};
  return {{*this}, {Scalar(1)}};
}

std::string Scalar::str() const {
  if (v_ == kConst) return c_.str();
  std::string n = poly::str(f_->num, v_);
  if (poly::is_one(f_->den)) return n;
  return "(" + n + ")/(" + poly::str(f_->den, v_) + ")";
}

// ---------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Scalar run() {
    Scalar r = expr();
    skip();
    if (p_ != s_.size()) fail("trailing input");
    return r;
  }

 private:
  std::string_view s_;
  size_t p_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw ParseError("scalar parse error at " + std::to_string(p_) + " in '" + std::string(s_) +
                     "': " + what);
  }
  void skip() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }
  bool eat(char c) {
    skip();
    if (p_ < s_.size() && s_[p_] == c) {
      ++p_;
      return true;
    }
    return false;
  }
  Scalar expr() {
    Scalar acc = term();
    for (;;) {
      if (eat('+')) {
        acc += term();
      } else if (eat('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }
  Scalar term() {
    Scalar acc = unary();
    for (;;) {
      if (eat('*')) {
        acc *= unary();
      } else if (eat('/')) {
        Scalar d = unary();
        if (d.is_zero()) fail("division by zero");
        acc /= d;
      } else {
        return acc;
      }
    }
  }
  Scalar unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  Scalar power() {
    Scalar base = atom();
    if (eat('^')) {
      bool neg = eat('-');
      skip();
      size_t start = p_;
      while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
      if (start == p_) fail("expected integer exponent");
      long e = std::stol(std::string(s_.substr(start, p_ - start)));
      if (neg && base.is_zero()) fail("zero to a negative power");
      return base.pow(neg ? -e : e);
    }
    return base;
  }
  Scalar atom() {
    skip();
    if (p_ >= s_.size()) fail("unexpected end");
    char c = s_[p_];
    if (c == '(') {
      ++p_;
      Scalar r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = p_;
      while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
      return Scalar(GaussRat(mpq_class(std::string(s_.substr(start, p_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = p_;
      while (p_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[p_]))) ++p_;
      std::string_view w = s_.substr(start, p_ - start);
      if (w == "i") return Scalar::i();
      if (w == "mu") return Scalar::mu();
      if (w == "lambda") return Scalar::lambda();
      if (w == "t") return Scalar::t();
      p_ = start;
      fail("unknown symbol '" + std::string(w) + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

Scalar Scalar::parse(std::string_view text) { return Parser(text).run(); }

}  // namespace qpb
