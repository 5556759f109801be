#pragma once

#include <gmpxx.h>

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace qpb {

/// Exact Gaussian rational re + im*i.
struct GaussRat {
  mpq_class re;
  mpq_class im;

  GaussRat() : re(0), im(0) {}
  GaussRat(long n) : re(n), im(0) {}  // NOLINT(google-explicit-constructor)
  GaussRat(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }
  explicit GaussRat(const mpq_class& r) : re(r), im(0) { re.canonicalize(); }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_one() const { return re == 1 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }
  GaussRat conj() const { return {re, -im}; }
  GaussRat inv() const;
  std::string str() const;

  friend GaussRat operator+(const GaussRat& a, const GaussRat& b) { return {a.re + b.re, a.im + b.im}; }
  friend GaussRat operator-(const GaussRat& a, const GaussRat& b) { return {a.re - b.re, a.im - b.im}; }
  friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
    if (sgn(a.im) == 0 && sgn(b.im) == 0) return GaussRat(mpq_class(a.re * b.re));
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussRat operator/(const GaussRat& a, const GaussRat& b);
  GaussRat operator-() const { return {-re, -im}; }
  friend bool operator==(const GaussRat& a, const GaussRat& b) { return a.re == b.re && a.im == b.im; }
};

/// Formal variables of the coefficient field, ordered by tower level.
enum Var : int { kConst = 0, kMu = 1, kLambda = 2, kT = 3 };

/// Element of Q(i)(mu)(lambda)(t), built as a tower: a value whose top
/// variable is v is a reduced fraction of polynomials in v whose
/// coefficients live strictly below v.  The denominator is monic and a value
/// that does not depend on its top variable is stored one level down, so
/// equality is structural.
class Scalar {
 public:
  using Poly = std::vector<Scalar>;  // ascending coefficients, no trailing zeros

  Scalar() = default;
  Scalar(long n) : c_(n) {}  // NOLINT(google-explicit-constructor)
  Scalar(GaussRat c) : c_(std::move(c)) {}  // NOLINT(google-explicit-constructor)

  static Scalar var(int v);
  static Scalar mu() { return var(kMu); }
  static Scalar lambda() { return var(kLambda); }
  static Scalar t() { return var(kT); }
  static Scalar i() { return GaussRat(mpq_class(0), mpq_class(1)); }
  static Scalar rational(long p, long q) { return GaussRat(mpq_class(p, q)); }

  /// Canonical num/den with both polynomials in `v`; throws DivisionByZero.
  static Scalar fraction(int v, Poly num, Poly den);
  static Scalar parse(std::string_view text);

  int level() const { return v_; }
  bool is_zero() const { return v_ == kConst && c_.is_zero(); }
  bool is_one() const { return v_ == kConst && c_.is_one(); }
  bool is_const() const { return v_ == kConst; }
  const GaussRat& constant() const { return c_; }
  const Poly& num() const;
  const Poly& den() const;
  bool depends_on(int v) const;

  Scalar operator-() const;
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }
  Scalar& operator/=(const Scalar& b) { return *this = *this / b; }
  friend bool operator==(const Scalar& a, const Scalar& b);

  Scalar inv() const;
  Scalar pow(long e) const;
  Scalar conj() const;

  /// Substitutes `value` for variable `v`; throws PoleError on a vanishing denominator.
  Scalar subst(int v, const Scalar& value) const;
  /// Exact value at mu = mu0; only defined on Q(i)(mu).
  GaussRat eval_mu(const mpq_class& mu0) const;
  Scalar diff(int v) const;
  /// Integral over [0,1] in `v`; requires a polynomial dependence on v.
  Scalar integrate01(int v) const;
  /// Numerator and denominator as polynomials in `v` (v must be >= level()).
  std::pair<Poly, Poly> as_fraction_in(int v) const;

  std::string str() const;

 private:
  struct Frac {
    Poly num, den;
  };
  int v_ = kConst;
  GaussRat c_;
  std::shared_ptr<const Frac> f_;

  static Scalar make(int v, Poly num, Poly den);
};

std::string var_name(int v);

namespace poly {
using Poly = Scalar::Poly;
void trim(Poly& p);
Poly add(const Poly& a, const Poly& b);
Poly sub(const Poly& a, const Poly& b);
Poly mul(const Poly& a, const Poly& b);
Poly scale(const Poly& a, const Scalar& s);
/// Quotient and remainder over the coefficient field.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
/// Monic gcd; gcd(0,0) = 0.
Poly gcd(const Poly& a, const Poly& b);
Poly monic(const Poly& a);
bool is_one(const Poly& p);
Scalar eval(const Poly& p, const Scalar& x);
Poly derivative(const Poly& p);
std::string str(const Poly& p, int v);
}  // namespace poly

}  // namespace qpb
