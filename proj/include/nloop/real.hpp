#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>

#include "nloop/errors.hpp"
#include "nloop/rational.hpp"

namespace nloop {

/// Number of mantissa bits that carry `digits` decimal digits.
inline mpfr_prec_t bits_for_digits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 8;
}

/// Owning MPFR value with an explicit precision. Results of binary operations
/// take the larger precision of the two operands.
class Real {
 public:
  explicit Real(mpfr_prec_t bits = 64) {
    mpfr_init2(v_, bits);
    mpfr_set_zero(v_, 1);
  }
  Real(long value, mpfr_prec_t bits) : Real(bits) { mpfr_set_si(v_, value, MPFR_RNDN); }
  Real(const Rational& value, mpfr_prec_t bits) : Real(bits) { mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN); }

  /// Parses a decimal string such as "-1.50410836415074".
  static Real parse(std::string_view text, mpfr_prec_t bits) {
    Real r(bits);
    std::string s(text);
    char* end = nullptr;
    if (!s.empty()) mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
    if (s.empty() || end == nullptr || *end != '\0') {
      throw SchemaError("not a decimal number: '" + s + "'");
    }
    return r;
  }

  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  /// Rounds to a new precision in place.
  void set_precision(mpfr_prec_t bits) { mpfr_prec_round(v_, bits, MPFR_RNDN); }

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  /// Scientific notation with `digits` significant digits.
  std::string to_string(int digits) const {
    if (mpfr_zero_p(v_)) return "0";
    char* buf = nullptr;
    std::string fmt = "%." + std::to_string(std::max(1, digits - 1)) + "Re";
    mpfr_asprintf(&buf, fmt.c_str(), v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

  Real operator-() const {
    Real r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

#define NLOOP_REAL_BINOP(op, fn)                                              \
  friend Real operator op(const Real& a, const Real& b) {                    \
    Real r(std::max(a.precision(), b.precision()));                          \
    fn(r.v_, a.v_, b.v_, MPFR_RNDN);                                         \
    return r;                                                                \
  }                                                                           \
  Real& operator op##=(const Real& b) {                                       \
    if (b.precision() > precision()) set_precision(b.precision());            \
    fn(v_, v_, b.v_, MPFR_RNDN);                                              \
    return *this;                                                             \
  }
  NLOOP_REAL_BINOP(+, mpfr_add)
  NLOOP_REAL_BINOP(-, mpfr_sub)
  NLOOP_REAL_BINOP(*, mpfr_mul)
  NLOOP_REAL_BINOP(/, mpfr_div)
#undef NLOOP_REAL_BINOP

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

  /// 10^(-digits) at the given precision.
  static Real tolerance(int digits, mpfr_prec_t bits) {
    Real r(bits);
    mpfr_set_si(r.v_, 10, MPFR_RNDN);
    mpfr_pow_si(r.v_, r.v_, -digits, MPFR_RNDN);
    return r;
  }

 private:
  mpfr_t v_;
};

inline Real abs(const Real& a) {
  Real r(a.precision());
  mpfr_abs(r.get(), a.get(), MPFR_RNDN);
  return r;
}

inline Real sqrt(const Real& a) {
  Real r(a.precision());
  mpfr_sqrt(r.get(), a.get(), MPFR_RNDN);
  return r;
}

inline Real hypot(const Real& a, const Real& b) {
  Real r(std::max(a.precision(), b.precision()));
  mpfr_hypot(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

inline Real atan2(const Real& y, const Real& x) {
  Real r(std::max(x.precision(), y.precision()));
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}

/// log10(|a|); -inf for zero.
inline double log10_abs(const Real& a) {
  if (a.is_zero()) return -HUGE_VAL;
  Real r = abs(a);
  mpfr_log10(r.get(), r.get(), MPFR_RNDN);
  return r.to_double();
}

/// Complex number over Real.
class Complex {
 public:
  explicit Complex(mpfr_prec_t bits = 64) : re_(bits), im_(bits) {}
  Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}
  Complex(const Rational& re, mpfr_prec_t bits) : re_(re, bits), im_(bits) {}

  const Real& real() const { return re_; }
  const Real& imag() const { return im_; }
  mpfr_prec_t precision() const { return std::max(re_.precision(), im_.precision()); }

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  Real abs() const { return nloop::hypot(re_, im_); }
  Real arg() const { return nloop::atan2(im_, re_); }
  Complex conj() const { return Complex(re_, -im_); }

  Complex operator-() const { return Complex(-re_, -im_); }
  Complex& operator+=(const Complex& b) {
    re_ += b.re_;
    im_ += b.im_;
    return *this;
  }
  Complex& operator-=(const Complex& b) {
    re_ -= b.re_;
    im_ -= b.im_;
    return *this;
  }
  Complex& operator*=(const Complex& b) { return *this = *this * b; }
  Complex& operator/=(const Complex& b) { return *this = *this / b; }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return Complex(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
  }
  friend Complex operator/(const Complex& a, const Complex& b) {
    if (b.is_zero()) throw DivisionByZero("complex division by zero");
    Real d = b.re_ * b.re_ + b.im_ * b.im_;
    return Complex((a.re_ * b.re_ + a.im_ * b.im_) / d, (a.im_ * b.re_ - a.re_ * b.im_) / d);
  }

  Complex inverse() const { return Complex(Rational(1), precision()) / *this; }

  /// Principal square root (branch cut on the negative real axis).
  Complex sqrt() const {
    if (is_zero()) return *this;
    Real r = abs();
    Real two(2, precision());
    Real a = nloop::sqrt((r + abs_real(re_)) / two);
    if (re_.sign() >= 0) {
      return Complex(a, im_ / (two * a));
    }
    Real b = im_.sign() < 0 ? -a : a;
    return Complex(abs_real(im_) / (two * a), b);
  }

  std::string to_string(int digits) const {
    std::string im = im_.to_string(digits);
    if (im.front() != '-') im = "+" + im;
    return re_.to_string(digits) + " " + im.substr(0, 1) + " " + im.substr(1) + "i";
  }

 private:
  static Real abs_real(const Real& a) { return nloop::abs(a); }
  Real re_;
  Real im_;
};

inline bool is_zero(const Complex& a) { return a.is_zero(); }
inline Complex inverse(const Complex& a) { return a.inverse(); }
inline Real pivot_magnitude(const Complex& a) { return a.abs(); }
inline Complex zero_like(const Complex& a) { return Complex(a.precision()); }
inline Complex one_like(const Complex& a) { return Complex(Rational(1), a.precision()); }
inline Complex lift_rational(const Complex& like, const Rational& q) { return Complex(q, like.precision()); }

}  // namespace nloop
