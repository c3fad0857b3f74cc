#pragma once

#include <cctype>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nloop/errors.hpp"
#include "nloop/rational.hpp"
#include "nloop/real.hpp"

namespace nloop {

/// Dense univariate polynomials over Q, ascending coefficients. The zero
/// polynomial is the empty vector.
namespace qpoly {

using Poly = std::vector<Rational>;

inline void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

inline Poly sub(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

inline Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1);
  Rational t;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      mpq_mul(t.get_mpq_t(), a[i].get_mpq_t(), b[j].get_mpq_t());
      r[i + j] += t;
    }
  }
  trim(r);
  return r;
}

/// Quotient and remainder of a by a nonzero b.
inline std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
  if (b.empty()) throw DivisionByZero("polynomial division by zero");
  trim(a);
  const int db = degree(b);
  if (degree(a) < db) return {Poly{}, a};
  Poly q(a.size() - b.size() + 1);
  const Rational& lead = b.back();
  for (int k = degree(a); k >= db; --k) {
    if (a[k] == 0) continue;
    Rational c = a[k] / lead;
    q[k - db] = c;
    for (int j = 0; j <= db; ++j) a[k - db + j] -= c * b[j];
  }
  trim(a);
  trim(q);
  return {q, a};
}

inline Poly derivative(const Poly& p) {
  if (p.size() <= 1) return {};
  Poly d(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * static_cast<long>(i);
  trim(d);
  return d;
}

/// Monic gcd.
inline Poly gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rational lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

}  // namespace qpoly

/// The number field Q[x]/(minpoly) together with a complex embedding,
/// stored as the decimal approximation of one root.
class NumberField {
 public:
  NumberField(std::vector<Rational> minpoly, std::string embedding_re, std::string embedding_im)
      : minpoly_(std::move(minpoly)), embed_re_(std::move(embedding_re)), embed_im_(std::move(embedding_im)) {
    if (minpoly_.size() < 2) throw SchemaError("minimal polynomial must have degree >= 1");
    if (minpoly_.back() != 1) throw SchemaError("minimal polynomial must be monic");
    // Fail early on unparseable embedding strings.
    (void)Real::parse(embed_re_, 64);
    (void)Real::parse(embed_im_, 64);
  }

  int degree() const { return static_cast<int>(minpoly_.size()) - 1; }
  /// Ascending coefficients, monic, length degree()+1.
  const std::vector<Rational>& minpoly() const { return minpoly_; }
  const std::string& embedding_re() const { return embed_re_; }
  const std::string& embedding_im() const { return embed_im_; }

  bool same_as(const NumberField& o) const { return this == &o || minpoly_ == o.minpoly_; }

  /// True iff gcd(minpoly, minpoly') = 1.
  bool is_squarefree() const { return qpoly::degree(qpoly::gcd(minpoly_, qpoly::derivative(minpoly_))) == 0; }

  /// |minpoly(embedding)| evaluated from the stored decimal strings.
  Real embedding_residual(int digits = 30) const {
    mpfr_prec_t bits = bits_for_digits(digits);
    Complex x(Real::parse(embed_re_, bits), Real::parse(embed_im_, bits));
    return eval_minpoly(x).abs();
  }

  Complex eval_minpoly(const Complex& x) const { return horner(minpoly_, x); }

  /// The stored embedding polished by Newton iteration to `digits` decimal
  /// digits, doubling the working precision per stage.
  Complex root(int digits) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (cached_root_ && cached_digits_ >= digits) {
      Complex r = *cached_root_;
      return Complex(rounded(r.real(), bits_for_digits(digits)), rounded(r.imag(), bits_for_digits(digits)));
    }
    Complex r = refine(digits);
    cached_root_ = r;
    cached_digits_ = digits;
    return r;
  }

  static Complex horner(std::span<const Rational> coeffs, const Complex& x) {
    Complex acc(x.precision());
    for (std::size_t k = coeffs.size(); k-- > 0;) {
      acc = acc * x + Complex(coeffs[k], x.precision());
    }
    return acc;
  }

 private:
  static Real rounded(Real v, mpfr_prec_t bits) {
    v.set_precision(bits);
    return v;
  }

  Complex refine(int digits) const {
    const qpoly::Poly deriv = qpoly::derivative(minpoly_);
    const mpfr_prec_t target = bits_for_digits(digits + 10);
    mpfr_prec_t bits = 64;
    Complex start(Real::parse(embed_re_, target), Real::parse(embed_im_, target));
    Complex x(Real::parse(embed_re_, bits), Real::parse(embed_im_, bits));
    for (;;) {
      bits = std::min(bits * 2, target);
      x = Complex(rounded(x.real(), bits), rounded(x.imag(), bits));
      Real step_tol = Real::tolerance(static_cast<int>(bits * 0.30103) - 4, bits);
      bool converged = false;
      for (int it = 0; it < 60; ++it) {
        Complex d = horner(deriv, x);
        if (d.is_zero()) throw PrecisionFailure("root refinement hit a critical point");
        Complex step = eval_minpoly(x) / d;
        x -= step;
        Real scale = x.abs();
        if (scale < Real(1, bits)) scale = Real(1, bits);
        if (step.abs() <= step_tol * scale) {
          converged = true;
          break;
        }
      }
      if (!converged) throw PrecisionFailure("root refinement did not converge");
      if (bits >= target) break;
    }
    if ((x - start).abs() > Real::tolerance(6, target) * (Real(1, target) + start.abs())) {
      throw PrecisionFailure("root refinement drifted away from the stored embedding");
    }
    if (eval_minpoly(x).abs() > Real::tolerance(digits - 5, target)) {
      throw PrecisionFailure("refined root does not satisfy the minimal polynomial");
    }
    return x;
  }

  std::vector<Rational> minpoly_;
  std::string embed_re_;
  std::string embed_im_;
  mutable std::mutex cache_mutex_;
  mutable std::optional<Complex> cached_root_;
  mutable int cached_digits_ = 0;
};

using FieldPtr = std::shared_ptr<const NumberField>;

inline FieldPtr make_field(std::vector<Rational> minpoly, std::string re, std::string im) {
  return std::make_shared<const NumberField>(std::move(minpoly), std::move(re), std::move(im));
}

/// Element of a NumberField in the power basis, always fully reduced so that
/// equality is coefficient-wise.
class FieldElement {
 public:
  explicit FieldElement(FieldPtr field) : field_(std::move(field)), c_(static_cast<std::size_t>(field_->degree())) {}

  /// Reduces `coeffs` modulo the minimal polynomial; shorter lists are padded.
  FieldElement(FieldPtr field, std::vector<Rational> coeffs) : field_(std::move(field)), c_(std::move(coeffs)) {
    reduce_in_place(c_);
  }

  static FieldElement constant(FieldPtr field, const Rational& value) {
    FieldElement r(std::move(field));
    r.c_[0] = value;
    return r;
  }

  static FieldElement generator(FieldPtr field) { return FieldElement(std::move(field), {Rational(0), Rational(1)}); }

  const FieldPtr& field() const { return field_; }
  const std::vector<Rational>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()); }

  bool is_zero() const {
    for (const auto& c : c_)
      if (c != 0) return false;
    return true;
  }
  bool is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return false;
    return true;
  }

  FieldElement zero_like() const { return FieldElement(field_); }
  FieldElement one_like() const { return constant(field_, 1); }

  FieldElement& operator+=(const FieldElement& b) {
    check_same(b);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += b.c_[i];
    return *this;
  }
  FieldElement& operator-=(const FieldElement& b) {
    check_same(b);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= b.c_[i];
    return *this;
  }
  FieldElement& operator*=(const FieldElement& b) {
    check_same(b);
    const std::size_t d = c_.size();
    std::vector<Rational> prod(2 * d - 1);
    Rational t;
    for (std::size_t i = 0; i < d; ++i) {
      if (c_[i] == 0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (b.c_[j] == 0) continue;
        mpq_mul(t.get_mpq_t(), c_[i].get_mpq_t(), b.c_[j].get_mpq_t());
        prod[i + j] += t;
      }
    }
    reduce_in_place(prod);
    c_ = std::move(prod);
    return *this;
  }
  FieldElement& operator*=(const Rational& s) {
    for (auto& c : c_) c *= s;
    return *this;
  }
  FieldElement& operator/=(const FieldElement& b) { return *this *= b.inverse(); }

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  friend FieldElement operator*(FieldElement a, const Rational& s) { return a *= s; }
  friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }
  FieldElement operator-() const {
    FieldElement r(*this);
    for (auto& c : r.c_) c = -c;
    return r;
  }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field_->same_as(*b.field_) && a.c_ == b.c_;
  }

  /// Multiplicative inverse by the extended Euclidean algorithm against the
  /// minimal polynomial. Throws DivisionByZero for zero (and for zero
  /// divisors when the minimal polynomial is reducible).
  FieldElement inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero field element");
    if (is_rational()) return constant(field_, 1 / c_[0]);
    qpoly::Poly r0 = field_->minpoly();
    qpoly::Poly r1 = c_;
    qpoly::trim(r1);
    qpoly::Poly s0;
    qpoly::Poly s1{Rational(1)};
    while (!r1.empty()) {
      auto [q, r] = qpoly::divmod(r0, r1);
      qpoly::Poly s = qpoly::sub(s0, qpoly::mul(q, s1));
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s);
    }
    if (qpoly::degree(r0) != 0) throw DivisionByZero("element is a zero divisor: minimal polynomial is reducible");
    Rational g = r0[0];
    for (auto& c : s0) c /= g;
    return FieldElement(field_, std::move(s0));
  }

  FieldElement pow(long e) const {
    FieldElement base = e < 0 ? inverse() : *this;
    unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    FieldElement acc = one_like();
    while (k) {
      if (k & 1UL) acc *= base;
      k >>= 1;
      if (k) base *= base;
    }
    return acc;
  }

  /// Value under the field's embedding, to `digits` decimal digits.
  Complex embed(int digits) const { return NumberField::horner(c_, field_->root(digits)); }

 private:
  void check_same(const FieldElement& b) const {
    if (field_ != b.field_ && !field_->same_as(*b.field_)) throw Error("field elements from different number fields");
  }

  void reduce_in_place(std::vector<Rational>& p) const {
    const auto& m = field_->minpoly();
    const std::size_t d = m.size() - 1;
    Rational t;
    for (std::size_t k = p.size(); k-- > d;) {
      if (p[k] == 0) continue;
      // x^k = x^{k-d} * x^d and x^d = -(m_0 + ... + m_{d-1} x^{d-1}).
      for (std::size_t j = 0; j < d; ++j) {
        if (m[j] == 0) continue;
        mpq_mul(t.get_mpq_t(), p[k].get_mpq_t(), m[j].get_mpq_t());
        p[k - d + j] -= t;
      }
    }
    p.resize(d);
  }

  FieldPtr field_;
  std::vector<Rational> c_;
};

inline bool is_zero(const FieldElement& a) { return a.is_zero(); }
inline FieldElement inverse(const FieldElement& a) { return a.inverse(); }
inline int pivot_magnitude(const FieldElement& a) { return a.is_zero() ? 0 : 1; }
inline FieldElement zero_like(const FieldElement& a) { return a.zero_like(); }
inline FieldElement one_like(const FieldElement& a) { return a.one_like(); }
inline FieldElement lift_rational(const FieldElement& like, const Rational& q) { return FieldElement::constant(like.field(), q); }

/// "46490/198147*x^3 + 231209/396294*x^2 - 62777/264196"; zero is "0".
inline std::string to_string(const FieldElement& a, std::string_view var = "x") {
  std::string out;
  const auto& c = a.coeffs();
  for (std::size_t k = c.size(); k-- > 0;) {
    if (c[k] == 0) continue;
    Rational mag = abs(c[k]);
    bool neg = c[k] < 0;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    if (k == 0) {
      out += to_string(mag);
      continue;
    }
    if (mag != 1) out += to_string(mag) + "*";
    out += var;
    if (k > 1) out += "^" + std::to_string(k);
  }
  return out.empty() ? "0" : out;
}

/// Parses the output format of to_string (and the usual variations: optional
/// '*', spaces, repeated powers). Throws SchemaError on malformed input.
inline FieldElement parse_field_element(FieldPtr field, std::string_view text, char var = 'x') {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw SchemaError("empty polynomial string");
  std::vector<Rational> coeffs;
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) { throw SchemaError("bad polynomial '" + std::string(text) + "': " + why); };
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (pos != 0) {
      fail("expected sign");
    }
    std::size_t start = pos;
    while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/')) ++pos;
    Rational coef(1);
    if (pos > start) coef = parse_rational(s.substr(start, pos - start));
    long power = 0;
    if (pos < s.size() && s[pos] == '*') ++pos;
    if (pos < s.size() && s[pos] == var) {
      ++pos;
      power = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        std::size_t ps = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (ps == pos) fail("missing exponent");
        power = std::stol(s.substr(ps, pos - ps));
      }
    } else if (pos == start) {
      fail("empty term");
    }
    if (pos < s.size() && s[pos] != '+' && s[pos] != '-') fail("unexpected character");
    if (coeffs.size() <= static_cast<std::size_t>(power)) coeffs.resize(power + 1);
    coeffs[power] += sign * coef;
  }
  return FieldElement(std::move(field), std::move(coeffs));
}

}  // namespace nloop
