#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "nloop/errors.hpp"
#include "nloop/number_field.hpp"
#include "nloop/rational.hpp"

// Arithmetic in F_p[x]/(m(x)) for word-size primes p, plus the CRT and
// rational-reconstruction steps that lift modular images back to Q(x).

namespace nloop {

namespace modp {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mul(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }
inline u64 add(u64 a, u64 b, u64 p) {
  u64 s = a + b;
  return s >= p ? s - p : s;
}
inline u64 sub(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }

inline u64 pow(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  while (e) {
    if (e & 1) r = mul(r, a, p);
    a = mul(a, a, p);
    e >>= 1;
  }
  return r;
}

inline u64 inv(u64 a, u64 p) {
  if (a % p == 0) throw BadPrime("inverse of a multiple of p");
  return pow(a, p - 2, p);
}

/// Deterministic Miller-Rabin for 64-bit integers.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = pow(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Primes below 2^61, descending. Products of two residues stay below 2^122,
/// so up to 64 of them can be summed in 128 bits before reducing.
class PrimeSequence {
 public:
  u64 next() {
    do {
      candidate_ -= 2;
    } while (!is_prime(candidate_));
    return candidate_;
  }

 private:
  u64 candidate_ = (1ULL << 61) + 1;
};

inline u64 reduce(const Integer& z, u64 p) {
  Integer r = z % Integer(static_cast<unsigned long>(p));
  if (r < 0) r += static_cast<unsigned long>(p);
  return r.get_ui();
}

inline u64 reduce(const Rational& q, u64 p) {
  u64 den = reduce(q.get_den(), p);
  if (den == 0) throw BadPrime("prime divides a denominator");
  return mul(reduce(q.get_num(), p), inv(den, p), p);
}

}  // namespace modp

/// The ring F_p[x]/(m) for a monic m with p-integral coefficients.
class ModularRing {
 public:
  static constexpr int kMaxDegree = 32;

  ModularRing(std::uint64_t p, const std::vector<Rational>& minpoly) : p_(p), degree_(static_cast<int>(minpoly.size()) - 1) {
    if (degree_ < 1 || degree_ > kMaxDegree) throw Error("modular backend supports field degree 1..32");
    for (int i = 0; i <= degree_; ++i) m_[static_cast<std::size_t>(i)] = modp::reduce(minpoly[static_cast<std::size_t>(i)], p);
  }

  std::uint64_t prime() const { return p_; }
  int degree() const { return degree_; }
  std::uint64_t minpoly_coeff(int i) const { return m_[static_cast<std::size_t>(i)]; }

 private:
  std::uint64_t p_;
  int degree_;
  std::array<std::uint64_t, kMaxDegree + 1> m_{};
};

/// Element of F_p[x]/(m), power basis.
class ModElement {
 public:
  explicit ModElement(const ModularRing* ring) : ring_(ring) {}

  static ModElement constant(const ModularRing* ring, std::uint64_t v) {
    ModElement e(ring);
    e.c_[0] = v % ring->prime();
    return e;
  }

  static ModElement from_field(const ModularRing* ring, const FieldElement& a) {
    if (a.degree() != ring->degree()) throw Error("field degree mismatch in modular reduction");
    ModElement e(ring);
    for (int i = 0; i < ring->degree(); ++i) e.c_[static_cast<std::size_t>(i)] = modp::reduce(a.coeffs()[static_cast<std::size_t>(i)], ring->prime());
    return e;
  }

  static ModElement from_rational(const ModularRing* ring, const Rational& q) {
    return constant(ring, modp::reduce(q, ring->prime()));
  }

  const ModularRing* ring() const { return ring_; }
  std::uint64_t coeff(int i) const { return c_[static_cast<std::size_t>(i)]; }

  bool is_zero() const {
    for (int i = 0; i < ring_->degree(); ++i)
      if (c_[static_cast<std::size_t>(i)]) return false;
    return true;
  }

  ModElement& operator+=(const ModElement& b) {
    const auto p = ring_->prime();
    for (int i = 0; i < ring_->degree(); ++i) c_[i] = modp::add(c_[i], b.c_[i], p);
    return *this;
  }
  ModElement& operator-=(const ModElement& b) {
    const auto p = ring_->prime();
    for (int i = 0; i < ring_->degree(); ++i) c_[i] = modp::sub(c_[i], b.c_[i], p);
    return *this;
  }
  ModElement& operator*=(const ModElement& b) {
    const int d = ring_->degree();
    const auto p = ring_->prime();
    std::array<std::uint64_t, 2 * ModularRing::kMaxDegree> prod{};
    for (int k = 0; k <= 2 * d - 2; ++k) {
      modp::u128 acc = 0;
      int lo = k - d + 1 > 0 ? k - d + 1 : 0;
      int hi = k < d - 1 ? k : d - 1;
      for (int i = lo; i <= hi; ++i) acc += static_cast<modp::u128>(c_[i]) * b.c_[k - i];
      prod[k] = static_cast<std::uint64_t>(acc % p);
    }
    for (int k = 2 * d - 2; k >= d; --k) {
      std::uint64_t t = prod[k];
      if (!t) continue;
      for (int j = 0; j < d; ++j) {
        std::uint64_t mj = ring_->minpoly_coeff(j);
        if (mj) prod[k - d + j] = modp::sub(prod[k - d + j], modp::mul(t, mj, p), p);
      }
    }
    for (int i = 0; i < d; ++i) c_[i] = prod[i];
    return *this;
  }
  ModElement& operator/=(const ModElement& b) { return *this *= b.inverse(); }

  friend ModElement operator+(ModElement a, const ModElement& b) { return a += b; }
  friend ModElement operator-(ModElement a, const ModElement& b) { return a -= b; }
  friend ModElement operator*(ModElement a, const ModElement& b) { return a *= b; }
  friend ModElement operator/(ModElement a, const ModElement& b) { return a /= b; }
  ModElement operator-() const {
    ModElement r(ring_);
    for (int i = 0; i < ring_->degree(); ++i) r.c_[i] = c_[i] ? ring_->prime() - c_[i] : 0;
    return r;
  }
  friend bool operator==(const ModElement& a, const ModElement& b) { return a.c_ == b.c_; }

  /// Inverse by extended Euclid in F_p[x]; throws BadPrime when the element
  /// is not a unit of the quotient ring.
  ModElement inverse() const {
    const int d = ring_->degree();
    const auto p = ring_->prime();
    using Poly = std::vector<std::uint64_t>;
    auto trim = [](Poly& a) {
      while (!a.empty() && a.back() == 0) a.pop_back();
    };
    Poly r0(static_cast<std::size_t>(d + 1));
    for (int i = 0; i <= d; ++i) r0[i] = ring_->minpoly_coeff(i);
    Poly r1(c_.begin(), c_.begin() + d);
    trim(r0);
    trim(r1);
    if (r1.empty()) throw BadPrime("inverse of zero modulo p");
    Poly s0;
    Poly s1{1};
    while (!r1.empty()) {
      // (q, r) = divmod(r0, r1)
      Poly r = r0;
      const int d1 = static_cast<int>(r1.size()) - 1;
      Poly q(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 0);
      std::uint64_t lead_inv = modp::inv(r1.back(), p);
      for (int k = static_cast<int>(r.size()) - 1; k >= d1; --k) {
        std::uint64_t c = modp::mul(r[k], lead_inv, p);
        if (!c) continue;
        int shift = k - d1;
        q[shift] = c;
        for (int j = 0; j <= d1; ++j) r[shift + j] = modp::sub(r[shift + j], modp::mul(c, r1[j], p), p);
      }
      trim(r);
      // s = s0 - q*s1
      Poly qs(q.empty() || s1.empty() ? 0 : q.size() + s1.size() - 1);
      for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = 0; j < s1.size(); ++j) qs[i + j] = modp::add(qs[i + j], modp::mul(q[i], s1[j], p), p);
      Poly s = s0;
      if (s.size() < qs.size()) s.resize(qs.size());
      for (std::size_t i = 0; i < qs.size(); ++i) s[i] = modp::sub(s[i], qs[i], p);
      trim(s);
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s);
    }
    if (r0.size() != 1) throw BadPrime("element is a zero divisor modulo p");
    std::uint64_t g = modp::inv(r0[0], p);
    ModElement out(ring_);
    for (std::size_t i = 0; i < s0.size() && i < static_cast<std::size_t>(d); ++i) out.c_[i] = modp::mul(s0[i], g, p);
    return out;
  }

 private:
  const ModularRing* ring_;
  std::array<std::uint64_t, ModularRing::kMaxDegree> c_{};
};

inline bool is_zero(const ModElement& a) { return a.is_zero(); }
inline ModElement inverse(const ModElement& a) { return a.inverse(); }
inline int pivot_magnitude(const ModElement& a) { return a.is_zero() ? 0 : 1; }
inline ModElement zero_like(const ModElement& a) { return ModElement(a.ring()); }
inline ModElement one_like(const ModElement& a) { return ModElement::constant(a.ring(), 1); }
inline ModElement lift_rational(const ModElement& like, const Rational& q) { return ModElement::from_rational(like.ring(), q); }

/// Smallest a/b with a = b*r (mod m), |a|, b <= sqrt(m/2); nullopt if none.
inline std::optional<Rational> rational_reconstruct(const Integer& r, const Integer& m) {
  Integer bound = sqrt(Integer(m / 2));
  Integer r0 = m, r1 = r % m;
  if (r1 < 0) r1 += m;
  Integer t0 = 0, t1 = 1;
  while (r1 > bound) {
    Integer q = r0 / r1;
    Integer r2 = r0 - q * r1;
    Integer t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (t1 == 0 || abs(t1) > bound) return std::nullopt;
  Integer g = gcd(r1, t1);
  if (g != 1) return std::nullopt;
  Rational out(r1, t1);
  out.canonicalize();
  return out;
}

/// Residues of one vector of integers accumulated over several primes.
class CrtAccumulator {
 public:
  explicit CrtAccumulator(std::size_t size) : residues_(size, Integer(0)) {}

  void add(const std::vector<std::uint64_t>& images, std::uint64_t p) {
    if (images.size() != residues_.size()) throw Error("CRT image size mismatch");
    Integer pz(static_cast<unsigned long>(p));
    if (modulus_ == 1) {
      for (std::size_t i = 0; i < images.size(); ++i) residues_[i] = Integer(static_cast<unsigned long>(images[i]));
      modulus_ = pz;
      return;
    }
    // x = r + M * ((a - r) * M^{-1} mod p)
    std::uint64_t minv = modp::inv(modp::reduce(modulus_, p), p);
    for (std::size_t i = 0; i < images.size(); ++i) {
      std::uint64_t diff = modp::sub(images[i], modp::reduce(residues_[i], p), p);
      std::uint64_t t = modp::mul(diff, minv, p);
      residues_[i] += modulus_ * Integer(static_cast<unsigned long>(t));
    }
    modulus_ *= pz;
  }

  const Integer& modulus() const { return modulus_; }
  const std::vector<Integer>& residues() const { return residues_; }

  /// Rational reconstruction of every entry, or nullopt if any fails.
  std::optional<std::vector<Rational>> reconstruct() const {
    std::vector<Rational> out;
    out.reserve(residues_.size());
    for (const auto& r : residues_) {
      auto q = rational_reconstruct(r, modulus_);
      if (!q) return std::nullopt;
      out.push_back(*q);
    }
    return out;
  }

 private:
  std::vector<Integer> residues_;
  Integer modulus_ = 1;
};

}  // namespace nloop
