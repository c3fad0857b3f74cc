#pragma once

#include <string>
#include <vector>

#include "nloop/diagrams.hpp"
#include "nloop/errors.hpp"
#include "nloop/feynman.hpp"
#include "nloop/nz_datum.hpp"
#include "nloop/real.hpp"

namespace nloop {

/// Complex embedding of a datum at a fixed working precision.
struct NumericContext {
  int digits = 0;       // requested decimal digits
  int work_digits = 0;  // digits + guard digits
  mpfr_prec_t bits = 0;
  Complex root;
  std::vector<Complex> z_values;

  static constexpr int kGuardDigits = 15;

  static NumericContext make(const NZDatum& d, int digits) {
    if (digits < 10) throw Error("numeric evaluation needs at least 10 digits");
    NumericContext c;
    c.digits = digits;
    c.work_digits = digits + kGuardDigits;
    c.bits = bits_for_digits(c.work_digits);
    Complex r = d.field->root(c.work_digits);
    c.root = Complex(round_to(r.real(), c.bits), round_to(r.imag(), c.bits));
    for (const auto& z : d.shapes) c.z_values.push_back(c.lift(z));
    return c;
  }

  Complex lift(const FieldElement& a) const { return NumberField::horner(a.coeffs(), root); }

 private:
  static Real round_to(Real v, mpfr_prec_t bits) {
    v.set_precision(bits);
    return v;
  }
};

namespace detail {

inline FeynmanRules<Complex> numeric_rules(const NZDatum& d, int n, const NumericContext& ctx) {
  auto rules = FeynmanRules<Complex>::build(d, n, [&](const FieldElement& z) { return ctx.lift(z); });
  // Self-check of the linear solve: |H hat - I| must be far below the target.
  Matrix<Complex> prod = rules.h() * rules.hat();
  Real worst(ctx.bits);
  for (std::size_t i = 0; i < prod.rows(); ++i)
    for (std::size_t j = 0; j < prod.cols(); ++j) {
      Complex e = prod(i, j);
      if (i == j) e -= Complex(Rational(1), ctx.bits);
      Real a = e.abs();
      if (worst < a) worst = a;
    }
  if (worst > Real::tolerance(ctx.digits + 5, ctx.bits)) {
    throw PrecisionFailure("propagator residual " + worst.to_string(6) + " exceeds the working tolerance");
  }
  return rules;
}

}  // namespace detail

/// S_{gamma,n} evaluated with complex arithmetic at `digits` decimal digits
/// (plus guard digits). Diagram values are summed in diagram order.
inline Complex numeric_invariant(int n, const NZDatum& d, const DiagramSet& s, int digits, unsigned workers = 0) {
  if (digits < 20) throw Error("numeric_invariant needs at least 20 digits");
  const auto ds = contributing_diagrams(s, n);
  auto ctx = NumericContext::make(d, digits);
  auto rules = detail::numeric_rules(d, n, ctx);
  return sum_diagrams(ds, rules, workers);
}

/// tau (up to sign) at the embedding.
inline Complex numeric_tau(const NZDatum& d, int digits) {
  auto ctx = NumericContext::make(d, digits);
  Complex t = tau_value<Complex>(d, [&](const FieldElement& z) { return ctx.lift(z); });
  if (t.abs() < Real::tolerance(ctx.work_digits, ctx.bits)) throw Degenerate("tau vanishes at the embedding");
  return t;
}

/// Coefficients of phi(hbar) = tau^{-1/2} exp(sum_{n>=2} S_n hbar^{n-1})
/// through hbar^{n_max-1}.
struct PhiSeries {
  std::vector<Complex> coeffs;
  Complex tau;
  /// tau is only defined up to sign, so phi is only defined up to a factor
  /// of i; the principal root of 1/tau is used and this flag stays set.
  bool sign_ambiguous = true;
};

inline PhiSeries assemble_phi(const NZDatum& d, int n_max, int digits, const DiagramSet* diagrams = nullptr,
                              unsigned workers = 0) {
  if (n_max < 2) throw Error("assemble_phi needs n_max >= 2");
  DiagramSet owned;
  if (diagrams == nullptr || diagrams->n < n_max) {
    owned = generate_diagrams(n_max);
    diagrams = &owned;
  }
  auto ctx = NumericContext::make(d, digits);
  // h[j] = S_{j+1}, the hbar^j coefficient of the exponent
  std::vector<Complex> h(static_cast<std::size_t>(n_max), Complex(ctx.bits));
  for (int n = 2; n <= n_max; ++n) {
    auto rules = detail::numeric_rules(d, n, ctx);
    h[n - 1] = sum_diagrams(contributing_diagrams(*diagrams, n), rules, workers);
  }
  // g = exp(h): g_0 = 1, g_k = (1/k) sum_{j=1}^{k} j h_j g_{k-j}
  std::vector<Complex> g(static_cast<std::size_t>(n_max), Complex(ctx.bits));
  g[0] = Complex(Rational(1), ctx.bits);
  for (int k = 1; k < n_max; ++k) {
    Complex acc(ctx.bits);
    for (int j = 1; j <= k; ++j) acc += Complex(Rational(j), ctx.bits) * h[j] * g[k - j];
    g[k] = acc / Complex(Rational(k), ctx.bits);
  }
  PhiSeries out;
  out.tau = tau_value<Complex>(d, [&](const FieldElement& z) { return ctx.lift(z); });
  Complex scale = out.tau.inverse().sqrt();
  for (const auto& c : g) out.coeffs.push_back(scale * c);
  return out;
}

}  // namespace nloop
