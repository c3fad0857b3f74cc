#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "nloop/diagrams.hpp"
#include "nloop/errors.hpp"
#include "nloop/hbar_series.hpp"
#include "nloop/matrix.hpp"
#include "nloop/modular.hpp"
#include "nloop/multigraph.hpp"
#include "nloop/number_field.hpp"
#include "nloop/nz_datum.hpp"

namespace nloop {

/// Bernoulli number B_k with B_1 = -1/2, from sum_{j<=k} C(k+1, j) B_j = 0.
inline Rational bernoulli(int k) {
  static std::mutex mu;
  static std::vector<Rational> table{Rational(1)};
  std::lock_guard<std::mutex> lock(mu);
  while (static_cast<int>(table.size()) <= k) {
    const int m = static_cast<int>(table.size());
    Rational s = 0;
    Integer c = 1;  // C(m+1, j)
    for (int j = 0; j < m; ++j) {
      s += Rational(c) * table[j];
      c *= m + 1 - j;
      c /= j + 1;
    }
    table.push_back(-s / Rational(c));
  }
  return table[k];
}

inline Rational factorial(int k) {
  Integer f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return Rational(f);
}

/// Numerator P_m of Li_{-m}(w) = P_m(w) / (1-w)^{m+1}, ascending powers.
/// P_0 = w and P_{m+1} = w (P_m' (1-w) + (m+1) P_m), i.e. w d/dw applied to
/// the closed form.
inline std::vector<Integer> neg_polylog_numerator(int m) {
  static std::mutex mu;
  static std::vector<std::vector<Integer>> table{{Integer(0), Integer(1)}};
  std::lock_guard<std::mutex> lock(mu);
  while (static_cast<int>(table.size()) <= m) {
    const auto& p = table.back();
    const long next = static_cast<long>(table.size());  // m + 1
    std::vector<Integer> q(p.size() + 1, Integer(0));
    for (std::size_t i = 1; i < p.size(); ++i) {
      Integer d = p[i] * static_cast<long>(i);
      q[i - 1] += d;
      q[i] -= d;
    }
    for (std::size_t i = 0; i < p.size(); ++i) q[i] += p[i] * next;
    std::vector<Integer> r(q.size() + 1, Integer(0));
    for (std::size_t i = 0; i < q.size(); ++i) r[i + 1] = q[i];
    while (r.size() > 1 && r.back() == 0) r.pop_back();
    table.push_back(std::move(r));
  }
  return table[static_cast<std::size_t>(m)];
}

/// a^e for integer e of either sign.
template <class T>
T ipow(const T& a, long e) {
  T base = e < 0 ? inverse(a) : a;
  unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  T acc = one_like(a);
  while (k) {
    if (k & 1UL) acc *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return acc;
}

/// Li_s(w) for s <= 0 as the rational function value. Throws PoleError at w = 1.
template <class T>
T neg_polylog(int s, const T& w) {
  if (s > 0) throw Error("neg_polylog needs s <= 0");
  const int m = -s;
  T d = one_like(w) - w;
  if (is_zero(d)) throw PoleError("Li_" + std::to_string(s) + " has a pole at w = 1");
  const auto p = neg_polylog_numerator(m);
  T num = zero_like(w);
  for (std::size_t k = p.size(); k-- > 0;) num = num * w + lift_rational(w, Rational(p[k]));
  return num * inverse(ipow(d, m + 1));
}

/// Power series in hbar with nonnegative degrees; an empty vector is zero.
template <class T>
using Series = std::vector<T>;

/// Product truncated after degree `order`.
template <class T>
Series<T> series_mul(const Series<T>& a, const Series<T>& b, int order) {
  if (a.empty() || b.empty()) return {};
  const std::size_t len = std::min(a.size() + b.size() - 1, static_cast<std::size_t>(order + 1));
  Series<T> c(len, zero_like(a.front()));
  for (std::size_t i = 0; i < a.size() && i < len; ++i) {
    if (is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size() && i + j < len; ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

template <class T>
void series_add(Series<T>& a, const Series<T>& b) {
  if (a.size() < b.size()) a.resize(b.size(), zero_like(b.front()));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
}

/// Propagator, vertex factors and vacuum term of one datum at loop order n,
/// over the scalar type T.
///
/// Vertex factors are stored normalized: entry j of gamma(k, i) is the
/// coefficient of hbar^{alpha_k - 1 + j} in Gamma^{(k)}_i, for
/// j = 0 .. n - 2 + extra_terms. A diagram with loop number L uses the
/// first n - L + 1 entries.
template <class T>
class FeynmanRules {
 public:
  /// `lift` maps a shape (FieldElement) into T.
  template <class Lift>
  static FeynmanRules build(const NZDatum& d, int n, Lift&& lift, int extra_terms = 0) {
    if (n < 2) throw Error("Feynman rules need n >= 2");
    FeynmanRules r;
    r.n_ = n;
    r.N_ = d.N;
    r.extra_ = extra_terms;
    std::vector<T> z, inv_z;
    for (const auto& s : d.shapes) {
      z.push_back(lift(s));
      inv_z.push_back(inverse(z.back()));
    }
    const T& like = z.front();
    Matrix<Rational> ba(1, 1, Rational(0));
    try {
      ba = binv_a(d);
    } catch (const SingularMatrix&) {
      throw Degenerate("B is singular, so B^{-1}A is undefined");
    }
    Matrix<T> h(static_cast<std::size_t>(d.N), static_cast<std::size_t>(d.N), zero_like(like));
    for (int i = 0; i < d.N; ++i)
      for (int j = 0; j < d.N; ++j) h(i, j) = lift_rational(like, -ba(i, j));
    for (int i = 0; i < d.N; ++i) h(i, i) += inverse(one_like(like) - z[i]);
    r.h_ = h;
    try {
      r.hat_ = inverse(h);
    } catch (const SingularMatrix&) {
      throw Degenerate("-B^{-1}A + diag(1/(1-z)) is singular");
    }

    const auto bnu = binv_nu(d);
    const int kmax = 2 * n;
    const int len = n - 1 + extra_terms;
    r.gamma_.assign(static_cast<std::size_t>(kmax + 1), std::vector<Series<T>>(static_cast<std::size_t>(d.N)));
    for (int k = 1; k <= kmax; ++k) {
      const int alpha = k <= 2 ? 1 : 0;
      for (int i = 0; i < d.N; ++i) {
        Series<T> g(static_cast<std::size_t>(len), zero_like(like));
        for (int j = 0; j < len; ++j) {
          const int p = alpha + j;
          Rational c = bernoulli(p) / factorial(p);
          if ((k + p) % 2 != 0) c = -c;
          if (c != 0) g[j] = lift_rational(like, c) * neg_polylog(2 - p - k, inv_z[i]);
        }
        if (k == 1) g[0] += lift_rational(like, -bnu[i] / 2);
        r.gamma_[k][i] = std::move(g);
      }
    }

    T vac = zero_like(like);
    Rational bn = bernoulli(n) / factorial(n);
    if (bn != 0) {
      for (int i = 0; i < d.N; ++i) vac += neg_polylog(2 - n, inv_z[i]);
      vac *= lift_rational(like, bn);
    }
    if (n == 2) {
      Rational q = 0;
      for (int i = 0; i < d.N; ++i)
        for (int j = 0; j < d.N; ++j) q += Rational(d.f[i] * d.f[j]) * ba(i, j);
      vac += lift_rational(like, q / 8);
    }
    r.vacuum_ = vac;
    return r;
  }

  int n() const { return n_; }
  int N() const { return N_; }
  int extra_terms() const { return extra_; }
  int max_valence() const { return 2 * n_; }
  /// H = -B^{-1}A + diag(1/(1-z)).
  const Matrix<T>& h() const { return *h_; }
  /// The hbar-free propagator H^{-1}.
  const Matrix<T>& hat() const { return *hat_; }
  const Series<T>& gamma(int k, int i) const {
    if (k < 1 || k > max_valence()) throw Error("valence " + std::to_string(k) + " outside the vertex table");
    return gamma_[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
  }
  const T& vacuum() const { return *vacuum_; }

  /// Gamma^{(k)}_i as a Laurent series for a diagram of loop number L:
  /// degrees alpha_k - 1 .. alpha_k + n - L - 1 (+ extra_terms).
  HbarSeries<T> vertex_factor(int k, int i, int L, int cutoff = 1 << 20) const {
    const auto& g = gamma(k, i);
    const int alpha = k <= 2 ? 1 : 0;
    const std::size_t terms = std::min(g.size(), static_cast<std::size_t>(n_ - L + 1 + extra_));
    return HbarSeries<T>(zero_like(g.front()), alpha - 1, cutoff, Series<T>(g.begin(), g.begin() + terms));
  }

  /// Applies a ring map to every stored value.
  template <class U, class F>
  FeynmanRules<U> map(F&& f) const {
    FeynmanRules<U> r;
    r.n_ = n_;
    r.N_ = N_;
    r.extra_ = extra_;
    r.h_ = h_->map(f);
    r.hat_ = hat_->map(f);
    r.gamma_.resize(gamma_.size());
    for (std::size_t k = 0; k < gamma_.size(); ++k)
      for (const auto& s : gamma_[k]) {
        Series<U> t;
        for (const auto& v : s) t.push_back(f(v));
        r.gamma_[k].push_back(std::move(t));
      }
    r.vacuum_ = f(*vacuum_);
    return r;
  }

 private:
  template <class>
  friend class FeynmanRules;

  FeynmanRules() = default;

  int n_ = 0;
  int N_ = 0;
  int extra_ = 0;
  std::optional<Matrix<T>> h_;
  std::optional<Matrix<T>> hat_;
  std::vector<std::vector<Series<T>>> gamma_;
  std::optional<T> vacuum_;
};

namespace detail {

// Tensor over a sorted set of vertex variables, each ranging over 0..N-1,
// with power-series entries in row-major order.
template <class T>
struct Factor {
  std::vector<int> vars;
  std::vector<Series<T>> table;
};

inline std::size_t int_pow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

// Sums out variable v from the product of `fs` (all of which contain v).
template <class T>
Factor<T> eliminate(const std::vector<Factor<T>>& fs, int v, std::size_t N, int order) {
  std::vector<int> scope;
  for (const auto& f : fs)
    for (int u : f.vars)
      if (u != v) scope.push_back(u);
  std::sort(scope.begin(), scope.end());
  scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
  std::vector<int> full = scope;
  full.push_back(v);
  // stride of each full position inside each factor's table
  std::vector<std::vector<std::size_t>> stride(fs.size(), std::vector<std::size_t>(full.size(), 0));
  for (std::size_t a = 0; a < fs.size(); ++a) {
    const auto& vars = fs[a].vars;
    for (std::size_t q = 0; q < vars.size(); ++q) {
      std::size_t pos = static_cast<std::size_t>(std::find(full.begin(), full.end(), vars[q]) - full.begin());
      stride[a][pos] = int_pow(N, vars.size() - 1 - q);
    }
  }
  Factor<T> out;
  out.vars = scope;
  out.table.assign(int_pow(N, scope.size()), Series<T>{});
  std::vector<std::size_t> idx(full.size(), 0);
  std::vector<std::size_t> off(fs.size(), 0);
  const std::size_t total = int_pow(N, full.size());
  for (std::size_t flat = 0; flat < total; ++flat) {
    // flat enumerates full assignments with v as the fastest index
    std::size_t rem = flat;
    for (std::size_t q = full.size(); q-- > 0;) {
      idx[q] = rem % N;
      rem /= N;
    }
    for (std::size_t a = 0; a < fs.size(); ++a) {
      off[a] = 0;
      for (std::size_t q = 0; q < full.size(); ++q) off[a] += idx[q] * stride[a][q];
    }
    Series<T> prod = fs[0].table[off[0]];
    for (std::size_t a = 1; a < fs.size() && !prod.empty(); ++a) prod = series_mul(prod, fs[a].table[off[a]], order);
    if (!prod.empty()) series_add(out.table[flat / N], prod);
  }
  return out;
}

}  // namespace detail

/// The hbar^{n-1} coefficient of (1/|Aut G|) sum over index assignments of
/// the product of vertex factors and hbar-weighted propagators.
///
/// With E edges and K vertices of valence >= 3 the product starts at
/// hbar^{E-K} = hbar^{L-1}. That power is factored out, so every tensor
/// entry is a power series in hbar truncated after relative degree n - L;
/// vertices are summed out one at a time in greedy minimum-scope order.
template <class T>
T evaluate_diagram(const Multigraph& g, const FeynmanRules<T>& rules) {
  const T zero = zero_like(rules.vacuum());
  const int L = loop_number(g);
  const int n = rules.n();
  if (L < 2 || L > n) return zero;
  const auto val = g.valences();
  const auto loops = g.loops();
  const int V = g.vertex_count();
  int high = 0;
  for (int k : val) {
    if (k < 1) throw Error("diagram has an isolated vertex");
    if (k >= 3) ++high;
  }
  // degree floor: the lowest hbar power of the contraction is L - 1
  if (g.edge_count() - high != L - 1) throw std::logic_error("hbar degree floor violated");
  const int order = n - L;
  const std::size_t N = static_cast<std::size_t>(rules.N());
  const auto& hat = rules.hat();

  std::vector<detail::Factor<T>> fs;
  for (int v = 0; v < V; ++v) {
    detail::Factor<T> f;
    f.vars = {v};
    for (std::size_t i = 0; i < N; ++i) {
      const auto& src = rules.gamma(val[v], static_cast<int>(i));
      Series<T> s(src.begin(), src.begin() + std::min(src.size(), static_cast<std::size_t>(order + 1)));
      if (loops[v] > 0) {
        T w = ipow(hat(i, i), loops[v]);
        for (auto& c : s) c *= w;
      }
      f.table.push_back(std::move(s));
    }
    fs.push_back(std::move(f));
  }
  const auto& e = g.edges();
  for (std::size_t a = 0; a < e.size();) {
    std::size_t b = a;
    while (b < e.size() && e[b] == e[a]) ++b;
    if (e[a].first != e[a].second) {
      const long mult = static_cast<long>(b - a);
      detail::Factor<T> f;
      f.vars = {e[a].first, e[a].second};
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) f.table.push_back(Series<T>{ipow(hat(i, j), mult)});
      fs.push_back(std::move(f));
    }
    a = b;
  }

  std::vector<char> done(static_cast<std::size_t>(V), 0);
  for (int step = 0; step < V; ++step) {
    int best = -1;
    std::size_t best_scope = 0;
    for (int v = 0; v < V; ++v) {
      if (done[v]) continue;
      std::vector<int> scope;
      for (const auto& f : fs)
        if (std::find(f.vars.begin(), f.vars.end(), v) != f.vars.end())
          for (int u : f.vars)
            if (u != v) scope.push_back(u);
      std::sort(scope.begin(), scope.end());
      scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
      if (best < 0 || scope.size() < best_scope) {
        best = v;
        best_scope = scope.size();
      }
    }
    std::vector<detail::Factor<T>> involved, rest;
    for (auto& f : fs) {
      if (std::find(f.vars.begin(), f.vars.end(), best) != f.vars.end())
        involved.push_back(std::move(f));
      else
        rest.push_back(std::move(f));
    }
    rest.push_back(detail::eliminate(involved, best, N, order));
    fs = std::move(rest);
    done[best] = 1;
  }

  Series<T> total{one_like(zero)};
  for (const auto& f : fs) total = series_mul(total, f.table.front(), order);
  if (static_cast<int>(total.size()) <= order) return zero;
  return total[order] * lift_rational(zero, Rational(Integer(1), Integer(aut_order(g))));
}

/// Test oracle: direct N^|V| summation with Laurent series, vertex factors
/// as stored (including any extra terms) and no truncation. Checks that no
/// term lies below hbar^{L-1}.
template <class T>
T evaluate_diagram_bruteforce(const Multigraph& g, const FeynmanRules<T>& rules) {
  const T zero = zero_like(rules.vacuum());
  const int L = loop_number(g);
  const int n = rules.n();
  if (L < 2 || L > n) return zero;
  const auto val = g.valences();
  const int V = g.vertex_count();
  const int N = rules.N();
  const auto& hat = rules.hat();
  HbarSeries<T> sum(zero, 0, 1 << 20);
  std::vector<int> phi(static_cast<std::size_t>(V), 0);
  for (;;) {
    HbarSeries<T> term(zero, 0, 1 << 20, {one_like(zero)});
    for (int v = 0; v < V; ++v) term = term * rules.vertex_factor(val[v], phi[v], L);
    for (auto [a, b] : g.edges()) term = term * HbarSeries<T>(zero, 1, 1 << 20, {hat(phi[a], phi[b])});
    sum = sum + term;
    int v = 0;
    while (v < V && ++phi[v] == N) phi[v++] = 0;
    if (v == V) break;
  }
  sum.normalize();
  if (!sum.is_zero() && sum.min_deg() < L - 1) throw std::logic_error("hbar degree floor violated");
  return sum.coefficient(n - 1) * lift_rational(zero, Rational(Integer(1), Integer(aut_order(g))));
}

/// Runs body(i) for i in [0, count) on up to `workers` threads (0 means one
/// per hardware thread). Rethrows the first exception.
template <class F>
void parallel_for(std::size_t count, unsigned workers, F&& body) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  auto run = [&] {
    for (;;) {
      std::size_t i = next++;
      if (i >= count || failed) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Diagrams of S with 2 <= L <= n.
inline std::vector<const Multigraph*> contributing_diagrams(const DiagramSet& s, int n) {
  if (s.n < n) throw Error("diagram set of order " + std::to_string(s.n) + " cannot give S_" + std::to_string(n));
  std::vector<const Multigraph*> out;
  for (const auto& g : s.diagrams) {
    int l = loop_number(g);
    if (l >= 2 && l <= n) out.push_back(&g);
  }
  return out;
}

/// Sum of the diagram values plus the vacuum term; per-diagram values are
/// summed in diagram order.
template <class T>
T sum_diagrams(const std::vector<const Multigraph*>& ds, const FeynmanRules<T>& rules, unsigned workers) {
  std::vector<std::optional<T>> values(ds.size());
  parallel_for(ds.size(), workers, [&](std::size_t i) { values[i] = evaluate_diagram(*ds[i], rules); });
  T total = rules.vacuum();
  for (const auto& v : values) total += *v;
  return total;
}

// -------------------------------------------------------------------- results

struct LoopResult {
  int n = 0;
  FieldElement value;
  std::string datum_name;
};

enum class Backend {
  Exact,    // every operation over Q(x)
  Modular,  // images in F_p[x]/(m), then CRT and rational reconstruction
};

struct InvariantOptions {
  Backend backend = Backend::Modular;
  unsigned workers = 0;
};

inline FeynmanRules<FieldElement> exact_rules(const NZDatum& d, int n, int extra_terms = 0) {
  return FeynmanRules<FieldElement>::build(d, n, [](const FieldElement& z) { return z; }, extra_terms);
}

/// Exact propagator H^{-1}. Throws Degenerate.
inline Matrix<FieldElement> propagator(const NZDatum& d) { return exact_rules(d, 2).hat(); }

/// Vacuum contribution at order n.
inline FieldElement vacuum(int n, const NZDatum& d) { return exact_rules(d, n).vacuum(); }

/// Gamma^{(k)}_i (i is 0-based) for a diagram of loop number L at order n.
inline HbarSeries<FieldElement> vertex_factor(int k, int i, int n, int L, const NZDatum& d) {
  return exact_rules(d, n).vertex_factor(k, i, L, n - 1);
}

namespace detail {

inline FieldElement modular_invariant(const std::vector<const Multigraph*>& ds, const FeynmanRules<FieldElement>& exact,
                                      const FieldPtr& field, unsigned workers) {
  const int deg = field->degree();
  if (deg > ModularRing::kMaxDegree) throw Error("field degree too large for the modular backend");
  CrtAccumulator acc(static_cast<std::size_t>(deg));
  modp::PrimeSequence primes;
  std::optional<std::vector<Rational>> last;
  int stable = 0;
  int bad = 0;
  for (int used = 0; used < 400;) {
    const std::uint64_t p = primes.next();
    ModularRing ring(p, field->minpoly());
    ModElement total(&ring);
    try {
      auto rules = exact.map<ModElement>([&](const FieldElement& a) { return ModElement::from_field(&ring, a); });
      total = sum_diagrams(ds, rules, workers);
    } catch (const BadPrime&) {
      if (++bad > 50) throw Error("too many unlucky primes");
      continue;
    }
    ++used;
    std::vector<std::uint64_t> images;
    for (int i = 0; i < deg; ++i) images.push_back(total.coeff(i));
    acc.add(images, p);
    auto rec = acc.reconstruct();
    if (rec && last && *rec == *last) {
      // unchanged after two further primes
      if (++stable >= 2) return FieldElement(field, *rec);
    } else {
      stable = 0;
    }
    last = std::move(rec);
  }
  throw Error("rational reconstruction did not stabilise");
}

}  // namespace detail

/// S_{gamma,n}: the sum of evaluated diagrams of S with L <= n plus the
/// vacuum term, exact in the datum's field.
inline LoopResult nloop_invariant(int n, const NZDatum& d, const DiagramSet& s, InvariantOptions opt = {}) {
  const auto ds = contributing_diagrams(s, n);
  auto exact = exact_rules(d, n);
  LoopResult r{n, FieldElement(d.field), d.name};
  if (opt.backend == Backend::Exact) {
    r.value = sum_diagrams(ds, exact, opt.workers);
  } else {
    r.value = detail::modular_invariant(ds, exact, d.field, opt.workers);
  }
  return r;
}

/// 1/2 det(A diag(z'') + B diag(1/z)) prod_j z_j^{f''_j} z''_j^{-f_j}, over T.
template <class T, class Lift>
T tau_value(const NZDatum& d, Lift&& lift) {
  std::vector<T> z, zdd, inv_z;
  for (const auto& s : d.shapes) {
    z.push_back(lift(s));
    inv_z.push_back(inverse(z.back()));
    zdd.push_back(one_like(z.back()) - inv_z.back());
  }
  const T& like = z.front();
  Matrix<T> m(static_cast<std::size_t>(d.N), static_cast<std::size_t>(d.N), zero_like(like));
  for (int i = 0; i < d.N; ++i)
    for (int j = 0; j < d.N; ++j)
      m(i, j) = lift_rational(like, Rational(d.A[i][j])) * zdd[j] + lift_rational(like, Rational(d.B[i][j])) * inv_z[j];
  T t = determinant(m) * lift_rational(like, Rational(1) / 2);
  for (int j = 0; j < d.N; ++j) t *= ipow(z[j], d.f_dd[j]) * ipow(zdd[j], -d.f[j]);
  return t;
}

/// The 1-loop invariant tau (defined up to sign). Throws Degenerate when it
/// vanishes, which happens exactly when the propagator does not exist.
inline LoopResult one_loop(const NZDatum& d) {
  for (const auto& z : d.shapes)
    if (z.is_zero() || (z - z.one_like()).is_zero()) throw Degenerate("a shape is 0 or 1");
  FieldElement t = tau_value<FieldElement>(d, [](const FieldElement& z) { return z; });
  if (t.is_zero()) throw Degenerate("tau vanishes; the datum is degenerate");
  return LoopResult{1, t, d.name};
}

}  // namespace nloop
