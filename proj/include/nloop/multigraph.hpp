#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "nloop/errors.hpp"

namespace nloop {

/// Connected multigraph with loops and parallel edges: a Feynman diagram.
/// Edges are stored as sorted pairs (u <= v); u == v is a loop.
class Multigraph {
 public:
  using Edge = std::pair<int, int>;

  Multigraph() = default;

  Multigraph(int vertex_count, std::vector<Edge> edges) : n_(vertex_count), edges_(std::move(edges)) {
    if (n_ < 1) throw Error("multigraph needs at least one vertex");
    for (auto& [u, v] : edges_) {
      if (u < 0 || v < 0 || u >= n_ || v >= n_) throw Error("edge endpoint out of range");
      if (u > v) std::swap(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
  }

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Valence per vertex; a loop counts twice.
  std::vector<int> valences() const {
    std::vector<int> val(static_cast<std::size_t>(n_), 0);
    for (auto [u, v] : edges_) {
      ++val[u];
      ++val[v];
    }
    return val;
  }

  std::vector<int> loops() const {
    std::vector<int> l(static_cast<std::size_t>(n_), 0);
    for (auto [u, v] : edges_)
      if (u == v) ++l[u];
    return l;
  }

  /// Symmetric n*n multiplicity matrix; the diagonal holds loop counts.
  std::vector<std::uint8_t> adjacency() const {
    std::vector<std::uint8_t> a(static_cast<std::size_t>(n_ * n_), 0);
    for (auto [u, v] : edges_) {
      ++a[u * n_ + v];
      if (u != v) ++a[v * n_ + u];
    }
    return a;
  }

  bool is_connected() const {
    std::vector<int> parent(static_cast<std::size_t>(n_));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    int components = n_;
    for (auto [u, v] : edges_) {
      int a = find(u), b = find(v);
      if (a != b) {
        parent[a] = b;
        --components;
      }
    }
    return components == 1;
  }

  /// First Betti number E - V + 1 (the graph is assumed connected).
  int betti() const { return edge_count() - n_ + 1; }

  Multigraph with_edge(int u, int v) const {
    Multigraph g = *this;
    if (u > v) std::swap(u, v);
    g.edges_.insert(std::upper_bound(g.edges_.begin(), g.edges_.end(), Edge{u, v}), Edge{u, v});
    return g;
  }

  friend bool operator==(const Multigraph& a, const Multigraph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

  /// Sort order of diagram files: vertex count, then edge count, then the
  /// edge list lexicographically.
  friend bool operator<(const Multigraph& a, const Multigraph& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    if (a.edges_.size() != b.edges_.size()) return a.edges_.size() < b.edges_.size();
    return a.edges_ < b.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

/// Feynman loop number |V_1| + |V_2| + b_1.
inline int loop_number(const Multigraph& g) {
  int low = 0;
  for (int k : g.valences())
    if (k == 1 || k == 2) ++low;
  return low + g.betti();
}

namespace detail {

/// Colour refinement to the coarsest equitable partition finer than the
/// input. Colours are ranks of isomorphism-invariant signatures, so the
/// resulting ordered partition is itself invariant.
class Refiner {
 public:
  Refiner(int n, const std::vector<std::uint8_t>& adj) : n_(n), adj_(adj), order_(static_cast<std::size_t>(n)) {}

  /// Returns the number of colours.
  int refine(std::vector<int>& colors) {
    int count = distinct(colors);
    std::vector<std::vector<int>> sig(static_cast<std::size_t>(n_));
    while (count < n_) {
      for (int v = 0; v < n_; ++v) {
        auto& s = sig[v];
        s.clear();
        s.push_back(colors[v]);
        s.push_back(adj_[v * n_ + v]);
        pairs_.clear();
        for (int u = 0; u < n_; ++u) {
          if (u != v && adj_[v * n_ + u]) pairs_.push_back(colors[u] * 256 + adj_[v * n_ + u]);
        }
        std::sort(pairs_.begin(), pairs_.end());
        s.insert(s.end(), pairs_.begin(), pairs_.end());
      }
      std::iota(order_.begin(), order_.end(), 0);
      std::sort(order_.begin(), order_.end(), [&](int a, int b) { return sig[a] < sig[b]; });
      int rank = 0;
      for (int i = 0; i < n_; ++i) {
        if (i > 0 && sig[order_[i]] != sig[order_[i - 1]]) ++rank;
        colors[order_[i]] = rank;
      }
      int next = rank + 1;
      if (next == count) break;
      count = next;
    }
    return count;
  }

  static int distinct(std::vector<int>& colors) {
    std::vector<int> sorted = colors;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (auto& c : colors) c = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), c) - sorted.begin());
    return static_cast<int>(sorted.size());
  }

 private:
  int n_;
  const std::vector<std::uint8_t>& adj_;
  std::vector<int> order_;
  std::vector<int> pairs_;
};

/// Initial colouring by (valence, loops), refined.
inline std::vector<int> equitable_colors(int n, const std::vector<std::uint8_t>& adj) {
  std::vector<int> colors(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    int val = 0;
    for (int u = 0; u < n; ++u) val += adj[v * n + u];
    val += adj[v * n + v];
    colors[v] = val * 64 + adj[v * n + v];
  }
  Refiner(n, adj).refine(colors);
  return colors;
}

/// Individualise-and-refine search for the lexicographically smallest
/// adjacency code. Twins (vertices with identical neighbourhoods) in a cell
/// are branched on once, and at the root, vertices in the orbit of an
/// already-explored vertex are skipped using automorphisms found at leaves.
class Canonizer {
 public:
  Canonizer(int n, const std::vector<std::uint8_t>& adj) : n_(n), adj_(adj), refiner_(n, adj), orbit_(static_cast<std::size_t>(n)) {
    std::iota(orbit_.begin(), orbit_.end(), 0);
  }

  /// Returns position -> original vertex for the canonical labelling.
  std::vector<int> run() {
    std::vector<int> colors = equitable_colors(n_, adj_);
    search(colors, 0);
    return best_inv_;
  }

  const std::string& code() const { return best_code_; }

 private:
  bool twins(int a, int b) const {
    if (adj_[a * n_ + a] != adj_[b * n_ + b]) return false;
    for (int x = 0; x < n_; ++x) {
      if (x == a || x == b) continue;
      if (adj_[a * n_ + x] != adj_[b * n_ + x]) return false;
    }
    return true;
  }

  int find(int x) {
    while (orbit_[x] != x) x = orbit_[x] = orbit_[orbit_[x]];
    return x;
  }

  void search(std::vector<int>& colors, int depth) {
    int count = refiner_.refine(colors);
    if (count == n_) {
      leaf(colors);
      return;
    }
    // First non-singleton cell in colour order.
    std::vector<int> size(static_cast<std::size_t>(count), 0);
    for (int c : colors) ++size[c];
    int target = 0;
    while (size[target] == 1) ++target;
    std::vector<int> tried;
    for (int v = 0; v < n_; ++v) {
      if (colors[v] != target) continue;
      bool skip = false;
      for (int t : tried) {
        if (twins(v, t) || (depth == 0 && find(v) == find(t))) {
          skip = true;
          break;
        }
      }
      if (skip) continue;
      tried.push_back(v);
      std::vector<int> child(colors);
      for (int w = 0; w < n_; ++w) child[w] = 2 * colors[w] + (w == v ? 0 : 1);
      Refiner::distinct(child);
      search(child, depth + 1);
    }
  }

  void leaf(const std::vector<int>& colors) {
    std::vector<int> inv(static_cast<std::size_t>(n_));
    for (int v = 0; v < n_; ++v) inv[colors[v]] = v;
    std::string code;
    code.reserve(static_cast<std::size_t>(n_ * (n_ + 1) / 2 + 1));
    code.push_back(static_cast<char>(n_));
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) code.push_back(static_cast<char>(adj_[inv[i] * n_ + inv[j]]));
    if (best_code_.empty() || code < best_code_) {
      best_code_ = std::move(code);
      best_inv_ = std::move(inv);
    } else if (code == best_code_) {
      // v -> best_inv_[colors[v]] is an automorphism; merge its orbits.
      for (int v = 0; v < n_; ++v) {
        int a = find(v), b = find(best_inv_[colors[v]]);
        if (a != b) orbit_[std::max(a, b)] = std::min(a, b);
      }
    }
  }

  int n_;
  const std::vector<std::uint8_t>& adj_;
  Refiner refiner_;
  std::vector<int> orbit_;
  std::string best_code_;
  std::vector<int> best_inv_;
};

}  // namespace detail

/// Canonical code: n followed by the upper triangle (diagonal included) of
/// the multiplicity matrix under the canonical labelling. Two multigraphs
/// have the same code iff they are isomorphic.
inline std::string canonical_code(const Multigraph& g) {
  auto adj = g.adjacency();
  detail::Canonizer c(g.vertex_count(), adj);
  c.run();
  return c.code();
}

inline Multigraph from_canonical_code(const std::string& code) {
  const int n = static_cast<unsigned char>(code[0]);
  std::vector<Multigraph::Edge> edges;
  std::size_t k = 1;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j, ++k)
      for (int m = 0; m < static_cast<unsigned char>(code[k]); ++m) edges.emplace_back(i, j);
  return Multigraph(n, std::move(edges));
}

/// Isomorphism-invariant representative of g.
inline Multigraph canonical_form(const Multigraph& g) { return from_canonical_code(canonical_code(g)); }

/// Number of vertex permutations preserving the multiplicity matrix.
inline std::uint64_t vertex_automorphism_count(const Multigraph& g) {
  const int n = g.vertex_count();
  const auto adj = g.adjacency();
  const auto colors = detail::equitable_colors(n, adj);
  std::vector<int> image(static_cast<std::size_t>(n), -1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::uint64_t count = 0;
  auto extend = [&](auto&& self, int v) -> void {
    if (v == n) {
      ++count;
      return;
    }
    for (int w = 0; w < n; ++w) {
      if (used[w] || colors[w] != colors[v]) continue;
      bool ok = adj[v * n + v] == adj[w * n + w];
      for (int u = 0; ok && u < v; ++u) ok = adj[v * n + u] == adj[w * n + image[u]];
      if (!ok) continue;
      image[v] = w;
      used[w] = 1;
      self(self, v + 1);
      used[w] = 0;
    }
    image[v] = -1;
  };
  extend(extend, 0);
  return count;
}

/// Order of the half-edge automorphism group (the inverse symmetry factor):
/// vertex automorphisms x prod mult(u,v)! x prod_v 2^loops(v) loops(v)!.
inline std::uint64_t aut_order(const Multigraph& g) {
  std::uint64_t order = vertex_automorphism_count(g);
  auto factorial = [](int k) {
    std::uint64_t f = 1;
    for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
  };
  const auto& e = g.edges();
  for (std::size_t i = 0; i < e.size();) {
    std::size_t j = i;
    while (j < e.size() && e[j] == e[i]) ++j;
    int mult = static_cast<int>(j - i);
    order *= factorial(mult);
    if (e[i].first == e[i].second) order <<= mult;
    i = j;
  }
  return order;
}

}  // namespace nloop
