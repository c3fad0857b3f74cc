#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "nloop/errors.hpp"
#include "nloop/multigraph.hpp"

namespace nloop {

/// All connected Feynman diagrams with 2 <= L(G) <= n, up to isomorphism,
/// in file sort order.
struct DiagramSet {
  int n = 0;
  std::vector<Multigraph> diagrams;

  friend bool operator==(const DiagramSet&, const DiagramSet&) = default;
};

namespace detail {

// Rooted trees are numbered globally in order of increasing size; a tree is
// the nonincreasing list of its children's numbers.
class RootedTreeTable {
 public:
  explicit RootedTreeTable(int max_size) {
    if (max_size < 1) return;
    sizes_.push_back(1);
    children_.push_back({});
    for (int s = 2; s <= max_size; ++s) {
      const int limit = static_cast<int>(sizes_.size());
      std::vector<int> current;
      emit_children(s - 1, limit - 1, s - 1, current, [&](const std::vector<int>& kids) {
        sizes_.push_back(s);
        children_.push_back(kids);
      });
    }
  }

  int count() const { return static_cast<int>(sizes_.size()); }
  int size(int id) const { return sizes_[id]; }
  const std::vector<int>& children(int id) const { return children_[id]; }

  /// Calls `out` for every nonincreasing list of tree ids whose sizes sum to
  /// `remaining` and each has size <= max_child.
  template <class F>
  void emit_children(int remaining, int max_id, int max_child, std::vector<int>& current, F&& out) const {
    if (remaining == 0) {
      out(current);
      return;
    }
    for (int id = max_id; id >= 0; --id) {
      if (sizes_[id] > remaining || sizes_[id] > max_child) continue;
      current.push_back(id);
      emit_children(remaining - sizes_[id], id, max_child, current, out);
      current.pop_back();
    }
  }

  /// Appends the rooted tree `id` with its root at vertex `root`.
  void append(int id, int root, int& next_vertex, std::vector<Multigraph::Edge>& edges) const {
    for (int child : children_[id]) {
      int v = next_vertex++;
      edges.emplace_back(root, v);
      append(child, v, next_vertex, edges);
    }
  }

 private:
  std::vector<int> sizes_;
  std::vector<std::vector<int>> children_;
};

}  // namespace detail

/// Free trees with exactly `vertices` vertices, one per isomorphism class,
/// from centroid-rooted canonical rooted trees: a single centroid whose
/// branches all have fewer than vertices/2 vertices, or two adjacent
/// centroids each carrying a rooted tree of vertices/2 vertices.
inline std::vector<Multigraph> generate_trees_exact(int vertices) {
  std::vector<Multigraph> out;
  if (vertices < 1) return out;
  if (vertices == 1) {
    out.emplace_back(1, std::vector<Multigraph::Edge>{});
    return out;
  }
  detail::RootedTreeTable table(vertices - 1);
  const int max_branch = (vertices - 1) / 2;
  std::vector<int> current;
  table.emit_children(vertices - 1, table.count() - 1, max_branch, current, [&](const std::vector<int>& kids) {
    std::vector<Multigraph::Edge> edges;
    int next = 1;
    for (int child : kids) {
      int v = next++;
      edges.emplace_back(0, v);
      table.append(child, v, next, edges);
    }
    out.emplace_back(vertices, std::move(edges));
  });
  if (vertices % 2 == 0) {
    const int half = vertices / 2;
    for (int a = 0; a < table.count(); ++a) {
      if (table.size(a) != half) continue;
      for (int b = a; b < table.count(); ++b) {
        if (table.size(b) != half) continue;
        std::vector<Multigraph::Edge> edges{{0, half}};
        int next = 1;
        table.append(a, 0, next, edges);
        next = half + 1;
        table.append(b, half, next, edges);
        out.emplace_back(vertices, std::move(edges));
      }
    }
  }
  for (auto& t : out) t = canonical_form(t);
  return out;
}

/// All trees (including the single vertex) with at most max_vertices
/// vertices, in canonical form.
inline std::vector<Multigraph> generate_trees(int max_vertices) {
  std::vector<Multigraph> out;
  for (int v = 1; v <= max_vertices; ++v) {
    auto trees = generate_trees_exact(v);
    out.insert(out.end(), trees.begin(), trees.end());
  }
  return out;
}

namespace detail {

/// Lower bound on L over every multigraph obtained from g by adding edges
/// without pushing b_1 above n. Each added edge raises b_1 by one and
/// supplies two valence increments; a 2-valent vertex leaves {V_1, V_2} with
/// one increment and a 1-valent vertex with two.
inline int loop_number_lower_bound(const Multigraph& g, int n) {
  int v1 = 0, v2 = 0;
  for (int k : g.valences()) {
    if (k == 1) ++v1;
    if (k == 2) ++v2;
  }
  const int b1 = g.betti();
  int best = 1 << 20;
  for (int e = 0; b1 + e <= n; ++e) {
    int increments = 2 * e;
    int removed2 = std::min(v2, increments);
    int removed1 = std::min(v1, (increments - removed2) / 2);
    best = std::min(best, b1 + e + v1 + v2 - removed1 - removed2);
  }
  return best;
}

inline bool is_diagram(const Multigraph& g, int n) {
  for (int k : g.valences())
    if (k < 1) return false;
  int l = loop_number(g);
  return l >= 2 && l <= n;
}

}  // namespace detail

/// Every isomorphism class of connected multigraphs with all valences >= 1
/// and 2 <= L(G) <= n. Starts from the trees on at most 2n-2 vertices and
/// adds one edge at a time (loops included), deduplicating each layer by
/// canonical code. Branches are cut once no completion can reach L <= n;
/// b_1 > n is the weakest such cut.
inline DiagramSet generate_diagrams(int n) {
  if (n < 2) throw Error("generate_diagrams needs n >= 2");
  DiagramSet result;
  result.n = n;
  std::vector<Multigraph> layer;
  for (auto& t : generate_trees(2 * n - 2)) {
    if (detail::loop_number_lower_bound(t, n) <= n) layer.push_back(std::move(t));
  }
  for (int b1 = 0; b1 <= n && !layer.empty(); ++b1) {
    std::unordered_set<std::string> seen;
    std::vector<Multigraph> next;
    for (const auto& g : layer) {
      if (detail::is_diagram(g, n)) result.diagrams.push_back(g);
      if (b1 == n) continue;
      const int v = g.vertex_count();
      for (int a = 0; a < v; ++a) {
        for (int b = a; b < v; ++b) {
          Multigraph h = g.with_edge(a, b);
          if (detail::loop_number_lower_bound(h, n) > n) continue;
          std::string code = canonical_code(h);
          if (seen.insert(code).second) next.push_back(from_canonical_code(code));
        }
      }
    }
    layer = std::move(next);
  }
  std::sort(result.diagrams.begin(), result.diagrams.end());
  return result;
}

/// Byte-reproducible diagram file: one diagram per line, sorted.
inline std::string diagrams_to_json(const DiagramSet& s) {
  std::ostringstream os;
  os << "{\"n\": " << s.n << ", \"count\": " << s.diagrams.size() << ", \"diagrams\": [";
  for (std::size_t i = 0; i < s.diagrams.size(); ++i) {
    const auto& g = s.diagrams[i];
    os << (i ? ",\n" : "\n") << "{\"vertices\": " << g.vertex_count() << ", \"edges\": [";
    for (std::size_t k = 0; k < g.edges().size(); ++k) {
      os << (k ? ", " : "") << "[" << g.edges()[k].first << ", " << g.edges()[k].second << "]";
    }
    os << "]}";
  }
  os << "\n]}\n";
  return os.str();
}

inline DiagramSet diagrams_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedFile(std::string("diagram file is not valid JSON: ") + e.what());
  }
  DiagramSet s;
  try {
    s.n = j.at("n").get<int>();
    const auto count = j.at("count").get<std::size_t>();
    for (const auto& d : j.at("diagrams")) {
      int v = d.at("vertices").get<int>();
      std::vector<Multigraph::Edge> edges;
      for (const auto& e : d.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw MalformedFile("edge must be a pair");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
      }
      Multigraph g(v, std::move(edges));
      if (!g.is_connected() || !detail::is_diagram(g, s.n)) throw MalformedFile("entry is not a diagram of loop order <= n");
      s.diagrams.push_back(canonical_form(g));
    }
    if (count != s.diagrams.size()) throw MalformedFile("diagram count does not match the list");
  } catch (const nlohmann::json::exception& e) {
    throw MalformedFile(std::string("diagram file has the wrong structure: ") + e.what());
  } catch (const MalformedFile&) {
    throw;
  } catch (const Error& e) {
    throw MalformedFile(std::string("bad diagram: ") + e.what());
  }
  std::sort(s.diagrams.begin(), s.diagrams.end());
  return s;
}

inline void save_diagrams(const DiagramSet& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << diagrams_to_json(s);
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline DiagramSet load_diagrams(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return diagrams_from_json(buf.str());
}

}  // namespace nloop
