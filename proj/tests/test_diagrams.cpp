#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "nloop/nloop.hpp"
#include "oracles.hpp"

using namespace nloop;

namespace {

Multigraph edge() { return Multigraph(2, {{0, 1}}); }
Multigraph loop() { return Multigraph(1, {{0, 0}}); }
Multigraph tadpole() { return Multigraph(2, {{0, 0}, {0, 1}}); }
Multigraph theta() { return Multigraph(2, {{0, 1}, {0, 1}, {0, 1}}); }
Multigraph dumbbell() { return Multigraph(2, {{0, 0}, {0, 1}, {1, 1}}); }
Multigraph figure_eight() { return Multigraph(1, {{0, 0}, {0, 0}}); }

Multigraph relabel(const Multigraph& g, const std::vector<int>& perm) {
  std::vector<Multigraph::Edge> e;
  for (auto [u, v] : g.edges()) e.emplace_back(perm[u], perm[v]);
  return Multigraph(g.vertex_count(), e);
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("nloop_test_" + name)).string();
}

}  // namespace

TEST(LoopNumber, Examples) {
  EXPECT_EQ(loop_number(edge()), 2);
  EXPECT_EQ(loop_number(loop()), 2);
  EXPECT_EQ(loop_number(theta()), 2);
  EXPECT_EQ(loop_number(Multigraph(3, {{0, 1}, {1, 2}})), 3);
}

TEST(CanonicalForm, InvariantUnderRelabeling) {
  auto t = theta();
  EXPECT_EQ(canonical_code(relabel(t, {1, 0})), canonical_code(t));
  EXPECT_NE(canonical_code(theta()), canonical_code(dumbbell()));
}

TEST(CanonicalForm, PermutationFuzz) {
  std::mt19937 rng(42);
  for (int t = 0; t < 200; ++t) {
    const int n = 6;
    std::uniform_int_distribution<int> vert(0, n - 1), extra(0, 5);
    std::vector<Multigraph::Edge> e;
    for (int v = 1; v < n; ++v) e.emplace_back(std::uniform_int_distribution<int>(0, v - 1)(rng), v);
    for (int k = extra(rng); k > 0; --k) e.emplace_back(vert(rng), vert(rng));
    Multigraph g(n, e);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto h = relabel(g, perm);
    EXPECT_EQ(canonical_form(g), canonical_form(h));
    EXPECT_EQ(aut_order(g), aut_order(h));
  }
}

TEST(CanonicalForm, AgreesWithBruteForceIsomorphism) {
  // Two graphs get the same canonical code iff their brute-force keys agree.
  std::mt19937 rng(9);
  std::vector<Multigraph> gs;
  for (int t = 0; t < 150; ++t) {
    const int n = 5;
    std::vector<Multigraph::Edge> e;
    for (int v = 1; v < n; ++v) e.emplace_back(std::uniform_int_distribution<int>(0, v - 1)(rng), v);
    for (int k = std::uniform_int_distribution<int>(0, 2)(rng); k > 0; --k)
      e.emplace_back(std::uniform_int_distribution<int>(0, n - 1)(rng), std::uniform_int_distribution<int>(0, n - 1)(rng));
    gs.emplace_back(n, e);
  }
  for (std::size_t i = 0; i < gs.size(); ++i)
    for (std::size_t j = i + 1; j < gs.size(); ++j) {
      bool same_code = canonical_code(gs[i]) == canonical_code(gs[j]);
      bool same_key = oracle::brute_key(5, gs[i].edges()) == oracle::brute_key(5, gs[j].edges());
      EXPECT_EQ(same_code, same_key);
    }
}

TEST(AutOrder, Examples) {
  EXPECT_EQ(aut_order(edge()), 2u);
  EXPECT_EQ(aut_order(loop()), 2u);
  EXPECT_EQ(aut_order(tadpole()), 2u);
  EXPECT_EQ(aut_order(theta()), 12u);
  EXPECT_EQ(aut_order(figure_eight()), 8u);
  EXPECT_EQ(aut_order(dumbbell()), 8u);
}

TEST(AutOrder, MatchesHalfEdgeBruteForce) {
  auto s = generate_diagrams(4);
  int checked = 0;
  for (const auto& g : s.diagrams) {
    if (2 * g.edge_count() > 8) continue;
    EXPECT_EQ(aut_order(g), oracle::half_edge_aut(g)) << canonical_code(g);
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

TEST(Trees, Counts) {
  const int expected[] = {1, 1, 1, 2, 3, 6, 11, 23, 47, 106};
  for (int v = 1; v <= 10; ++v) {
    auto trees = generate_trees_exact(v);
    EXPECT_EQ(static_cast<int>(trees.size()), expected[v - 1]) << v;
    std::set<std::string> codes;
    for (const auto& t : trees) {
      EXPECT_EQ(t.edge_count(), v - 1);
      EXPECT_TRUE(t.is_connected());
      codes.insert(canonical_code(t));
    }
    EXPECT_EQ(codes.size(), trees.size());
  }
  EXPECT_EQ(generate_trees(1).size(), 1u);
  EXPECT_EQ(generate_trees(4).size(), 5u);
}

TEST(Diagrams, TwoLoopSet) {
  auto s = generate_diagrams(2);
  std::vector<Multigraph> expected{edge(), loop(), tadpole(), theta(), dumbbell(), figure_eight()};
  ASSERT_EQ(s.diagrams.size(), 6u);
  std::set<std::string> want, got;
  for (const auto& g : expected) want.insert(canonical_code(g));
  for (const auto& g : s.diagrams) got.insert(canonical_code(g));
  EXPECT_EQ(want, got);
  EXPECT_THROW(generate_diagrams(1), Error);
}

TEST(Diagrams, CountsAndStructure) {
  const std::size_t counts[] = {6, 40, 331, 3700};
  std::set<std::string> previous;
  for (int n = 2; n <= 5; ++n) {
    auto s = generate_diagrams(n);
    EXPECT_EQ(s.diagrams.size(), counts[n - 2]);
    std::set<std::string> codes;
    for (const auto& g : s.diagrams) {
      int l = loop_number(g);
      EXPECT_GE(l, 2);
      EXPECT_LE(l, n);
      EXPECT_TRUE(g.is_connected());
      EXPECT_LE(g.vertex_count(), 2 * n - 2);
      for (int k : g.valences()) EXPECT_GE(k, 1);
      EXPECT_EQ(canonical_form(g), g);
      codes.insert(canonical_code(g));
    }
    EXPECT_EQ(codes.size(), s.diagrams.size());
    EXPECT_TRUE(std::includes(codes.begin(), codes.end(), previous.begin(), previous.end()));
    EXPECT_TRUE(std::is_sorted(s.diagrams.begin(), s.diagrams.end()));
    previous = codes;
  }
}

TEST(Diagrams, MatchBruteForceEnumeration) {
  const int max_v = 5, max_e = 6, n = 5;
  auto brute = oracle::enumerate_classes(max_v, max_e, n);
  std::set<std::string> ours;
  for (const auto& g : generate_diagrams(n).diagrams)
    if (g.vertex_count() <= max_v && g.edge_count() <= max_e) ours.insert(oracle::brute_key(g.vertex_count(), g.edges()));
  EXPECT_EQ(ours, brute);
  EXPECT_GT(brute.size(), 100u);
}

TEST(DiagramFile, RoundTrip) {
  auto s = generate_diagrams(3);
  auto path = temp_path("roundtrip.json");
  save_diagrams(s, path);
  EXPECT_EQ(load_diagrams(path), s);
  std::string text = diagrams_to_json(s);
  EXPECT_EQ(diagrams_to_json(diagrams_from_json(text)), text);
  std::remove(path.c_str());
}

TEST(DiagramFile, NormalizesOnLoad) {
  std::string text = R"({"n": 2, "count": 2, "diagrams": [
    {"vertices": 2, "edges": [[1, 1], [1, 0]]},
    {"vertices": 2, "edges": [[1, 0]]}]})";
  auto s = diagrams_from_json(text);
  ASSERT_EQ(s.diagrams.size(), 2u);
  EXPECT_EQ(s.diagrams[0], canonical_form(edge()));
  EXPECT_EQ(s.diagrams[1], canonical_form(tadpole()));
}

TEST(DiagramFile, Malformed) {
  std::string text = diagrams_to_json(generate_diagrams(2));
  EXPECT_THROW(diagrams_from_json(text.substr(0, text.size() / 2)), MalformedFile);
  EXPECT_THROW(diagrams_from_json(R"({"n": 2, "count": 5, "diagrams": []})"), MalformedFile);
  EXPECT_THROW(diagrams_from_json(R"({"n": 2, "count": 1, "diagrams": [{"vertices": 3, "edges": [[0, 1]]}]})"),
               MalformedFile);
  EXPECT_THROW(load_diagrams(temp_path("does_not_exist.json")), IoError);
}
