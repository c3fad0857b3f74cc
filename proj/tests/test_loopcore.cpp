#include <gtest/gtest.h>

#include "nloop/nloop.hpp"

using namespace nloop;

namespace {

const char* kS2 = "46490/198147*x^3 + 231209/396294*x^2 + 473191/792588*x - 62777/264196";
const char* kS3 = "570416/16974593*x^3 + 2833463/33949186*x^2 + 1122215/16974593*x - 1386486/16974593";
const char* kS4 =
    "-2255130587026/50451970187565*x^3 - 91695358340911/807231523001040*x^2 - 85651263871967/807231523001040*x + "
    "1596902056811/20180788075026";
const char* kTau = "-7/2*x^3 - 17/2*x^2 - 17/2*x + 6";

const DiagramSet& diagrams(int n) {
  static std::vector<DiagramSet> cache;
  while (static_cast<int>(cache.size()) < n - 1) cache.push_back(generate_diagrams(static_cast<int>(cache.size()) + 2));
  return cache[n - 2];
}

}  // namespace

TEST(Bernoulli, Values) {
  EXPECT_EQ(bernoulli(0), Rational(1));
  EXPECT_EQ(bernoulli(1), Rational(-1) / 2);
  EXPECT_EQ(bernoulli(2), Rational(1) / 6);
  EXPECT_EQ(bernoulli(3), Rational(0));
  EXPECT_EQ(bernoulli(4), Rational(-1) / 30);
  EXPECT_EQ(bernoulli(6), Rational(1) / 42);
  EXPECT_EQ(bernoulli(12), Rational(-691) / 2730);
  for (int k = 3; k < 30; k += 2) EXPECT_EQ(bernoulli(k), 0) << k;
}

TEST(NegPolylog, RationalValues) {
  Rational half = Rational(1) / 2;
  EXPECT_EQ(neg_polylog(0, half), Rational(1));
  EXPECT_EQ(neg_polylog(-1, half), Rational(2));
  EXPECT_EQ(neg_polylog(-2, half), Rational(6));
  EXPECT_EQ(neg_polylog(-3, half), Rational(26));
  EXPECT_THROW(neg_polylog(-1, Rational(1)), PoleError);
  EXPECT_EQ(neg_polylog_numerator(2), (std::vector<Integer>{0, 1, 1}));
}

TEST(NegPolylog, AgreesWithSeriesInTheField) {
  auto d = builtin_6_1();
  const int digits = 30;
  int used = 0;
  std::vector<FieldElement> points;
  for (const auto& z : d.shapes)
    for (const auto& p : {z, z.inverse(), z_double_prime(z), z_double_prime(z).inverse()}) points.push_back(p);
  for (const auto& p : points) {
    Complex w = p.embed(digits);
    if (w.abs().to_double() > 0.8) continue;
    for (int s : {0, -1, -2}) {
      Complex exact = neg_polylog(s, p).embed(digits);
      Complex sum(w.precision()), power = w;
      for (int m = 1; m < 2000; ++m) {
        Complex mm(Rational(1), w.precision());
        for (int k = 0; k < -s; ++k) mm = mm * Complex(Rational(m), w.precision());
        sum += mm * power;
        power = power * w;
      }
      EXPECT_LT(log10_abs((sum - exact).abs()), -20) << "s = " << s;
    }
    ++used;
  }
  EXPECT_GT(used, 0);
}

TEST(Propagator, DiagonalCase) {
  auto d = builtin_6_1();
  d.A = IntMatrix(4, IntVector(4, 0));
  d.B = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  d.nu = d.f = IntVector(4, 0);
  auto hat = propagator(d);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) EXPECT_EQ(hat(i, j), d.shapes[i].one_like() - d.shapes[i]);
      else EXPECT_TRUE(hat(i, j).is_zero());
    }
}

TEST(Propagator, SymmetricAndInverseOfH) {
  auto rules = exact_rules(builtin_6_1(), 2);
  EXPECT_TRUE(rules.hat().is_symmetric());
  const auto& f = builtin_6_1().field;
  EXPECT_EQ(rules.hat() * rules.h(), Matrix<FieldElement>::identity(4, FieldElement(f), FieldElement::constant(f, 1)));
}

TEST(Propagator, DegenerateData) {
  auto d = builtin_6_1();
  d.B = IntMatrix(4, IntVector(4, 0));
  EXPECT_THROW(propagator(d), Degenerate);
}

TEST(VertexFactor, LowOrderCoefficients) {
  auto d = builtin_6_1();
  auto bnu = binv_nu(d);
  for (int i = 0; i < 4; ++i) {
    const auto& z = d.shapes[i];
    auto one = z.one_like();
    auto g1 = vertex_factor(1, i, 4, 2, d);
    EXPECT_EQ(g1.min_deg(), 0);
    auto want = -(z - one).inverse() * (Rational(1) / 2) - FieldElement::constant(d.field, bnu[i] / 2);
    EXPECT_EQ(g1.coefficient(0), want);
    auto g3 = vertex_factor(3, i, 4, 2, d);
    EXPECT_EQ(g3.min_deg(), -1);
    EXPECT_EQ(g3.coefficient(-1), -(z * ((z - one) * (z - one)).inverse()));
    auto g2 = vertex_factor(2, i, 4, 4, d);
    EXPECT_EQ(g2.coeffs().size(), 1u);
    EXPECT_EQ(g2.min_deg(), 0);
  }
}

TEST(Vacuum, OddOrdersVanish) {
  auto d = builtin_6_1();
  for (int n : {3, 5, 7}) EXPECT_TRUE(vacuum(n, d).is_zero()) << n;
}

TEST(Vacuum, EvenOrders) {
  auto d = builtin_6_1();
  auto ba = binv_a(d);
  Rational q = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) q += Rational(d.f[i] * d.f[j]) * ba(i, j);
  FieldElement v2 = FieldElement::constant(d.field, q / 8);
  FieldElement v4(d.field);
  for (const auto& z : d.shapes) {
    v2 += (z - z.one_like()).inverse() * (Rational(1) / 12);
    v4 += neg_polylog(-2, z.inverse());
  }
  EXPECT_EQ(vacuum(2, d), v2);
  EXPECT_EQ(vacuum(4, d), v4 * (Rational(-1) / 30 / 24));
}

TEST(EvaluateDiagram, SingleEdgeClosedForm) {
  auto d = builtin_6_1();
  auto rules = exact_rules(d, 2);
  auto bnu = binv_nu(d);
  std::vector<FieldElement> g;
  for (int i = 0; i < 4; ++i) {
    const auto& z = d.shapes[i];
    g.push_back(-(z - z.one_like()).inverse() * (Rational(1) / 2) - FieldElement::constant(d.field, bnu[i] / 2));
  }
  FieldElement want(d.field);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) want += g[i] * rules.hat()(i, j) * g[j];
  want *= Rational(1) / 2;
  EXPECT_EQ(evaluate_diagram(Multigraph(2, {{0, 1}}), rules), want);
}

TEST(EvaluateDiagram, EliminationMatchesBruteForce) {
  auto d = builtin_6_1();
  for (int n : {2, 3}) {
    auto rules = exact_rules(d, n);
    for (const auto& g : diagrams(n).diagrams)
      EXPECT_EQ(evaluate_diagram(g, rules), evaluate_diagram_bruteforce(g, rules)) << canonical_code(g);
  }
}

TEST(EvaluateDiagram, TruncationInsensitivity) {
  auto d = builtin_6_1();
  auto rules = exact_rules(d, 3);
  auto longer = exact_rules(d, 3, 3);
  for (const auto& g : diagrams(3).diagrams) {
    auto v = evaluate_diagram(g, rules);
    EXPECT_EQ(evaluate_diagram_bruteforce(g, longer), v) << canonical_code(g);
    EXPECT_EQ(evaluate_diagram(g, longer), v);
  }
}

TEST(EvaluateDiagram, ModularImagesMatchExact) {
  auto d = builtin_6_1();
  auto rules = exact_rules(d, 4);
  ModularRing ring(modp::PrimeSequence().next(), d.field->minpoly());
  auto mod = rules.map<ModElement>([&](const FieldElement& a) { return ModElement::from_field(&ring, a); });
  for (const auto& g : diagrams(4).diagrams) {
    if (g.vertex_count() > 4) continue;
    EXPECT_EQ(evaluate_diagram(g, mod), ModElement::from_field(&ring, evaluate_diagram(g, rules)));
  }
}

TEST(Invariant, GoldenValuesBothBackends) {
  auto d = builtin_6_1();
  const char* golden[] = {kS2, kS3, kS4};
  for (int n = 2; n <= 4; ++n) {
    auto want = parse_field_element(d.field, golden[n - 2]);
    for (auto backend : {Backend::Exact, Backend::Modular}) {
      auto r = nloop_invariant(n, d, diagrams(n), {backend, 1});
      EXPECT_EQ(r.value, want) << "n = " << n;
      EXPECT_EQ(r.n, n);
      EXPECT_EQ(r.datum_name, "6_1");
    }
  }
}

TEST(Invariant, SupersetStability) {
  auto d = builtin_6_1();
  EXPECT_EQ(nloop_invariant(2, d, diagrams(4)).value, nloop_invariant(2, d, diagrams(2)).value);
  EXPECT_EQ(nloop_invariant(3, d, diagrams(4), {Backend::Exact, 1}).value,
            nloop_invariant(3, d, diagrams(3), {Backend::Exact, 1}).value);
  EXPECT_THROW(nloop_invariant(4, d, diagrams(3)), Error);
}

TEST(Invariant, IndependentOfWorkerCount) {
  auto d = builtin_6_1();
  auto one = nloop_invariant(3, d, diagrams(3), {Backend::Exact, 1}).value;
  EXPECT_EQ(nloop_invariant(3, d, diagrams(3), {Backend::Exact, 4}).value, one);
  EXPECT_EQ(nloop_invariant(3, d, diagrams(3), {Backend::Modular, 3}).value, one);
}

TEST(OneLoop, GoldenTau) {
  auto d = builtin_6_1();
  auto t = one_loop(d);
  EXPECT_EQ(t.n, 1);
  auto want = parse_field_element(d.field, kTau);
  EXPECT_TRUE(t.value == want || t.value == -want);
}

TEST(OneLoop, DegenerateShape) {
  auto d = builtin_6_1();
  d.shapes[0] = d.shapes[0].one_like();
  EXPECT_THROW(one_loop(d), Degenerate);
}
