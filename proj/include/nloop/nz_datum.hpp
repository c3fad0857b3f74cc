#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nloop/errors.hpp"
#include "nloop/matrix.hpp"
#include "nloop/number_field.hpp"
#include "nloop/rational.hpp"

namespace nloop {

using IntMatrix = std::vector<std::vector<long>>;
using IntVector = std::vector<long>;

/// Neumann-Zagier datum (A, B, nu, f, f'', z) over a number field.
struct NZDatum {
  std::string name;
  int N = 0;
  FieldPtr field;
  IntMatrix A;
  IntMatrix B;
  IntVector nu;
  IntVector f;
  IntVector f_dd;
  std::vector<FieldElement> shapes;
};

inline bool operator==(const NZDatum& a, const NZDatum& b) {
  return a.name == b.name && a.N == b.N && a.field->minpoly() == b.field->minpoly() &&
         a.field->embedding_re() == b.field->embedding_re() && a.field->embedding_im() == b.field->embedding_im() &&
         a.A == b.A && a.B == b.B && a.nu == b.nu && a.f == b.f && a.f_dd == b.f_dd && a.shapes == b.shapes;
}

inline Matrix<Rational> to_rational_matrix(const IntMatrix& m) {
  Matrix<Rational> r(m.size(), m.empty() ? 0 : m.front().size(), Rational(0));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) r(i, j) = m[i][j];
  return r;
}

/// B^{-1} A over the rationals. Throws SingularMatrix if det B = 0.
inline Matrix<Rational> binv_a(const NZDatum& d) { return inverse(to_rational_matrix(d.B)) * to_rational_matrix(d.A); }

/// B^{-1} nu over the rationals.
inline std::vector<Rational> binv_nu(const NZDatum& d) {
  Matrix<Rational> nu(static_cast<std::size_t>(d.N), 1, Rational(0));
  for (int i = 0; i < d.N; ++i) nu(i, 0) = d.nu[i];
  Matrix<Rational> r = inverse(to_rational_matrix(d.B)) * nu;
  std::vector<Rational> out;
  for (int i = 0; i < d.N; ++i) out.push_back(r(i, 0));
  return out;
}

/// z'' = 1 - 1/z.
inline FieldElement z_double_prime(const FieldElement& z) { return z.one_like() - z.inverse(); }

// ---------------------------------------------------------------- file format

namespace detail {

inline Rational json_rational(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw SchemaError("expected a rational as string \"p/q\" or integer");
}

inline long json_int(const nlohmann::json& v) {
  if (!v.is_number_integer()) throw SchemaError("expected an integer");
  return v.get<long>();
}

inline IntVector json_int_vector(const nlohmann::json& v, int n, const char* key) {
  if (!v.is_array() || static_cast<int>(v.size()) != n)
    throw SchemaError(std::string("'") + key + "' must be an integer list of length N");
  IntVector out;
  for (const auto& x : v) out.push_back(json_int(x));
  return out;
}

inline IntMatrix json_int_matrix(const nlohmann::json& v, int n, const char* key) {
  if (!v.is_array() || static_cast<int>(v.size()) != n)
    throw SchemaError(std::string("'") + key + "' must be an N x N integer matrix");
  IntMatrix out;
  for (const auto& row : v) out.push_back(json_int_vector(row, n, key));
  return out;
}

}  // namespace detail

/// Parses a datum document. Does not validate the mathematical conditions.
inline NZDatum datum_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedFile(std::string("datum file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("datum must be a JSON object");
  for (const char* key : {"name", "N", "minpoly", "embedding", "A", "B", "nu", "f", "f_dd", "shapes"})
    if (!j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  NZDatum d;
  try {
    d.name = j.at("name").get<std::string>();
    d.N = static_cast<int>(detail::json_int(j.at("N")));
    if (d.N < 1) throw SchemaError("N must be positive");
    std::vector<Rational> minpoly;
    for (const auto& c : j.at("minpoly")) minpoly.push_back(detail::json_rational(c));
    if (minpoly.size() < 2 || minpoly.back() != 1) throw SchemaError("minpoly must be monic of degree >= 1");
    const auto& emb = j.at("embedding");
    d.field = make_field(std::move(minpoly), emb.at("re").get<std::string>(), emb.at("im").get<std::string>());
    d.A = detail::json_int_matrix(j.at("A"), d.N, "A");
    d.B = detail::json_int_matrix(j.at("B"), d.N, "B");
    d.nu = detail::json_int_vector(j.at("nu"), d.N, "nu");
    d.f = detail::json_int_vector(j.at("f"), d.N, "f");
    d.f_dd = detail::json_int_vector(j.at("f_dd"), d.N, "f_dd");
    const auto& shapes = j.at("shapes");
    if (!shapes.is_array() || static_cast<int>(shapes.size()) != d.N) throw SchemaError("'shapes' must list N field elements");
    for (const auto& s : shapes) {
      if (!s.is_array()) throw SchemaError("a shape must be a coefficient list");
      if (static_cast<int>(s.size()) != d.field->degree())
        throw FieldError("shape has " + std::to_string(s.size()) + " coefficients, field degree is " +
                         std::to_string(d.field->degree()));
      std::vector<Rational> c;
      for (const auto& x : s) c.push_back(detail::json_rational(x));
      d.shapes.emplace_back(d.field, std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("datum has the wrong structure: ") + e.what());
  } catch (const MalformedFile&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(e.what());
  }
  return d;
}

/// One key per line, values compact. Rationals are written as strings.
inline std::string datum_to_json(const NZDatum& d) {
  using oj = nlohmann::ordered_json;
  auto rats = [](const std::vector<Rational>& v) {
    oj a = oj::array();
    for (const auto& q : v) a.push_back(to_string(q));
    return a;
  };
  oj shapes = oj::array();
  for (const auto& z : d.shapes) shapes.push_back(rats(z.coeffs()));
  std::vector<std::pair<std::string, oj>> items{
      {"name", d.name},
      {"N", d.N},
      {"minpoly", rats(d.field->minpoly())},
      {"embedding", oj{{"re", d.field->embedding_re()}, {"im", d.field->embedding_im()}}},
      {"A", d.A},
      {"B", d.B},
      {"nu", d.nu},
      {"f", d.f},
      {"f_dd", d.f_dd},
      {"shapes", shapes},
  };
  std::ostringstream os;
  os << "{\n";
  for (std::size_t i = 0; i < items.size(); ++i) {
    os << "  " << oj(items[i].first).dump() << ": " << items[i].second.dump() << (i + 1 < items.size() ? ",\n" : "\n");
  }
  os << "}\n";
  return os.str();
}

inline NZDatum load_datum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return datum_from_json(buf.str());
}

inline void save_datum(const NZDatum& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << datum_to_json(d);
  if (!out) throw IoError("write failed for '" + path + "'");
}

// ----------------------------------------------------------------- validation

enum class CheckStatus { Pass, Fail, Skipped, Warning };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Skipped: return "SKIPPED";
    case CheckStatus::Warning: return "WARNING";
  }
  return "?";
}

struct CheckResult {
  std::string id;
  std::string title;
  CheckStatus status;
  std::string detail;  // witness on failure
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  /// True iff no hard check failed. Warnings and skips do not count.
  bool ok() const {
    for (const auto& c : checks)
      if (c.status == CheckStatus::Fail) return false;
    return true;
  }

  const CheckResult& at(const std::string& id) const {
    for (const auto& c : checks)
      if (c.id == id) return c;
    throw Error("no check named '" + id + "'");
  }

  std::vector<std::string> failed() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
      if (c.status == CheckStatus::Fail) out.push_back(c.id);
    return out;
  }
};

namespace detail {

inline std::string vector_string(const std::vector<std::string>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
  return s + ")";
}

}  // namespace detail

/// Checks every datum condition exactly. Failures are report entries; a
/// check whose preconditions fail is reported as skipped.
inline ValidationReport validate(const NZDatum& d) {
  ValidationReport rep;
  auto add = [&](std::string id, std::string title, CheckStatus st, std::string detail = {}) {
    rep.checks.push_back({std::move(id), std::move(title), st, std::move(detail)});
  };
  const int n = d.N;

  bool dims = n >= 1 && static_cast<int>(d.A.size()) == n && static_cast<int>(d.B.size()) == n &&
              static_cast<int>(d.nu.size()) == n && static_cast<int>(d.f.size()) == n &&
              static_cast<int>(d.f_dd.size()) == n && static_cast<int>(d.shapes.size()) == n && d.field != nullptr;
  for (int i = 0; dims && i < n; ++i) dims = static_cast<int>(d.A[i].size()) == n && static_cast<int>(d.B[i].size()) == n;
  for (int i = 0; dims && i < n; ++i) dims = d.shapes[i].field()->same_as(*d.field);
  add("dimensions", "A, B are N x N; nu, f, f'', shapes have length N", dims ? CheckStatus::Pass : CheckStatus::Fail);
  if (!dims) {
    for (const char* id : {"minpoly_monic", "minpoly_squarefree", "embedding", "ab_symmetric", "det_b", "rank_ab",
                           "flattening", "shape_domain", "gluing", "propagator", "orientation"})
      add(id, id, CheckStatus::Skipped, "dimensions are inconsistent");
    return rep;
  }

  const auto& mp = d.field->minpoly();
  add("minpoly_monic", "minimal polynomial is monic", mp.back() == 1 ? CheckStatus::Pass : CheckStatus::Fail);
  add("minpoly_squarefree", "minimal polynomial is squarefree",
      d.field->is_squarefree() ? CheckStatus::Pass : CheckStatus::Fail, "gcd(m, m') is not constant");
  bool root_ok = false;
  try {
    Real res = d.field->embedding_residual(30);
    root_ok = res < Real::tolerance(10, res.precision());
    add("embedding", "|minpoly(embedding)| < 1e-10", root_ok ? CheckStatus::Pass : CheckStatus::Fail,
        "residual " + res.to_string(6));
  } catch (const Error& e) {
    add("embedding", "|minpoly(embedding)| < 1e-10", CheckStatus::Fail, e.what());
  }

  const auto A = to_rational_matrix(d.A);
  const auto B = to_rational_matrix(d.B);
  auto abt = A * B.transpose();
  add("ab_symmetric", "A B^T is symmetric", abt.is_symmetric() ? CheckStatus::Pass : CheckStatus::Fail);

  Rational det_b = determinant(B);
  add("det_b", "B has nonvanishing determinant", det_b != 0 ? CheckStatus::Pass : CheckStatus::Fail,
      "det B = " + to_string(det_b));

  Matrix<Rational> ab(static_cast<std::size_t>(n), static_cast<std::size_t>(2 * n), Rational(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ab(i, j) = A(i, j);
      ab(i, n + j) = B(i, j);
    }
  std::size_t rk = rank(ab);
  add("rank_ab", "(A|B) has rank N", rk == static_cast<std::size_t>(n) ? CheckStatus::Pass : CheckStatus::Fail,
      "rank " + std::to_string(rk));

  std::vector<std::string> flat_res;
  bool flat_ok = true;
  for (int i = 0; i < n; ++i) {
    long s = 0;
    for (int j = 0; j < n; ++j) s += d.A[i][j] * d.f[j] + d.B[i][j] * d.f_dd[j];
    flat_res.push_back(std::to_string(s - d.nu[i]));
    if (s != d.nu[i]) flat_ok = false;
  }
  add("flattening", "A f + B f'' = nu", flat_ok ? CheckStatus::Pass : CheckStatus::Fail,
      "A f + B f'' - nu = " + detail::vector_string(flat_res));

  bool shapes_ok = true;
  std::string bad_shapes;
  for (int i = 0; i < n; ++i) {
    const auto& z = d.shapes[i];
    if (z.is_zero() || (z - z.one_like()).is_zero()) {
      shapes_ok = false;
      bad_shapes += (bad_shapes.empty() ? "z_" : ", z_") + std::to_string(i + 1) + " = " + to_string(z);
    }
  }
  add("shape_domain", "every shape lies outside {0, 1}", shapes_ok ? CheckStatus::Pass : CheckStatus::Fail, bad_shapes);

  if (!shapes_ok) {
    add("gluing", "gluing equations hold exactly", CheckStatus::Skipped, "a shape is 0 or 1");
  } else {
    bool glue_ok = true;
    std::string witness;
    for (int i = 0; i < n; ++i) {
      FieldElement prod = d.shapes[0].one_like();
      for (int j = 0; j < n; ++j) {
        prod *= d.shapes[j].pow(d.A[i][j]);
        prod *= z_double_prime(d.shapes[j]).pow(d.B[i][j]);
      }
      FieldElement target = d.nu[i] % 2 == 0 ? prod.one_like() : -prod.one_like();
      FieldElement ratio = prod / target;
      if (!(ratio == prod.one_like())) {
        glue_ok = false;
        witness += (witness.empty() ? "row " : "; row ") + std::to_string(i + 1) + " ratio " + to_string(ratio);
      }
    }
    add("gluing", "gluing equations hold exactly", glue_ok ? CheckStatus::Pass : CheckStatus::Fail, witness);
  }

  if (det_b == 0 || !shapes_ok) {
    add("propagator", "-B^{-1}A + diag(1/(1-z)) is invertible", CheckStatus::Skipped,
        det_b == 0 ? "det B = 0" : "a shape is 0 or 1");
  } else {
    auto ba = binv_a(d).map([&](const Rational& q) { return FieldElement::constant(d.field, -q); });
    for (int i = 0; i < n; ++i) ba(i, i) += (d.shapes[i].one_like() - d.shapes[i]).inverse();
    bool inv = !determinant(ba).is_zero();
    add("propagator", "-B^{-1}A + diag(1/(1-z)) is invertible", inv ? CheckStatus::Pass : CheckStatus::Fail,
        "determinant is zero");
  }

  if (!root_ok) {
    add("orientation", "Im z_i > 0 at the embedding", CheckStatus::Skipped, "embedding unusable");
  } else {
    std::string neg;
    for (int i = 0; i < n; ++i)
      if (d.shapes[i].embed(30).imag().sign() <= 0) neg += (neg.empty() ? "z_" : ", z_") + std::to_string(i + 1);
    add("orientation", "Im z_i > 0 at the embedding", neg.empty() ? CheckStatus::Pass : CheckStatus::Warning,
        neg.empty() ? "" : "Im <= 0 for " + neg);
  }

  for (auto& c : rep.checks)
    if (c.status == CheckStatus::Pass) c.detail.clear();
  return rep;
}

// ---------------------------------------------------------------- 6_1 datum

/// The 6_1 datum over Q(x), x^4 + 2x^3 + x^2 - 3x + 1 = 0.
inline NZDatum builtin_6_1() {
  NZDatum d;
  d.name = "6_1";
  d.N = 4;
  d.field = make_field({1, -3, 1, 2, 1}, "-1.50410836415074", "1.22685163774658");
  d.A = {{1, 0, -1, 0}, {-1, 1, 1, 1}, {-1, 1, 1, 0}, {-1, 1, 0, 1}};
  d.B = {{1, 0, 0, 1}, {0, 1, 0, 1}, {0, 0, 1, 0}, {0, 0, 0, 2}};
  d.nu = {1, 2, 1, 2};
  d.f = {1, 2, 0, 1};
  d.f_dd = {0, 0, 0, 0};
  auto q = [](long p, long r = 1) {
    Rational v{Integer(p), Integer(r)};
    v.canonicalize();
    return v;
  };
  d.shapes = {
      FieldElement(d.field, {q(-5, 2), q(3), q(7, 2), q(3, 2)}),
      FieldElement(d.field, {q(-3), q(5), q(5), q(2)}),
      FieldElement(d.field, {q(3, 2), q(-1), q(-3, 2), q(-1, 2)}),
      FieldElement(d.field, {q(1, 2), q(2), q(3, 2), q(1, 2)}),
  };
  return d;
}

}  // namespace nloop
