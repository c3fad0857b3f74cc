// nloop: command-line front end for diagram generation, datum validation
// and loop invariants.
//
// Exit codes: 0 success, 1 failed check or computation error, 2 usage error
// or unreadable input.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nloop/nloop.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

using ordered_json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

ordered_json complex_json(const nloop::Complex& c, int digits) {
  return ordered_json{{"re", c.real().to_string(digits)}, {"im", c.imag().to_string(digits)}};
}

// Reuses a cached diagram file when it covers order n, otherwise generates
// the set (and writes it to the cache path if one was given).
nloop::DiagramSet obtain_diagrams(int n, const std::optional<std::string>& cache) {
  if (cache && std::filesystem::exists(*cache)) {
    auto s = nloop::load_diagrams(*cache);
    if (s.n >= n) return s;
    std::cerr << "diagram cache has n = " << s.n << " < " << n << ", regenerating\n";
  }
  auto s = nloop::generate_diagrams(std::max(n, 2));
  if (cache) nloop::save_diagrams(s, *cache);
  return s;
}

int cmd_diagrams(int n, const std::string& out) {
  auto t0 = Clock::now();
  auto s = nloop::generate_diagrams(n);
  nloop::save_diagrams(s, out);
  std::cout << s.diagrams.size() << " diagrams with 2 <= L <= " << n << " written to " << out << " ("
            << seconds_since(t0) << " s)\n";
  return 0;
}

int cmd_validate(const std::string& path) {
  auto d = nloop::load_datum(path);
  auto rep = nloop::validate(d);
  std::cout << "datum " << d.name << " (N = " << d.N << ")\n";
  for (const auto& c : rep.checks) {
    std::cout << "  [" << nloop::to_string(c.status) << "] " << c.title;
    if (!c.detail.empty()) std::cout << ": " << c.detail;
    std::cout << "\n";
  }
  std::cout << (rep.ok() ? "all hard checks passed\n" : "validation failed\n");
  return rep.ok() ? 0 : kExitFailure;
}

struct InvariantArgs {
  std::string datum;
  int n = 2;
  std::optional<std::string> diagrams;
  std::string mode = "exact";
  std::string backend = "modular";
  int digits = 30;
  unsigned workers = 0;
  bool json = false;
};

int cmd_invariant(const InvariantArgs& a) {
  auto d = nloop::load_datum(a.datum);
  auto t0 = Clock::now();
  ordered_json doc;
  doc["datum"] = d.name;
  doc["n"] = a.n;
  doc["mode"] = a.mode;
  std::size_t used = 0;
  if (a.mode == "exact") {
    nloop::LoopResult r{a.n, nloop::FieldElement(d.field), d.name};
    if (a.n == 1) {
      r = nloop::one_loop(d);
    } else {
      auto s = obtain_diagrams(a.n, a.diagrams);
      used = nloop::contributing_diagrams(s, a.n).size();
      nloop::InvariantOptions opt;
      opt.backend = a.backend == "rational" ? nloop::Backend::Exact : nloop::Backend::Modular;
      opt.workers = a.workers;
      r = nloop::nloop_invariant(a.n, d, s, opt);
    }
    doc["value"] = nloop::to_string(r.value);
    doc["numeric"] = complex_json(r.value.embed(a.digits), a.digits);
  } else {
    nloop::Complex v;
    if (a.n == 1) {
      v = nloop::numeric_tau(d, a.digits);
    } else {
      auto s = obtain_diagrams(a.n, a.diagrams);
      used = nloop::contributing_diagrams(s, a.n).size();
      v = nloop::numeric_invariant(a.n, d, s, a.digits, a.workers);
    }
    doc["value"] = nullptr;
    doc["numeric"] = complex_json(v, a.digits);
  }
  doc["diagram_count"] = used;
  doc["timing"] = seconds_since(t0);
  doc["version"] = nloop::kVersion;
  if (a.json) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << (a.n == 1 ? "tau" : "S_" + std::to_string(a.n)) << " of " << d.name << " (" << a.mode << ")\n";
    if (!doc["value"].is_null()) std::cout << "  value    " << doc["value"].get<std::string>() << "\n";
    std::cout << "  numeric  " << doc["numeric"]["re"].get<std::string>() << " + (" << doc["numeric"]["im"].get<std::string>()
              << ")i\n";
    std::cout << "  diagrams " << used << "\n";
    std::cout << "  time     " << doc["timing"].get<double>() << " s\n";
    if (a.n == 1) std::cout << "  (tau is defined up to sign)\n";
  }
  return 0;
}

struct PhiArgs {
  std::string datum;
  int n_max = 2;
  int digits = 30;
  std::optional<std::string> diagrams;
  unsigned workers = 0;
  bool json = false;
};

int cmd_phi(const PhiArgs& a) {
  auto d = nloop::load_datum(a.datum);
  auto s = obtain_diagrams(a.n_max, a.diagrams);
  auto phi = nloop::assemble_phi(d, a.n_max, a.digits, &s, a.workers);
  if (a.json) {
    ordered_json doc;
    doc["datum"] = d.name;
    doc["n_max"] = a.n_max;
    doc["digits"] = a.digits;
    ordered_json coeffs = ordered_json::array();
    for (const auto& c : phi.coeffs) coeffs.push_back(complex_json(c, a.digits));
    doc["coefficients"] = coeffs;
    doc["tau"] = complex_json(phi.tau, a.digits);
    doc["sign_ambiguous"] = phi.sign_ambiguous;
    doc["version"] = nloop::kVersion;
    std::cout << doc.dump(2) << "\n";
    return 0;
  }
  std::cout << "phi(hbar) of " << d.name << " through hbar^" << a.n_max - 1 << "\n";
  for (std::size_t k = 0; k < phi.coeffs.size(); ++k) {
    std::cout << "  hbar^" << k << "  " << phi.coeffs[k].to_string(a.digits) << "\n";
  }
  if (phi.sign_ambiguous) {
    std::cout << "  sign ambiguous: tau is defined up to sign, so every coefficient is determined up to a common factor of i\n";
  }
  return 0;
}

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const nloop::MalformedFile& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nloop::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nloop::Degenerate& e) {
    std::cerr << "degenerate datum: " << e.what() << "\n";
    return kExitFailure;
  } catch (const nloop::PrecisionFailure& e) {
    std::cerr << "precision failure: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loop invariants of Neumann-Zagier data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", nloop::kVersion);

  int diag_n = 2;
  std::string diag_out;
  auto* diagrams = app.add_subcommand("diagrams", "Generate the Feynman diagrams with 2 <= L <= n");
  diagrams->add_option("--n", diag_n, "Loop order (>= 2)")->required()->check(CLI::Range(2, 1000));
  diagrams->add_option("--out", diag_out, "Output file")->required();

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check every datum condition");
  validate->add_option("--datum", validate_path, "Datum file")->required();

  InvariantArgs inv;
  auto* invariant = app.add_subcommand("invariant", "Compute tau (n = 1) or S_n");
  invariant->add_option("--datum", inv.datum, "Datum file")->required();
  invariant->add_option("--n", inv.n, "Loop order (1 gives tau)")->required()->check(CLI::Range(1, 1000));
  invariant->add_option("--diagrams", inv.diagrams, "Diagram cache file (read if it covers n, written otherwise)");
  invariant->add_option("--mode", inv.mode, "exact or numeric")->check(CLI::IsMember({"exact", "numeric"}));
  invariant->add_option("--backend", inv.backend, "Exact-mode backend: modular (CRT) or rational (all in Q(x))")
      ->check(CLI::IsMember({"modular", "rational"}));
  invariant->add_option("--digits", inv.digits, "Decimal digits of numeric output")->check(CLI::Range(20, 100000));
  invariant->add_option("--workers", inv.workers, "Parallel diagram evaluations (0 = all cores)");
  invariant->add_flag("--json", inv.json, "Print only the JSON result document");

  PhiArgs phi;
  auto* phi_cmd = app.add_subcommand("phi", "Series coefficients of phi(hbar)");
  phi_cmd->add_option("--datum", phi.datum, "Datum file")->required();
  phi_cmd->add_option("--n-max", phi.n_max, "Highest loop order (>= 2)")->required()->check(CLI::Range(2, 1000));
  phi_cmd->add_option("--digits", phi.digits, "Decimal digits")->required()->check(CLI::Range(10, 100000));
  phi_cmd->add_option("--diagrams", phi.diagrams, "Diagram cache file");
  phi_cmd->add_option("--workers", phi.workers, "Parallel diagram evaluations (0 = all cores)");
  phi_cmd->add_flag("--json", phi.json, "Print JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*diagrams) return guarded([&] { return cmd_diagrams(diag_n, diag_out); });
  if (*validate) return guarded([&] { return cmd_validate(validate_path); });
  if (*invariant) return guarded([&] { return cmd_invariant(inv); });
  if (*phi_cmd) return guarded([&] { return cmd_phi(phi); });
  return kExitUsage;
}
