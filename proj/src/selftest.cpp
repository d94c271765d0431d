#include "bohr/selftest.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bohr/json_io.hpp"
#include "bohr/littlewood_paley.hpp"
#include "bohr/multiplier.hpp"
#include "bohr/norms.hpp"
#include "bohr/polynomials.hpp"
#include "bohr/projections.hpp"
#include "bohr/rng.hpp"
#include "bohr/transference.hpp"

namespace bohr {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error(what);
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

DirichletPolynomial random_dirichlet(Rng& rng, std::uint64_t max_index,
                                     int terms) {
  std::vector<DirichletPolynomial::Term> t;
  for (int i = 0; i < terms; ++i) {
    t.emplace_back(1 + rng.next_below(max_index), rng.next_in_disk());
  }
  return DirichletPolynomial::from_terms(std::move(t));
}

PolytorusPolynomial random_analytic(Rng& rng, int dim, int degree, int terms) {
  std::vector<PolytorusPolynomial::Term> t;
  for (int i = 0; i < terms; ++i) {
    std::vector<MultiIndex::Entry> e;
    for (int a = 1; a <= dim; ++a) {
      const auto exp =
          std::int64_t(rng.next_below(std::uint64_t(degree) + 1));
      if (exp != 0) e.emplace_back(a, exp);
    }
    t.emplace_back(MultiIndex::from_entries(e), rng.next_in_disk());
  }
  return PolytorusPolynomial::from_terms(std::move(t));
}

bool same_terms(const PolytorusPolynomial& a, const PolytorusPolynomial& b) {
  if (a.terms().size() != b.terms().size()) return false;
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    if (!(a.terms()[i].first == b.terms()[i].first)) return false;
    if (a.terms()[i].second != b.terms()[i].second) return false;
  }
  return true;
}

bool same_terms(const DirichletPolynomial& a, const DirichletPolynomial& b) {
  if (a.terms().size() != b.terms().size()) return false;
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    if (a.terms()[i] != b.terms()[i]) return false;
  }
  return true;
}

struct Invariant {
  const char* name;
  std::function<void()> body;
};

std::vector<Invariant> build_invariants(std::uint64_t seed) {
  std::vector<Invariant> list;
  const GridOptions quiet{};  // library defaults; small fixtures keep it cheap

  list.push_back({"parseval_sqrt5_fixture", [] {
    const auto f =
        DirichletPolynomial::from_terms({{1, {1.0, 0.0}}, {2, {2.0, 0.0}}});
    const auto est = norm_parseval(f);
    require(est.value == std::sqrt(5.0),
            "expected sqrt(5), got " + num(est.value));
  }});

  list.push_back({"bohr_lift_roundtrip", [seed] {
    for (int i = 0; i < 25; ++i) {
      auto rng = Rng::stream(seed, 100 + std::uint64_t(i));
      const auto f = random_dirichlet(rng, 400, 10);
      require(same_terms(bohr_drop(bohr_lift(f)), f),
              "drop(lift(f)) != f at member " + std::to_string(i));
    }
  }});

  list.push_back({"lift_multiplicative", [seed] {
    for (int i = 0; i < 10; ++i) {
      auto rng = Rng::stream(seed, 200 + std::uint64_t(i));
      const auto f = random_dirichlet(rng, 40, 5);
      const auto g = random_dirichlet(rng, 40, 5);
      require(same_terms(bohr_lift(f * g), bohr_lift(f) * bohr_lift(g)),
              "lift(fg) != lift(f)lift(g) at member " + std::to_string(i));
    }
  }});

  list.push_back({"kronecker_flow_evaluation", [seed] {
    for (int i = 0; i < 20; ++i) {
      auto rng = Rng::stream(seed, 300 + std::uint64_t(i));
      const auto f = random_dirichlet(rng, 200, 8);
      const auto F = bohr_lift(f);
      const double t = 10.0 * (rng.next_angle() - 3.14159);
      std::complex<double> direct{0.0, 0.0};
      double mass = 1.0;
      for (const auto& [n, c] : f.terms()) {
        direct += c * std::exp(std::complex<double>(
                          0.0, -t * std::log(double(n))));
        mass += std::abs(c);
      }
      const auto lifted = F(kronecker_flow(t, F.dimension()));
      require(std::abs(direct - lifted) <= 1e-10 * mass,
              "flow evaluation off by " + num(std::abs(direct - lifted)));
    }
  }});

  list.push_back({"parseval_permutation_invariance", [seed] {
    auto rng = Rng::stream(seed, 400);
    std::vector<Coeff> coeffs;
    for (int i = 0; i < 64; ++i) coeffs.push_back(rng.next_in_disk());
    const double base = sum_squared_moduli(coeffs);
    for (int round = 0; round < 8; ++round) {
      for (std::size_t i = coeffs.size(); i > 1; --i) {
        std::swap(coeffs[i - 1], coeffs[rng.next_below(i)]);
      }
      require(sum_squared_moduli(coeffs) == base,
              "permutation changed the Parseval sum");
    }
  }});

  list.push_back({"grid_matches_parseval", [seed, quiet] {
    for (int i = 0; i < 5; ++i) {
      auto rng = Rng::stream(seed, 500 + std::uint64_t(i));
      const auto F = random_analytic(rng, 2, 3, 6);
      const double exact = norm_parseval(F).value;
      const double grid = norm_grid(F, 2.0, quiet).value;
      require(std::abs(grid - exact) <= 1e-8 * (1.0 + exact),
              "grid vs parseval gap " + num(std::abs(grid - exact)));
    }
  }});

  list.push_back({"even_exact_matches_grid", [seed, quiet] {
    for (int i = 0; i < 3; ++i) {
      auto rng = Rng::stream(seed, 600 + std::uint64_t(i));
      const auto F = random_analytic(rng, 2, 2, 5);
      const double exact = norm_even_exact(F, 4).value;
      const double grid = norm_grid(F, 4.0, quiet).value;
      require(std::abs(grid - exact) <= 1e-6 * (1.0 + exact),
              "even-exact vs grid gap " + num(std::abs(grid - exact)));
    }
  }});

  list.push_back({"ergodic_converges", [] {
    const auto f = DirichletPolynomial::from_terms(
        {{1, {1.0, 0.0}}, {2, {0.5, 0.0}}, {3, {0.0, 1.0}}});
    const double exact = norm_parseval(f).value;
    const auto est = norm_ergodic(f, 2.0, {});
    require(!est.trace.empty(), "ergodic trace missing");
    const double err = std::abs(est.value - exact) / exact;
    require(err <= 0.05, "ergodic error " + num(err));
  }});

  list.push_back({"indicator_endpoint_rational", [] {
    const auto closed = MultiplierSymbol::indicator(0.0, 2.5, false, true);
    const auto open = MultiplierSymbol::indicator(0.0, 2.5, false, false);
    require(closed.at_rational({5, 2}) == Coeff{1.0, 0.0},
            "closed endpoint lost");
    require(open.at_rational({5, 2}) == Coeff{0.0, 0.0}, "open endpoint kept");
    require(closed.at_rational({2, 1}) == Coeff{1.0, 0.0}, "interior lost");
    require(closed.at_rational({3, 1}) == Coeff{0.0, 0.0}, "exterior kept");
  }});

  list.push_back({"multiplier_p2_contraction", [seed] {
    const auto m = MultiplierSymbol::indicator(0.0, 2.5, false, true);
    EnsembleOptions opts;
    opts.count = 8;
    opts.seed = seed;
    for (int i = 0; i < opts.count; ++i) {
      const auto F = ensemble_member(opts, i);
      const double before = norm_parseval(F).value;
      const double after = norm_parseval(apply_multiplier(m, F)).value;
      require(after <= before * (1.0 + 1e-12),
              "p=2 contraction violated: " + num(after) + " > " + num(before));
    }
  }});

  list.push_back({"lp_isometry_p2", [seed] {
    for (const char* eta : {"3/2", "2"}) {
      const auto P = IntervalPartition::parse(eta);
      for (int i = 0; i < 10; ++i) {
        auto rng = Rng::stream(seed, 700 + std::uint64_t(i));
        const auto F = random_analytic(rng, 3, 3, 8);
        if (F.terms().empty()) continue;
        const auto rep = lp_ratio(F, P, 2.0, {});
        require(std::abs(rep.ratio - 1.0) <= 1e-12,
                "p=2 ratio " + num(rep.ratio) + " at eta " + eta);
      }
    }
  }});

  list.push_back({"lp_reassembly_exact", [seed] {
    const auto P = IntervalPartition::parse("3/2");
    for (int i = 0; i < 10; ++i) {
      auto rng = Rng::stream(seed, 800 + std::uint64_t(i));
      const auto F = random_analytic(rng, 3, 4, 10);
      require(same_terms(decompose(F, P).reassemble(), F),
              "reassembly changed the polynomial at member " +
                  std::to_string(i));
    }
  }});

  list.push_back({"khintchine_exhaustive_mean", [] {
    const auto P = IntervalPartition::parse("3/2");
    const auto f0 = PolytorusPolynomial::from_terms(
        {{MultiIndex{}, {0.5, 0.0}}, {MultiIndex::unit(1), {1.0, 0.0}}});
    const auto f1 = PolytorusPolynomial::from_terms(
        {{MultiIndex::unit(2, 4), {1.0, 0.0}},
         {MultiIndex::unit(1, 6), {0.25, 0.0}}});
    const auto F = f0 + f1;
    const auto rep = khintchine_exhaustive(F, P, 4.0, {});
    require(rep.patterns == 4, "expected 4 sign patterns");
    const double plus = norm_even_exact(f0 + f1, 4).value;
    const double minus = norm_even_exact(f0 - f1, 4).value;
    const double oracle =
        0.5 * (std::pow(plus, 4.0) + std::pow(minus, 4.0));
    require(std::abs(rep.mean_pow - oracle) <= 1e-12 * (1.0 + oracle),
            "exhaustive mean " + num(rep.mean_pow) + " vs " + num(oracle));
  }});

  list.push_back({"rational_approximation_q10", [] {
    const auto R = approx_logs(2, 10);
    require(R.Q == 10, "expected Q=10, got " + std::to_string(R.Q));
    require(R.a.size() == 2 && R.a[0] == 7 && R.a[1] == 11,
            "expected a=(7,11)");
    require(R.a1_a2_prime, "expected a prime leading pair");
  }});

  list.push_back({"unimodular_inverse_exact", [seed] {
    const auto A = build_matrix_A(approx_logs(2, 10));
    require(A.inverse_entry(0, 0) == 8 && A.inverse_entry(0, 1) == -11 &&
                A.inverse_entry(1, 0) == -5 && A.inverse_entry(1, 1) == 7,
            "frozen inverse mismatch");
    auto rng = Rng::stream(seed, 900);
    for (int i = 0; i < 10; ++i) {
      std::vector<std::int64_t> v{
          std::int64_t(rng.next_below(2001)) - 1000,
          std::int64_t(rng.next_below(2001)) - 1000};
      require(A.apply_inverse(A.apply(v)) == v, "A^-1 A != id");
    }
  }});

  list.push_back({"change_variables_isometry", [seed] {
    const auto A = build_matrix_A(approx_logs(2, 10));
    for (int i = 0; i < 5; ++i) {
      auto rng = Rng::stream(seed, 1000 + std::uint64_t(i));
      const auto F = random_analytic(rng, 2, 3, 6);
      const auto G = change_variables(F, A);
      require(norm_parseval(G).value == norm_parseval(F).value,
              "Parseval norm moved under a unimodular change of variables");
    }
  }});

  list.push_back({"transference_forward_identity", [] {
    const auto m = MultiplierSymbol::constant({1.0, 0.0});
    const auto f = bohr_lift(DirichletPolynomial::from_terms(
        {{1, {1.0, 0.0}}, {2, {0.5, 0.0}}, {3, {0.25, 0.0}}, {6, {0.0, 1.0}}}));
    const auto rep = verify_forward(m, f, 2.0, 1e-6, 10, {});
    require(rep.sup_gap == 0.0, "identity symbol has a nonzero gap");
    require(rep.approx_norm == rep.exact_norm, "identity norms differ");
    require(rep.passed, "identity transfer did not pass");
  }});

  list.push_back({"riesz_schauder_identity", [seed] {
    for (int i = 0; i < 10; ++i) {
      auto rng = Rng::stream(seed, 1100 + std::uint64_t(i));
      const auto f = random_dirichlet(rng, 200, 12);
      const auto N = 1 + rng.next_below(200);
      const auto check = schauder_identity_check(f, N);
      require(check.passed && check.max_deviation == 0.0,
              "truncation identity deviated by " + num(check.max_deviation));
    }
  }});

  list.push_back({"hilbert_involution_exact", [seed] {
    for (int i = 0; i < 10; ++i) {
      auto rng = Rng::stream(seed, 1200 + std::uint64_t(i));
      auto f = random_dirichlet(rng, 100, 8);
      const auto F = bohr_lift(f);
      const auto twice = hilbert_transform(hilbert_transform(F));
      std::vector<PolytorusPolynomial::Term> mean_free;
      for (const auto& [nu, c] : F.terms()) {
        if (!(nu == MultiIndex{})) mean_free.emplace_back(nu, -c);
      }
      require(same_terms(twice,
                         PolytorusPolynomial::from_terms(std::move(mean_free))),
              "T^2 != -(Id - E0) at member " + std::to_string(i));
    }
  }});

  list.push_back({"truncation_bench_contractive", [seed] {
    const auto rows = truncation_norm_bench(2.0, {2, 8, 24}, 6, 24, seed, {});
    require(rows.size() == 3, "expected one row per N");
    for (const auto& row : rows) {
      require(row.max_ratio <= 1.0 + 1e-12,
              "p=2 truncation ratio " + num(row.max_ratio) + " above 1");
    }
    require(rows.back().max_ratio == 1.0, "full truncation not the identity");
  }});

  list.push_back({"canonical_json_fixed_point", [seed] {
    auto rng = Rng::stream(seed, 1300);
    const auto f = random_dirichlet(rng, 500, 10);
    const auto text = io::polynomial_to_text(io::AnyPolynomial{f});
    const auto back = io::polynomial_from_text(text);
    require(io::polynomial_to_text(back) == text,
            "polynomial bytes are not a fixed point");
    const auto est = norm_parseval(f);
    const auto dumped = io::canonical_dump(io::norm_estimate_to_json(est));
    require(io::canonical_dump(io::Json::parse(dumped)) == dumped,
            "estimate bytes are not a fixed point");
  }});

  return list;
}

}  // namespace

SelftestResult run_selftest(std::ostream& out, std::uint64_t seed) {
  out << "selftest seed " << seed << "\n";
  SelftestResult result;
  for (const auto& inv : build_invariants(seed)) {
    try {
      inv.body();
      out << "[PASS] " << inv.name << "\n";
      ++result.passed;
    } catch (const std::exception& e) {
      out << "[FAIL] " << inv.name << ": " << e.what() << "\n";
      ++result.failed;
    }
  }
  out << "passed " << result.passed << " of "
      << (result.passed + result.failed) << "\n";
  return result;
}

}  // namespace bohr
