#include <cmath>
#include <vector>

#include "bohr/parallel.hpp"
#include "bohr/polynomials.hpp"
#include "bohr/quadrature.hpp"
#include "bohr/rng.hpp"
#include "doctest.h"

using namespace bohr;

namespace {

PolytorusPolynomial random_poly(Rng& rng, int dim, int degree, std::size_t terms) {
  std::vector<PolytorusPolynomial::Term> t;
  for (std::size_t i = 0; i < terms; ++i) {
    std::vector<MultiIndex::Entry> e;
    for (int a = 1; a <= dim; ++a) {
      const auto exp = std::int64_t(rng.next_below(2 * degree + 1)) - degree;
      if (exp != 0) e.emplace_back(a, exp);
    }
    t.emplace_back(MultiIndex::from_entries(e), rng.next_in_disk());
  }
  return PolytorusPolynomial::from_terms(std::move(t));
}

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

TEST_CASE("Gauss-Legendre nodes against closed forms") {
  // Order 5 has algebraic nodes/weights.
  const auto& gl = gauss_legendre(5);
  const double n1 = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
  const double n2 = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
  CHECK(gl.nodes[2] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(gl.nodes[3] == doctest::Approx(n1).epsilon(1e-14));
  CHECK(gl.nodes[4] == doctest::Approx(n2).epsilon(1e-14));
  CHECK(gl.weights[2] == doctest::Approx(128.0 / 225.0).epsilon(1e-14));
  const double w1 = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
  const double w2 = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
  CHECK(gl.weights[3] == doctest::Approx(w1).epsilon(1e-14));
  CHECK(gl.weights[4] == doctest::Approx(w2).epsilon(1e-14));

  // Exactness on polynomials of degree <= 2n-1.
  for (int order : {4, 12, 24}) {
    const auto& g = gauss_legendre(order);
    for (int k = 0; k <= 2 * order - 1; ++k) {
      double sum = 0.0;
      for (int i = 0; i < order; ++i)
        sum += g.weights[i] * std::pow(g.nodes[i], k);
      const double exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
      CHECK(std::abs(sum - exact) <= 1e-13);
    }
  }
}

TEST_CASE("chunked reduction is thread-count independent") {
  auto run = [](std::int64_t n, bool parallel) {
    return par::chunked_accumulate<1>(n, parallel,
                                      [](std::int64_t i, double* out) {
                                        out[0] = std::sin(double(i)) / (i + 1.0);
                                      })[0];
  };
  const int original_threads = par::max_threads();
  const double serial = run(100'000, false);
  for (int threads : {1, 2, 3, 7}) {
    par::set_threads(threads);
    CHECK(run(100'000, true) == serial);  // bitwise
  }
  par::set_threads(original_threads);
}

TEST_CASE("grid kernel: production vs reference") {
  Rng rng(101);
  for (int i = 0; i < 8; ++i) {
    const auto F = random_poly(rng, 3, 3, 12);
    for (double p : {2.0, 4.0, 2.7}) {
      const double a = grid_mean_abs_pow(F, p, 15, true);
      const double b = grid_mean_abs_pow_reference(F, p, 15);
      CHECK(rel_diff(a, b) <= 1e-12);
    }
  }

  // Bitwise determinism across thread counts.
  const int original_threads = par::max_threads();
  const auto F = random_poly(rng, 3, 3, 12);
  par::set_threads(1);
  const double v1 = grid_mean_abs_pow(F, 4.0, 17, true);
  par::set_threads(4);
  const double v4 = grid_mean_abs_pow(F, 4.0, 17, true);
  CHECK(v1 == v4);
  CHECK(v1 == grid_mean_abs_pow(F, 4.0, 17, false));
  par::set_threads(original_threads);
}

TEST_CASE("Monte-Carlo kernel: parity, determinism, coverage") {
  Rng rng(103);
  const auto F = random_poly(rng, 4, 2, 10);

  const auto a = mc_mean_abs_pow(F, 2.0, 40'000, 99, true);
  const auto b = mc_mean_abs_pow_reference(F, 2.0, 40'000, 99);
  CHECK(rel_diff(a.mean, b.mean) <= 1e-12);
  CHECK(rel_diff(a.std_error, b.std_error) <= 1e-9);

  const int original_threads = par::max_threads();
  par::set_threads(3);
  const auto c = mc_mean_abs_pow(F, 2.0, 40'000, 99, true);
  par::set_threads(1);
  const auto d = mc_mean_abs_pow(F, 2.0, 40'000, 99, true);
  CHECK(c.mean == d.mean);  // bitwise: per-point streams + chunked combine
  par::set_threads(original_threads);

  // p = 2 truth is the coefficient square sum; demand 5 sigma coverage.
  double truth = 0.0;
  for (const auto& [nu, coeff] : F.terms()) {
    (void)nu;
    truth += std::norm(coeff);
  }
  CHECK(std::abs(a.mean - truth) <= 5.0 * a.std_error + 1e-12);
}

TEST_CASE("ergodic kernel against closed-form sinc averages") {
  // |1 + 2^{-it}|^2 = 2 + 2 cos(t log 2); the window average has an
  // elementary antiderivative to freeze against.
  const auto f =
      DirichletPolynomial::from_terms({{1, {1, 0}}, {2, {1, 0}}});
  const double l2 = std::log(2.0);
  for (double T : {10.0, 100.0, 1000.0}) {
    const double exact2 = 2.0 + 2.0 * std::sin(T * l2) / (T * l2);
    CHECK(std::abs(ergodic_mean_abs_pow(f, 2.0, T) - exact2) <= 1e-12);

    // |f|^4 = 6 + 8 cos(u) + 2 cos(2u), u = t log 2.
    const double exact4 = 6.0 + 8.0 * std::sin(T * l2) / (T * l2) +
                          2.0 * std::sin(2 * T * l2) / (2 * T * l2);
    CHECK(std::abs(ergodic_mean_abs_pow(f, 4.0, T) - exact4) <= 1e-12);
  }

  // Production vs reference and thread independence.
  Rng rng(107);
  std::vector<DirichletPolynomial::Term> terms;
  for (int i = 0; i < 12; ++i)
    terms.emplace_back(1 + rng.next_below(50), rng.next_in_disk());
  const auto g = DirichletPolynomial::from_terms(std::move(terms));
  const double prod = ergodic_mean_abs_pow(g, 2.0, 500.0);
  const double ref = ergodic_mean_abs_pow_reference(g, 2.0, 500.0);
  CHECK(rel_diff(prod, ref) <= 1e-12);

  const int original_threads = par::max_threads();
  par::set_threads(4);
  CHECK(ergodic_mean_abs_pow(g, 2.0, 500.0) == prod);
  par::set_threads(original_threads);

  // Constant polynomial short-circuits.
  const auto c = DirichletPolynomial::from_terms({{1, {3, 4}}});
  CHECK(ergodic_mean_abs_pow(c, 2.0, 10.0) == doctest::Approx(25.0));
}
