#include "bohr/projections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bohr/errors.hpp"
#include "bohr/primes.hpp"
#include "bohr/rng.hpp"

namespace bohr {

namespace {

using u128 = unsigned __int128;

// p^e with overflow detection; false means the product left 128 bits.
bool checked_pow_mul(u128& acc, std::uint64_t base, std::uint64_t e) {
  u128 b = base;
  while (e > 0) {
    if (e & 1) {
      if (__builtin_mul_overflow(acc, b, &acc)) return false;
    }
    e >>= 1;
    if (e > 0 && __builtin_mul_overflow(b, b, &b)) return false;
  }
  return true;
}

}  // namespace

int frequency_sign(const MultiIndex& nu) {
  if (nu.is_zero()) return 0;

  u128 num = 1, den = 1;
  bool exact = true;
  for (const auto& [axis, exp] : nu.entries()) {
    const std::uint64_t p = nth_prime(static_cast<std::size_t>(axis));
    u128& side = exp > 0 ? num : den;
    const std::uint64_t e =
        exp > 0 ? static_cast<std::uint64_t>(exp)
                : static_cast<std::uint64_t>(-(exp + 1)) + 1;  // |INT64_MIN| safe
    if (!checked_pow_mul(side, p, e)) {
      exact = false;
      break;
    }
  }
  if (exact) {
    if (num == den) return 0;  // unreachable for nu != 0, kept for safety
    return num > den ? 1 : -1;
  }

  // Product overflowed: decide on the log sum with a rounding certificate.
  long double L = 0.0L, bound = 0.0L;
  for (const auto& [axis, exp] : nu.entries()) {
    const long double lg = std::log(
        static_cast<long double>(nth_prime(static_cast<std::size_t>(axis))));
    L += static_cast<long double>(exp) * lg;
    bound += std::abs(static_cast<long double>(exp)) * lg;
  }
  if (std::abs(L) > bound * 1e-16L) return L > 0.0L ? 1 : -1;
  throw MarginError("frequency sign of " + nu.to_string() +
                    " is not certifiable in long double");
}

bool in_order_cone(const MultiIndex& nu) { return frequency_sign(nu) <= 0; }

DirichletPolynomial partial_sum(const DirichletPolynomial& f, std::uint64_t N) {
  if (N < 1) throw std::invalid_argument("partial_sum needs N >= 1");
  std::vector<DirichletPolynomial::Term> kept;
  for (const auto& term : f.terms())
    if (term.first <= N) kept.push_back(term);
  return DirichletPolynomial::from_terms(std::move(kept));
}

namespace {

PolytorusPolynomial filter_by_sign(const PolytorusPolynomial& F, int keep_low,
                                   int keep_high) {
  std::vector<PolytorusPolynomial::Term> kept;
  for (const auto& term : F.terms()) {
    const int s = frequency_sign(term.first);
    if (s >= keep_low && s <= keep_high) kept.push_back(term);
  }
  return PolytorusPolynomial::from_terms(std::move(kept));
}

}  // namespace

PolytorusPolynomial riesz_project(const PolytorusPolynomial& F) {
  return filter_by_sign(F, 0, 1);
}

PolytorusPolynomial riesz_project_lower(const PolytorusPolynomial& F) {
  return filter_by_sign(F, -1, 0);
}

PolytorusPolynomial hilbert_transform(const PolytorusPolynomial& F) {
  std::vector<PolytorusPolynomial::Term> out;
  for (const auto& [nu, c] : F.terms()) {
    const int s = frequency_sign(nu);
    if (s == 0) continue;
    // -i * s * c, componentwise to keep the rotation exact.
    const double ds = static_cast<double>(s);
    out.push_back({nu, Coeff{c.imag() * ds, -c.real() * ds}});
  }
  return PolytorusPolynomial::from_terms(std::move(out));
}

SchauderCheck schauder_identity_check(const DirichletPolynomial& f,
                                      std::uint64_t N) {
  if (N < 1) throw std::invalid_argument("schauder check needs N >= 1");
  const auto lifted = bohr_lift(f);
  const auto shift = factorize(N);

  // Shift down by nu(N), project onto the cone r <= 1, shift back. Terms
  // are only moved and filtered, never recomputed.
  const auto shifted = lifted.shifted(-shift);
  const auto projected = riesz_project_lower(shifted);
  const auto back = projected.shifted(shift);

  const auto direct = bohr_lift(partial_sum(f, N));

  SchauderCheck out;
  out.passed = true;
  const auto& a = direct.terms();
  const auto& b = back.terms();
  if (a.size() != b.size()) {
    out.passed = false;
    out.max_deviation = std::numeric_limits<double>::infinity();
    return out;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].first != b[i].first) {
      out.passed = false;
      out.max_deviation = std::numeric_limits<double>::infinity();
      return out;
    }
    out.max_deviation =
        std::max(out.max_deviation, std::abs(a[i].second - b[i].second));
  }
  out.passed = out.max_deviation == 0.0;
  return out;
}

DirichletPolynomial dirichlet_member(std::uint64_t max_index,
                                     std::uint64_t seed, int member) {
  if (max_index < 1) throw std::invalid_argument("max_index must be >= 1");
  Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(member));
  std::vector<DirichletPolynomial::Term> terms;
  terms.reserve(max_index);
  for (std::uint64_t n = 1; n <= max_index; ++n)
    terms.push_back({n, rng.next_in_disk()});
  return DirichletPolynomial::from_terms(std::move(terms));
}

std::vector<TruncationBenchRow> truncation_norm_bench(
    double p, const std::vector<std::uint64_t>& schedule, int ensemble_count,
    std::uint64_t max_index, std::uint64_t seed, const GridOptions& opts) {
  if (!(p > 0.0)) throw std::invalid_argument("p must be > 0");
  if (ensemble_count < 1)
    throw std::invalid_argument("ensemble_count must be >= 1");
  if (schedule.empty())
    throw std::invalid_argument("schedule must not be empty");

  // Members are fixed up front; the member loop stays serial and lets the
  // norm kernels parallelize underneath.
  std::vector<DirichletPolynomial> members;
  std::vector<double> full_norms;
  for (int i = 0; i < ensemble_count; ++i) {
    members.push_back(dirichlet_member(max_index, seed, i));
    full_norms.push_back(norm_auto(bohr_lift(members.back()), p, opts).value);
  }

  std::vector<TruncationBenchRow> rows;
  for (const auto N : schedule) {
    TruncationBenchRow row;
    row.N = N;
    for (int i = 0; i < ensemble_count; ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (full_norms[k] <= 0.0) continue;
      const auto truncated = bohr_lift(partial_sum(members[k], N));
      const double ratio =
          norm_auto(truncated, p, opts).value / full_norms[k];
      if (ratio > row.max_ratio) {
        row.max_ratio = ratio;
        row.argmax_member = i;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bohr
