#include "bohr/transference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "bohr/errors.hpp"
#include "bohr/primes.hpp"
#include "bohr/rational.hpp"

namespace bohr {

namespace {

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

std::int64_t checked_i64(__int128 v, const char* what) {
  if (v > __int128(INT64_MAX) || v < __int128(INT64_MIN))
    throw OverflowError(std::string(what) + " exceeds 64-bit range");
  return static_cast<std::int64_t>(v);
}

// Exact determinant by fraction-free (Bareiss) elimination. Entries stay
// integral at every step; divisions are exact.
__int128 bareiss_det(std::vector<std::vector<__int128>> m) {
  const std::size_t d = m.size();
  __int128 sign = 1;
  __int128 prev = 1;
  for (std::size_t k = 0; k + 1 < d; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < d && m[swap_row][k] == 0) ++swap_row;
      if (swap_row == d) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < d; ++i) {
      for (std::size_t j = k + 1; j < d; ++j)
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[d - 1][d - 1];
}

__int128 minor_det(const std::vector<std::vector<std::int64_t>>& rows,
                   std::size_t drop_row, std::size_t drop_col) {
  const std::size_t d = rows.size();
  std::vector<std::vector<__int128>> m;
  m.reserve(d - 1);
  for (std::size_t i = 0; i < d; ++i) {
    if (i == drop_row) continue;
    std::vector<__int128> row;
    row.reserve(d - 1);
    for (std::size_t j = 0; j < d; ++j)
      if (j != drop_col) row.push_back(rows[i][j]);
    m.push_back(std::move(row));
  }
  return bareiss_det(std::move(m));
}

}  // namespace

RationalApproximation approx_logs(int dimension, std::int64_t q_max) {
  if (dimension < 2 || dimension > 32)
    throw std::invalid_argument("approx_logs needs 2 <= dimension <= 32");
  if (q_max < 1 || q_max > 10'000'000)
    throw std::invalid_argument("q_max must be in [1, 10^7]");

  std::vector<long double> logs(static_cast<std::size_t>(dimension));
  for (int j = 0; j < dimension; ++j)
    logs[j] = std::log(static_cast<long double>(
        nth_prime(static_cast<std::size_t>(j) + 1)));

  // Candidate key: (delta, coprime-but-not-prime, Q), smallest wins. The
  // scan is chunked so a parallel build reduces in deterministic order.
  struct Candidate {
    double delta = 0.0;
    int prime_rank = 2;  // 0 = a1, a2 prime; 1 = merely coprime; 2 = none
    std::int64_t q = 0;
    bool better_than(const Candidate& o) const {
      if (prime_rank == 2 || o.prime_rank == 2) return prime_rank < o.prime_rank;
      if (delta != o.delta) return delta < o.delta;
      if (prime_rank != o.prime_rank) return prime_rank < o.prime_rank;
      return q < o.q;
    }
  };

  constexpr std::int64_t kChunk = 8192;
  const std::int64_t nchunks = (q_max + kChunk - 1) / kChunk;
  std::vector<Candidate> best_per_chunk(static_cast<std::size_t>(nchunks));

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (nchunks > 1)
#endif
  for (std::int64_t c = 0; c < nchunks; ++c) {
    Candidate best;
    const std::int64_t lo = c * kChunk + 1;
    const std::int64_t hi = std::min(q_max, c * kChunk + kChunk);
    for (std::int64_t q = lo; q <= hi; ++q) {
      std::int64_t a1 = std::llroundl(static_cast<long double>(q) * logs[0]);
      std::int64_t a2 = std::llroundl(static_cast<long double>(q) * logs[1]);
      if (a1 < 1 || a2 < 1) continue;
      if (std::gcd(a1, a2) != 1) continue;
      long double worst = 0.0L;
      for (int j = 0; j < dimension; ++j) {
        const std::int64_t aj =
            std::llroundl(static_cast<long double>(q) * logs[j]);
        worst = std::max(
            worst, std::abs(static_cast<long double>(aj) / q - logs[j]));
      }
      Candidate cand;
      cand.delta = static_cast<double>(worst);
      cand.prime_rank = (is_prime_u64(static_cast<std::uint64_t>(a1)) &&
                         is_prime_u64(static_cast<std::uint64_t>(a2)))
                            ? 0
                            : 1;
      cand.q = q;
      if (cand.better_than(best)) best = cand;
    }
    best_per_chunk[static_cast<std::size_t>(c)] = best;
  }

  Candidate best;
  for (const auto& cand : best_per_chunk)
    if (cand.better_than(best)) best = cand;
  if (best.prime_rank == 2)
    throw ToleranceError("no Q <= " + std::to_string(q_max) +
                         " has coprime leading approximants");

  RationalApproximation R;
  R.Q = best.q;
  R.a1_a2_prime = best.prime_rank == 0;
  long double worst = 0.0L;
  for (int j = 0; j < dimension; ++j) {
    const std::int64_t aj =
        std::llroundl(static_cast<long double>(best.q) * logs[j]);
    R.a.push_back(aj);
    const long double err =
        std::abs(static_cast<long double>(aj) / best.q - logs[j]);
    R.errors.push_back(static_cast<double>(err));
    worst = std::max(worst, err);
  }
  R.delta = static_cast<double>(worst);
  return R;
}

std::pair<std::int64_t, std::int64_t> bezout(std::int64_t a1, std::int64_t a2) {
  if (a1 < 1 || a2 < 1) throw std::invalid_argument("bezout needs positive inputs");
  if (std::gcd(a1, a2) != 1)
    throw std::invalid_argument("bezout needs coprime inputs, got gcd " +
                                std::to_string(std::gcd(a1, a2)));
  // Extended Euclid for a1*x + a2*y = 1, then q2 = x, q1 = -y, shifted to
  // the canonical representative 0 <= q1 < a1.
  std::int64_t old_r = a1, r = a2;
  std::int64_t old_x = 1, x = 0;
  while (r != 0) {
    const std::int64_t quot = old_r / r;
    old_r = std::exchange(r, old_r - quot * r);
    old_x = std::exchange(x, old_x - quot * x);
  }
  // old_x solves a1*old_x = 1 (mod a2); derive q1 from the identity.
  __int128 q2 = old_x;
  __int128 q1 = (q2 * a1 - 1) / a2;
  const __int128 shift = q1 >= 0 ? q1 / a1 : -((-q1 + a1 - 1) / a1);
  q1 -= shift * a1;
  q2 -= shift * a2;
  const auto q1_64 = checked_i64(q1, "bezout q1");
  const auto q2_64 = checked_i64(q2, "bezout q2");
  if (q1_64 < 0 || q1_64 >= a1 ||
      __int128(a1) * q2_64 - __int128(a2) * q1_64 != 1)
    throw std::logic_error("bezout postcondition failed");
  return {q1_64, q2_64};
}

UnimodularMatrix::UnimodularMatrix(std::vector<std::vector<std::int64_t>> rows)
    : rows_(std::move(rows)) {
  const std::size_t d = rows_.size();
  if (d < 1 || d > 16)
    throw std::invalid_argument("matrix dimension must be in [1, 16]");
  for (const auto& row : rows_)
    if (row.size() != d) throw std::invalid_argument("matrix must be square");

  std::vector<std::vector<__int128>> wide(d, std::vector<__int128>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) wide[i][j] = rows_[i][j];
  const __int128 det = bareiss_det(wide);
  if (det != 1)
    throw std::invalid_argument("matrix determinant must be exactly 1");

  // det = 1 makes the adjugate the inverse; cofactors are exact.
  inverse_.assign(d, std::vector<std::int64_t>(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      __int128 cof = minor_det(rows_, i, j);
      if ((i + j) % 2 == 1) cof = -cof;
      inverse_[j][i] = checked_i64(cof, "matrix inverse entry");
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      __int128 acc = 0;
      for (std::size_t k = 0; k < d; ++k)
        acc += __int128(rows_[i][k]) * inverse_[k][j];
      if (acc != (i == j ? 1 : 0))
        throw std::logic_error("matrix inverse check failed");
    }
  }
}

UnimodularMatrix UnimodularMatrix::identity(int dimension) {
  std::vector<std::vector<std::int64_t>> rows(
      static_cast<std::size_t>(dimension),
      std::vector<std::int64_t>(static_cast<std::size_t>(dimension), 0));
  for (int i = 0; i < dimension; ++i)
    rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  return UnimodularMatrix(std::move(rows));
}

std::vector<std::int64_t> UnimodularMatrix::apply(
    const std::vector<std::int64_t>& v) const {
  const std::size_t d = rows_.size();
  if (v.size() != d)
    throw std::invalid_argument("vector length does not match matrix");
  std::vector<std::int64_t> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    __int128 acc = 0;
    for (std::size_t j = 0; j < d; ++j) acc += __int128(rows_[i][j]) * v[j];
    out[i] = checked_i64(acc, "matrix-vector product");
  }
  return out;
}

std::vector<std::int64_t> UnimodularMatrix::apply_inverse(
    const std::vector<std::int64_t>& v) const {
  const std::size_t d = rows_.size();
  if (v.size() != d)
    throw std::invalid_argument("vector length does not match matrix");
  std::vector<std::int64_t> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    __int128 acc = 0;
    for (std::size_t j = 0; j < d; ++j) acc += __int128(inverse_[i][j]) * v[j];
    out[i] = checked_i64(acc, "matrix-vector product");
  }
  return out;
}

UnimodularMatrix build_matrix_A(const RationalApproximation& R) {
  const std::size_t d = R.a.size();
  if (d < 2) throw std::invalid_argument("matrix A needs dimension >= 2");
  const auto [q1, q2] = bezout(R.a[0], R.a[1]);
  std::vector<std::vector<std::int64_t>> rows(d, std::vector<std::int64_t>(d, 0));
  for (std::size_t j = 0; j < d; ++j) rows[0][j] = R.a[j];
  rows[1][0] = q1;
  rows[1][1] = q2;
  for (std::size_t i = 2; i < d; ++i) rows[i][i] = 1;
  return UnimodularMatrix(std::move(rows));
}

PolytorusPolynomial change_variables(const PolytorusPolynomial& F,
                                     const UnimodularMatrix& U) {
  const int d = U.dimension();
  if (F.dimension() > d)
    throw std::invalid_argument("polynomial dimension exceeds the matrix");
  std::vector<PolytorusPolynomial::Term> out;
  out.reserve(F.term_count());
  std::vector<std::int64_t> v(static_cast<std::size_t>(d));
  for (const auto& [nu, c] : F.terms()) {
    std::fill(v.begin(), v.end(), 0);
    for (const auto& [axis, exp] : nu.entries())
      v[static_cast<std::size_t>(axis - 1)] = exp;
    const auto w = U.apply(v);
    std::vector<MultiIndex::Entry> entries;
    for (int i = 0; i < d; ++i)
      if (w[static_cast<std::size_t>(i)] != 0)
        entries.push_back({i + 1, w[static_cast<std::size_t>(i)]});
    out.push_back({MultiIndex::from_entries(std::move(entries)), c});
  }
  return PolytorusPolynomial::from_terms(std::move(out));
}

namespace {

std::int64_t first_row_dot(const RationalApproximation& R,
                           const MultiIndex& nu) {
  __int128 acc = 0;
  for (const auto& [axis, exp] : nu.entries()) {
    if (axis > static_cast<std::int32_t>(R.a.size()))
      throw std::invalid_argument("frequency axis beyond the approximation");
    acc += __int128(R.a[static_cast<std::size_t>(axis - 1)]) * exp;
  }
  return checked_i64(acc, "approximate frequency");
}

}  // namespace

Coeff approx_symbol(const MultiplierSymbol& m, const RationalApproximation& R,
                    const MultiIndex& nu) {
  const std::int64_t n1 = first_row_dot(R, nu);
  const long double L =
      static_cast<long double>(n1) / static_cast<long double>(R.Q);
  return m.value_log(L);
}

TransferenceReport verify_forward(const MultiplierSymbol& m,
                                  const PolytorusPolynomial& f, double p,
                                  double epsilon, std::int64_t q_max,
                                  const GridOptions& opts) {
  if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (q_max < 1) throw std::invalid_argument("q_max must be >= 1");

  TransferenceReport rep;
  rep.epsilon = epsilon;
  if (f.is_zero()) {
    rep.passed = true;
    rep.Q = 1;
    return rep;
  }

  const int d = std::max(2, static_cast<int>(f.dimension()));
  constexpr std::int64_t kQCap = 1'000'000;

  // Exact symbol values on the support, fixed across Q escalation.
  std::vector<Coeff> exact;
  exact.reserve(f.term_count());
  for (const auto& [nu, c] : f.terms()) {
    (void)c;
    exact.push_back(m.at_rational(rational_of(nu)));
  }

  RationalApproximation R;
  std::int64_t q = std::min(q_max, kQCap);
  for (;;) {
    R = approx_logs(d, q);
    long double worst = 0.0L;
    for (std::size_t i = 0; i < f.term_count(); ++i) {
      const Coeff a_val = approx_symbol(m, R, f.terms()[i].first);
      worst = std::max(worst,
                       static_cast<long double>(std::abs(a_val - exact[i])));
    }
    rep.sup_gap = static_cast<double>(worst);
    rep.Q = R.Q;
    if (rep.sup_gap < epsilon) break;
    if (q >= kQCap)
      throw ToleranceError(
          "approximation gap " + std::to_string(rep.sup_gap) +
          " does not reach " + std::to_string(epsilon) + " within Q <= " +
          std::to_string(kQCap) +
          "; the symbol may be discontinuous on the support");
    q = std::min(kQCap, q * 10);
  }

  // T_M f and T_{m o r} f share f's coefficients, scaled per frequency.
  std::vector<PolytorusPolynomial::Term> approx_terms, exact_terms;
  double ell1 = 0.0;
  double sup_m = 0.0;
  for (std::size_t i = 0; i < f.term_count(); ++i) {
    const auto& [nu, c] = f.terms()[i];
    const Coeff s = approx_symbol(m, R, nu);
    approx_terms.push_back({nu, c * s});
    exact_terms.push_back({nu, c * exact[i]});
    ell1 += std::abs(c);
    sup_m = std::max(sup_m, std::abs(s));
  }
  const auto f_approx = PolytorusPolynomial::from_terms(std::move(approx_terms));
  const auto f_exact = PolytorusPolynomial::from_terms(std::move(exact_terms));

  rep.approx_norm = norm_auto(f_approx, p, opts).value;
  rep.exact_norm = norm_auto(f_exact, p, opts).value;
  rep.f_norm = norm_auto(f, p, opts).value;
  rep.reference = sup_m * rep.f_norm;

  // Change of variables: T_M f transformed must equal the first-variable
  // symbol acting on the transformed polynomial, coefficient for
  // coefficient. Both sides evaluate m at the same long double argument.
  const auto A = build_matrix_A(R);
  const auto lhs = change_variables(f_approx, A);
  const auto f_transformed = change_variables(f, A);
  std::vector<PolytorusPolynomial::Term> rhs_terms;
  for (const auto& [nu, c] : f_transformed.terms()) {
    const long double L = static_cast<long double>(nu.exponent(1)) /
                          static_cast<long double>(R.Q);
    rhs_terms.push_back({nu, c * m.value_log(L)});
  }
  const bool reduction_exact =
      lhs.terms() == PolytorusPolynomial::from_terms(std::move(rhs_terms)).terms();

  const double tol = 1e-12 * std::max(1.0, rep.f_norm);
  bool ok = reduction_exact;
  ok = ok && std::abs(rep.approx_norm - rep.exact_norm) <=
                 rep.sup_gap * ell1 + tol;
  if (p == 2.0) ok = ok && rep.approx_norm <= rep.reference * (1 + 1e-12) + tol;
  rep.passed = ok && rep.sup_gap < epsilon;
  return rep;
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> primes_for_shift(
    double gamma, std::int64_t N, double delta, std::int64_t b) {
  if (!(gamma > 0.0) || N < 1 || !(delta > 0.0) || b < 1)
    throw std::invalid_argument("primes_for_shift needs gamma, delta > 0, N, b >= 1");
  const auto table = PrimeTable::instance().snapshot();
  const long double window = static_cast<long double>(delta) / N;

  const auto nearest = [&](long double target) -> std::uint64_t {
    // Candidates live in [e^{target-window}, e^{target+window}]; walk the
    // table slice around the lower edge and keep the closest log.
    const long double lo_val = std::exp(target - window);
    auto it = std::lower_bound(table->begin(), table->end(), lo_val);
    if (it != table->begin()) --it;
    std::uint64_t best = 0;
    long double best_err = window;
    for (; it != table->end(); ++it) {
      const long double err =
          std::abs(std::log(static_cast<long double>(*it)) - target);
      if (err < best_err) {
        best_err = err;
        best = *it;
      } else if (static_cast<long double>(*it) > std::exp(target + window)) {
        break;
      }
    }
    return best;
  };

  const std::uint64_t pj = nearest(static_cast<long double>(gamma) * (b + 1));
  const std::uint64_t pk = nearest(static_cast<long double>(gamma) * b);
  if (pj == 0 || pk == 0 || pj == pk) return std::nullopt;
  return std::pair{pj, pk};
}

MatrixBResult build_matrix_B(double gamma, std::int64_t N, double delta,
                             std::int64_t b_cap) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  if (b_cap < 1) throw std::invalid_argument("b_cap must be >= 1");

  const auto table = PrimeTable::instance().snapshot();
  const long double max_log = std::log(static_cast<long double>(table->back()));
  const long double window = static_cast<long double>(delta) / N;

  for (std::int64_t b = 1; b <= b_cap; ++b) {
    if (static_cast<long double>(gamma) * b - window > max_log)
      throw ToleranceError(
          "prime table tops out at " + std::to_string(table->back()) +
          " before any b fits gamma = " + std::to_string(gamma) +
          ", delta/N = " + std::to_string(static_cast<double>(window)) +
          "; raise the prime cap");
    const auto pair = primes_for_shift(gamma, N, delta, b);
    if (!pair) continue;
    MatrixBResult out{
        b, pair->first, pair->second,
        UnimodularMatrix({{b + 1, b}, {1, 1}})};
    return out;
  }
  throw ToleranceError("no b <= " + std::to_string(b_cap) +
                       " admits a prime pair within delta/N");
}

TransferenceReport verify_backward(const MultiplierSymbol& m,
                                   const PolytorusPolynomial& g, double gamma,
                                   double p, double delta,
                                   const GridOptions& opts) {
  if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");

  TransferenceReport rep;
  rep.gamma = gamma;
  rep.epsilon = delta;
  if (g.is_zero()) {
    rep.passed = true;
    rep.N = 1;
    return rep;
  }

  std::int64_t N = 1;
  for (const auto& [nu, c] : g.terms()) {
    (void)c;
    for (const auto& [axis, exp] : nu.entries()) {
      if (axis != 1)
        throw std::invalid_argument(
            "backward verification takes a one-variable polynomial");
      N = std::max(N, std::abs(exp));
    }
  }
  rep.N = N;

  const auto B = build_matrix_B(gamma, N, delta);
  const auto j = prime_index(B.prime_j).value();
  const auto k = prime_index(B.prime_k).value();

  // Dilated line side: scale a_n by m(e^{gamma n}).
  std::vector<PolytorusPolynomial::Term> line_terms;
  double ell1 = 0.0;
  double sup_m = 0.0;
  for (const auto& [nu, c] : g.terms()) {
    const long double L =
        static_cast<long double>(gamma) * nu.exponent(1);
    const Coeff s = m.value_log(L);
    line_terms.push_back({nu, c * s});
    ell1 += std::abs(c);
    sup_m = std::max(sup_m, std::abs(s));
  }
  const auto g_dilated = PolytorusPolynomial::from_terms(std::move(line_terms));

  // Polytorus side: a_n rides on the lattice line (n, -n) over the prime
  // axes j and k, so r_nu = p_j^n p_k^{-n} tracks e^{gamma n}.
  std::vector<PolytorusPolynomial::Term> lattice_terms;
  for (const auto& [nu, c] : g.terms()) {
    const std::int64_t n = nu.exponent(1);
    lattice_terms.push_back(
        {MultiIndex::from_entries(
             {{static_cast<std::int32_t>(j), n},
              {static_cast<std::int32_t>(k), -n}}),
         c});
  }
  const auto F = PolytorusPolynomial::from_terms(std::move(lattice_terms));
  const auto F_mult = apply_multiplier(m, F);

  long double worst = 0.0L;
  for (const auto& [nu, c] : g.terms()) {
    (void)c;
    const std::int64_t n = nu.exponent(1);
    const long double L = static_cast<long double>(gamma) * n;
    const MultiIndex latt = MultiIndex::from_entries(
        {{static_cast<std::int32_t>(j), n}, {static_cast<std::int32_t>(k), -n}});
    const Coeff gap = m.value_log(L) - m.at_rational(rational_of(latt));
    worst = std::max(worst, static_cast<long double>(std::abs(gap)));
  }
  rep.sup_gap = static_cast<double>(worst);

  rep.approx_norm = norm_auto(g_dilated, p, opts).value;
  rep.exact_norm = norm_auto(F_mult, p, opts).value;
  rep.f_norm = norm_auto(g, p, opts).value;
  rep.reference = sup_m * rep.f_norm;

  const double F_norm = norm_auto(F, p, opts).value;
  const double tol = 1e-12 * std::max(1.0, rep.f_norm);
  bool ok = std::abs(F_norm - rep.f_norm) <= tol;
  ok = ok &&
       std::abs(rep.approx_norm - rep.exact_norm) <= rep.sup_gap * ell1 + tol;
  if (p == 2.0) ok = ok && rep.approx_norm <= rep.reference * (1 + 1e-12) + tol;
  rep.passed = ok;
  return rep;
}

}  // namespace bohr
