#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bohr/multiplier.hpp"
#include "bohr/norms.hpp"
#include "bohr/polynomials.hpp"

namespace bohr {

// Simultaneous rational approximation a_j/Q of log p_j, j = 1..d.
struct RationalApproximation {
  std::int64_t Q = 0;
  std::vector<std::int64_t> a;  // a_j = round(Q log p_j), all >= 1
  std::vector<double> errors;   // |a_j/Q - log p_j|
  double delta = 0.0;           // max of errors
  bool a1_a2_prime = false;     // whether the preferred prime pair was hit
};

// Exhaustive scan over Q in [1, q_max], keeping the Q of smallest max
// error among those with gcd(a_1, a_2) = 1. Ties prefer a_1, a_2 both
// prime, then the smaller Q. Deterministic for any thread count.
RationalApproximation approx_logs(int dimension, std::int64_t q_max);

// The canonical (q1, q2) with a1*q2 - a2*q1 = 1 and 0 <= q1 < a1.
// Requires gcd(a1, a2) = 1.
std::pair<std::int64_t, std::int64_t> bezout(std::int64_t a1, std::int64_t a2);

// Small integer matrix with determinant exactly 1; the inverse is computed
// by exact adjugate arithmetic at construction and is again integral.
class UnimodularMatrix {
 public:
  explicit UnimodularMatrix(std::vector<std::vector<std::int64_t>> rows);

  static UnimodularMatrix identity(int dimension);

  int dimension() const { return static_cast<int>(rows_.size()); }
  std::int64_t entry(int i, int j) const { return rows_[i][j]; }
  std::int64_t inverse_entry(int i, int j) const { return inverse_[i][j]; }

  // Exact integer matrix-vector products; overflow is an error, never UB.
  std::vector<std::int64_t> apply(const std::vector<std::int64_t>& v) const;
  std::vector<std::int64_t> apply_inverse(
      const std::vector<std::int64_t>& v) const;

 private:
  std::vector<std::vector<std::int64_t>> rows_;
  std::vector<std::vector<std::int64_t>> inverse_;
};

// Rows: (a_1..a_d), (q_1, q_2, 0...), then identity. Unimodular because
// a_1 q_2 - a_2 q_1 = 1.
UnimodularMatrix build_matrix_A(const RationalApproximation& R);

// Moves the coefficient at nu to U nu. A measure-preserving automorphism
// of the torus, so every L^p norm is preserved.
PolytorusPolynomial change_variables(const PolytorusPolynomial& F,
                                     const UnimodularMatrix& U);

// M(nu) = m(exp((a_1 nu_1 + ... + a_d nu_d)/Q)), the one-frequency
// surrogate for m(r_nu).
Coeff approx_symbol(const MultiplierSymbol& m, const RationalApproximation& R,
                    const MultiIndex& nu);

struct TransferenceReport {
  double sup_gap = 0.0;      // max |M(nu) - m(r_nu)| over the support
  double approx_norm = 0.0;  // ||T_M f||_p, or the dilated-line side
  double exact_norm = 0.0;   // ||T_{m o r} f||_p on the polytorus
  double f_norm = 0.0;       // ||f||_p of the untouched input
  double reference = 0.0;    // sup |M| on the support, times ||f||_p
  double epsilon = 0.0;      // requested uniform gap
  double gamma = 0.0;        // dilation (reverse direction only)
  std::int64_t Q = 0;        // accepted denominator (forward only)
  std::int64_t N = 0;        // frequency cap (reverse only)
  bool passed = false;
};

// Forward inequality: approximates m o r by M on f's support (escalating
// q_max tenfold, capped at 10^6, until the gap is < epsilon), checks the
// coefficient-exact reduction to a first-variable symbol under the change
// of variables by matrix A, and compares the norms. Throws ToleranceError
// when no Q in budget achieves the gap.
TransferenceReport verify_forward(const MultiplierSymbol& m,
                                  const PolytorusPolynomial& f, double p,
                                  double epsilon, std::int64_t q_max,
                                  const GridOptions& opts = {});

// Primes (p_j, p_k) with |gamma (b+1) - log p_j| < delta/N and
// |gamma b - log p_k| < delta/N, if the table contains them; nearest
// admissible prime wins per slot.
std::optional<std::pair<std::uint64_t, std::uint64_t>> primes_for_shift(
    double gamma, std::int64_t N, double delta, std::int64_t b);

struct MatrixBResult {
  std::int64_t b = 0;
  std::uint64_t prime_j = 0;  // log close to gamma (b+1)
  std::uint64_t prime_k = 0;  // log close to gamma b
  UnimodularMatrix B;
};

// Smallest b >= 1 admitting a prime pair within delta/N; scans up to
// b_cap and throws ToleranceError with a prime-table hint past the cap.
MatrixBResult build_matrix_B(double gamma, std::int64_t N, double delta,
                             std::int64_t b_cap = 1'000'000);

// Reverse inequality: embeds the one-variable polynomial g on the lattice
// line (n, -n) via matrix B, applies m o r there through the prime pair,
// and compares against the dilated symbol m(e^{gamma n}) acting on g.
TransferenceReport verify_backward(const MultiplierSymbol& m,
                                   const PolytorusPolynomial& g, double gamma,
                                   double p, double delta,
                                   const GridOptions& opts = {});

}  // namespace bohr
