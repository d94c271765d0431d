#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "bohr/multi_index.hpp"
#include "bohr/rational.hpp"

namespace bohr {

using Coeff = std::complex<double>;

// Finite sum  sum_n a_n n^{-s}  over positive integer indices. Terms are
// kept sorted by index with zero coefficients pruned.
class DirichletPolynomial {
 public:
  using Term = std::pair<std::uint64_t, Coeff>;

  DirichletPolynomial() = default;
  static DirichletPolynomial from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  // Largest index present; 1 for the zero polynomial.
  std::uint64_t max_index() const {
    return terms_.empty() ? 1 : terms_.back().first;
  }

  Coeff coefficient(std::uint64_t n) const;

  // Value at s, summed in ascending index order.
  Coeff operator()(Coeff s) const;

  DirichletPolynomial operator+(const DirichletPolynomial& o) const;
  DirichletPolynomial operator-(const DirichletPolynomial& o) const;

  // Dirichlet convolution; index products are overflow-checked.
  DirichletPolynomial operator*(const DirichletPolynomial& o) const;

 private:
  std::vector<Term> terms_;
};

// Point on a finite-dimensional torus, stored as angles in [0, 2*pi).
struct TorusPoint {
  std::vector<double> theta;

  std::size_t dimension() const { return theta.size(); }
  static TorusPoint from_angles(std::vector<double> raw);  // reduces mod 2*pi
};

// Trigonometric polynomial on the polytorus: finite sum c_nu z^nu with
// multi-index frequencies. Terms sorted by MultiIndex order, zeros pruned.
class PolytorusPolynomial {
 public:
  using Term = std::pair<MultiIndex, Coeff>;

  PolytorusPolynomial() = default;
  static PolytorusPolynomial from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  // Largest axis appearing in any frequency; 0 if none do.
  std::int32_t dimension() const;

  // Largest |exponent| on any single axis; 0 for constants.
  std::int64_t max_degree() const;

  bool is_analytic() const;

  Coeff coefficient(const MultiIndex& nu) const;

  // Value at z, requires z.dimension() >= dimension().
  Coeff operator()(const TorusPoint& z) const;

  PolytorusPolynomial operator+(const PolytorusPolynomial& o) const;
  PolytorusPolynomial operator-(const PolytorusPolynomial& o) const;
  PolytorusPolynomial operator*(const PolytorusPolynomial& o) const;

  // Complex conjugate: c_nu -> conj(c_nu), nu -> -nu.
  PolytorusPolynomial conjugate() const;

  // Multiply every frequency by z^shift (coefficients untouched).
  PolytorusPolynomial shifted(const MultiIndex& shift) const;

 private:
  std::vector<Term> terms_;
};

// Exponent vector of the prime factorization of n >= 1.
MultiIndex factorize(std::uint64_t n);

// n^{-s} <-> z^{factorize(n)}; drop throws std::domain_error on any
// negative exponent, naming the offending frequency.
PolytorusPolynomial bohr_lift(const DirichletPolynomial& f);
DirichletPolynomial bohr_drop(const PolytorusPolynomial& F);

// Kronecker flow point: theta_j = -t * log(p_j) mod 2*pi, j = 1..dim.
// Evaluating the lift there equals evaluating the series at s = it.
TorusPoint kronecker_flow(double t, std::size_t dim);

}  // namespace bohr
