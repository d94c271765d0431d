#pragma once

#include <cstdint>
#include <string>

#include "bohr/multi_index.hpp"

namespace bohr {

// Positive rational in lowest terms. num/den are automatically coprime
// when produced by rational_of (numerator collects positive exponents,
// denominator negative ones, over distinct primes).
struct ReducedRational {
  std::uint64_t num = 1;
  std::uint64_t den = 1;

  bool is_one() const { return num == den; }
  bool operator==(const ReducedRational&) const = default;

  // Exact as a long double expression: both integers are below 2^64, so
  // the error is a few ulps of the result, far inside every margin this
  // codebase certifies against.
  long double log_value() const;

  double to_double() const { return double(num) / double(den); }
  std::string to_string() const;
};

// r_nu = prod p_j^{nu_j}. Throws OverflowError when either side of the
// fraction leaves uint64, with the offending index in the message.
ReducedRational rational_of(const MultiIndex& nu);

// Sign of (num/den - x), computed exactly for finite x: -1, 0, +1.
// Fast path decides through long double with an ulp margin; ties fall
// back to integer comparison on the binary expansion of x.
int cmp_rational_double(std::uint64_t num, std::uint64_t den, double x);

inline int cmp_rational_double(const ReducedRational& r, double x) {
  return cmp_rational_double(r.num, r.den, x);
}

}  // namespace bohr
