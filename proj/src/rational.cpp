#include "bohr/rational.hpp"

#include <cmath>
#include <stdexcept>

#include "bohr/errors.hpp"
#include "bohr/primes.hpp"

namespace bohr {

long double ReducedRational::log_value() const {
  return std::log(static_cast<long double>(num)) -
         std::log(static_cast<long double>(den));
}

std::string ReducedRational::to_string() const {
  return den == 1 ? std::to_string(num)
                  : std::to_string(num) + "/" + std::to_string(den);
}

namespace {

std::uint64_t checked_pow_mul(std::uint64_t acc, std::uint64_t base,
                              std::uint64_t exp, const MultiIndex& nu) {
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (__builtin_mul_overflow(acc, base, &acc))
      throw OverflowError("rational value of " + nu.to_string() +
                          " exceeds 64-bit range");
  }
  return acc;
}

}  // namespace

ReducedRational rational_of(const MultiIndex& nu) {
  ReducedRational r;
  for (const auto& [axis, exp] : nu.entries()) {
    const std::uint64_t p = nth_prime(static_cast<std::size_t>(axis));
    if (exp > 0) {
      r.num = checked_pow_mul(r.num, p, static_cast<std::uint64_t>(exp), nu);
    } else {
      r.den = checked_pow_mul(r.den, p, static_cast<std::uint64_t>(-exp), nu);
    }
  }
  return r;
}

int cmp_rational_double(std::uint64_t num, std::uint64_t den, double x) {
  if (std::isnan(x)) throw std::invalid_argument("comparison against NaN");
  if (x <= 0.0) return +1;  // the rational is strictly positive
  if (std::isinf(x)) return -1;

  // Fast path: one rounding in the product, generous ulp margin.
  const long double lhs = static_cast<long double>(num);
  const long double rhs = static_cast<long double>(x) * static_cast<long double>(den);
  const long double diff = lhs - rhs;
  const long double margin = (lhs + rhs) * 0x1p-58L;
  if (diff > margin) return +1;
  if (diff < -margin) return -1;

  // Exact path: x = mant * 2^e with mant an integer < 2^53.
  int exp2 = 0;
  const double frac = std::frexp(x, &exp2);
  const auto mant = static_cast<unsigned __int128>(std::ldexp(frac, 53));
  const int e = exp2 - 53;

  unsigned __int128 l = num;
  unsigned __int128 r = mant * static_cast<unsigned __int128>(den);  // < 2^117
  if (e >= 0) {
    for (int i = 0; i < e; ++i) {
      if (r > (~static_cast<unsigned __int128>(0) >> 1)) return -1;
      r <<= 1;
    }
  } else {
    for (int i = 0; i < -e; ++i) {
      if (l > (~static_cast<unsigned __int128>(0) >> 1)) return +1;
      l <<= 1;
    }
  }
  if (l < r) return -1;
  if (l > r) return +1;
  return 0;
}

}  // namespace bohr
