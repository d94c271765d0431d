#include "bohr/interval_partition.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bohr/errors.hpp"

namespace bohr {

IntervalPartition::IntervalPartition(std::int64_t num, std::int64_t den) {
  if (num <= 0 || den <= 0)
    throw std::invalid_argument("eta must be a positive fraction");
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
  if (num_ <= den_)
    throw std::invalid_argument("eta must be > 1, got " + eta_text());
  if (num_ > (std::int64_t{1} << 52))
    throw std::invalid_argument("eta numerator too large");
}

IntervalPartition IntervalPartition::parse(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const std::int64_t num = std::stoll(text.substr(0, slash));
    const std::int64_t den = std::stoll(text.substr(slash + 1));
    return IntervalPartition(num, den);
  }
  if (text.find('.') == std::string::npos)
    return IntervalPartition(std::stoll(text));
  // Decimal: take the exact binary value of the parsed double.
  const double v = std::stod(text);
  if (!(v > 1.0) || !std::isfinite(v))
    throw std::invalid_argument("eta must be a finite number > 1");
  int exp2 = 0;
  const double frac = std::frexp(v, &exp2);
  std::int64_t num = static_cast<std::int64_t>(std::ldexp(frac, 53));
  int shift = exp2 - 53;
  while (num % 2 == 0 && shift < 0) {
    num /= 2;
    ++shift;
  }
  if (shift > 0 || shift < -52)
    throw std::invalid_argument("eta value out of range");
  return IntervalPartition(num, std::int64_t{1} << (-shift));
}

std::string IntervalPartition::eta_text() const {
  return den_ == 1 ? std::to_string(num_)
                   : std::to_string(num_) + "/" + std::to_string(den_);
}

long double IntervalPartition::threshold(int level) const {
  if (level < 0) throw std::invalid_argument("threshold level must be >= 0");
  const long double eta = static_cast<long double>(num_) / den_;
  long double v = 1.0L;
  for (int i = 0; i < level; ++i) v *= eta;
  return v;
}

std::pair<long double, long double> IntervalPartition::log_bounds(
    long long k) const {
  if (k == 0) return {-threshold(1), threshold(1)};
  const int j = static_cast<int>(k > 0 ? k : -k);
  if (j > 16'000) throw std::invalid_argument("block index out of range");
  const long double lo = threshold(j);
  const long double hi = threshold(j + 1);
  return k > 0 ? std::pair{lo, hi} : std::pair{-hi, -lo};
}

long long IntervalPartition::block_of_log(long double log_r,
                                          double margin_floor) const {
  const long double eta = static_cast<long double>(num_) / den_;
  const long double a = log_r >= 0 ? log_r : -log_r;
  long long k;
  long double margin;
  if (a < eta) {
    k = 0;
    margin = eta - a;
  } else {
    // Walk the geometric thresholds; |log r| <= 44 log 2 for rationals,
    // so the walk is short for every eta of interest.
    int j = 1;
    long double lo = eta;
    long double hi = eta * eta;
    while (a >= hi) {
      lo = hi;
      hi *= eta;
      ++j;
      if (j > 16'000) throw std::invalid_argument("log value out of range");
    }
    margin = std::min(a - lo, hi - a);
    k = (log_r >= 0) ? j : -j;
  }
  if (margin < static_cast<long double>(margin_floor))
    throw MarginError("log value " + std::to_string(double(log_r)) +
                      " within " + std::to_string(double(margin)) +
                      " of a block threshold (floor " +
                      std::to_string(margin_floor) + ")");
  return k;
}

long long IntervalPartition::block_of(const ReducedRational& r,
                                      double margin_floor) const {
  return block_of_log(r.log_value(), margin_floor);
}

IntervalPartition::RealBlock IntervalPartition::block_of_real(double t) const {
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::invalid_argument("symbol argument must be positive and finite");
  const long double L = std::log(static_cast<long double>(t));
  const long double eta = static_cast<long double>(num_) / den_;
  const long double a = L >= 0 ? L : -L;
  RealBlock out;
  if (a < eta) {
    out.k = 0;
    out.boundary_distance = eta - a;
    return out;
  }
  int j = 1;
  long double lo = eta;
  long double hi = eta * eta;
  while (a >= hi) {
    lo = hi;
    hi *= eta;
    ++j;
    if (j > 16'000) throw std::invalid_argument("argument out of range");
  }
  out.k = (L >= 0) ? j : -j;
  out.boundary_distance = std::min(a - lo, hi - a);
  return out;
}

}  // namespace bohr
