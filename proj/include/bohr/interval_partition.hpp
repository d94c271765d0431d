#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "bohr/rational.hpp"

namespace bohr {

// Lacunary-exponential partition of (0, infinity), parameterized by a
// rational eta > 1. In log space the blocks are
//   block 0:           [-eta, eta)
//   block k >= 1:      [eta^k, eta^{k+1})
//   block k <= -1:     [-eta^{|k|+1}, -eta^{|k|})
// The t-space endpoints exp(eta^k) are transcendental, so a positive
// rational never sits on a boundary; membership of a rational is decided
// with an explicit margin certificate rather than trusted rounding.
class IntervalPartition {
 public:
  explicit IntervalPartition(std::int64_t num, std::int64_t den = 1);

  // "2", "3/2", or a decimal like "1.5" (taken at its exact binary value).
  static IntervalPartition parse(const std::string& text);

  double eta() const { return double(num_) / double(den_); }
  std::pair<std::int64_t, std::int64_t> eta_fraction() const {
    return {num_, den_};
  }
  std::string eta_text() const;

  // eta^level by repeated long double multiplication, level >= 0.
  long double threshold(int level) const;

  // Block containing the rational r. Throws MarginError if log r lands
  // within margin_floor of a threshold; with exact integer logs and the
  // default floor this only fires on a genuine certification failure.
  long long block_of(const ReducedRational& r,
                     double margin_floor = 1e-9) const;
  long long block_of_log(long double log_r,
                         double margin_floor = 1e-9) const;

  // Real-side lookup for t-space evaluation of step symbols: the block
  // index plus the log-space distance to the nearest threshold, so the
  // caller can apply a regulated value on a hit.
  struct RealBlock {
    long long k = 0;
    long double boundary_distance = 0.0;
  };
  RealBlock block_of_real(double t) const;

  // Closed log-space bounds [lo, hi] of block k (the half-open bookkeeping
  // above never matters on rationals; variation uses closed intervals).
  std::pair<long double, long double> log_bounds(long long k) const;

  bool operator==(const IntervalPartition& o) const = default;

 private:
  std::int64_t num_ = 2;
  std::int64_t den_ = 1;
};

}  // namespace bohr
