#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bohr/interval_partition.hpp"
#include "bohr/multiplier.hpp"
#include "bohr/norms.hpp"
#include "bohr/polynomials.hpp"

namespace bohr {

// F split by frequency magnitude: block k holds the terms with
// r_nu in I_k. Blocks are sorted by k; empty blocks are not stored.
struct BlockDecomposition {
  IntervalPartition partition{2, 1};
  std::vector<std::pair<long long, PolytorusPolynomial>> blocks;

  // nullptr when block k is empty.
  const PolytorusPolynomial* block(long long k) const;
  PolytorusPolynomial reassemble() const;
};

// Membership of each frequency decided with the partition's margin
// certificate; a frequency too close to a threshold throws MarginError
// rather than being rounded into a block.
BlockDecomposition decompose(const PolytorusPolynomial& F,
                             const IntervalPartition& P);

// (sum_k |f_k(z)|^2)^{1/2}.
double square_function_at(const BlockDecomposition& D, const TorusPoint& z);

// |S|_p for the square function of a block list: exact at p = 2
// (Parseval over disjoint supports, bitwise equal to the Parseval norm of
// the reassembled polynomial) and at small even integer p (powers of
// G = sum_k f_k conj f_k, constant coefficient of G^{p/2}); otherwise a
// tensor-grid / Monte-Carlo evaluation controlled by opts.
NormEstimate square_norm(const std::vector<PolytorusPolynomial>& blocks,
                         double p, const GridOptions& opts = {});

struct LpRatioReport {
  NormEstimate s_norm;
  NormEstimate f_norm;
  double ratio = 0.0;  // |S(f)|_p / |F|_p, 0 when F = 0
  std::size_t block_count = 0;
  bool exploratory = false;  // p outside (1, infinity): no equivalence claim
};
// Both norms by the same route (decided by p), same options.
LpRatioReport lp_ratio(const PolytorusPolynomial& F, const IntervalPartition& P,
                       double p, const GridOptions& opts = {});

// Random +-1 per block, lazily derived from the seed.
MultiplierSymbol random_sign_symbol(const IntervalPartition& P,
                                    std::uint64_t seed);

struct KhintchineEstimate {
  double mean_pow = 0.0;   // empirical mean of |T_eps F|_p^p
  double std_error = 0.0;  // standard error of that mean
  int samples = 0;
};
// Average of |sum_k eps_k f_k|_p^p over seeded sign samples; each sample
// draws its signs from its own stream, so the estimate is independent of
// evaluation order. At p = 2 every sample equals |F|_2^2 bitwise.
KhintchineEstimate khintchine_average(const PolytorusPolynomial& F,
                                      const IntervalPartition& P, double p,
                                      int num_samples, std::uint64_t seed,
                                      const GridOptions& opts = {});

struct KhintchineExhaustive {
  double mean_pow = 0.0;   // mean of |T_eps F|_p^p over all patterns
  double min_norm = 0.0;   // extremes of |T_eps F|_p
  double max_norm = 0.0;
  std::uint64_t patterns = 0;
};
// All 2^B sign patterns over the B occupied blocks; rejects B > 20.
KhintchineExhaustive khintchine_exhaustive(const PolytorusPolynomial& F,
                                           const IntervalPartition& P, double p,
                                           const GridOptions& opts = {});

// Martingale differences of the variable filtration: Delta_0 is the
// constant term, Delta_N collects the monomials whose largest active axis
// is exactly N. Empty differences are not stored; the pieces sum to F.
std::vector<std::pair<std::int32_t, PolytorusPolynomial>> martingale_blocks(
    const PolytorusPolynomial& F);

}  // namespace bohr
