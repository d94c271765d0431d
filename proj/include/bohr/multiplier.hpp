#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bohr/interval_partition.hpp"
#include "bohr/norms.hpp"
#include "bohr/polynomials.hpp"
#include "bohr/rational.hpp"

namespace bohr {

// Piecewise-smooth symbol payload. Everything is parameterized by
// L = log t so that blocks with astronomically large t-endpoints can be
// handled without overflowing t itself.
struct SmoothSpec {
  std::string name;
  // m(e^L), real-valued.
  std::function<double(long double)> value_log;
  // m'(t); used on (e, t_max] by the derivative-based bound.
  std::function<double(double)> deriv;
  // Logs of points where m' jumps (m itself stays continuous).
  std::vector<long double> kink_logs;
  // Interior critical points (in log space) splitting (lo, hi) into
  // monotone pieces; endpoints and kinks are added by the caller.
  std::function<std::vector<long double>(long double, long double)>
      monotone_breaks_log;
  bool eventually_constant = false;
};

// A bounded function on (0, infinity) acting diagonally on frequencies:
// T_m F has coefficient m(r_nu) c_nu. Rational arguments are classified
// exactly; real arguments get the regulated value at any jump.
class MultiplierSymbol {
 public:
  enum class Kind { constant, indicator, step_signs, smooth, tabulated };

  static MultiplierSymbol constant(Coeff value);
  // 1 on the interval between a and b, 0 outside; the closed flags decide
  // the endpoints when a rational hits one exactly. a < b required; a may
  // be 0 to open the interval at the origin.
  static MultiplierSymbol indicator(double a, double b, bool closed_left = false,
                                    bool closed_right = true);
  // +-1 on each partition block, signs derived lazily from the seed: the
  // sign of block k never depends on which k-range is examined.
  static MultiplierSymbol step_signs_seeded(IntervalPartition partition,
                                            std::uint64_t seed);
  static MultiplierSymbol step_signs_explicit(IntervalPartition partition,
                                              std::map<long long, int> signs,
                                              int default_sign = +1);
  static MultiplierSymbol smooth(SmoothSpec spec);
  // Built-ins: "sin_loglog" (sin(log log t) past t = e, 0 before),
  // "log" (log t), "inv1p" (1/(1+t)).
  static MultiplierSymbol named_smooth(const std::string& name);
  // Right-continuous step data: value v_i on [t_i, t_{i+1}), v_0 before
  // the first node, v_last after the last.
  static MultiplierSymbol tabulated(std::vector<std::pair<double, Coeff>> nodes,
                                    bool monotone_certified);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  Coeff at_rational(const ReducedRational& r) const;
  Coeff at_real(double t) const;

  bool has_derivative() const;
  double derivative(double t) const;

  // Logs of jump discontinuities inside [log_lo, log_hi].
  std::vector<long double> jump_logs_in(long double log_lo,
                                        long double log_hi) const;
  // One-sided limits and regulated value at log-coordinate L.
  Coeff limit_left_log(long double L) const;
  Coeff limit_right_log(long double L) const;
  Coeff value_log(long double L) const;

  // Total variation over the closed log-interval [log_lo, log_hi].
  double variation_on_log(long double log_lo, long double log_hi) const;

  // True when the symbol is certifiably constant outside
  // [-cover_log, cover_log] in log space.
  bool eventually_constant_beyond(long double cover_log) const;

  // Kind-specific access.
  const IntervalPartition* step_partition() const;
  int step_sign(long long k) const;
  bool tabulated_monotone() const { return tabulated_monotone_; }
  const std::vector<std::pair<double, Coeff>>& tabulated_nodes() const {
    return nodes_;
  }
  const SmoothSpec* smooth_spec() const;

  std::string describe() const;

 private:
  MultiplierSymbol() = default;

  Kind kind_ = Kind::constant;
  std::string name_;
  Coeff constant_{1.0, 0.0};

  double ind_a_ = 0.0, ind_b_ = 1.0;
  bool ind_closed_left_ = false, ind_closed_right_ = true;

  std::optional<IntervalPartition> partition_;
  bool seeded_ = false;
  std::uint64_t seed_ = 0;
  std::map<long long, int> signs_;
  int default_sign_ = +1;

  std::optional<SmoothSpec> smooth_;

  std::vector<std::pair<double, Coeff>> nodes_;
  bool tabulated_monotone_ = false;
};

// Diagonal action on coefficients.
PolytorusPolynomial apply_multiplier(const MultiplierSymbol& m,
                                     const PolytorusPolynomial& F);
DirichletPolynomial apply_multiplier(const MultiplierSymbol& m,
                                     const DirichletPolynomial& f);

// sup|m| + sup_k BV(m on block k), |k| <= k_range. For step and indicator
// kinds every piece is exact; for smooth kinds the variation is a sum
// over certified monotone pieces and the sup is a refined grid value.
struct IntervalVariation {
  long long k = 0;
  double variation = 0.0;
};
struct MarcinkiewiczReport {
  double sup_norm = 0.0;
  double bv_sup = 0.0;
  double bracket = 0.0;  // sup_norm + bv_sup
  long long argmax_k = 0;
  // sup and variation certified to extend beyond the scanned k-range
  // (symbol constant outside the scan window).
  bool tail_justified = false;
  std::vector<IntervalVariation> per_interval;
};
MarcinkiewiczReport marcinkiewicz_bound(const MultiplierSymbol& m,
                                        const IntervalPartition& partition,
                                        int k_range = 40);

// sup|m| + sup_{e < t <= t_max} |t log(t) m'(t)| on a geometric grid.
// unbounded_suspected: the grid sup sits at the edge of the range and
// kept growing from the half range to the full range.
struct HormanderMihlinReport {
  double sup_norm = 0.0;
  double derivative_term = 0.0;
  double bracket = 0.0;
  double argmax_t = 0.0;
  bool unbounded_suspected = false;
};
HormanderMihlinReport hormander_mihlin_bound(const MultiplierSymbol& m,
                                             double log_t_max = 40.0,
                                             int pts_per_octave = 64);

// Lower bound for the multiplier norm by a seeded ensemble of analytic
// test polynomials: max over members of |T_m f|_p / |f|_p. Every fourth
// member is a single monomial, so at p = 2 the bound reaches
// max |m(r_nu)| over the sampled frequencies exactly.
struct EnsembleOptions {
  int count = 32;
  int dimension = 3;
  int degree = 3;
  int terms = 12;
  std::uint64_t seed = 1;
};
struct LowerBoundReport {
  double value = 0.0;
  int argmax_member = -1;
  std::vector<double> ratios;
};
LowerBoundReport multiplier_norm_lower(const MultiplierSymbol& m, double p,
                                       const EnsembleOptions& opts = {},
                                       const GridOptions& grid = {});

// Deterministic analytic test polynomial used by the ensembles: member i
// of a seeded family; every fourth member is a single monomial.
PolytorusPolynomial ensemble_member(const EnsembleOptions& opts, int index);

}  // namespace bohr
