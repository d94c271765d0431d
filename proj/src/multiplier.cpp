#include "bohr/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "bohr/errors.hpp"
#include "bohr/rng.hpp"

namespace bohr {

namespace {

int seeded_sign(std::uint64_t seed, long long k) {
  std::uint64_t state = seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(k));
  return (splitmix64(state) >> 63) ? -1 : +1;
}

double checked_positive(double t) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::invalid_argument("symbol argument must lie in (0, infinity)");
  return t;
}

// Blocks on either side of log-coordinate L; the two coincide unless L is
// bitwise equal to a block threshold. log_bounds returns the same repeated
// multiplication values the block walk uses, so the tie test is exact.
std::pair<long long, long long> blocks_around_log(const IntervalPartition& P,
                                                  long double L) {
  const long long k0 = P.block_of_log(L, 0.0);
  const auto [lo, hi] = P.log_bounds(k0);
  if (L == lo) return {k0 - 1, k0};
  if (L == hi) return {k0, k0 + 1};
  return {k0, k0};
}

}  // namespace

MultiplierSymbol MultiplierSymbol::constant(Coeff value) {
  MultiplierSymbol m;
  m.kind_ = Kind::constant;
  m.name_ = "constant";
  m.constant_ = value;
  return m;
}

MultiplierSymbol MultiplierSymbol::indicator(double a, double b,
                                             bool closed_left,
                                             bool closed_right) {
  if (!(a >= 0.0) || !std::isfinite(b) || !(b > a))
    throw std::invalid_argument("indicator needs 0 <= a < b < infinity");
  MultiplierSymbol m;
  m.kind_ = Kind::indicator;
  m.name_ = "indicator";
  m.ind_a_ = a;
  m.ind_b_ = b;
  m.ind_closed_left_ = closed_left;
  m.ind_closed_right_ = closed_right;
  return m;
}

MultiplierSymbol MultiplierSymbol::step_signs_seeded(IntervalPartition partition,
                                                     std::uint64_t seed) {
  MultiplierSymbol m;
  m.kind_ = Kind::step_signs;
  m.name_ = "step_signs";
  m.partition_ = std::move(partition);
  m.seeded_ = true;
  m.seed_ = seed;
  return m;
}

MultiplierSymbol MultiplierSymbol::step_signs_explicit(
    IntervalPartition partition, std::map<long long, int> signs,
    int default_sign) {
  for (const auto& [k, s] : signs) {
    (void)k;
    if (s != 1 && s != -1)
      throw std::invalid_argument("step signs must be +1 or -1");
  }
  if (default_sign != 1 && default_sign != -1)
    throw std::invalid_argument("default sign must be +1 or -1");
  MultiplierSymbol m;
  m.kind_ = Kind::step_signs;
  m.name_ = "step_signs";
  m.partition_ = std::move(partition);
  m.seeded_ = false;
  m.signs_ = std::move(signs);
  m.default_sign_ = default_sign;
  return m;
}

MultiplierSymbol MultiplierSymbol::smooth(SmoothSpec spec) {
  if (!spec.value_log)
    throw std::invalid_argument("smooth symbol needs a value function");
  MultiplierSymbol m;
  m.kind_ = Kind::smooth;
  m.name_ = spec.name.empty() ? "smooth" : spec.name;
  m.smooth_ = std::move(spec);
  return m;
}

MultiplierSymbol MultiplierSymbol::named_smooth(const std::string& name) {
  SmoothSpec spec;
  spec.name = name;
  if (name == "sin_loglog") {
    // sin(log log t) past t = e, zero before; continuous with a
    // derivative kink at t = e.
    spec.value_log = [](long double L) {
      return L <= 1.0L ? 0.0 : std::sin(std::log(double(L)));
    };
    spec.deriv = [](double t) {
      if (t <= M_E) return 0.0;
      const double lt = std::log(t);
      return std::cos(std::log(lt)) / (t * lt);
    };
    spec.kink_logs = {1.0L};
    spec.monotone_breaks_log = [](long double lo, long double hi) {
      std::vector<long double> out;
      const long double start = std::max(lo, 1.0L);
      if (hi <= start) return out;
      // Critical points: log L = pi/2 + k pi.
      const double l0 = std::log(double(start));
      const double l1 = std::log(double(hi));
      const long kmin = std::lround(std::floor((l0 - M_PI_2) / M_PI)) - 1;
      const long kmax = std::lround(std::ceil((l1 - M_PI_2) / M_PI)) + 1;
      for (long k = kmin; k <= kmax; ++k) {
        const long double Lc = std::exp(static_cast<long double>(M_PI_2 + k * M_PI));
        if (Lc > start && Lc < hi) out.push_back(Lc);
      }
      return out;
    };
  } else if (name == "log") {
    spec.value_log = [](long double L) { return double(L); };
    spec.deriv = [](double t) { return 1.0 / t; };
    spec.monotone_breaks_log = [](long double, long double) {
      return std::vector<long double>{};
    };
  } else if (name == "inv1p") {
    // 1/(1+t): bounded, decreasing, Lipschitz on (0, infinity).
    spec.value_log = [](long double L) {
      const double e = std::exp(double(L));
      return std::isinf(e) ? 0.0 : 1.0 / (1.0 + e);
    };
    spec.deriv = [](double t) { return -1.0 / ((1.0 + t) * (1.0 + t)); };
    spec.monotone_breaks_log = [](long double, long double) {
      return std::vector<long double>{};
    };
  } else {
    throw std::invalid_argument("unknown smooth symbol '" + name + "'");
  }
  return smooth(std::move(spec));
}

MultiplierSymbol MultiplierSymbol::tabulated(
    std::vector<std::pair<double, Coeff>> nodes, bool monotone_certified) {
  if (nodes.empty()) throw std::invalid_argument("tabulated symbol needs nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(nodes[i].first > 0.0) || !std::isfinite(nodes[i].first))
      throw std::invalid_argument("tabulated nodes must be positive and finite");
    if (i > 0 && !(nodes[i].first > nodes[i - 1].first))
      throw std::invalid_argument("tabulated nodes must be strictly increasing");
  }
  MultiplierSymbol m;
  m.kind_ = Kind::tabulated;
  m.name_ = "tabulated";
  m.nodes_ = std::move(nodes);
  m.tabulated_monotone_ = monotone_certified;
  return m;
}

const IntervalPartition* MultiplierSymbol::step_partition() const {
  return partition_ ? &*partition_ : nullptr;
}

const SmoothSpec* MultiplierSymbol::smooth_spec() const {
  return smooth_ ? &*smooth_ : nullptr;
}

int MultiplierSymbol::step_sign(long long k) const {
  if (kind_ != Kind::step_signs)
    throw std::logic_error("step_sign on a non-step symbol");
  if (seeded_) return seeded_sign(seed_, k);
  auto it = signs_.find(k);
  return it != signs_.end() ? it->second : default_sign_;
}

Coeff MultiplierSymbol::at_rational(const ReducedRational& r) const {
  switch (kind_) {
    case Kind::constant:
      return constant_;
    case Kind::indicator: {
      const int ca = cmp_rational_double(r, ind_a_);  // +1 when r > a
      const int cb = cmp_rational_double(r, ind_b_);
      if (ca > 0 && cb < 0) return {1.0, 0.0};
      if (ca == 0) return {ind_closed_left_ ? 1.0 : 0.0, 0.0};
      if (cb == 0) return {ind_closed_right_ ? 1.0 : 0.0, 0.0};
      return {0.0, 0.0};
    }
    case Kind::step_signs:
      return {double(step_sign(partition_->block_of(r))), 0.0};
    case Kind::smooth:
      return {smooth_->value_log(r.log_value()), 0.0};
    case Kind::tabulated: {
      // Right-continuous: the last node at or below r decides.
      std::size_t chosen = 0;
      bool before_first = true;
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (cmp_rational_double(r, nodes_[i].first) >= 0) {
          chosen = i;
          before_first = false;
        } else {
          break;
        }
      }
      return before_first ? nodes_.front().second : nodes_[chosen].second;
    }
  }
  throw std::logic_error("unhandled symbol kind");
}

Coeff MultiplierSymbol::at_real(double t) const {
  checked_positive(t);
  switch (kind_) {
    case Kind::constant:
      return constant_;
    case Kind::indicator:
      if (t == ind_a_ || t == ind_b_) return {0.5, 0.0};  // regulated
      return {(t > ind_a_ && t < ind_b_) ? 1.0 : 0.0, 0.0};
    case Kind::step_signs: {
      const auto rb = partition_->block_of_real(t);
      const long double L = std::log(static_cast<long double>(t));
      const long double hit =
          1e-15L * std::max<long double>(1.0L, L >= 0 ? L : -L);
      if (rb.boundary_distance <= hit) {
        // Regulated value across the threshold nearest to log t.
        const auto [lo, hi] = partition_->log_bounds(rb.k);
        const long double T = (L - lo <= hi - L) ? lo : hi;
        const auto [kl, kr] = blocks_around_log(*partition_, T);
        return {0.5 * (step_sign(kl) + step_sign(kr)), 0.0};
      }
      return {double(step_sign(rb.k)), 0.0};
    }
    case Kind::smooth:
      return {smooth_->value_log(std::log(static_cast<long double>(t))), 0.0};
    case Kind::tabulated: {
      if (t < nodes_.front().first) return nodes_.front().second;
      for (std::size_t i = nodes_.size(); i-- > 0;) {
        if (t == nodes_[i].first) {
          const Coeff left = i == 0 ? nodes_[0].second : nodes_[i - 1].second;
          return 0.5 * (left + nodes_[i].second);
        }
        if (t > nodes_[i].first) return nodes_[i].second;
      }
      return nodes_.front().second;
    }
  }
  throw std::logic_error("unhandled symbol kind");
}

bool MultiplierSymbol::has_derivative() const {
  if (kind_ == Kind::constant) return true;
  return kind_ == Kind::smooth && smooth_->deriv != nullptr;
}

double MultiplierSymbol::derivative(double t) const {
  checked_positive(t);
  if (kind_ == Kind::constant) return 0.0;
  if (kind_ == Kind::smooth && smooth_->deriv) return smooth_->deriv(t);
  throw std::invalid_argument("symbol '" + name_ + "' has no pointwise derivative");
}

std::vector<long double> MultiplierSymbol::jump_logs_in(long double log_lo,
                                                        long double log_hi) const {
  std::vector<long double> out;
  switch (kind_) {
    case Kind::constant:
    case Kind::smooth:
      return out;
    case Kind::indicator: {
      if (ind_a_ > 0.0) {
        const long double la = std::log(static_cast<long double>(ind_a_));
        if (la >= log_lo && la <= log_hi) out.push_back(la);
      }
      const long double lb = std::log(static_cast<long double>(ind_b_));
      if (lb >= log_lo && lb <= log_hi) out.push_back(lb);
      return out;
    }
    case Kind::step_signs: {
      // Thresholds +-eta^j inside the window, taken from the partition so
      // they compare bitwise equal to its block bounds.
      const long double limit = std::max(log_hi >= 0 ? log_hi : -log_hi,
                                         log_lo >= 0 ? log_lo : -log_lo);
      for (int j = 1; j <= 16'000; ++j) {
        const long double v = partition_->threshold(j);
        if (v > limit) break;
        if (v >= log_lo && v <= log_hi) out.push_back(v);
        if (-v >= log_lo && -v <= log_hi) out.push_back(-v);
      }
      std::sort(out.begin(), out.end());
      return out;
    }
    case Kind::tabulated: {
      for (const auto& [t, v] : nodes_) {
        (void)v;
        const long double L = std::log(static_cast<long double>(t));
        if (L >= log_lo && L <= log_hi) out.push_back(L);
      }
      return out;
    }
  }
  return out;
}

Coeff MultiplierSymbol::limit_left_log(long double L) const {
  switch (kind_) {
    case Kind::constant:
      return constant_;
    case Kind::smooth:
      return {smooth_->value_log(L), 0.0};
    case Kind::indicator: {
      const long double la = ind_a_ > 0.0
                                 ? std::log(static_cast<long double>(ind_a_))
                                 : -std::numeric_limits<long double>::infinity();
      const long double lb = std::log(static_cast<long double>(ind_b_));
      return {(L > la && L <= lb) ? 1.0 : 0.0, 0.0};
    }
    case Kind::step_signs:
      return {double(step_sign(blocks_around_log(*partition_, L).first)), 0.0};
    case Kind::tabulated: {
      Coeff v = nodes_.front().second;
      for (const auto& [t, val] : nodes_) {
        if (std::log(static_cast<long double>(t)) < L) v = val;
        else break;
      }
      return v;
    }
  }
  throw std::logic_error("unhandled symbol kind");
}

Coeff MultiplierSymbol::limit_right_log(long double L) const {
  switch (kind_) {
    case Kind::constant:
      return constant_;
    case Kind::smooth:
      return {smooth_->value_log(L), 0.0};
    case Kind::indicator: {
      const long double la = ind_a_ > 0.0
                                 ? std::log(static_cast<long double>(ind_a_))
                                 : -std::numeric_limits<long double>::infinity();
      const long double lb = std::log(static_cast<long double>(ind_b_));
      return {(L >= la && L < lb) ? 1.0 : 0.0, 0.0};
    }
    case Kind::step_signs:
      return {double(step_sign(blocks_around_log(*partition_, L).second)), 0.0};
    case Kind::tabulated: {
      Coeff v = nodes_.front().second;
      for (const auto& [t, val] : nodes_) {
        if (std::log(static_cast<long double>(t)) <= L) v = val;
        else break;
      }
      return v;
    }
  }
  throw std::logic_error("unhandled symbol kind");
}

Coeff MultiplierSymbol::value_log(long double L) const {
  const Coeff l = limit_left_log(L);
  const Coeff r = limit_right_log(L);
  return 0.5 * (l + r);
}

double MultiplierSymbol::variation_on_log(long double log_lo,
                                          long double log_hi) const {
  if (!(log_hi >= log_lo))
    throw std::invalid_argument("variation interval is inverted");
  double var = 0.0;
  for (const long double c : jump_logs_in(log_lo, log_hi)) {
    const Coeff left = limit_left_log(c);
    const Coeff right = limit_right_log(c);
    const Coeff mid = 0.5 * (left + right);
    if (c == log_lo) {
      var += std::abs(right - mid);
    } else if (c == log_hi) {
      var += std::abs(mid - left);
    } else {
      var += std::abs(mid - left) + std::abs(right - mid);
    }
  }
  if (kind_ == Kind::smooth) {
    std::vector<long double> marks = {log_lo, log_hi};
    for (const long double k : smooth_->kink_logs)
      if (k > log_lo && k < log_hi) marks.push_back(k);
    if (smooth_->monotone_breaks_log) {
      for (const long double b : smooth_->monotone_breaks_log(log_lo, log_hi))
        if (b > log_lo && b < log_hi) marks.push_back(b);
    } else {
      throw std::invalid_argument(
          "smooth symbol '" + name_ +
          "' carries no monotone-piece certificate for variation");
    }
    std::sort(marks.begin(), marks.end());
    for (std::size_t i = 1; i < marks.size(); ++i)
      var += std::abs(smooth_->value_log(marks[i]) -
                      smooth_->value_log(marks[i - 1]));
  }
  return var;
}

bool MultiplierSymbol::eventually_constant_beyond(long double cover_log) const {
  switch (kind_) {
    case Kind::constant:
      return true;
    case Kind::indicator: {
      const long double lb = std::log(static_cast<long double>(ind_b_));
      bool a_ok = true;
      if (ind_a_ > 0.0) {
        const long double la = std::log(static_cast<long double>(ind_a_));
        a_ok = (la >= -cover_log && la <= cover_log);
      }
      return a_ok && lb >= -cover_log && lb <= cover_log;
    }
    case Kind::step_signs: {
      if (seeded_) return false;  // a sign exists for every block
      long double farthest = 0.0L;
      for (const auto& [k, s] : signs_) {
        (void)s;
        const auto [lo, hi] = partition_->log_bounds(k);
        farthest = std::max({farthest, lo >= 0 ? lo : -lo, hi >= 0 ? hi : -hi});
      }
      return farthest <= cover_log;
    }
    case Kind::smooth:
      return smooth_->eventually_constant;
    case Kind::tabulated: {
      const long double last =
          std::log(static_cast<long double>(nodes_.back().first));
      const long double first =
          std::log(static_cast<long double>(nodes_.front().first));
      return std::max(last >= 0 ? last : -last, first >= 0 ? first : -first) <=
             cover_log;
    }
  }
  return false;
}

std::string MultiplierSymbol::describe() const {
  switch (kind_) {
    case Kind::constant: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "constant(%g%+gi)", constant_.real(),
                    constant_.imag());
      return buf;
    }
    case Kind::indicator: {
      char buf[96];
      std::snprintf(buf, sizeof buf, "indicator%c%g,%g%c",
                    ind_closed_left_ ? '[' : '(', ind_a_, ind_b_,
                    ind_closed_right_ ? ']' : ')');
      return buf;
    }
    case Kind::step_signs:
      return seeded_ ? "step_signs(seed " + std::to_string(seed_) + ", eta " +
                           partition_->eta_text() + ")"
                     : "step_signs(explicit, eta " + partition_->eta_text() + ")";
    case Kind::smooth:
      return "smooth:" + name_;
    case Kind::tabulated:
      return "tabulated(" + std::to_string(nodes_.size()) + " nodes)";
  }
  return name_;
}

PolytorusPolynomial apply_multiplier(const MultiplierSymbol& m,
                                     const PolytorusPolynomial& F) {
  std::vector<PolytorusPolynomial::Term> terms;
  terms.reserve(F.term_count());
  for (const auto& [nu, c] : F.terms())
    terms.push_back({nu, m.at_rational(rational_of(nu)) * c});
  return PolytorusPolynomial::from_terms(std::move(terms));
}

DirichletPolynomial apply_multiplier(const MultiplierSymbol& m,
                                     const DirichletPolynomial& f) {
  std::vector<DirichletPolynomial::Term> terms;
  terms.reserve(f.terms().size());
  for (const auto& [n, c] : f.terms())
    terms.push_back({n, m.at_rational(ReducedRational{n, 1}) * c});
  return DirichletPolynomial::from_terms(std::move(terms));
}

namespace {

struct SupScan {
  double value = 0.0;
  long double arg_log = 0.0;
};

// sup |m(e^L)| over [lo, hi] for a smooth payload: exact candidate points
// (endpoints, kinks, certified monotone breaks) plus a uniform safety grid.
// For a certified piecewise-monotone spec the mark values are the exact sup.
SupScan smooth_sup_log(const SmoothSpec& spec, long double lo, long double hi) {
  SupScan out;
  out.arg_log = lo;
  const auto consider = [&](long double L) {
    const double v = std::abs(spec.value_log(L));
    if (v > out.value) {
      out.value = v;
      out.arg_log = L;
    }
  };
  consider(lo);
  consider(hi);
  for (const long double k : spec.kink_logs)
    if (k > lo && k < hi) consider(k);
  if (spec.monotone_breaks_log)
    for (const long double b : spec.monotone_breaks_log(lo, hi))
      if (b > lo && b < hi) consider(b);
  const int n = 2048;
  for (int i = 1; i < n; ++i)
    consider(lo + (hi - lo) * static_cast<long double>(i) / n);
  return out;
}

double sup_abs_within(const MultiplierSymbol& m, long double cover_log) {
  switch (m.kind()) {
    case MultiplierSymbol::Kind::constant:
      return std::abs(m.at_real(1.0));
    case MultiplierSymbol::Kind::indicator:
    case MultiplierSymbol::Kind::step_signs:
      return 1.0;
    case MultiplierSymbol::Kind::tabulated: {
      double sup = 0.0;
      for (const auto& [t, v] : m.tabulated_nodes()) {
        (void)t;
        sup = std::max(sup, std::abs(v));
      }
      return sup;
    }
    case MultiplierSymbol::Kind::smooth:
      return smooth_sup_log(*m.smooth_spec(), -cover_log, cover_log).value;
  }
  throw std::logic_error("unhandled symbol kind");
}

}  // namespace

MarcinkiewiczReport marcinkiewicz_bound(const MultiplierSymbol& m,
                                        const IntervalPartition& partition,
                                        int k_range) {
  if (k_range < 0) throw std::invalid_argument("k_range must be >= 0");
  if (m.kind() == MultiplierSymbol::Kind::tabulated && !m.tabulated_monotone())
    throw std::invalid_argument(
        "tabulated symbol carries no monotonicity certificate between nodes; "
        "refusing to report a variation bound");
  MarcinkiewiczReport rep;
  rep.per_interval.reserve(2 * std::size_t(k_range) + 1);
  for (long long k = -k_range; k <= k_range; ++k) {
    const auto [lo, hi] = partition.log_bounds(k);
    const double bv = m.variation_on_log(lo, hi);
    rep.per_interval.push_back({k, bv});
    if (bv > rep.bv_sup) {
      rep.bv_sup = bv;
      rep.argmax_k = k;
    }
  }
  const long double cover = partition.threshold(k_range + 1);
  rep.sup_norm = sup_abs_within(m, cover);
  rep.bracket = rep.sup_norm + rep.bv_sup;
  rep.tail_justified = m.eventually_constant_beyond(cover);
  return rep;
}

HormanderMihlinReport hormander_mihlin_bound(const MultiplierSymbol& m,
                                             double log_t_max,
                                             int pts_per_octave) {
  if (!m.has_derivative())
    throw std::invalid_argument("derivative-based bound needs a pointwise "
                                "derivative; symbol is " +
                                m.describe());
  if (!(log_t_max > 1.0) || pts_per_octave < 4)
    throw std::invalid_argument("need log_t_max > 1 and >= 4 points per octave");

  HormanderMihlinReport rep;
  if (m.kind() == MultiplierSymbol::Kind::constant) {
    rep.sup_norm = std::abs(m.at_real(1.0));
    rep.bracket = rep.sup_norm;
    rep.argmax_t = 1.0;
    return rep;
  }

  const SmoothSpec& spec = *m.smooth_spec();
  const auto C = static_cast<long double>(log_t_max);

  // sup |m| over log t in [-C, C], with a half-window rerun to spot growth
  // pushed against the window edge.
  const SupScan sup_full = smooth_sup_log(spec, -C, C);
  const SupScan sup_half = smooth_sup_log(spec, -C / 2, C / 2);
  const long double abs_arg =
      sup_full.arg_log >= 0 ? sup_full.arg_log : -sup_full.arg_log;
  const bool sup_at_edge = abs_arg >= 0.985L * C;
  const bool sup_flag =
      sup_at_edge && sup_full.value > sup_half.value * (1.0 + 1e-6);
  rep.sup_norm = sup_full.value;

  // |t log(t) m'(t)| on a geometric grid over (e, e^{log_t_max}].
  double dterm_full = 0.0, dterm_half = 0.0;
  double arg_lt = 1.0;
  const double lt_half = (1.0 + log_t_max) / 2.0;
  const double step = std::log(2.0) / pts_per_octave;
  for (int i = 1;; ++i) {
    double lt = 1.0 + i * step;
    if (lt >= log_t_max) lt = log_t_max;
    const double t = std::exp(lt);
    const double v = std::abs(t * lt * m.derivative(t));
    if (v > dterm_full) {
      dterm_full = v;
      arg_lt = lt;
    }
    if (lt <= lt_half) dterm_half = std::max(dterm_half, v);
    if (lt >= log_t_max) break;
  }
  // One refinement sweep across the two grid cells around the argmax.
  {
    const double lo = std::max(1.0 + 0.5 * step, arg_lt - step);
    const double hi = std::min(log_t_max, arg_lt + step);
    const int n = 256;
    for (int i = 0; i <= n; ++i) {
      const double lt = lo + (hi - lo) * i / n;
      const double t = std::exp(lt);
      const double v = std::abs(t * lt * m.derivative(t));
      if (v > dterm_full) {
        dterm_full = v;
        arg_lt = lt;
      }
    }
  }
  const bool der_at_edge = arg_lt >= log_t_max - 0.015 * (log_t_max - 1.0);
  const bool der_flag = der_at_edge && dterm_full > dterm_half * (1.0 + 1e-6);

  rep.derivative_term = dterm_full;
  rep.bracket = rep.sup_norm + rep.derivative_term;
  rep.argmax_t = std::exp(arg_lt);
  rep.unbounded_suspected = sup_flag || der_flag;
  return rep;
}

PolytorusPolynomial ensemble_member(const EnsembleOptions& opts, int index) {
  if (index < 0) throw std::invalid_argument("ensemble index must be >= 0");
  if (opts.dimension < 1 || opts.degree < 1 || opts.terms < 1)
    throw std::invalid_argument("ensemble needs dimension, degree, terms >= 1");
  Rng rng = Rng::stream(opts.seed, static_cast<std::uint64_t>(index));
  const auto random_index = [&]() {
    std::vector<MultiIndex::Entry> ent;
    for (std::int32_t axis = 1; axis <= opts.dimension; ++axis) {
      const auto e = static_cast<std::int64_t>(
          rng.next_below(static_cast<std::uint64_t>(opts.degree) + 1));
      if (e != 0) ent.push_back({axis, e});
    }
    return MultiIndex::from_entries(std::move(ent));
  };
  std::vector<PolytorusPolynomial::Term> terms;
  if (index % 4 == 0) {
    // Single monomial: at p = 2 its ratio under T_m is exactly |m(r_nu)|.
    terms.push_back({random_index(), Coeff{1.0, 0.0}});
  } else {
    terms.reserve(opts.terms);
    for (int t = 0; t < opts.terms; ++t) {
      const MultiIndex nu = random_index();
      terms.push_back({nu, rng.next_in_disk()});
    }
  }
  return PolytorusPolynomial::from_terms(std::move(terms));
}

LowerBoundReport multiplier_norm_lower(const MultiplierSymbol& m, double p,
                                       const EnsembleOptions& opts,
                                       const GridOptions& grid) {
  if (opts.count < 1) throw std::invalid_argument("ensemble count must be >= 1");
  LowerBoundReport rep;
  rep.ratios.reserve(opts.count);
  for (int i = 0; i < opts.count; ++i) {
    const PolytorusPolynomial f = ensemble_member(opts, i);
    const NormEstimate fn = norm_auto(f, p, grid);
    if (!(fn.value > 0.0)) {
      rep.ratios.push_back(0.0);
      continue;
    }
    const NormEstimate tn = norm_auto(apply_multiplier(m, f), p, grid);
    const double ratio = tn.value / fn.value;
    rep.ratios.push_back(ratio);
    if (ratio > rep.value) {
      rep.value = ratio;
      rep.argmax_member = i;
    }
  }
  return rep;
}

}  // namespace bohr
