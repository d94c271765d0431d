#include "bohr/littlewood_paley.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

#include "bohr/errors.hpp"
#include "bohr/parallel.hpp"
#include "bohr/primes.hpp"
#include "bohr/rng.hpp"

namespace bohr {

const PolytorusPolynomial* BlockDecomposition::block(long long k) const {
  for (const auto& [kk, f] : blocks)
    if (kk == k) return &f;
  return nullptr;
}

PolytorusPolynomial BlockDecomposition::reassemble() const {
  std::vector<PolytorusPolynomial::Term> all;
  for (const auto& [k, f] : blocks) {
    (void)k;
    all.insert(all.end(), f.terms().begin(), f.terms().end());
  }
  return PolytorusPolynomial::from_terms(std::move(all));
}

BlockDecomposition decompose(const PolytorusPolynomial& F,
                             const IntervalPartition& P) {
  // Membership needs only log r_nu = sum nu_j log p_j, which stays finite
  // for frequencies whose exact rational would overflow 64-bit integers.
  const auto log_r = [](const MultiIndex& nu) {
    long double L = 0.0L;
    for (const auto& [axis, exp] : nu.entries())
      L += static_cast<long double>(exp) *
           std::log(static_cast<long double>(nth_prime(axis)));
    return L;
  };
  std::map<long long, std::vector<PolytorusPolynomial::Term>> buckets;
  for (const auto& term : F.terms())
    buckets[P.block_of_log(log_r(term.first))].push_back(term);
  BlockDecomposition out;
  out.partition = P;
  out.blocks.reserve(buckets.size());
  for (auto& [k, terms] : buckets)
    out.blocks.emplace_back(k, PolytorusPolynomial::from_terms(std::move(terms)));
  return out;
}

double square_function_at(const BlockDecomposition& D, const TorusPoint& z) {
  double sum = 0.0, comp = 0.0;
  for (const auto& [k, f] : D.blocks) {
    (void)k;
    const double y = std::norm(f(z)) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return std::sqrt(sum);
}

namespace {

bool small_even_half(double p, int* q_out) {
  for (int q = 2; q <= 6; ++q) {
    if (p == double(2 * q)) {
      *q_out = q;
      return true;
    }
  }
  return false;
}

// |S|_p by pointwise evaluation of all blocks: tensor grid when
// affordable, Monte-Carlo otherwise. Mirrors the policy of norm_grid.
NormEstimate snorm_pointwise(const std::vector<PolytorusPolynomial>& blocks,
                             double p, const GridOptions& opts) {
  NormEstimate est;
  est.p = p;
  est.method = NormMethod::grid;
  est.quasi_norm = p < 1.0;

  int dim = 0;
  std::int64_t max_degree = 0;
  for (const auto& f : blocks) {
    dim = std::max(dim, int(f.dimension()));
    max_degree = std::max(max_degree, f.max_degree());
  }
  if (dim == 0) {
    double s = 0.0;
    for (const auto& f : blocks)
      if (!f.is_zero()) s += std::norm(f.terms().front().second);
    est.value = std::sqrt(s);
    return est;
  }
  if (dim > 64) throw BudgetError("square-function grid limited to 64 axes");

  // The integrand (sum_k |f_k|^2)^{p/2} at given angles.
  const auto integrand = [&](const double* theta) {
    TorusPoint z;
    z.theta.assign(theta, theta + dim);
    double s = 0.0, comp = 0.0;
    for (const auto& f : blocks) {
      const double y = std::norm(f(z)) - comp;
      const double t = s + y;
      comp = (t - s) - y;
      s = t;
    }
    return std::pow(s, p / 2.0);
  };

  const int min_resolution = static_cast<int>(2 * max_degree + 1);
  const int resolution =
      opts.resolution > 0 ? opts.resolution : opts.oversample * min_resolution;
  if (resolution < min_resolution)
    throw std::invalid_argument(
        "grid resolution " + std::to_string(resolution) +
        " aliases: blocks need at least " + std::to_string(min_resolution) +
        " points per axis");

  std::uint64_t total = 1;
  bool affordable = dim <= opts.dim_cap;
  for (int j = 0; affordable && j < dim; ++j) {
    if (__builtin_mul_overflow(total, std::uint64_t(resolution), &total) ||
        total > opts.point_budget)
      affordable = false;
  }

  if (affordable) {
    const auto mean_at = [&](int R) {
      const std::uint64_t pts = [&] {
        std::uint64_t n = 1;
        for (int j = 0; j < dim; ++j) n *= std::uint64_t(R);
        return n;
      }();
      const double step = 2.0 * M_PI / R;
      const auto sum = par::chunked_accumulate<1>(
          std::int64_t(pts), opts.parallel, [&](std::int64_t i, double* out) {
            std::array<double, 64> theta;
            std::uint64_t rest = std::uint64_t(i);
            for (int j = 0; j < dim; ++j) {
              theta[std::size_t(j)] = step * double(rest % std::uint64_t(R));
              rest /= std::uint64_t(R);
            }
            out[0] = integrand(theta.data());
          });
      return sum[0] / double(pts);
    };
    const int half = std::max(min_resolution, resolution / 2);
    if (opts.refine_trace && half < resolution)
      est.trace.push_back({double(half), std::pow(mean_at(half), 1.0 / p)});
    est.value = std::pow(mean_at(resolution), 1.0 / p);
    est.trace.push_back({double(resolution), est.value});
    if (est.trace.size() >= 2)
      est.last_delta = std::abs(est.trace.back().value -
                                est.trace[est.trace.size() - 2].value);
    return est;
  }

  const std::uint64_t samples = std::min(opts.mc_samples, opts.point_budget);
  if (samples == 0)
    throw BudgetError("point budget leaves no Monte-Carlo samples");
  const auto acc = par::chunked_accumulate<2>(
      std::int64_t(samples), opts.parallel, [&](std::int64_t i, double* out) {
        Rng rng = Rng::stream(opts.seed, std::uint64_t(i));
        std::array<double, 64> theta;
        for (int j = 0; j < dim; ++j) theta[std::size_t(j)] = rng.next_angle();
        const double v = integrand(theta.data());
        out[0] = v;
        out[1] = v * v;
      });
  const double mean = acc[0] / double(samples);
  const double var =
      std::max(0.0, acc[1] / double(samples) - mean * mean) / double(samples);
  est.sampled = true;
  est.value = std::pow(mean, 1.0 / p);
  if (mean > 0.0) est.std_error = std::sqrt(var) * est.value / (p * mean);
  est.trace.push_back({double(samples), est.value});
  return est;
}

}  // namespace

NormEstimate square_norm(const std::vector<PolytorusPolynomial>& blocks,
                         double p, const GridOptions& opts) {
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  NormEstimate est;
  est.p = p;
  est.quasi_norm = p < 1.0;

  bool any = false;
  for (const auto& f : blocks) any = any || !f.is_zero();
  if (!any) {
    est.method = p == 2.0 ? NormMethod::parseval : NormMethod::grid;
    return est;
  }

  if (p == 2.0) {
    // Disjoint supports: |S|_2^2 is the plain coefficient sum, identical
    // to the Parseval norm of the reassembled polynomial.
    std::vector<Coeff> all;
    for (const auto& f : blocks)
      for (const auto& [nu, c] : f.terms()) {
        (void)nu;
        all.push_back(c);
      }
    est.method = NormMethod::parseval;
    est.value = std::sqrt(sum_squared_moduli(all));
    return est;
  }

  int q = 0;
  if (small_even_half(p, &q)) {
    // |S|_{2q}^{2q} = mean of (sum_k f_k conj f_k)^q: exact convolutions.
    double predicted_g = 0.0;
    for (const auto& f : blocks)
      predicted_g += double(f.term_count()) * double(f.term_count());
    double predicted = 1.0;
    for (int i = 0; i < q; ++i) predicted *= predicted_g;
    if (predicted <= 5e6) {
      PolytorusPolynomial G;
      for (const auto& f : blocks) G = G + f * f.conjugate();
      PolytorusPolynomial H = G;
      for (int i = 1; i < q; ++i) H = H * G;
      est.method = NormMethod::even_exact;
      est.value =
          std::pow(std::max(0.0, H.coefficient(MultiIndex{}).real()), 1.0 / p);
      return est;
    }
  }
  return snorm_pointwise(blocks, p, opts);
}

LpRatioReport lp_ratio(const PolytorusPolynomial& F, const IntervalPartition& P,
                       double p, const GridOptions& opts) {
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  LpRatioReport rep;
  rep.exploratory = !(p > 1.0);
  const BlockDecomposition D = decompose(F, P);
  rep.block_count = D.blocks.size();
  std::vector<PolytorusPolynomial> blocks;
  blocks.reserve(D.blocks.size());
  for (const auto& [k, f] : D.blocks) {
    (void)k;
    blocks.push_back(f);
  }
  rep.s_norm = square_norm(blocks, p, opts);
  rep.f_norm = norm_auto(F, p, opts);
  rep.ratio = rep.f_norm.value > 0.0 ? rep.s_norm.value / rep.f_norm.value : 0.0;
  return rep;
}

MultiplierSymbol random_sign_symbol(const IntervalPartition& P,
                                    std::uint64_t seed) {
  return MultiplierSymbol::step_signs_seeded(P, seed);
}

namespace {

PolytorusPolynomial signed_sum(const BlockDecomposition& D,
                               const std::vector<double>& eps) {
  std::vector<PolytorusPolynomial::Term> terms;
  for (std::size_t i = 0; i < D.blocks.size(); ++i)
    for (const auto& [nu, c] : D.blocks[i].second.terms())
      terms.push_back({nu, eps[i] * c});
  return PolytorusPolynomial::from_terms(std::move(terms));
}

}  // namespace

KhintchineEstimate khintchine_average(const PolytorusPolynomial& F,
                                      const IntervalPartition& P, double p,
                                      int num_samples, std::uint64_t seed,
                                      const GridOptions& opts) {
  if (num_samples < 1)
    throw std::invalid_argument("need at least one sign sample");
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  const BlockDecomposition D = decompose(F, P);
  KhintchineEstimate out;
  out.samples = num_samples;
  if (F.is_zero()) return out;

  std::vector<double> values;
  values.reserve(std::size_t(num_samples));
  std::vector<double> eps(D.blocks.size());
  for (int s = 0; s < num_samples; ++s) {
    Rng rng = Rng::stream(seed, std::uint64_t(s));
    for (auto& e : eps) e = double(rng.next_sign());
    const double nrm = norm_auto(signed_sum(D, eps), p, opts).value;
    values.push_back(std::pow(nrm, p));
  }

  double sum = 0.0, comp = 0.0;
  for (const double v : values) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  out.mean_pow = sum / double(num_samples);
  if (num_samples > 1) {
    // Centered two-pass variance: exactly zero when all samples agree
    // bitwise, which the p = 2 contract relies on.
    const double center = values.front();
    double d2 = 0.0, d1 = 0.0;
    for (const double v : values) {
      const double d = v - center;
      d1 += d;
      d2 += d * d;
    }
    const double n = double(num_samples);
    const double var = std::max(0.0, (d2 - d1 * d1 / n) / (n - 1.0));
    out.std_error = std::sqrt(var / n);
  }
  return out;
}

KhintchineExhaustive khintchine_exhaustive(const PolytorusPolynomial& F,
                                           const IntervalPartition& P, double p,
                                           const GridOptions& opts) {
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  const BlockDecomposition D = decompose(F, P);
  const std::size_t B = D.blocks.size();
  if (B > 20)
    throw std::invalid_argument(
        "exhaustive sign enumeration limited to 20 blocks, got " +
        std::to_string(B));
  KhintchineExhaustive out;
  out.patterns = std::uint64_t{1} << B;
  std::vector<double> eps(B);
  double sum = 0.0, comp = 0.0;
  for (std::uint64_t mask = 0; mask < out.patterns; ++mask) {
    for (std::size_t i = 0; i < B; ++i)
      eps[i] = (mask >> i) & 1 ? -1.0 : 1.0;
    const double nrm = norm_auto(signed_sum(D, eps), p, opts).value;
    if (mask == 0) {
      out.min_norm = out.max_norm = nrm;
    } else {
      out.min_norm = std::min(out.min_norm, nrm);
      out.max_norm = std::max(out.max_norm, nrm);
    }
    const double y = std::pow(nrm, p) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  out.mean_pow = sum / double(out.patterns);
  return out;
}

std::vector<std::pair<std::int32_t, PolytorusPolynomial>> martingale_blocks(
    const PolytorusPolynomial& F) {
  std::map<std::int32_t, std::vector<PolytorusPolynomial::Term>> buckets;
  for (const auto& term : F.terms())
    buckets[term.first.dimension()].push_back(term);
  std::vector<std::pair<std::int32_t, PolytorusPolynomial>> out;
  out.reserve(buckets.size());
  for (auto& [n, terms] : buckets)
    out.emplace_back(n, PolytorusPolynomial::from_terms(std::move(terms)));
  return out;
}

}  // namespace bohr
