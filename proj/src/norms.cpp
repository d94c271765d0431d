#include "bohr/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bohr/errors.hpp"
#include "bohr/quadrature.hpp"

namespace bohr {

const char* to_string(NormMethod m) {
  switch (m) {
    case NormMethod::parseval: return "parseval";
    case NormMethod::even_exact: return "even_exact";
    case NormMethod::grid: return "grid";
    case NormMethod::ergodic: return "ergodic";
  }
  return "?";
}

double sum_squared_moduli(const std::vector<Coeff>& coeffs) {
  std::vector<double> sq;
  sq.reserve(coeffs.size());
  for (const auto& c : coeffs) sq.push_back(std::norm(c));
  std::sort(sq.begin(), sq.end());
  double sum = 0.0, comp = 0.0;
  for (const double v : sq) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

namespace {

template <class Poly>
std::vector<Coeff> coefficients_of(const Poly& f) {
  std::vector<Coeff> out;
  out.reserve(f.terms().size());
  for (const auto& [key, c] : f.terms()) {
    (void)key;
    out.push_back(c);
  }
  return out;
}

template <class Poly>
NormEstimate parseval_impl(const Poly& f) {
  NormEstimate est;
  est.p = 2.0;
  est.method = NormMethod::parseval;
  est.value = std::sqrt(sum_squared_moduli(coefficients_of(f)));
  return est;
}

void require_even(int p) {
  if (p < 2 || p % 2 != 0)
    throw std::invalid_argument(
        "the exact convolution route needs a positive even integer p");
}

template <class Poly>
NormEstimate even_impl(const Poly& f, int p) {
  require_even(p);
  const int q = p / 2;
  Poly power = f;
  for (int i = 1; i < q; ++i) power = power * f;
  NormEstimate est;
  est.p = double(p);
  est.method = NormMethod::even_exact;
  est.value = std::pow(sum_squared_moduli(coefficients_of(power)), 1.0 / double(p));
  return est;
}

// Grid point count R^d against the budget without overflow.
bool tensor_affordable(int dim, int resolution, std::uint64_t budget) {
  std::uint64_t total = 1;
  for (int j = 0; j < dim; ++j) {
    if (__builtin_mul_overflow(total, std::uint64_t(resolution), &total)) return false;
    if (total > budget) return false;
  }
  return true;
}

}  // namespace

NormEstimate norm_parseval(const PolytorusPolynomial& F) { return parseval_impl(F); }
NormEstimate norm_parseval(const DirichletPolynomial& f) { return parseval_impl(f); }

NormEstimate norm_even_exact(const PolytorusPolynomial& F, int p) {
  return even_impl(F, p);
}
NormEstimate norm_even_exact(const DirichletPolynomial& f, int p) {
  return even_impl(f, p);
}

NormEstimate norm_grid(const PolytorusPolynomial& F, double p,
                       const GridOptions& opts) {
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  NormEstimate est;
  est.p = p;
  est.method = NormMethod::grid;
  est.quasi_norm = p < 1.0;
  if (F.is_zero()) return est;

  const int dim = F.dimension();
  if (dim == 0) {
    est.value = std::abs(F.terms().front().second);
    return est;
  }

  const std::int64_t max_degree = F.max_degree();
  const int min_resolution = static_cast<int>(2 * max_degree + 1);
  const int resolution =
      opts.resolution > 0 ? opts.resolution : opts.oversample * min_resolution;
  if (resolution < min_resolution)
    throw std::invalid_argument(
        "grid resolution " + std::to_string(resolution) +
        " aliases: polynomial needs at least " + std::to_string(min_resolution) +
        " points per axis");

  if (dim <= opts.dim_cap &&
      tensor_affordable(dim, resolution, opts.point_budget)) {
    const int half = std::max(min_resolution, resolution / 2);
    if (opts.refine_trace && half < resolution) {
      const double coarse =
          std::pow(grid_mean_abs_pow(F, p, half, opts.parallel), 1.0 / p);
      est.trace.push_back({double(half), coarse});
    }
    est.value =
        std::pow(grid_mean_abs_pow(F, p, resolution, opts.parallel), 1.0 / p);
    est.trace.push_back({double(resolution), est.value});
    if (est.trace.size() >= 2)
      est.last_delta =
          std::abs(est.trace.back().value - est.trace[est.trace.size() - 2].value);
    return est;
  }

  // Tensor product unaffordable: Monte-Carlo on the same integrand.
  const std::uint64_t samples = std::min(opts.mc_samples, opts.point_budget);
  if (samples == 0) throw BudgetError("point budget leaves no Monte-Carlo samples");
  const McEstimate mc = mc_mean_abs_pow(F, p, samples, opts.seed, opts.parallel);
  est.sampled = true;
  est.value = std::pow(mc.mean, 1.0 / p);
  if (mc.mean > 0.0)
    est.std_error = mc.std_error * est.value / (p * mc.mean);  // delta method
  est.trace.push_back({double(samples), est.value});
  return est;
}

NormEstimate norm_ergodic(const DirichletPolynomial& f, double p,
                          const ErgodicOptions& opts) {
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  if (opts.T_schedule.empty())
    throw std::invalid_argument("ergodic schedule must not be empty");
  for (std::size_t i = 1; i < opts.T_schedule.size(); ++i)
    if (!(opts.T_schedule[i] > opts.T_schedule[i - 1]))
      throw std::invalid_argument("ergodic schedule must be strictly increasing");

  NormEstimate est;
  est.p = p;
  est.method = NormMethod::ergodic;
  est.quasi_norm = p < 1.0;
  if (f.is_zero()) return est;

  for (const double T : opts.T_schedule) {
    const double mean =
        ergodic_mean_abs_pow(f, p, T, opts.offset, opts.gl_order, opts.parallel);
    est.value = std::pow(mean, 1.0 / p);
    est.trace.push_back({T, est.value});
  }
  if (est.trace.size() >= 2)
    est.last_delta =
        std::abs(est.trace.back().value - est.trace[est.trace.size() - 2].value);
  return est;
}

namespace {

bool is_small_even_integer(double p, int* out) {
  for (int cand = 2; cand <= 8; cand += 2) {
    if (p == double(cand)) {
      *out = cand;
      return true;
    }
  }
  return false;
}

template <class Poly>
bool even_route_affordable(const Poly& f, int p) {
  // Convolution powers grow like terms^q; keep the exact route for the
  // cases where it clearly beats quadrature.
  const int q = p / 2;
  double predicted = 1.0;
  for (int i = 0; i < q; ++i) predicted *= double(f.term_count());
  return predicted <= 5e6;
}

}  // namespace

NormEstimate norm_auto(const PolytorusPolynomial& F, double p,
                       const GridOptions& opts) {
  if (p == 2.0) return norm_parseval(F);
  int even_p = 0;
  if (is_small_even_integer(p, &even_p) && even_route_affordable(F, even_p))
    return norm_even_exact(F, even_p);
  return norm_grid(F, p, opts);
}

NormEstimate norm_auto(const DirichletPolynomial& f, double p,
                       const GridOptions& opts) {
  if (p == 2.0) return norm_parseval(f);
  int even_p = 0;
  if (is_small_even_integer(p, &even_p) && even_route_affordable(f, even_p))
    return norm_even_exact(f, even_p);
  return norm_grid(bohr_lift(f), p, opts);
}

}  // namespace bohr
