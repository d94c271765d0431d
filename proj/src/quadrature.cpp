#include "bohr/quadrature.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "bohr/errors.hpp"
#include "bohr/parallel.hpp"
#include "bohr/rng.hpp"

namespace bohr {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double abs_pow(double norm_sq, double p) {
  if (p == 2.0) return norm_sq;
  if (p == 4.0) return norm_sq * norm_sq;
  return std::pow(norm_sq, 0.5 * p);
}

// Dense per-term exponent matrix for fast grid evaluation.
struct DenseTerms {
  int dim = 1;
  std::size_t count = 0;
  std::vector<std::int64_t> exps;  // count x dim, row-major
  std::vector<Coeff> coeffs;

  explicit DenseTerms(const PolytorusPolynomial& F) {
    dim = std::max<std::int32_t>(F.dimension(), 1);
    count = F.term_count();
    exps.assign(count * static_cast<std::size_t>(dim), 0);
    coeffs.reserve(count);
    std::size_t row = 0;
    for (const auto& [nu, c] : F.terms()) {
      coeffs.push_back(c);
      for (const auto& [axis, exp] : nu.entries())
        exps[row * dim + (axis - 1)] = exp;
      ++row;
    }
  }
};

std::int64_t checked_grid_size(int dim, int resolution) {
  std::int64_t total = 1;
  for (int j = 0; j < dim; ++j) {
    if (__builtin_mul_overflow(total, std::int64_t{resolution}, &total) ||
        total > (std::int64_t{1} << 62))
      throw BudgetError("tensor grid size overflows the point budget range");
  }
  return total;
}

}  // namespace

const GaussLegendre& gauss_legendre(int order) {
  if (order < 1 || order > 256)
    throw std::invalid_argument("Gauss-Legendre order out of range");
  static std::mutex mutex;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  GaussLegendre gl;
  gl.nodes.resize(order);
  gl.weights.resize(order);
  const int n = order;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    gl.nodes[i] = -x;
    gl.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    gl.weights[i] = w;
    gl.weights[n - 1 - i] = w;
  }
  return cache.emplace(order, std::move(gl)).first->second;
}

double grid_mean_abs_pow(const PolytorusPolynomial& F, double p, int resolution,
                         bool parallel) {
  if (resolution < 1) throw std::invalid_argument("grid resolution must be >= 1");
  if (F.is_zero()) return 0.0;
  const DenseTerms dt(F);
  if (dt.dim > 64)
    throw BudgetError("tensor grids beyond 64 axes are out of budget range");
  const std::int64_t total = checked_grid_size(dt.dim, resolution);
  const std::int64_t R = resolution;

  // Shared phase table: every grid value of z^nu is a root of unity.
  std::vector<Coeff> W(static_cast<std::size_t>(R));
  for (std::int64_t k = 0; k < R; ++k)
    W[static_cast<std::size_t>(k)] = std::polar(1.0, kTwoPi * double(k) / double(R));

  // The lambda runs concurrently on one shared closure, so all scratch
  // state must live on the stack of each call.
  const auto sum = par::chunked_accumulate<1>(
      total, parallel, [&](std::int64_t i, double* out) {
        std::array<std::int64_t, 64> digits;
        std::int64_t idx = i;
        for (int j = 0; j < dt.dim; ++j) {
          digits[static_cast<std::size_t>(j)] = idx % R;
          idx /= R;
        }
        Coeff acc{};
        for (std::size_t t = 0; t < dt.count; ++t) {
          std::int64_t phase = 0;
          const std::int64_t* row = &dt.exps[t * dt.dim];
          for (int j = 0; j < dt.dim; ++j)
            phase += row[j] * digits[static_cast<std::size_t>(j)];
          phase %= R;
          if (phase < 0) phase += R;
          acc += dt.coeffs[t] * W[static_cast<std::size_t>(phase)];
        }
        out[0] = abs_pow(std::norm(acc), p);
      });
  return sum[0] / double(total);
}

double grid_mean_abs_pow_reference(const PolytorusPolynomial& F, double p,
                                   int resolution) {
  if (resolution < 1) throw std::invalid_argument("grid resolution must be >= 1");
  if (F.is_zero()) return 0.0;
  const int dim = std::max<std::int32_t>(F.dimension(), 1);
  const std::int64_t total = checked_grid_size(dim, resolution);
  const std::int64_t R = resolution;

  const double sum = par::kahan_sum(total, [&](std::int64_t i) {
    std::int64_t idx = i;
    std::vector<double> theta(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) {
      theta[static_cast<std::size_t>(j)] = kTwoPi * double(idx % R) / double(R);
      idx /= R;
    }
    Coeff acc{};
    for (const auto& [nu, c] : F.terms()) {
      double phase = 0.0;
      for (const auto& [axis, exp] : nu.entries())
        phase += double(exp) * theta[static_cast<std::size_t>(axis) - 1];
      acc += c * std::polar(1.0, phase);
    }
    return abs_pow(std::norm(acc), p);
  });
  return sum / double(total);
}

namespace {

McEstimate mc_finished(std::uint64_t samples, double s0, double s1) {
  McEstimate est;
  est.samples = samples;
  est.mean = s0 / double(samples);
  if (samples > 1) {
    const double var =
        std::max(0.0, (s1 / double(samples) - est.mean * est.mean)) *
        (double(samples) / double(samples - 1));
    est.std_error = std::sqrt(var / double(samples));
  }
  return est;
}

double mc_point_value(const PolytorusPolynomial& F, int dim, double p,
                      std::uint64_t seed, std::uint64_t i) {
  Rng rng = Rng::stream(seed, i);
  std::vector<double> theta(static_cast<std::size_t>(dim));
  for (auto& t : theta) t = rng.next_angle();
  Coeff acc{};
  for (const auto& [nu, c] : F.terms()) {
    double phase = 0.0;
    for (const auto& [axis, exp] : nu.entries())
      phase += double(exp) * theta[static_cast<std::size_t>(axis) - 1];
    acc += c * std::polar(1.0, phase);
  }
  return abs_pow(std::norm(acc), p);
}

}  // namespace

McEstimate mc_mean_abs_pow(const PolytorusPolynomial& F, double p,
                           std::uint64_t samples, std::uint64_t seed,
                           bool parallel) {
  if (samples == 0) throw std::invalid_argument("sample count must be >= 1");
  if (F.is_zero()) return McEstimate{0.0, 0.0, samples};
  const int dim = std::max<std::int32_t>(F.dimension(), 1);
  const auto sums = par::chunked_accumulate<2>(
      static_cast<std::int64_t>(samples), parallel,
      [&](std::int64_t i, double* out) {
        const double v =
            mc_point_value(F, dim, p, seed, static_cast<std::uint64_t>(i));
        out[0] = v;
        out[1] = v * v;
      });
  return mc_finished(samples, sums[0], sums[1]);
}

McEstimate mc_mean_abs_pow_reference(const PolytorusPolynomial& F, double p,
                                     std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("sample count must be >= 1");
  if (F.is_zero()) return McEstimate{0.0, 0.0, samples};
  const int dim = std::max<std::int32_t>(F.dimension(), 1);
  double s0 = 0.0, c0 = 0.0, s1 = 0.0, c1 = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const double v = mc_point_value(F, dim, p, seed, i);
    double y = v - c0, t = s0 + y;
    c0 = (t - s0) - y;
    s0 = t;
    y = v * v - c1;
    t = s1 + y;
    c1 = (t - s1) - y;
    s1 = t;
  }
  return mc_finished(samples, s0, s1);
}

namespace {

struct ErgodicPlan {
  std::int64_t panels = 0;
  double width = 0.0;
};

ErgodicPlan ergodic_plan(const DirichletPolynomial& f, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("ergodic horizon T must be > 0");
  ErgodicPlan plan;
  const double max_period = kTwoPi / std::log(double(f.max_index()));
  plan.panels = static_cast<std::int64_t>(std::ceil(2.0 * T / max_period));
  plan.width = 2.0 * T / double(plan.panels);
  return plan;
}

double ergodic_point(const DirichletPolynomial& f,
                     const std::vector<double>& logs, double p, double t) {
  Coeff acc{};
  std::size_t k = 0;
  for (const auto& [n, c] : f.terms()) {
    (void)n;
    acc += c * std::polar(1.0, -t * logs[k++]);
  }
  return abs_pow(std::norm(acc), p);
}

}  // namespace

double ergodic_mean_abs_pow(const DirichletPolynomial& f, double p, double T,
                            double offset, int gl_order, bool parallel) {
  if (f.is_zero()) return 0.0;
  if (f.max_index() < 2) {
    // Single surviving frequency log(1) = 0: the integrand is constant.
    return abs_pow(std::norm(f.terms().front().second), p);
  }
  const ErgodicPlan plan = ergodic_plan(f, T);
  const GaussLegendre& gl = gauss_legendre(gl_order);
  std::vector<double> logs;
  logs.reserve(f.term_count());
  for (const auto& [n, c] : f.terms()) {
    (void)c;
    logs.push_back(std::log(double(n)));
  }

  const std::int64_t total = plan.panels * gl_order;
  const auto sum = par::chunked_accumulate<1>(
      total, parallel, [&](std::int64_t i, double* out) {
        const std::int64_t panel = i / gl_order;
        const int g = static_cast<int>(i % gl_order);
        const double center = -T + (double(panel) + 0.5) * plan.width;
        const double t = center + 0.5 * plan.width * gl.nodes[g];
        out[0] = gl.weights[g] * ergodic_point(f, logs, p, t + offset);
      });
  return sum[0] * (0.5 * plan.width) / (2.0 * T);
}

double ergodic_mean_abs_pow_reference(const DirichletPolynomial& f, double p,
                                      double T, double offset, int gl_order) {
  if (f.is_zero()) return 0.0;
  if (f.max_index() < 2)
    return abs_pow(std::norm(f.terms().front().second), p);
  const ErgodicPlan plan = ergodic_plan(f, T);
  const GaussLegendre& gl = gauss_legendre(gl_order);
  std::vector<double> logs;
  logs.reserve(f.term_count());
  for (const auto& [n, c] : f.terms()) {
    (void)c;
    logs.push_back(std::log(double(n)));
  }
  const double sum = par::kahan_sum(plan.panels * gl_order, [&](std::int64_t i) {
    const std::int64_t panel = i / gl_order;
    const int g = static_cast<int>(i % gl_order);
    const double center = -T + (double(panel) + 0.5) * plan.width;
    const double t = center + 0.5 * plan.width * gl.nodes[g];
    return gl.weights[g] * ergodic_point(f, logs, p, t + offset);
  });
  return sum * (0.5 * plan.width) / (2.0 * T);
}

}  // namespace bohr
