#pragma once

#include <cstdint>
#include <vector>

#include "bohr/polynomials.hpp"

namespace bohr {

enum class NormMethod { parseval, even_exact, grid, ergodic };

const char* to_string(NormMethod m);

struct NormTracePoint {
  double parameter = 0.0;  // grid resolution or ergodic horizon T
  double value = 0.0;
};

struct NormEstimate {
  double value = 0.0;
  double p = 2.0;
  NormMethod method = NormMethod::parseval;
  bool quasi_norm = false;  // p < 1: value reported, triangle inequality void
  bool sampled = false;     // Monte-Carlo fallback used
  double std_error = 0.0;   // delta-method error on value when sampled
  std::vector<NormTracePoint> trace;
  double last_delta = 0.0;  // |trace.back() - previous|, 0 with < 2 entries
};

// Kahan sum of squared moduli in ascending magnitude order. The sorting
// makes the value bitwise invariant under permutation of the inputs,
// which several exactness contracts lean on.
double sum_squared_moduli(const std::vector<Coeff>& coeffs);

// L2 norm from coefficients alone.
NormEstimate norm_parseval(const PolytorusPolynomial& F);
NormEstimate norm_parseval(const DirichletPolynomial& f);

// ||f||_p for positive even integer p = 2q via ||f^q||_2: one exact
// convolution chain, no quadrature.
NormEstimate norm_even_exact(const PolytorusPolynomial& F, int p);
NormEstimate norm_even_exact(const DirichletPolynomial& f, int p);

struct GridOptions {
  int resolution = 0;  // 0: auto, oversample * (2*max_degree + 1)
  int oversample = 4;
  int dim_cap = 6;                          // tensor grids only up to this dim
  std::uint64_t point_budget = 100'000'000;  // tensor points / MC draws
  std::uint64_t mc_samples = 1'000'000;
  std::uint64_t seed = 0;
  bool parallel = true;
  bool refine_trace = true;  // also evaluate at half resolution
};

// Mean of |F|^p over the polytorus by tensor grid, falling back to
// Monte-Carlo above dim_cap or past the point budget. Rejects
// resolutions below the 2*max_degree+1 alias bound.
NormEstimate norm_grid(const PolytorusPolynomial& F, double p,
                       const GridOptions& opts = {});

struct ErgodicOptions {
  std::vector<double> T_schedule = {1e2, 1e3, 1e4};
  double offset = 0.0;
  int gl_order = 24;
  bool parallel = true;
};

// Long-run vertical-line average ((1/2T) int_{-T}^{T} |f(it)|^p dt)^{1/p}
// along the T schedule; value taken at the largest horizon, trace kept.
NormEstimate norm_ergodic(const DirichletPolynomial& f, double p,
                          const ErgodicOptions& opts = {});

// Route selection: Parseval at p = 2, the exact convolution route for
// small even integer p when affordable, grid otherwise.
NormEstimate norm_auto(const PolytorusPolynomial& F, double p,
                       const GridOptions& opts = {});
NormEstimate norm_auto(const DirichletPolynomial& f, double p,
                       const GridOptions& opts = {});

}  // namespace bohr
