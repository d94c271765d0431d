#pragma once

#include <cstdint>
#include <vector>

#include "bohr/polynomials.hpp"

namespace bohr {

// Nodes and weights on [-1, 1], computed by Newton iteration on the
// Legendre recurrence. Deterministic; cached per order.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int order);

// Mean of |F|^p over the uniform tensor grid with resolution points per
// axis on axes 1..max(dimension,1). The production kernel walks a shared
// root-of-unity phase table and reduces with deterministic chunking, so
// its value is independent of the OpenMP thread count. The reference
// kernel recomputes every phase with std::polar and sums serially; tests
// hold the two within a few ulps of each other.
double grid_mean_abs_pow(const PolytorusPolynomial& F, double p, int resolution,
                         bool parallel = true);
double grid_mean_abs_pow_reference(const PolytorusPolynomial& F, double p,
                                   int resolution);

// Monte-Carlo mean of |F|^p over the polytorus. Point i draws its angles
// from an i-indexed stream of the seed, so sample values do not depend on
// scheduling. std_error is the usual sqrt(variance/samples).
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};
McEstimate mc_mean_abs_pow(const PolytorusPolynomial& F, double p,
                           std::uint64_t samples, std::uint64_t seed,
                           bool parallel = true);
McEstimate mc_mean_abs_pow_reference(const PolytorusPolynomial& F, double p,
                                     std::uint64_t samples, std::uint64_t seed);

// (1/2T) * integral_{-T}^{T} |f(i(t + offset))|^p dt by composite
// Gauss-Legendre panels no wider than 2*pi / log(max_index), the period
// of the fastest oscillation in the integrand.
double ergodic_mean_abs_pow(const DirichletPolynomial& f, double p, double T,
                            double offset = 0.0, int gl_order = 24,
                            bool parallel = true);
double ergodic_mean_abs_pow_reference(const DirichletPolynomial& f, double p,
                                      double T, double offset = 0.0,
                                      int gl_order = 24);

}  // namespace bohr
