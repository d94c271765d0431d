#pragma once

#include <cstdint>
#include <vector>

#include "bohr/norms.hpp"
#include "bohr/polynomials.hpp"

namespace bohr {

// Exact sign of log r_nu: +1 above the unit level, -1 below, 0 only at
// nu = 0 (unique factorization leaves no other ties). Decided by integer
// products while they fit 128 bits, then by a certified log sum; throws
// MarginError when neither route can commit.
int frequency_sign(const MultiIndex& nu);

// Membership in the order cone P = {nu : log r_nu <= 0}.
bool in_order_cone(const MultiIndex& nu);

// Keep the terms with index n <= N.
DirichletPolynomial partial_sum(const DirichletPolynomial& f, std::uint64_t N);

// Keep frequencies with r_nu >= 1: the analytic range is fixed pointwise.
PolytorusPolynomial riesz_project(const PolytorusPolynomial& F);

// Mirror projection onto the order cone, r_nu <= 1. The two projections
// overlap exactly in the constant term.
PolytorusPolynomial riesz_project_lower(const PolytorusPolynomial& F);

// e_nu -> -i sgn(nu) e_nu. Annihilates the constant term; squares to
// -(Id - E_0).
PolytorusPolynomial hilbert_transform(const PolytorusPolynomial& F);

struct SchauderCheck {
  bool passed = false;
  // Largest coefficient distance between the two sides; the identity is
  // a pure reindexing, so anything but 0 is a failure.
  double max_deviation = 0.0;
};

// Verifies partial_sum(f, N) == shift-back of the cone projection of the
// shifted lift, coefficient for coefficient. Membership tests compare the
// integers n and N exactly.
SchauderCheck schauder_identity_check(const DirichletPolynomial& f,
                                      std::uint64_t N);

// Random member with dense indices 1..max_index and coefficients drawn
// from the unit disk, one rng stream per member.
DirichletPolynomial dirichlet_member(std::uint64_t max_index,
                                     std::uint64_t seed, int member);

struct TruncationBenchRow {
  std::uint64_t N = 0;
  double max_ratio = 0.0;
  int argmax_member = -1;
};

// For each N in the schedule: sup over the ensemble of
// ||P_N f||_p / ||f||_p, with the maximizing member. Members are fixed
// across the schedule so rows are comparable.
std::vector<TruncationBenchRow> truncation_norm_bench(
    double p, const std::vector<std::uint64_t>& schedule, int ensemble_count,
    std::uint64_t max_index, std::uint64_t seed, const GridOptions& opts = {});

}  // namespace bohr
