// Serial-vs-parallel comparison for the quadrature kernels. Each kernel
// runs three ways on the same fixture: the plain serial reference kept
// for testing, the chunked production path pinned to one thread, and the
// production path on the full OpenMP team. Production values must agree
// bitwise across thread counts (the deterministic-reduction contract);
// the reference agrees to rounding. Values are seed-deterministic,
// timings are not.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bohr/parallel.hpp"
#include "bohr/polynomials.hpp"
#include "bohr/quadrature.hpp"
#include "bohr/rng.hpp"

namespace {

using bohr::Coeff;
using bohr::DirichletPolynomial;
using bohr::MultiIndex;
using bohr::PolytorusPolynomial;
using bohr::Rng;

struct BenchRow {
  std::string kernel;
  std::int64_t points = 0;
  double reference_s = 0.0;
  double serial_s = 0.0;
  double parallel_s = 0.0;
  double value = 0.0;
  bool exact = false;    // parallel value == one-thread value, bitwise
  double ref_dev = 0.0;  // |value - reference| / |reference|
};

// Best-of-reps wall time; the returned value comes from the last run and
// is identical across reps for every kernel here.
template <class Fn>
double timed(int reps, double* value, Fn&& fn) {
  double best = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    *value = fn();
    const auto t1 = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(t1 - t0).count();
    if (r == 0 || s < best) best = s;
  }
  return best;
}

PolytorusPolynomial random_analytic(Rng& rng, int dim, int max_degree,
                                    int terms) {
  std::vector<PolytorusPolynomial::Term> out;
  for (int i = 0; i < terms; ++i) {
    std::vector<MultiIndex::Entry> entries;
    for (int j = 1; j <= dim; ++j) {
      entries.emplace_back(j, std::int64_t(rng.next_below(
                                  std::uint64_t(max_degree) + 1)));
    }
    out.emplace_back(MultiIndex::from_entries(std::move(entries)),
                     rng.next_in_disk());
  }
  return PolytorusPolynomial::from_terms(std::move(out));
}

DirichletPolynomial random_dirichlet(Rng& rng, std::uint64_t max_index,
                                     int terms) {
  std::vector<DirichletPolynomial::Term> out;
  for (int i = 0; i < terms; ++i)
    out.emplace_back(1 + rng.next_below(max_index), rng.next_in_disk());
  return DirichletPolynomial::from_terms(std::move(out));
}

void print_rows(const std::vector<BenchRow>& rows, bool csv) {
  if (csv) {
    std::printf(
        "kernel,points,reference_s,serial_s,parallel_s,speedup,exact,"
        "ref_rel_dev\n");
    for (const auto& r : rows) {
      std::printf("%s,%lld,%.6f,%.6f,%.6f,%.2f,%d,%.3e\n", r.kernel.c_str(),
                  static_cast<long long>(r.points), r.reference_s, r.serial_s,
                  r.parallel_s, r.serial_s / r.parallel_s, r.exact ? 1 : 0,
                  r.ref_dev);
    }
    return;
  }
  std::printf("%-8s %10s %12s %10s %11s %8s %6s %12s\n", "kernel", "points",
              "reference_s", "serial_s", "parallel_s", "speedup", "exact",
              "ref_rel_dev");
  for (const auto& r : rows) {
    std::printf("%-8s %10lld %12.3f %10.3f %11.3f %7.1fx %6s %12.1e\n",
                r.kernel.c_str(), static_cast<long long>(r.points),
                r.reference_s, r.serial_s, r.parallel_s,
                r.serial_s / r.parallel_s, r.exact ? "yes" : "NO", r.ref_dev);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Quadrature kernel benchmark: serial reference vs chunked production "
      "path at one thread and at the full team"};
  std::uint64_t seed = 1;
  int threads = 0;
  int reps = 1;
  bool csv = false;
  app.add_option("--seed", seed, "fixture seed (values derive from it)");
  app.add_option("--threads", threads,
                 "OpenMP team size for the parallel runs (0: library default)");
  app.add_option("--reps", reps, "repetitions per timing, best-of")
      ->check(CLI::PositiveNumber);
  app.add_flag("--csv", csv, "machine-readable output");
  CLI11_PARSE(app, argc, argv);

  if (threads > 0) bohr::par::set_threads(threads);
  const int team = bohr::par::max_threads();

  Rng rng(seed);
  const auto F = random_analytic(rng, 3, 6, 40);
  const auto f = random_dirichlet(rng, 1000, 120);

  std::vector<BenchRow> rows;

  {
    BenchRow row;
    row.kernel = "grid";
    const int resolution = 128;
    std::int64_t pts = 1;
    for (int j = 0; j < 3; ++j) pts *= resolution;
    row.points = pts;
    double ref = 0.0, one = 0.0, par = 0.0;
    row.reference_s = timed(reps, &ref, [&] {
      return bohr::grid_mean_abs_pow_reference(F, 4.0, resolution);
    });
    row.serial_s = timed(reps, &one, [&] {
      return bohr::grid_mean_abs_pow(F, 4.0, resolution, false);
    });
    row.parallel_s = timed(reps, &par, [&] {
      return bohr::grid_mean_abs_pow(F, 4.0, resolution, true);
    });
    row.value = par;
    row.exact = par == one;
    row.ref_dev = std::abs(par - ref) / std::abs(ref);
    rows.push_back(row);
  }

  {
    BenchRow row;
    row.kernel = "mc";
    const std::uint64_t samples = 1'000'000;
    row.points = std::int64_t(samples);
    double ref = 0.0, one = 0.0, par = 0.0;
    row.reference_s = timed(reps, &ref, [&] {
      return bohr::mc_mean_abs_pow_reference(F, 4.0, samples, seed).mean;
    });
    row.serial_s = timed(reps, &one, [&] {
      return bohr::mc_mean_abs_pow(F, 4.0, samples, seed, false).mean;
    });
    row.parallel_s = timed(reps, &par, [&] {
      return bohr::mc_mean_abs_pow(F, 4.0, samples, seed, true).mean;
    });
    row.value = par;
    row.exact = par == one;
    row.ref_dev = std::abs(par - ref) / std::abs(ref);
    rows.push_back(row);
  }

  {
    BenchRow row;
    row.kernel = "ergodic";
    const double T = 5000.0;
    const int order = 24;
    // Panel count mirrors the kernel's plan: width <= the period of the
    // fastest oscillation, 2*pi / log(max index).
    const double period = 2.0 * M_PI / std::log(double(f.max_index()));
    row.points = std::int64_t(std::ceil(2.0 * T / period)) * order;
    double ref = 0.0, one = 0.0, par = 0.0;
    row.reference_s = timed(reps, &ref, [&] {
      return bohr::ergodic_mean_abs_pow_reference(f, 2.0, T, 0.0, order);
    });
    row.serial_s = timed(reps, &one, [&] {
      return bohr::ergodic_mean_abs_pow(f, 2.0, T, 0.0, order, false);
    });
    row.parallel_s = timed(reps, &par, [&] {
      return bohr::ergodic_mean_abs_pow(f, 2.0, T, 0.0, order, true);
    });
    row.value = par;
    row.exact = par == one;
    row.ref_dev = std::abs(par - ref) / std::abs(ref);
    rows.push_back(row);
  }

  if (!csv) std::printf("threads: %d, seed: %llu, reps: %d\n", team,
                        static_cast<unsigned long long>(seed), reps);
  print_rows(rows, csv);

  bool ok = true;
  for (const auto& r : rows) {
    if (!r.exact) {
      std::fprintf(stderr,
                   "%s: parallel value differs from the one-thread value\n",
                   r.kernel.c_str());
      ok = false;
    }
    if (!(r.ref_dev <= 1e-9)) {
      std::fprintf(stderr,
                   "%s: production deviates from the reference by %.3e\n",
                   r.kernel.c_str(), r.ref_dev);
      ok = false;
    }
  }
  return ok ? 0 : 1;
}
