// Acceptance gate: ten end-to-end checks, one pass/fail line each.
// Exits nonzero if any check fails. argv[1] (optional) is the CLI binary
// used by the reproducibility check.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bohr/json_io.hpp"
#include "bohr/littlewood_paley.hpp"
#include "bohr/multiplier.hpp"
#include "bohr/norms.hpp"
#include "bohr/polynomials.hpp"
#include "bohr/primes.hpp"
#include "bohr/projections.hpp"
#include "bohr/rng.hpp"
#include "bohr/transference.hpp"

using namespace bohr;

namespace {

constexpr std::uint64_t kSeed = 20260822;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error(what);
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

DirichletPolynomial random_dirichlet(Rng& rng, std::uint64_t max_index,
                                     int terms) {
  std::vector<DirichletPolynomial::Term> t;
  for (int i = 0; i < terms; ++i) {
    t.emplace_back(1 + rng.next_below(max_index), rng.next_in_disk());
  }
  return DirichletPolynomial::from_terms(std::move(t));
}

PolytorusPolynomial random_poly(Rng& rng, int dim, int lo, int hi, int terms) {
  std::vector<PolytorusPolynomial::Term> t;
  for (int i = 0; i < terms; ++i) {
    std::vector<MultiIndex::Entry> e;
    for (int a = 1; a <= dim; ++a) {
      const auto span = std::uint64_t(hi - lo) + 1;
      const auto exp = lo + std::int64_t(rng.next_below(span));
      if (exp != 0) e.emplace_back(a, exp);
    }
    t.emplace_back(MultiIndex::from_entries(e), rng.next_in_disk());
  }
  return PolytorusPolynomial::from_terms(std::move(t));
}

bool same_terms(const PolytorusPolynomial& a, const PolytorusPolynomial& b) {
  if (a.terms().size() != b.terms().size()) return false;
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    if (!(a.terms()[i].first == b.terms()[i].first)) return false;
    if (a.terms()[i].second != b.terms()[i].second) return false;
  }
  return true;
}

// ---------------------------------------------------------------- 1 ---
void bohr_correspondence() {
  for (int i = 0; i < 100; ++i) {
    auto rng = Rng::stream(kSeed, 10'000 + std::uint64_t(i));
    const auto f = random_dirichlet(rng, 200, 12);
    const auto F = bohr_lift(f);
    for (int k = 0; k < 10; ++k) {
      const double t = 40.0 * (rng.next_angle() - 3.141592653589793);
      std::complex<double> line{0.0, 0.0};
      double mass = 0.0;
      for (const auto& [n, c] : f.terms()) {
        line += c * std::exp(std::complex<double>(0.0, -t * std::log(double(n))));
        mass += std::abs(c);
      }
      const auto torus = F(kronecker_flow(t, F.dimension()));
      require(std::abs(line - torus) <= 1e-12 * (1.0 + mass),
              "evaluation gap " + num(std::abs(line - torus)) + " at member " +
                  std::to_string(i));
    }
  }
}

// ---------------------------------------------------------------- 2 ---
void grid_oracle_agreement() {
  for (int i = 0; i < 50; ++i) {
    auto rng = Rng::stream(kSeed, 20'000 + std::uint64_t(i));
    const int dim = 1 + int(rng.next_below(3));
    const int deg = 2 + int(rng.next_below(7));  // per-variable degree <= 8
    const auto F = random_poly(rng, dim, 0, deg, 8);
    const double p2_exact = norm_parseval(F).value;
    const double p2_grid = norm_grid(F, 2.0, {}).value;
    require(std::abs(p2_grid - p2_exact) <= 1e-8 * (1.0 + p2_exact),
            "p=2 grid gap " + num(std::abs(p2_grid - p2_exact)));
    const double p4_exact = norm_even_exact(F, 4).value;
    const double p4_grid = norm_grid(F, 4.0, {}).value;
    require(std::abs(p4_grid - p4_exact) <= 1e-6 * (1.0 + p4_exact),
            "p=4 grid gap " + num(std::abs(p4_grid - p4_exact)));
  }
}

// ---------------------------------------------------------------- 3 ---
void ergodic_trace() {
  for (int i = 0; i < 10; ++i) {
    auto rng = Rng::stream(kSeed, 30'000 + std::uint64_t(i));
    const auto f = random_dirichlet(rng, 8, 5);
    const double exact = norm_parseval(f).value;
    if (exact == 0.0) continue;
    ErgodicOptions opts;
    opts.T_schedule = {1e2, 1e3, 1e4};
    const auto est = norm_ergodic(f, 2.0, opts);
    require(est.trace.size() == 3, "expected a three-point trace");
    // Monotone within the quadrature noise floor: once the average sits
    // at ~1e-4 relative, sub-floor wobble is plateau noise, not growth.
    double prev = -1.0;
    for (std::size_t k = 0; k < est.trace.size(); ++k) {
      const double err = std::abs(est.trace[k].value - exact) / exact;
      if (k > 0) {
        require(err <= prev + 1e-4,
                "error rose from " + num(prev) + " to " + num(err) +
                    " at member " + std::to_string(i));
      }
      prev = err;
    }
    require(prev <= 0.05, "final relative error " + num(prev));
  }
}

// ---------------------------------------------------------------- 4 ---
void littlewood_paley_isometry() {
  for (const char* eta : {"3/2", "2", "3"}) {
    const auto P = IntervalPartition::parse(eta);
    for (int i = 0; i < 100; ++i) {
      auto rng = Rng::stream(kSeed, 40'000 + std::uint64_t(i));
      const auto F = random_poly(rng, 3, -3, 3, 10);
      if (F.terms().empty()) continue;
      const auto D = decompose(F, P);
      require(same_terms(D.reassemble(), F), "reassembly not exact");
      const auto rep = lp_ratio(F, P, 2.0, {});
      require(std::abs(rep.ratio - 1.0) <= 1e-10,
              std::string("p=2 ratio ") + num(rep.ratio) + " at eta " + eta);
    }
  }

  // p=4 ratios over a 200-member ensemble, written to CSV.
  const auto P = IntervalPartition::parse("2");
  EnsembleOptions eopts;
  eopts.count = 200;
  eopts.seed = kSeed;
  std::string csv = "member,f_norm,s_norm,ratio\n";
  double lo = 1e300;
  double hi = 0.0;
  for (int i = 0; i < eopts.count; ++i) {
    const auto F = ensemble_member(eopts, i);
    const auto rep = lp_ratio(F, P, 4.0, {});
    csv += std::to_string(i) + "," + io::format_double(rep.f_norm.value) +
           "," + io::format_double(rep.s_norm.value) + "," +
           io::format_double(rep.ratio) + "\n";
    lo = std::min(lo, rep.ratio);
    hi = std::max(hi, rep.ratio);
  }
  io::write_file("acceptance_lp_ratios.csv", csv);
  require(lo >= 0.3 && hi <= 3.5,
          "p=4 ratio range [" + num(lo) + ", " + num(hi) +
              "] leaves [0.3, 3.5]");
}

// ---------------------------------------------------------------- 5 ---
void sign_involution_khintchine() {
  const auto P = IntervalPartition::parse("3/2");
  for (int i = 0; i < 20; ++i) {
    auto rng = Rng::stream(kSeed, 50'000 + std::uint64_t(i));
    const auto F = random_poly(rng, 3, -3, 3, 10);
    const auto m = random_sign_symbol(P, kSeed + std::uint64_t(i));
    require(same_terms(apply_multiplier(m, apply_multiplier(m, F)), F),
            "sign involution not exact at member " + std::to_string(i));
    const double base = norm_parseval(F).value;
    const double flipped = norm_parseval(apply_multiplier(m, F)).value;
    require(std::abs(flipped - base) <= 1e-12 * (1.0 + base),
            "p=2 sample norm moved by " + num(std::abs(flipped - base)));
  }

  // Exhaustive Khintchine chain at p=4 on a few-block polynomial:
  // ||S||_4 <= mean^{1/4} <= 3^{1/4} ||S||_4.
  std::vector<DirichletPolynomial::Term> terms;
  for (std::uint64_t n = 1; n <= 30; ++n) {
    terms.emplace_back(n, Coeff{1.0 / double(n), 0.0});
  }
  const auto F = bohr_lift(DirichletPolynomial::from_terms(std::move(terms)));
  const auto D = decompose(F, P);
  require(D.blocks.size() <= 10, "fixture exceeds ten blocks");
  std::vector<PolytorusPolynomial> blocks;
  for (const auto& [k, fk] : D.blocks) blocks.push_back(fk);
  const double s4 = square_norm(blocks, 4.0, {}).value;
  const auto ex = khintchine_exhaustive(F, P, 4.0, {});
  const double mean_quarter = std::pow(ex.mean_pow, 0.25);
  require(s4 <= mean_quarter * (1.0 + 1e-12),
          "lower Khintchine bound failed: " + num(s4) + " > " +
              num(mean_quarter));
  require(mean_quarter <= std::pow(3.0, 0.25) * s4 * (1.0 + 1e-12),
          "upper Khintchine constant exceeded: " + num(mean_quarter) + " > " +
              num(std::pow(3.0, 0.25) * s4));
}

// ---------------------------------------------------------------- 6 ---
void transference_construction() {
  // Independent exhaustive oracle for the d=2, q<=10 scan.
  {
    const long double l2 = std::log(2.0L);
    const long double l3 = std::log(3.0L);
    long double best = 1e30L;
    std::int64_t best_q = 0;
    std::int64_t best_a1 = 0, best_a2 = 0;
    for (std::int64_t q = 1; q <= 10; ++q) {
      const auto a1 = llroundl(l2 * q);
      const auto a2 = llroundl(l3 * q);
      if (a1 < 1 || a2 < 1) continue;
      if (std::gcd(a1, a2) != 1) continue;
      const long double d =
          std::max(fabsl(l2 - (long double)a1 / q), fabsl(l3 - (long double)a2 / q));
      if (d < best) {
        best = d;
        best_q = q;
        best_a1 = a1;
        best_a2 = a2;
      }
    }
    require(best_q == 10 && best_a1 == 7 && best_a2 == 11,
            "oracle disagrees with the frozen example");
  }
  const auto R = approx_logs(2, 10);
  require(R.Q == 10 && R.a.size() == 2 && R.a[0] == 7 && R.a[1] == 11,
          "approx_logs(2, 10) != (10, (7, 11))");

  // Exact determinant and inverse for both constructed matrix families.
  const auto A = build_matrix_A(R);
  const auto B = build_matrix_B(1.0, 1, 0.1).B;
  for (const auto* U : {&A, &B}) {
    const int d = U->dimension();
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        std::int64_t dot = 0;
        for (int k = 0; k < d; ++k) {
          dot += U->entry(i, k) * U->inverse_entry(k, j);
        }
        require(dot == (i == j ? 1 : 0), "inverse is not exact");
      }
    }
  }
  require(A.entry(0, 0) * A.entry(1, 1) - A.entry(0, 1) * A.entry(1, 0) == 1,
          "det A != 1");
  require(B.entry(0, 0) * B.entry(1, 1) - B.entry(0, 1) * B.entry(1, 0) == 1,
          "det B != 1");

  // Norm preservation through the change of variables.
  for (int i = 0; i < 50; ++i) {
    auto rng = Rng::stream(kSeed, 60'000 + std::uint64_t(i));
    const auto F = random_poly(rng, 2, -3, 3, 8);
    const auto G = change_variables(F, A);
    require(norm_parseval(G).value == norm_parseval(F).value,
            "Parseval norm not exactly preserved");
    const double f4 = norm_even_exact(F, 4).value;
    const double g4 = norm_even_exact(G, 4).value;
    require(std::abs(f4 - g4) <= 1e-10 * (1.0 + f4),
            "p=4 norm moved by " + num(std::abs(f4 - g4)));
  }

  // Lipschitz symbol: the achieved sup gap is non-increasing in Q_max.
  const auto m = MultiplierSymbol::named_smooth("inv1p");
  const auto support = bohr_lift(DirichletPolynomial::from_terms(
      {{1, {1.0, 0.0}}, {2, {1.0, 0.0}}, {3, {1.0, 0.0}}, {4, {1.0, 0.0}},
       {6, {1.0, 0.0}}, {8, {1.0, 0.0}}, {9, {1.0, 0.0}}, {12, {1.0, 0.0}}}));
  double prev_gap = 1e300;
  for (const std::int64_t qmax : {10, 100, 1000, 10000}) {
    const auto Rq = approx_logs(2, qmax);
    double gap = 0.0;
    for (const auto& [nu, c] : support.terms()) {
      (void)c;
      std::int64_t dot = 0;
      for (const auto& [axis, e] : nu.entries()) dot += Rq.a[axis - 1] * e;
      const auto approx = m.value_log((long double)dot / (long double)Rq.Q);
      const auto exact = m.at_rational(rational_of(nu));
      gap = std::max(gap, std::abs(approx - exact));
    }
    require(gap <= prev_gap * (1.0 + 1e-12),
            "gap rose from " + num(prev_gap) + " to " + num(gap) +
                " at q_max " + std::to_string(qmax));
    prev_gap = gap;
  }
}

// ---------------------------------------------------------------- 7 ---
void transfer_reports() {
  const auto fixture = bohr_lift(DirichletPolynomial::from_terms(
      {{1, {1.0, 0.0}}, {2, {0.5, 0.0}}, {3, {0.25, 0.0}}, {6, {0.0, 1.0}}}));
  const auto one = MultiplierSymbol::constant({1.0, 0.0});
  const auto ind = MultiplierSymbol::indicator(0.0, 2.5, false, true);
  for (const double p : {2.0, 4.0}) {
    const auto rid = verify_forward(one, fixture, p, 1e-6, 10, {});
    require(rid.passed, "identity forward failed at p " + num(p));
    require(std::abs(rid.approx_norm - rid.exact_norm) <=
                1e-10 * (1.0 + rid.exact_norm),
            "identity forward norms differ at p " + num(p));
    require(std::abs(rid.approx_norm - rid.f_norm) <=
                1e-10 * (1.0 + rid.f_norm),
            "identity is not the identity at p " + num(p));

    const auto rind = verify_forward(ind, fixture, p, 1e-3, 1000, {});
    require(rind.passed, "indicator forward failed at p " + num(p));
    require(rind.approx_norm <= rind.reference * (1.0 + 1e-10),
            "forward inequality violated at p " + num(p));

    // Backward on the line: dilation gamma = 1, window 0.1.
    const auto g = PolytorusPolynomial::from_terms(
        {{MultiIndex{}, {1.0, 0.0}}, {MultiIndex::unit(1), {1.0, 0.0}}});
    const auto bid = verify_backward(one, g, 1.0, p, 0.1, {});
    require(bid.passed, "identity backward failed at p " + num(p));
    require(std::abs(bid.approx_norm - bid.exact_norm) <=
                1e-10 * (1.0 + bid.exact_norm),
            "identity backward norms differ at p " + num(p));

    const auto indb = MultiplierSymbol::indicator(0.0, std::exp(1.5), false, true);
    const auto bind = verify_backward(indb, g, 1.0, p, 0.1, {});
    require(bind.passed, "indicator backward failed at p " + num(p));
    require(std::abs(bind.approx_norm - bind.exact_norm) <=
                1e-10 * (1.0 + bind.exact_norm),
            "indicator backward norms differ at p " + num(p));
  }
}

// ---------------------------------------------------------------- 8 ---
void schauder_machinery() {
  for (int i = 0; i < 100; ++i) {
    auto rng = Rng::stream(kSeed, 80'000 + std::uint64_t(i));
    const auto f = random_dirichlet(rng, 1000, 15);
    const auto N = 1 + rng.next_below(1000);
    const auto check = schauder_identity_check(f, N);
    require(check.passed && check.max_deviation == 0.0,
            "identity deviated by " + num(check.max_deviation) +
                " at member " + std::to_string(i));
  }

  const std::vector<std::uint64_t> schedule{2,  4,   8,   16,  32,
                                            64, 128, 256, 512, 1000};
  const auto p2 = truncation_norm_bench(2.0, schedule, 12, 1000, kSeed, {});
  for (const auto& row : p2) {
    require(row.max_ratio <= 1.0 + 1e-12,
            "p=2 ratio " + num(row.max_ratio) + " above 1 at N " +
                std::to_string(row.N));
  }

  // p=4 growth probe: each N is stressed by members whose support scales
  // with N (max index 2N), so the row estimates the truncation norm at
  // that scale instead of trivially climbing toward the identity.
  std::vector<std::pair<double, double>> series;  // (log N, max ratio)
  for (const auto n_cap : schedule) {
    const auto row =
        truncation_norm_bench(4.0, {n_cap}, 12, 2 * n_cap, kSeed + n_cap, {});
    series.emplace_back(std::log(double(n_cap)), row.at(0).max_ratio);
  }
  const auto n = double(series.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : series) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  double rss = 0.0;
  for (const auto& [x, y] : series) {
    const double r = y - (intercept + slope * x);
    rss += r * r;
  }
  const double se = std::sqrt(rss / (n - 2.0) / (sxx - sx * sx / n));
  require(slope <= se, "p=4 max-ratio slope " + num(slope) +
                           " exceeds its standard error " + num(se));
}

// ---------------------------------------------------------------- 9 ---
void martingale_blocks_identity() {
  for (int i = 0; i < 100; ++i) {
    auto rng = Rng::stream(kSeed, 90'000 + std::uint64_t(i));
    const auto F = random_poly(rng, 4, -2, 2, 12);
    const auto deltas = martingale_blocks(F);
    PolytorusPolynomial sum;
    std::vector<PolytorusPolynomial> plain;
    for (const auto& [axis, d] : deltas) {
      (void)axis;
      sum = sum + d;
      plain.push_back(d);
    }
    require(same_terms(sum, F), "differences do not sum back to F");
    const double s2 = square_norm(plain, 2.0, {}).value;
    const double f2 = norm_parseval(F).value;
    require(std::abs(s2 - f2) <= 1e-10 * (1.0 + f2),
            "martingale square norm gap " + num(std::abs(s2 - f2)));
  }
}

// ---------------------------------------------------------------- 10 --
std::string g_cli_path;

std::string capture(const std::string& cmd) {
  FILE* pipe = popen(cmd.c_str(), "r");
  require(pipe != nullptr, "cannot spawn " + cmd);
  std::string out;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  require(pclose(pipe) == 0, "selftest exited nonzero");
  return out;
}

void reproducibility() {
  require(!g_cli_path.empty(), "pass the CLI binary path as argv[1]");
  const auto first = capture(g_cli_path + " selftest 2>&1");
  const auto second = capture(g_cli_path + " selftest 2>&1");
  require(first == second, "selftest bytes differ between runs");
  require(first.find("[FAIL]") == std::string::npos, "selftest reported failures");
}

struct Criterion {
  const char* label;
  std::function<void()> body;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli_path = argv[1];

  const std::array<Criterion, 10> criteria{{
      {"bohr correspondence", bohr_correspondence},
      {"grid vs exact-norm oracles", grid_oracle_agreement},
      {"ergodic trace convergence", ergodic_trace},
      {"littlewood-paley isometry and p=4 range", littlewood_paley_isometry},
      {"sign involution and khintchine chain", sign_involution_khintchine},
      {"transference construction", transference_construction},
      {"forward/backward transfer reports", transfer_reports},
      {"schauder identity and truncation bench", schauder_machinery},
      {"martingale difference identity", martingale_blocks_identity},
      {"byte reproducibility", reproducibility},
  }};

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    try {
      criteria[i].body();
    } catch (const std::exception& e) {
      detail = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (detail.empty()) {
      std::printf("[PASS] criterion %zu: %s (%.2f s)\n", i + 1,
                  criteria[i].label, secs);
    } else {
      ++failed;
      std::printf("[FAIL] criterion %zu: %s (%.2f s): %s\n", i + 1,
                  criteria[i].label, secs, detail.c_str());
    }
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
