#include "bohr/polynomials.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "bohr/errors.hpp"
#include "bohr/primes.hpp"

namespace bohr {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool nonzero(const Coeff& c) { return c.real() != 0.0 || c.imag() != 0.0; }

}  // namespace

DirichletPolynomial DirichletPolynomial::from_terms(std::vector<Term> terms) {
  for (const auto& [n, c] : terms) {
    (void)c;
    if (n == 0) throw std::invalid_argument("Dirichlet index must be >= 1");
  }
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  DirichletPolynomial out;
  for (auto& [n, c] : terms) {
    if (!out.terms_.empty() && out.terms_.back().first == n) {
      out.terms_.back().second += c;
      if (!nonzero(out.terms_.back().second)) out.terms_.pop_back();
    } else if (nonzero(c)) {
      out.terms_.emplace_back(n, c);
    }
  }
  return out;
}

Coeff DirichletPolynomial::coefficient(std::uint64_t n) const {
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), n,
      [](const Term& t, std::uint64_t k) { return t.first < k; });
  return (it != terms_.end() && it->first == n) ? it->second : Coeff{};
}

Coeff DirichletPolynomial::operator()(Coeff s) const {
  Coeff acc{};
  for (const auto& [n, c] : terms_) {
    // n^{-s} = exp(-s log n)
    acc += c * std::exp(-s * std::log(double(n)));
  }
  return acc;
}

DirichletPolynomial DirichletPolynomial::operator+(const DirichletPolynomial& o) const {
  std::vector<Term> all = terms_;
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  return from_terms(std::move(all));
}

DirichletPolynomial DirichletPolynomial::operator-(const DirichletPolynomial& o) const {
  std::vector<Term> all = terms_;
  all.reserve(all.size() + o.terms_.size());
  for (const auto& [n, c] : o.terms_) all.emplace_back(n, -c);
  return from_terms(std::move(all));
}

DirichletPolynomial DirichletPolynomial::operator*(const DirichletPolynomial& o) const {
  std::map<std::uint64_t, Coeff> acc;
  for (const auto& [n, a] : terms_) {
    for (const auto& [m, b] : o.terms_) {
      std::uint64_t nm;
      if (__builtin_mul_overflow(n, m, &nm))
        throw OverflowError("Dirichlet index product " + std::to_string(n) + "*" +
                            std::to_string(m) + " exceeds 64-bit range");
      acc[nm] += a * b;
    }
  }
  std::vector<Term> terms(acc.begin(), acc.end());
  return from_terms(std::move(terms));
}

TorusPoint TorusPoint::from_angles(std::vector<double> raw) {
  for (double& t : raw) {
    t = std::fmod(t, kTwoPi);
    if (t < 0.0) t += kTwoPi;
  }
  return TorusPoint{std::move(raw)};
}

PolytorusPolynomial PolytorusPolynomial::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  PolytorusPolynomial out;
  for (auto& [nu, c] : terms) {
    if (!out.terms_.empty() && out.terms_.back().first == nu) {
      out.terms_.back().second += c;
      if (!nonzero(out.terms_.back().second)) out.terms_.pop_back();
    } else if (nonzero(c)) {
      out.terms_.emplace_back(std::move(nu), c);
    }
  }
  return out;
}

std::int32_t PolytorusPolynomial::dimension() const {
  std::int32_t d = 0;
  for (const auto& [nu, c] : terms_) {
    (void)c;
    d = std::max(d, nu.dimension());
  }
  return d;
}

std::int64_t PolytorusPolynomial::max_degree() const {
  std::int64_t deg = 0;
  for (const auto& [nu, c] : terms_) {
    (void)c;
    for (const auto& [axis, exp] : nu.entries()) {
      (void)axis;
      deg = std::max(deg, exp >= 0 ? exp : -exp);
    }
  }
  return deg;
}

bool PolytorusPolynomial::is_analytic() const {
  for (const auto& [nu, c] : terms_) {
    (void)c;
    if (!nu.is_analytic()) return false;
  }
  return true;
}

Coeff PolytorusPolynomial::coefficient(const MultiIndex& nu) const {
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), nu,
      [](const Term& t, const MultiIndex& k) { return t.first < k; });
  return (it != terms_.end() && it->first == nu) ? it->second : Coeff{};
}

Coeff PolytorusPolynomial::operator()(const TorusPoint& z) const {
  if (static_cast<std::int32_t>(z.dimension()) < dimension())
    throw std::invalid_argument("torus point has fewer axes than the polynomial");
  Coeff acc{};
  for (const auto& [nu, c] : terms_) {
    double phase = 0.0;
    for (const auto& [axis, exp] : nu.entries())
      phase += double(exp) * z.theta[static_cast<std::size_t>(axis) - 1];
    acc += c * std::polar(1.0, phase);
  }
  return acc;
}

PolytorusPolynomial PolytorusPolynomial::operator+(const PolytorusPolynomial& o) const {
  std::vector<Term> all = terms_;
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  return from_terms(std::move(all));
}

PolytorusPolynomial PolytorusPolynomial::operator-(const PolytorusPolynomial& o) const {
  std::vector<Term> all = terms_;
  all.reserve(all.size() + o.terms_.size());
  for (const auto& [nu, c] : o.terms_) all.emplace_back(nu, -c);
  return from_terms(std::move(all));
}

PolytorusPolynomial PolytorusPolynomial::operator*(const PolytorusPolynomial& o) const {
  std::map<MultiIndex, Coeff> acc;
  for (const auto& [nu, a] : terms_)
    for (const auto& [mu, b] : o.terms_) acc[nu + mu] += a * b;
  std::vector<Term> terms(acc.begin(), acc.end());
  return from_terms(std::move(terms));
}

PolytorusPolynomial PolytorusPolynomial::conjugate() const {
  std::vector<Term> terms;
  terms.reserve(terms_.size());
  for (const auto& [nu, c] : terms_) terms.emplace_back(-nu, std::conj(c));
  return from_terms(std::move(terms));
}

PolytorusPolynomial PolytorusPolynomial::shifted(const MultiIndex& shift) const {
  std::vector<Term> terms;
  terms.reserve(terms_.size());
  for (const auto& [nu, c] : terms_) terms.emplace_back(nu + shift, c);
  return from_terms(std::move(terms));
}

MultiIndex factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("cannot factorize 0");
  std::vector<MultiIndex::Entry> entries;
  auto primes = PrimeTable::instance().snapshot();
  bool covered_sqrt = false;
  for (std::size_t j = 0; j < primes->size() && n > 1; ++j) {
    const std::uint64_t p = (*primes)[j];
    if (p > n / p) {
      covered_sqrt = true;
      break;
    }
    std::int64_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) entries.emplace_back(static_cast<std::int32_t>(j + 1), e);
  }
  if (n > 1) {
    // Trial division passed sqrt(n), so the cofactor is prime; it must
    // still sit inside the table to get an axis.
    if (!covered_sqrt && primes->back() <= n / primes->back())
      throw std::out_of_range("index " + std::to_string(n) +
                              " exceeds the factorization range of the prime "
                              "table; raise the prime cap");
    auto idx = PrimeTable::instance().index_of(n);
    if (!idx)
      throw std::out_of_range("prime factor " + std::to_string(n) +
                              " beyond the configured prime table");
    entries.emplace_back(static_cast<std::int32_t>(*idx), 1);
  }
  return MultiIndex::from_entries(std::move(entries));
}

PolytorusPolynomial bohr_lift(const DirichletPolynomial& f) {
  std::vector<PolytorusPolynomial::Term> terms;
  terms.reserve(f.term_count());
  for (const auto& [n, c] : f.terms()) terms.emplace_back(factorize(n), c);
  return PolytorusPolynomial::from_terms(std::move(terms));
}

DirichletPolynomial bohr_drop(const PolytorusPolynomial& F) {
  std::vector<DirichletPolynomial::Term> terms;
  terms.reserve(F.term_count());
  for (const auto& [nu, c] : F.terms()) {
    if (!nu.is_analytic())
      throw std::domain_error("frequency " + nu.to_string() +
                              " has a negative exponent; no Dirichlet index");
    terms.emplace_back(rational_of(nu).num, c);
  }
  return DirichletPolynomial::from_terms(std::move(terms));
}

TorusPoint kronecker_flow(double t, std::size_t dim) {
  std::vector<double> theta(dim);
  for (std::size_t j = 0; j < dim; ++j)
    theta[j] = -t * std::log(double(nth_prime(j + 1)));
  return TorusPoint::from_angles(std::move(theta));
}

}  // namespace bohr
