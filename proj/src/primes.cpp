#include "bohr/primes.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>

namespace bohr {

std::vector<std::uint64_t> sieve_first_primes(std::size_t n) {
  std::vector<std::uint64_t> primes;
  if (n == 0) return primes;
  primes.reserve(n);
  // Rosser-Schoenfeld style upper bound for the n-th prime, padded.
  double bound = 16.0;
  if (n >= 6) {
    const double ln = std::log(double(n));
    bound = double(n) * (ln + std::log(ln)) * 1.2 + 16.0;
  }
  const std::size_t limit = static_cast<std::size_t>(bound);
  std::vector<bool> composite(limit + 1, false);
  for (std::size_t i = 2; i <= limit && primes.size() < n; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::size_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  if (primes.size() < n) throw std::logic_error("prime sieve bound too small");
  return primes;
}

struct PrimeTable::Impl {
  mutable std::shared_mutex mutex;
  std::shared_ptr<const std::vector<std::uint64_t>> primes;
  std::size_t cap = kDefaultCap;
};

PrimeTable::PrimeTable() : impl_(std::make_shared<Impl>()) {
  impl_->primes = std::make_shared<const std::vector<std::uint64_t>>(
      sieve_first_primes(impl_->cap));
}

PrimeTable& PrimeTable::instance() {
  static PrimeTable table;
  return table;
}

std::shared_ptr<const std::vector<std::uint64_t>> PrimeTable::snapshot() const {
  std::shared_lock lock(impl_->mutex);
  return impl_->primes;
}

std::size_t PrimeTable::cap() const {
  std::shared_lock lock(impl_->mutex);
  return impl_->cap;
}

void PrimeTable::set_cap(std::size_t n_primes) {
  if (n_primes == 0) throw std::invalid_argument("prime cap must be positive");
  auto fresh = std::make_shared<const std::vector<std::uint64_t>>(
      sieve_first_primes(n_primes));
  std::unique_lock lock(impl_->mutex);
  impl_->cap = n_primes;
  impl_->primes = std::move(fresh);
}

std::uint64_t PrimeTable::nth(std::size_t j) const {
  auto snap = snapshot();
  if (j == 0 || j > snap->size())
    throw std::out_of_range("prime index " + std::to_string(j) +
                            " outside table cap " + std::to_string(snap->size()));
  return (*snap)[j - 1];
}

std::optional<std::size_t> PrimeTable::index_of(std::uint64_t p) const {
  auto snap = snapshot();
  auto it = std::lower_bound(snap->begin(), snap->end(), p);
  if (it == snap->end() || *it != p) return std::nullopt;
  return static_cast<std::size_t>(it - snap->begin()) + 1;
}

std::uint64_t nth_prime(std::size_t j) { return PrimeTable::instance().nth(j); }

std::optional<std::size_t> prime_index(std::uint64_t p) {
  return PrimeTable::instance().index_of(p);
}

}  // namespace bohr
