#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace bohr {

// Shared table of the first `cap` primes, materialized once by sieve.
// Readers take an immutable snapshot, so lookups stay valid while another
// thread raises the cap. Default cap: first 10^4 primes.
class PrimeTable {
 public:
  static PrimeTable& instance();

  // j is 1-based: nth(1) = 2. Throws std::out_of_range beyond the cap.
  std::uint64_t nth(std::size_t j) const;

  // 1-based index of p if p is one of the first `cap` primes.
  std::optional<std::size_t> index_of(std::uint64_t p) const;

  // Snapshot of all primes up to the cap, ascending.
  std::shared_ptr<const std::vector<std::uint64_t>> snapshot() const;

  std::size_t cap() const;
  void set_cap(std::size_t n_primes);

  static constexpr std::size_t kDefaultCap = 10'000;

 private:
  PrimeTable();
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

// Convenience wrappers against the shared instance.
std::uint64_t nth_prime(std::size_t j);
std::optional<std::size_t> prime_index(std::uint64_t p);

// First n primes by direct sieve, independent of the shared table; used
// as the oracle in tests and for the table itself.
std::vector<std::uint64_t> sieve_first_primes(std::size_t n);

}  // namespace bohr
