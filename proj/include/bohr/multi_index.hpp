#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace bohr {

// Finitely supported integer exponent vector over prime axes 1, 2, 3, ...
// Axis j corresponds to the j-th prime. Stored sparse, sorted by axis,
// zero exponents pruned, so equality is representational equality.
class MultiIndex {
 public:
  using Entry = std::pair<std::int32_t, std::int64_t>;  // (axis >= 1, exponent != 0)

  MultiIndex() = default;

  // Accepts entries in any order, merges duplicate axes, drops zeros.
  // Throws std::invalid_argument on axis < 1.
  static MultiIndex from_entries(std::vector<Entry> entries);

  static MultiIndex unit(std::int32_t axis, std::int64_t exponent = 1);

  const std::vector<Entry>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }

  // Largest axis with a nonzero exponent; 0 for the zero index.
  std::int32_t dimension() const {
    return entries_.empty() ? 0 : entries_.back().first;
  }

  std::int64_t exponent(std::int32_t axis) const;
  bool is_analytic() const;  // all exponents >= 0

  MultiIndex operator+(const MultiIndex& o) const;
  MultiIndex operator-() const;
  bool operator==(const MultiIndex& o) const = default;

  // Lexicographic on the dense expansion (axis 1 first, absent = 0).
  std::strong_ordering operator<=>(const MultiIndex& o) const;

  std::string to_string() const;  // e.g. "{1:2,3:-1}"

 private:
  std::vector<Entry> entries_;
};

}  // namespace bohr
