#include "bohr/multi_index.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "bohr/errors.hpp"

namespace bohr {

MultiIndex MultiIndex::from_entries(std::vector<Entry> entries) {
  for (const auto& [axis, exp] : entries) {
    (void)exp;
    if (axis < 1) throw std::invalid_argument("multi-index axis must be >= 1");
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  MultiIndex out;
  for (const auto& [axis, exp] : entries) {
    if (!out.entries_.empty() && out.entries_.back().first == axis) {
      std::int64_t merged;
      if (__builtin_add_overflow(out.entries_.back().second, exp, &merged))
        throw OverflowError("multi-index exponent overflow on axis " + std::to_string(axis));
      out.entries_.back().second = merged;
      if (merged == 0) out.entries_.pop_back();
    } else if (exp != 0) {
      out.entries_.emplace_back(axis, exp);
    }
  }
  return out;
}

MultiIndex MultiIndex::unit(std::int32_t axis, std::int64_t exponent) {
  return from_entries({{axis, exponent}});
}

std::int64_t MultiIndex::exponent(std::int32_t axis) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), axis,
      [](const Entry& e, std::int32_t a) { return e.first < a; });
  return (it != entries_.end() && it->first == axis) ? it->second : 0;
}

bool MultiIndex::is_analytic() const {
  for (const auto& [axis, exp] : entries_) {
    (void)axis;
    if (exp < 0) return false;
  }
  return true;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  std::vector<Entry> merged;
  merged.reserve(entries_.size() + o.entries_.size());
  auto a = entries_.begin();
  auto b = o.entries_.begin();
  while (a != entries_.end() || b != o.entries_.end()) {
    if (b == o.entries_.end() || (a != entries_.end() && a->first < b->first)) {
      merged.push_back(*a++);
    } else if (a == entries_.end() || b->first < a->first) {
      merged.push_back(*b++);
    } else {
      std::int64_t sum;
      if (__builtin_add_overflow(a->second, b->second, &sum))
        throw OverflowError("multi-index exponent overflow on axis " +
                            std::to_string(a->first));
      if (sum != 0) merged.emplace_back(a->first, sum);
      ++a;
      ++b;
    }
  }
  MultiIndex out;
  out.entries_ = std::move(merged);
  return out;
}

MultiIndex MultiIndex::operator-() const {
  MultiIndex out = *this;
  for (auto& [axis, exp] : out.entries_) {
    (void)axis;
    exp = -exp;  // INT64_MIN cannot appear: from_entries sums never reach it
  }
  return out;
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& o) const {
  auto a = entries_.begin();
  auto b = o.entries_.begin();
  while (a != entries_.end() || b != o.entries_.end()) {
    const std::int32_t axis_a = (a != entries_.end()) ? a->first
                                                      : std::numeric_limits<std::int32_t>::max();
    const std::int32_t axis_b = (b != o.entries_.end()) ? b->first
                                                        : std::numeric_limits<std::int32_t>::max();
    // The smaller axis is reached first in the dense expansion; the side
    // without an entry there has exponent 0.
    const std::int32_t axis = std::min(axis_a, axis_b);
    const std::int64_t ea = (axis_a == axis) ? a->second : 0;
    const std::int64_t eb = (axis_b == axis) ? b->second : 0;
    if (ea != eb) return ea <=> eb;
    if (axis_a == axis) ++a;
    if (axis_b == axis) ++b;
  }
  return std::strong_ordering::equal;
}

std::string MultiIndex::to_string() const {
  std::string s = "{";
  bool first = true;
  for (const auto& [axis, exp] : entries_) {
    if (!first) s += ",";
    first = false;
    s += std::to_string(axis) + ":" + std::to_string(exp);
  }
  s += "}";
  return s;
}

}  // namespace bohr
