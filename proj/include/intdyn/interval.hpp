#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "intdyn/error.hpp"
#include "intdyn/rational.hpp"

namespace intdyn {

/// Closed interval [lo, hi] with lo < hi.
template <class S>
struct Interval {
  S lo{};
  S hi{};

  Interval() = default;
  Interval(S l, S h) : lo(std::move(l)), hi(std::move(h)) {
    if (!(lo < hi)) throw Error(Err::out_of_domain, "interval requires lo < hi");
  }

  S length() const { return hi - lo; }
  bool contains(const S& x) const { return lo <= x && x <= hi; }
  bool contains_interior(const S& x) const { return lo < x && x < hi; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }

  bool operator==(const Interval& other) const { return lo == other.lo && hi == other.hi; }

  std::string str() const {
    std::ostringstream os;
    os << "[" << lo << ", " << hi << "]";
    return os.str();
  }
};

/// Length of a ∩ b (zero when they only touch or are disjoint).
template <class S>
S overlap_length(const Interval<S>& a, const Interval<S>& b) {
  S lo = a.lo < b.lo ? b.lo : a.lo;
  S hi = a.hi < b.hi ? a.hi : b.hi;
  return lo < hi ? S(hi - lo) : S(0);
}

/// Intersection as an interval of positive length, if any.
template <class S>
std::optional<Interval<S>> intersect(const Interval<S>& a, const Interval<S>& b) {
  S lo = a.lo < b.lo ? b.lo : a.lo;
  S hi = a.hi < b.hi ? a.hi : b.hi;
  if (!(lo < hi)) return std::nullopt;
  return Interval<S>(lo, hi);
}

template <class S>
Interval<S> interval_from(const Rational& lo, const Rational& hi) {
  return Interval<S>(scalar_from<S>(lo), scalar_from<S>(hi));
}

}  // namespace intdyn
