// Exact arithmetic in Q(sqrt2) and the two dense value groups the workbench
// supports: the full rationals and Z + Z*sqrt2.  Every comparison is decided
// exactly; floating point appears only as a seed for integer-part extraction
// and is always corrected by exact comparisons afterwards.

#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace serval {

using Int = mpz_class;
using Rat = mpq_class;

// "p/q" in lowest terms with positive denominator.  Also accepts plain "p".
Rat parse_rat(std::string_view text);

// Canonical form "p/q", denominator always written explicitly.
std::string rat_str(const Rat& q);

// |num| + den of the canonical form; the complexity measure used by the
// deterministic interval search.
Int rat_height(const Rat& q);

enum class ValueGroup {
  rationals,        // all of Q
  z_plus_z_sqrt2,   // integer combinations a + b*sqrt2
};

std::string_view group_name(ValueGroup g);
ValueGroup parse_group(std::string_view name);

// An element a + b*sqrt2 of Q(sqrt2).  The representation is unique because
// sqrt2 is irrational, so componentwise equality is true equality.
class GroupScalar {
 public:
  GroupScalar() : a_(0), b_(0) {}
  explicit GroupScalar(Rat rational_part) : a_(std::move(rational_part)), b_(0) {}
  GroupScalar(Rat rational_part, Rat sqrt2_part)
      : a_(std::move(rational_part)), b_(std::move(sqrt2_part)) {}
  GroupScalar(long rational_part, long sqrt2_part)
      : a_(rational_part), b_(sqrt2_part) {}

  static GroupScalar sqrt2(Rat multiple = Rat(1)) {
    return GroupScalar(Rat(0), std::move(multiple));
  }

  const Rat& rational_part() const { return a_; }
  const Rat& sqrt2_part() const { return b_; }

  // Sign of the real number a + b*sqrt2, decided exactly.
  int sign() const;

  bool operator==(const GroupScalar& o) const { return a_ == o.a_ && b_ == o.b_; }
  std::strong_ordering operator<=>(const GroupScalar& o) const;

  GroupScalar operator-() const { return {-a_, -b_}; }
  GroupScalar operator+(const GroupScalar& o) const { return {a_ + o.a_, b_ + o.b_}; }
  GroupScalar operator-(const GroupScalar& o) const { return {a_ - o.a_, b_ - o.b_}; }
  GroupScalar operator*(const GroupScalar& o) const;
  GroupScalar operator/(const GroupScalar& o) const;  // o must be nonzero

  GroupScalar& operator+=(const GroupScalar& o) { a_ += o.a_; b_ += o.b_; return *this; }
  GroupScalar& operator-=(const GroupScalar& o) { a_ -= o.a_; b_ -= o.b_; return *this; }

  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
  bool is_rational() const { return sgn(b_) == 0; }

  // Largest integer <= value.  Exact: a float estimate fixed up by exact
  // comparisons.
  Int floor() const;

  // Height of the canonical representation; ties in the interval search are
  // broken lexicographically on (a, b).
  Int height() const { return rat_height(a_) + rat_height(b_); }

  bool in_group(ValueGroup g) const;

  // "a/b + c/d*sqrt2": both parts always written, lowest terms.
  std::string str() const;

  // Accepts the canonical form plus the shorthands "a/b", "c/d*sqrt2",
  // "sqrt2", and plain integers for either part.
  static GroupScalar parse(std::string_view text);

 private:
  Rat a_, b_;
};

inline GroupScalar operator*(const Rat& c, const GroupScalar& s) {
  return GroupScalar(c * s.rational_part(), c * s.sqrt2_part());
}

// Value in the extended group: a finite GroupScalar or +infinity (the value
// of zero).
class ExtScalar {
 public:
  ExtScalar() : fin_(GroupScalar()) {}
  ExtScalar(GroupScalar v) : fin_(std::move(v)) {}  // NOLINT: implicit by design
  static ExtScalar infinity() { return ExtScalar(infinite_tag{}); }

  bool is_infinite() const { return !fin_.has_value(); }
  bool is_finite() const { return fin_.has_value(); }
  const GroupScalar& finite() const;

  bool operator==(const ExtScalar& o) const;
  std::strong_ordering operator<=>(const ExtScalar& o) const;

  ExtScalar operator+(const ExtScalar& o) const;
  ExtScalar operator-() const;  // finite only

  std::string str() const;
  static ExtScalar parse(std::string_view text);

 private:
  struct infinite_tag {};
  explicit ExtScalar(infinite_tag) {}
  std::optional<GroupScalar> fin_;
};

ExtScalar min(const ExtScalar& x, const ExtScalar& y);

// The distinguished scalar outside each group but inside Q(sqrt2):
// sqrt2 - 1 for the rationals, 1/2 for Z + Z*sqrt2.
GroupScalar excluded_scalar(ValueGroup g);

// The unique group element strictly inside (lo, hi) of minimal height,
// ties broken lexicographically on (a, b).  Requires lo < hi; both groups
// are dense in R, so the search always terminates.
GroupScalar find_in_interval(const GroupScalar& lo, const GroupScalar& hi,
                             ValueGroup g);

// Strictly decreasing group elements approaching target from above, with
// seq[k] - target < 2^-(k+1).  target must lie outside g (a limit point the
// sequence can never reach).  Element k+1 is found in the interval
// (target, min(seq[k], target + 2^-(k+2))) by find_in_interval, so the whole
// sequence is deterministic.
std::vector<GroupScalar> decreasing_sequence(const GroupScalar& target,
                                             ValueGroup g, int count);

// Memoized view of the decreasing sequence for one (target, group) pair.
// Deep entries get expensive (heights grow roughly geometrically), so
// evaluations that share a tail share one of these.
class DescentSequence {
 public:
  DescentSequence(GroupScalar target, ValueGroup g);

  const GroupScalar& target() const { return target_; }
  ValueGroup group() const { return group_; }

  GroupScalar at(std::int64_t k) const;  // k >= 0, grows the cache on demand

 private:
  GroupScalar target_;
  ValueGroup group_;
  mutable std::mutex mu_;
  mutable std::vector<GroupScalar> cache_;
};

using DescentSequencePtr = std::shared_ptr<const DescentSequence>;

}  // namespace serval
