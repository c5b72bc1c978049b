// Independent reference implementations used only by the test suites.
// Deliberately written as brute force over a different search order than the
// library so that agreement is meaningful.

#pragma once

#include <optional>
#include <vector>

#include "serval/scalar.hpp"
#include "serval/series.hpp"

namespace serval::oracle {

// Plain minimum of v(r_n) + lambda*n over every stored coefficient, no
// window reduction, no early exit.
struct BruteMin {
  ExtScalar value = ExtScalar::infinity();
  std::vector<std::int64_t> argmin;
};

inline BruteMin brute_weighted_min(const SeriesPoly& f, const GroupScalar& lambda) {
  BruteMin out;
  for (std::int64_t n = 0; n < f.order(); ++n) {
    const ExtScalar v = f.coeff(n).val();
    if (v.is_infinite()) continue;
    const ExtScalar term{v.finite() + Rat(static_cast<long>(n)) * lambda};
    if (term < out.value) {
      out.value = term;
      out.argmin.assign(1, n);
    } else if (term == out.value) {
      out.argmin.push_back(n);
    }
  }
  return out;
}

// Every group element of height exactly h, no interval filtering.
inline std::vector<GroupScalar> elements_of_height(const Int& h, ValueGroup g) {
  std::vector<GroupScalar> out;
  if (g == ValueGroup::rationals) {
    // height = |p| + q + 1
    for (Int q = 1; q + 1 <= h; ++q) {
      Int absp = h - 1 - q;
      if (absp < 0) continue;
      if (absp == 0) {
        if (q == 1) out.emplace_back(Rat(0));
        continue;
      }
      if (gcd(absp, q) != 1) continue;
      Rat pos(absp, q), neg(-absp, q);
      pos.canonicalize();
      neg.canonicalize();
      out.emplace_back(neg);
      out.emplace_back(pos);
    }
  } else {
    // height = |a| + |b| + 2
    for (Int absa = 0; absa + 2 <= h; ++absa) {
      Int absb = h - 2 - absa;
      if (absb < 0) continue;
      std::vector<Int> as, bs;
      as.push_back(absa);
      if (absa > 0) as.push_back(-absa);
      bs.push_back(absb);
      if (absb > 0) bs.push_back(-absb);
      for (const Int& a : as)
        for (const Int& b : bs) out.emplace_back(GroupScalar(Rat(a), Rat(b)));
    }
  }
  return out;
}

// Minimal-height element of (lo, hi) by exhaustive search over heights,
// lexicographic tie break on (a, b).  Returns nothing if none exists below
// the height cap.
inline std::optional<GroupScalar> min_height_in_interval(
    const GroupScalar& lo, const GroupScalar& hi, ValueGroup g,
    const Int& height_cap) {
  for (Int h = 2; h <= height_cap; ++h) {
    std::optional<GroupScalar> best;
    for (const GroupScalar& cand : elements_of_height(h, g)) {
      if (!(lo < cand && cand < hi)) continue;
      if (!best || cand.rational_part() < best->rational_part() ||
          (cand.rational_part() == best->rational_part() &&
           cand.sqrt2_part() < best->sqrt2_part()))
        best = cand;
    }
    if (best) return best;
  }
  return std::nullopt;
}

}  // namespace serval::oracle
