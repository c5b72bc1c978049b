// Fractions of series over the two multiplicative sets that matter here:
// series of limit value zero (giving the ring T) and, more broadly, a
// nonzero scalar times such a series (giving K).  The limit valuation
// extends to fractions by subtracting values, every fraction or its inverse
// then lands in T, and principal scalar ideals stay pure: membership of a
// series in a*T is witnessed by an identity and discharged by exact
// coefficientwise division.

#pragma once

#include <string>
#include <utility>

#include "serval/scalar.hpp"
#include "serval/series.hpp"

namespace serval {

// num / (den_r * den_u): den_r a nonzero scalar, den_u a series of limit
// value zero.  Denotes an element of K; it lies in T when den_r is a unit.
class LocalFraction {
 public:
  LocalFraction(CertifiedSeries num, FieldElem den_r, CertifiedSeries den_u);

  // numerator f alone, the embedding of the series ring
  explicit LocalFraction(CertifiedSeries num);

  const CertifiedSeries& num() const { return num_; }
  const FieldElem& den_r() const { return den_r_; }
  const CertifiedSeries& den_u() const { return den_u_; }

  bool in_T() const;  // den_r a unit of R
  std::string str() const;

 private:
  CertifiedSeries num_;
  FieldElem den_r_;
  CertifiedSeries den_u_;
};

// limit value of the fraction: v_0(num) - val(den_r); den_u contributes 0
ExtScalar val_fraction(const LocalFraction& x);

// bracket for a truncated numerator: {lower, upper} around the same formula
std::pair<ExtScalar, ExtScalar> val_fraction_bounds(const SeriesPoly& num,
                                                    const FieldElem& den_r);

// whether u belongs to the multiplicative set U of limit value zero
bool is_unit_denominator(const CertifiedSeries& u);

// f = r * u with val(r) = v_0(f) and v_0(u) = 0.  Demands that the limit
// value is finite, attained by some coefficient, and lies in the value
// group g; otherwise the caller needs `unitizer`.
std::pair<FieldElem, CertifiedSeries> factor_unit(const CertifiedSeries& f,
                                                  ValueGroup g);

// For f whose limit value alpha is finite but outside the group: a series g
// of limit value beta - alpha (beta in the group, beta > alpha), so that
// f * g has limit value beta inside the group.  The coefficients of g walk
// the canonical decreasing sequence toward beta - alpha.
CertifiedSeries unitizer(const CertifiedSeries& f, const GroupScalar& beta,
                         ValueGroup g);

// default beta: the canonical group element in (alpha, alpha + 1)
CertifiedSeries unitizer(const CertifiedSeries& f, ValueGroup g);

// Exact division of a witnessed element of a*T by the scalar a: checks the
// witness identity a * g = f * u at the common truncation order, then
// divides every coefficient of f by a.  The result h satisfies f = a * h,
// placing f in a * R[[X]].
SeriesPoly pure_divide(const FieldElem& a, const SeriesPoly& f,
                       const SeriesPoly& g, const CertifiedSeries& u);

}  // namespace serval
