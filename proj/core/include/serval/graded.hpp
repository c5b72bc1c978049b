// Leading forms at weight lambda, realized one homogeneous component at a
// time.  The coefficient field is monomial fractions over Q, so each graded
// piece of the coefficient grading is one-dimensional: the class of a
// nonzero element of value gamma is determined by gamma and its leading
// rational.  A homogeneous element of the weighted grading is then a finite
// polynomial in Y whose Y^n term lives in the piece of degree alpha -
// lambda*n, and products never cancel degree by degree, which is exactly
// what makes the leading-form map multiplicative.

#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "serval/scalar.hpp"
#include "serval/series.hpp"

namespace serval {

// Nonzero class c * t^gamma in the degree-gamma piece of the coefficient
// grading.
struct GradedTerm {
  GroupScalar gamma;
  Rat coeff;  // never 0

  bool operator==(const GradedTerm& o) const {
    return gamma == o.gamma && coeff == o.coeff;
  }
};

// Polynomial in Y representing a homogeneous element of weighted degree
// `degree`: the term at Y^n carries gamma = degree - lambda*n.  An empty
// term map is the zero element (degree kept for bookkeeping; products of
// engineered inputs can collapse).
class GradedPoly {
 public:
  GradedPoly(GroupScalar degree, GroupScalar lambda,
             std::map<std::int64_t, GradedTerm> terms);

  const GroupScalar& degree() const { return degree_; }
  const GroupScalar& lambda() const { return lambda_; }
  const std::map<std::int64_t, GradedTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool operator==(const GradedPoly& o) const;
  std::string str() const;

 private:
  GroupScalar degree_;
  GroupScalar lambda_;
  std::map<std::int64_t, GradedTerm> terms_;
};

// Leading form of f at weight lambda > 0: degree v_lambda(f), one term per
// attaining index, each carrying the coefficient's value and leading
// rational.  Demands an exact finite evaluation: inexact truncations and
// the zero series are errors, so a nonzero input never maps to zero.  A
// truncation whose value sits exactly at lambda times its order with the
// window still open is also an error: an unseen coefficient could tie, so
// the attaining set is not determined by the prefix.
GradedPoly leading_form(const SeriesPoly& f, const GroupScalar& lambda);
GradedPoly leading_form(const CertifiedSeries& f, const GroupScalar& lambda);

// Product in the graded ring: degrees add, term degrees add, leading
// rationals multiply; terms that collect to rational 0 are dropped.
// Operands must share lambda.
GradedPoly graded_mul(const GradedPoly& a, const GradedPoly& b);

}  // namespace serval
