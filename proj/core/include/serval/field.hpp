// The ambient valued field: fractions of finite sums of monomials c * t^g
// with rational c and exponent g in Q(sqrt2).  The valuation reads off the
// minimal exponent; restricting exponents to a chosen ValueGroup gives a
// rank-one valuation with exactly that dense value group, and R is its
// valuation ring.

#pragma once

#include <map>
#include <string>
#include <string_view>

#include "serval/scalar.hpp"

namespace serval {

// Finite formal sum of monomials, keyed by exponent.  Zero coefficients are
// never stored, so the map order doubles as the valuation order.
class MonomialSum {
 public:
  MonomialSum() = default;
  static MonomialSum monomial(const GroupScalar& exponent, const Rat& coeff);
  static MonomialSum constant(const Rat& c) { return monomial(GroupScalar(), c); }
  static MonomialSum one() { return constant(Rat(1)); }

  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }
  const std::map<GroupScalar, Rat>& terms() const { return terms_; }

  // min exponent, or infinity for the zero sum
  ExtScalar val() const;
  const GroupScalar& leading_exponent() const;  // nonzero only
  const Rat& leading_coeff() const;             // nonzero only

  bool exponents_in(ValueGroup g) const;

  MonomialSum operator+(const MonomialSum& o) const;
  MonomialSum operator-(const MonomialSum& o) const;
  MonomialSum operator-() const;
  MonomialSum operator*(const MonomialSum& o) const;
  bool operator==(const MonomialSum& o) const { return terms_ == o.terms_; }

  MonomialSum scaled(const Rat& c) const;
  // multiply by the single monomial c * t^g
  MonomialSum shifted(const GroupScalar& g, const Rat& c) const;

  // "c1*t^(g1) + c2*t^(g2) + ..." in exponent order, "0" when empty
  std::string str() const;
  static MonomialSum parse(std::string_view text);

 private:
  std::map<GroupScalar, Rat> terms_;
  void insert_term(const GroupScalar& e, const Rat& c);
};

// Element of the fraction field K.  A one-term denominator is folded into
// the numerator immediately, so plain monomial fractions stay monomials;
// equality in general is decided by cross multiplication.
class FieldElem {
 public:
  FieldElem() = default;  // zero
  explicit FieldElem(MonomialSum num) : num_(std::move(num)) {}
  FieldElem(MonomialSum num, MonomialSum den);

  static FieldElem monomial(const GroupScalar& exponent, const Rat& coeff = Rat(1));
  static FieldElem from_rat(const Rat& c) { return FieldElem(MonomialSum::constant(c)); }
  static FieldElem one() { return from_rat(Rat(1)); }

  const MonomialSum& num() const { return num_; }
  const MonomialSum& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }

  // w(num) - w(den); infinity exactly for zero
  ExtScalar val() const;
  bool in_valuation_ring() const;  // val >= 0 or zero
  bool exponents_in(ValueGroup g) const;

  // leading rational of the expansion: lc(num)/lc(den).  For a val-zero
  // element this is its residue in Q; nonzero elements only.
  Rat leading_rat() const;

  FieldElem operator+(const FieldElem& o) const;
  FieldElem operator-(const FieldElem& o) const;
  FieldElem operator-() const;
  FieldElem operator*(const FieldElem& o) const;
  FieldElem operator/(const FieldElem& o) const;  // o nonzero
  FieldElem inv() const;                          // nonzero only

  // true equality in K (cross multiplication), not representation equality
  bool operator==(const FieldElem& o) const;

  // "(num)/(den)"
  std::string str() const;
  static FieldElem parse(std::string_view text);

 private:
  MonomialSum num_;
  MonomialSum den_ = MonomialSum::one();
  void normalize();
};

// Exact division b/a inside the valuation ring: requires a nonzero,
// 0 <= val(a) <= val(b).  The quotient always lands back in R.
FieldElem divide_in_R(const FieldElem& a, const FieldElem& b);

// t^g: the canonical element of valuation g, witnessing that val is onto
// the whole group.
FieldElem element_with_value(const GroupScalar& g);

}  // namespace serval
