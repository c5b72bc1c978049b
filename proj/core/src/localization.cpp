#include "serval/localization.hpp"

#include <cassert>
#include <memory>
#include <stdexcept>

namespace serval {

namespace {

CertifiedSeries one_series() {
  return CertifiedSeries(
      SeriesPoly::monomial(FieldElem::one(), 0, 1),
      std::make_shared<ZeroTail>());
}

}  // namespace

LocalFraction::LocalFraction(CertifiedSeries num, FieldElem den_r,
                             CertifiedSeries den_u)
    : num_(std::move(num)), den_r_(std::move(den_r)), den_u_(std::move(den_u)) {
  if (den_r_.is_zero())
    throw std::invalid_argument("fraction with zero scalar denominator");
  if (!is_unit_denominator(den_u_))
    throw std::invalid_argument("series denominator must have limit value 0");
}

LocalFraction::LocalFraction(CertifiedSeries num)
    : LocalFraction(std::move(num), FieldElem::one(), one_series()) {}

bool LocalFraction::in_T() const {
  return den_r_.val() == ExtScalar(GroupScalar());
}

std::string LocalFraction::str() const {
  std::string out = "(";
  out += v_zero(num_).str();
  out += " over ";
  out += den_r_.str();
  out += " * unit)";
  return out;
}

ExtScalar val_fraction(const LocalFraction& x) {
  ExtScalar top = v_zero(x.num());
  if (top.is_infinite()) return top;
  return ExtScalar(top.finite() - x.den_r().val().finite());
}

std::pair<ExtScalar, ExtScalar> val_fraction_bounds(const SeriesPoly& num,
                                                    const FieldElem& den_r) {
  if (den_r.is_zero())
    throw std::invalid_argument("fraction with zero scalar denominator");
  auto [lo, hi] = v_zero_bounds(num);
  const GroupScalar d = den_r.val().finite();
  if (lo.is_finite()) lo = ExtScalar(lo.finite() - d);
  if (hi.is_finite()) hi = ExtScalar(hi.finite() - d);
  return {lo, hi};
}

bool is_unit_denominator(const CertifiedSeries& u) {
  return v_zero(u) == ExtScalar(GroupScalar());
}

namespace {

// whether some coefficient value equals the limit value alpha
bool attains(const CertifiedSeries& f, const GroupScalar& alpha) {
  for (std::int64_t n = 0; n < f.prefix_order(); ++n)
    if (f.coeff_val(n) == ExtScalar(alpha)) return true;
  return f.tail().attains_infimum() && f.tail().infimum() == ExtScalar(alpha);
}

}  // namespace

std::pair<FieldElem, CertifiedSeries> factor_unit(const CertifiedSeries& f,
                                                  ValueGroup g) {
  const ExtScalar a = v_zero(f);
  if (a.is_infinite())
    throw std::invalid_argument("cannot factor the zero series");
  const GroupScalar alpha = a.finite();
  if (!alpha.in_group(g))
    throw std::invalid_argument(
        "limit value outside the value group; use unitizer");
  if (!attains(f, alpha))
    throw std::invalid_argument(
        "limit value is a proper infimum; use unitizer");
  FieldElem r = FieldElem::monomial(alpha);
  CertifiedSeries u = f.scaled(r.inv());
  assert(is_unit_denominator(u));
  return {std::move(r), std::move(u)};
}

CertifiedSeries unitizer(const CertifiedSeries& f, const GroupScalar& beta,
                         ValueGroup g) {
  const ExtScalar a = v_zero(f);
  if (a.is_infinite())
    throw std::invalid_argument("cannot unitize the zero series");
  const GroupScalar alpha = a.finite();
  if (alpha.in_group(g))
    throw std::invalid_argument(
        "limit value already in the group; use factor_unit");
  if (!beta.in_group(g)) throw std::invalid_argument("beta outside the group");
  if (!(alpha < beta)) throw std::invalid_argument("beta must exceed alpha");
  // beta - alpha is again outside the group, so the canonical descent toward
  // it exists; its exponents become the coefficients
  auto seq = std::make_shared<DescentSequence>(beta - alpha, g);
  return CertifiedSeries(SeriesPoly(0), std::make_shared<DescentTail>(seq, 0));
}

CertifiedSeries unitizer(const CertifiedSeries& f, ValueGroup g) {
  const ExtScalar a = v_zero(f);
  if (a.is_infinite())
    throw std::invalid_argument("cannot unitize the zero series");
  const GroupScalar alpha = a.finite();
  return unitizer(f, find_in_interval(alpha, alpha + GroupScalar(Rat(1)), g),
                  g);
}

SeriesPoly pure_divide(const FieldElem& a, const SeriesPoly& f,
                       const SeriesPoly& g, const CertifiedSeries& u) {
  if (a.is_zero()) throw std::invalid_argument("division by zero scalar");
  if (!a.in_valuation_ring())
    throw std::invalid_argument("divisor must lie in R");
  const std::int64_t n = std::min(f.order(), g.order());
  if (!(g.truncated(n).scaled(a) == f.truncated(n) * u.truncated(n)))
    throw std::invalid_argument("membership witness identity fails");
  std::vector<FieldElem> coeffs;
  coeffs.reserve(static_cast<size_t>(f.order()));
  for (std::int64_t i = 0; i < f.order(); ++i)
    coeffs.push_back(f.coeff(i).is_zero() ? FieldElem()
                                          : divide_in_R(a, f.coeff(i)));
  return SeriesPoly(std::move(coeffs));
}

}  // namespace serval
