#include "serval/graded.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>

namespace serval {

GradedPoly::GradedPoly(GroupScalar degree, GroupScalar lambda,
                       std::map<std::int64_t, GradedTerm> terms)
    : degree_(std::move(degree)),
      lambda_(std::move(lambda)),
      terms_(std::move(terms)) {
  for (const auto& [n, term] : terms_) {
    if (sgn(term.coeff) == 0)
      throw std::invalid_argument("graded term with zero coefficient");
    if (term.gamma + Rat(n) * lambda_ != degree_)
      throw std::invalid_argument("graded term off the degree line");
  }
}

bool GradedPoly::operator==(const GradedPoly& o) const {
  return degree_ == o.degree_ && lambda_ == o.lambda_ && terms_ == o.terms_;
}

std::string GradedPoly::str() const {
  std::ostringstream out;
  if (terms_.empty()) out << "0";
  bool first = true;
  for (const auto& [n, term] : terms_) {
    if (!first) out << " + ";
    first = false;
    out << rat_str(term.coeff) << "*t^(" << term.gamma.str() << ")*Y^" << n;
  }
  out << " [deg=" << degree_.str() << ", lambda=" << lambda_.str() << "]";
  return out.str();
}

namespace {

template <typename CoeffAt>
GradedPoly form_from_result(const VLambdaResult& r, const GroupScalar& lambda,
                            CoeffAt&& coeff_at) {
  if (lambda.sign() <= 0)
    throw std::invalid_argument("leading form needs lambda > 0");
  if (!r.exact)
    throw std::invalid_argument("leading form needs an exact evaluation");
  if (r.value.is_infinite())
    throw std::invalid_argument("zero series has no leading form");
  std::map<std::int64_t, GradedTerm> terms;
  for (std::int64_t n : r.argmin) {
    const FieldElem& c = coeff_at(n);
    terms.emplace(n, GradedTerm{c.val().finite(), c.leading_rat()});
  }
  return {r.value.finite(), lambda, std::move(terms)};
}

}  // namespace

GradedPoly leading_form(const SeriesPoly& f, const GroupScalar& lambda) {
  VLambdaResult r = v_lambda(f, lambda);
  // value at exactly lambda * order with the window still open: the value is
  // right, but a coefficient beyond the truncation could tie, so the attaining
  // set is not a coset invariant
  if (r.exact && r.window_end > f.order() &&
      r.value == ExtScalar(Rat(f.order()) * lambda))
    throw std::invalid_argument(
        "truncation too short to pin the leading form");
  return form_from_result(r, lambda, [&](std::int64_t n) -> const FieldElem& {
    return f.coeff(n);
  });
}

GradedPoly leading_form(const CertifiedSeries& f, const GroupScalar& lambda) {
  // coefficients are materialized only at the attaining indices
  std::map<std::int64_t, FieldElem> cache;
  return form_from_result(v_lambda(f, lambda), lambda,
                          [&](std::int64_t n) -> const FieldElem& {
                            auto it = cache.find(n);
                            if (it == cache.end())
                              it = cache.emplace(n, f.coeff(n)).first;
                            return it->second;
                          });
}

GradedPoly graded_mul(const GradedPoly& a, const GradedPoly& b) {
  if (a.lambda() != b.lambda())
    throw std::invalid_argument("graded product across different weights");
  std::map<std::int64_t, Rat> acc;
  for (const auto& [i, ta] : a.terms())
    for (const auto& [j, tb] : b.terms()) acc[i + j] += ta.coeff * tb.coeff;
  const GroupScalar degree = a.degree() + b.degree();
  std::map<std::int64_t, GradedTerm> terms;
  for (const auto& [n, c] : acc) {
    if (sgn(c) == 0) continue;
    terms.emplace(n, GradedTerm{degree - Rat(n) * a.lambda(), c});
  }
  return {degree, a.lambda(), std::move(terms)};
}

}  // namespace serval
