// Power series over the valuation ring R in two flavours.  A SeriesPoly is a
// truncation: it represents the coset f + X^N R[[X]] and every answer about
// it is either exact or an honest bound, with the flag saying which.  A
// CertifiedSeries carries a tail rule that pins down all coefficients past
// the stored prefix, so the lambda-weighted valuations and the limit
// valuation at lambda -> 0 can be evaluated exactly.
//
// v_lambda uses the finite-window reduction: with m the first nonzero index
// and k minimal with v(r_m) < (k - m) * lambda, the infimum over all n is
// attained inside [m, k).  Certified evaluation additionally stops early
// once the tail bound inf + lambda*n can no longer improve the running
// minimum; for strictly descending tails this keeps the window tiny even at
// small lambda.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "serval/field.hpp"
#include "serval/scalar.hpp"

namespace serval {

// Coefficients r_0 .. r_{N-1} of a representative of f + X^N R[[X]].
class SeriesPoly {
 public:
  explicit SeriesPoly(std::int64_t order);
  explicit SeriesPoly(std::vector<FieldElem> coeffs);

  static SeriesPoly monomial(const FieldElem& c, std::int64_t n,
                             std::int64_t order);

  std::int64_t order() const { return static_cast<std::int64_t>(coeffs_.size()); }
  const FieldElem& coeff(std::int64_t n) const;
  const std::vector<FieldElem>& coeffs() const { return coeffs_; }

  std::optional<std::int64_t> first_nonzero() const;
  bool is_zero_view() const { return !first_nonzero().has_value(); }
  bool coeffs_in_R() const;

  // all operations truncate to the shorter operand; the coset product of
  // representatives is well defined exactly up to that order
  SeriesPoly operator+(const SeriesPoly& o) const;
  SeriesPoly operator-(const SeriesPoly& o) const;
  SeriesPoly operator*(const SeriesPoly& o) const;
  SeriesPoly scaled(const FieldElem& c) const;
  SeriesPoly shifted_by_x(std::int64_t j) const;  // X^j * f, keeps order + j
  SeriesPoly truncated(std::int64_t order) const;

  bool operator==(const SeriesPoly& o) const;  // same order, same coefficients

 private:
  std::vector<FieldElem> coeffs_;
};

// Closed-form description of all coefficients from some index on.  Rules
// report values without materializing coefficients, which is what makes deep
// descent tails affordable; coeff_at realizes the coefficient and always
// matches value_at.
class TailRule {
 public:
  virtual ~TailRule() = default;
  virtual ExtScalar value_at(std::int64_t n) const = 0;
  virtual FieldElem coeff_at(std::int64_t n) const = 0;
  virtual ExtScalar infimum() const = 0;
  // whether some tail coefficient actually has value equal to the infimum
  virtual bool attains_infimum() const = 0;
  virtual std::string descriptor() const = 0;
};

using TailRulePtr = std::shared_ptr<const TailRule>;

class ZeroTail final : public TailRule {
 public:
  ExtScalar value_at(std::int64_t) const override { return ExtScalar::infinity(); }
  FieldElem coeff_at(std::int64_t) const override { return {}; }
  ExtScalar infimum() const override { return ExtScalar::infinity(); }
  bool attains_infimum() const override { return false; }
  std::string descriptor() const override { return "zero"; }
};

// every tail coefficient is t^gamma
class ConstantTail final : public TailRule {
 public:
  explicit ConstantTail(GroupScalar gamma);
  ExtScalar value_at(std::int64_t) const override { return ExtScalar(gamma_); }
  FieldElem coeff_at(std::int64_t) const override;
  ExtScalar infimum() const override { return ExtScalar(gamma_); }
  bool attains_infimum() const override { return true; }
  std::string descriptor() const override;

 private:
  GroupScalar gamma_;
};

// coefficient n is t^seq(n + offset): strictly decreasing values approaching
// the sequence target from above, never reaching it
class DescentTail final : public TailRule {
 public:
  DescentTail(DescentSequencePtr seq, std::int64_t offset);
  ExtScalar value_at(std::int64_t n) const override;
  FieldElem coeff_at(std::int64_t n) const override;
  ExtScalar infimum() const override { return ExtScalar(seq_->target()); }
  bool attains_infimum() const override { return false; }
  std::string descriptor() const override;

  const DescentSequencePtr& sequence() const { return seq_; }
  std::int64_t offset() const { return offset_; }

 private:
  DescentSequencePtr seq_;
  std::int64_t offset_;
};

// factor * base(n - index_shift): how tails transform under multiplication
// by c * X^j
class ScaledTail final : public TailRule {
 public:
  ScaledTail(TailRulePtr base, FieldElem factor, std::int64_t index_shift);
  ExtScalar value_at(std::int64_t n) const override;
  FieldElem coeff_at(std::int64_t n) const override;
  ExtScalar infimum() const override;
  bool attains_infimum() const override { return base_->attains_infimum(); }
  std::string descriptor() const override;

  const TailRulePtr& base() const { return base_; }
  const FieldElem& factor() const { return factor_; }
  std::int64_t index_shift() const { return index_shift_; }

 private:
  TailRulePtr base_;
  FieldElem factor_;
  std::int64_t index_shift_;
};

// round-trip serialization of tail rules; sequences are reconstructed from
// their (target, group) description
std::string tail_descriptor(const TailRule& t);
TailRulePtr parse_tail(std::string_view text, ValueGroup g);

// Fully specified series: explicit prefix below prefix_order, rule-given
// coefficients from prefix_order on.  All coefficients lie in R.
class CertifiedSeries {
 public:
  CertifiedSeries(SeriesPoly prefix, TailRulePtr tail);

  std::int64_t prefix_order() const { return prefix_.order(); }
  const SeriesPoly& prefix() const { return prefix_; }
  const TailRule& tail() const { return *tail_; }
  const TailRulePtr& tail_ptr() const { return tail_; }

  FieldElem coeff(std::int64_t n) const;
  // value of coefficient n without materializing tail coefficients
  ExtScalar coeff_val(std::int64_t n) const;

  bool is_zero() const;
  SeriesPoly truncated(std::int64_t order) const;

  CertifiedSeries scaled(const FieldElem& c) const;       // c nonzero
  CertifiedSeries shifted_by_x(std::int64_t j) const;     // j >= 0

 private:
  SeriesPoly prefix_;
  TailRulePtr tail_;
};

// Product of certified series in the closed-form cases: both tails zero
// (full polynomial convolution) or either factor a single monomial c * X^j
// (the other factor's tail transforms by scale and shift).  Other shapes
// have no rule in the tail algebra and are rejected.
CertifiedSeries mul_certified(const CertifiedSeries& a,
                              const CertifiedSeries& b);

struct VLambdaResult {
  ExtScalar value;
  std::vector<std::int64_t> argmin;  // indices attaining the minimum; empty
                                     // when value is a bound or infinite
  bool exact = false;
  std::int64_t window_end = 0;       // the k of the finite-window rule
};

// Truncated evaluation: exact when the window closes before the truncation
// order or the witnessed minimum beats the unseen range; otherwise the
// result is the lower bound lambda * order with empty argmin.
VLambdaResult v_lambda(const SeriesPoly& f, const GroupScalar& lambda);

// Certified evaluation is always exact.
VLambdaResult v_lambda(const CertifiedSeries& f, const GroupScalar& lambda);

// limit of v_lambda as lambda -> 0+: the infimum of all coefficient values
ExtScalar v_zero(const CertifiedSeries& f);

// for a bare truncation only bounds survive: {lower, upper}
std::pair<ExtScalar, ExtScalar> v_zero_bounds(const SeriesPoly& f);

// Lower convex hull of the known support points (n, v(r_n)): evaluates
// min_n(v(r_n) + lambda n) over the considered range and knows for which
// lambda that equals the value for the full series.
class NewtonPolygon {
 public:
  struct Vertex {
    std::int64_t n;
    GroupScalar v;
  };

  const std::vector<Vertex>& vertices() const { return verts_; }
  std::int64_t depth() const { return depth_; }
  const ExtScalar& tail_bound() const { return tail_bound_; }

  GroupScalar eval(const GroupScalar& lambda) const;  // lambda >= 0
  bool exact_at(const GroupScalar& lambda) const;
  const GroupScalar& exact_from() const { return exact_from_; }
  bool exact_at_zero() const { return exact_at_zero_; }

  // interior vertices (lambda, value) of the piecewise-linear graph of
  // eval, ascending in lambda
  std::vector<std::pair<GroupScalar, GroupScalar>> breakpoints() const;

 private:
  friend NewtonPolygon build_polygon(std::vector<Vertex> pts,
                                     std::int64_t depth, ExtScalar tail_bound);
  std::vector<Vertex> verts_;
  std::int64_t depth_ = 0;
  ExtScalar tail_bound_;
  GroupScalar exact_from_;
  bool exact_at_zero_ = false;
};

// at least one nonzero known coefficient required
NewtonPolygon newton_polygon(const SeriesPoly& f);
NewtonPolygon newton_polygon(const CertifiedSeries& f, std::int64_t depth = 0);

struct FiltrationReport {
  VLambdaResult f, g, sum, prod;
  bool conclusive = false;       // all four evaluations exact
  bool superadditive_ok = false; // v(f+g) >= min(v f, v g)
  bool multiplicative_ok = false;// v(fg) = v f + v g
};

FiltrationReport check_filtration_axioms(const SeriesPoly& f,
                                         const SeriesPoly& g,
                                         const GroupScalar& lambda);

// A lambda' > 0 with chi(lambda') < chi(0) + eps, from the first coefficient
// whose value undercuts chi(0) + eps; requires chi(0) finite and eps > 0.
GroupScalar continuity_lambda(const CertifiedSeries& f, const GroupScalar& eps);

// one sampled point of chi(lambda) = v_lambda(f)
struct ChiRow {
  GroupScalar lambda;
  VLambdaResult result;
};

// chi over the geometric grid lambda_k = lambda0 * 2^-k, k = 0 .. count-1;
// lambda0 > 0, count >= 1
std::vector<ChiRow> chi_grid(const CertifiedSeries& f,
                             const GroupScalar& lambda0, std::int64_t count);
std::vector<ChiRow> chi_grid(const SeriesPoly& f, const GroupScalar& lambda0,
                             std::int64_t count);

// Columns lambda, chi_value, exact, argmin (indices ';'-separated, empty on
// inexact rows), scalars in their textual form.  The value column must be
// nonincreasing down the rows, as any descending grid guarantees; a
// violation means corrupted rows and aborts before anything is emitted.
std::string chi_csv(const std::vector<ChiRow>& rows);

}  // namespace serval
