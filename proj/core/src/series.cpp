#include "serval/series.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace serval {

namespace {

GroupScalar times_index(const GroupScalar& s, std::int64_t n) {
  return Rat(static_cast<long>(n)) * s;
}

[[noreturn]] void parse_fail(std::string_view what, std::string_view text) {
  throw std::invalid_argument(std::string(what) + ": \"" + std::string(text) + "\"");
}

}  // namespace

SeriesPoly::SeriesPoly(std::int64_t order) {
  if (order < 0) throw std::invalid_argument("negative series order");
  coeffs_.resize(static_cast<size_t>(order));
}

SeriesPoly::SeriesPoly(std::vector<FieldElem> coeffs) : coeffs_(std::move(coeffs)) {}

SeriesPoly SeriesPoly::monomial(const FieldElem& c, std::int64_t n,
                                std::int64_t order) {
  if (n < 0 || n >= order) throw std::invalid_argument("monomial index outside order");
  SeriesPoly f(order);
  f.coeffs_[static_cast<size_t>(n)] = c;
  return f;
}

const FieldElem& SeriesPoly::coeff(std::int64_t n) const {
  if (n < 0 || n >= order()) throw std::out_of_range("coefficient index");
  return coeffs_[static_cast<size_t>(n)];
}

std::optional<std::int64_t> SeriesPoly::first_nonzero() const {
  for (std::int64_t n = 0; n < order(); ++n)
    if (!coeffs_[static_cast<size_t>(n)].is_zero()) return n;
  return std::nullopt;
}

bool SeriesPoly::coeffs_in_R() const {
  for (const FieldElem& c : coeffs_)
    if (!c.in_valuation_ring()) return false;
  return true;
}

SeriesPoly SeriesPoly::operator+(const SeriesPoly& o) const {
  const std::int64_t n = std::min(order(), o.order());
  SeriesPoly out(n);
  for (std::int64_t i = 0; i < n; ++i)
    out.coeffs_[static_cast<size_t>(i)] = coeff(i) + o.coeff(i);
  return out;
}

SeriesPoly SeriesPoly::operator-(const SeriesPoly& o) const {
  const std::int64_t n = std::min(order(), o.order());
  SeriesPoly out(n);
  for (std::int64_t i = 0; i < n; ++i)
    out.coeffs_[static_cast<size_t>(i)] = coeff(i) - o.coeff(i);
  return out;
}

SeriesPoly SeriesPoly::operator*(const SeriesPoly& o) const {
  const std::int64_t n = std::min(order(), o.order());
  SeriesPoly out(n);
  for (std::int64_t k = 0; k < n; ++k) {
    FieldElem acc;
    for (std::int64_t i = 0; i <= k; ++i)
      acc = acc + coeff(i) * o.coeff(k - i);
    out.coeffs_[static_cast<size_t>(k)] = acc;
  }
  return out;
}

SeriesPoly SeriesPoly::scaled(const FieldElem& c) const {
  SeriesPoly out(order());
  for (std::int64_t i = 0; i < order(); ++i)
    out.coeffs_[static_cast<size_t>(i)] = coeff(i) * c;
  return out;
}

SeriesPoly SeriesPoly::shifted_by_x(std::int64_t j) const {
  if (j < 0) throw std::invalid_argument("negative X shift");
  SeriesPoly out(order() + j);
  for (std::int64_t i = 0; i < order(); ++i)
    out.coeffs_[static_cast<size_t>(i + j)] = coeff(i);
  return out;
}

SeriesPoly SeriesPoly::truncated(std::int64_t order) const {
  if (order < 0 || order > this->order())
    throw std::invalid_argument("bad truncation order");
  SeriesPoly out(order);
  for (std::int64_t i = 0; i < order; ++i)
    out.coeffs_[static_cast<size_t>(i)] = coeff(i);
  return out;
}

bool SeriesPoly::operator==(const SeriesPoly& o) const {
  if (order() != o.order()) return false;
  for (std::int64_t i = 0; i < order(); ++i)
    if (!(coeff(i) == o.coeff(i))) return false;
  return true;
}

ConstantTail::ConstantTail(GroupScalar gamma) : gamma_(std::move(gamma)) {
  if (gamma_.sign() < 0)
    throw std::invalid_argument("constant tail value below 0 leaves R");
}

FieldElem ConstantTail::coeff_at(std::int64_t) const {
  return FieldElem::monomial(gamma_);
}

std::string ConstantTail::descriptor() const { return "const " + gamma_.str(); }

DescentTail::DescentTail(DescentSequencePtr seq, std::int64_t offset)
    : seq_(std::move(seq)), offset_(offset) {
  if (!seq_) throw std::invalid_argument("null descent sequence");
}

ExtScalar DescentTail::value_at(std::int64_t n) const {
  return ExtScalar(seq_->at(n + offset_));
}

FieldElem DescentTail::coeff_at(std::int64_t n) const {
  return FieldElem::monomial(seq_->at(n + offset_));
}

std::string DescentTail::descriptor() const {
  return "descent " + seq_->target().str() + " offset " +
         std::to_string(offset_);
}

ScaledTail::ScaledTail(TailRulePtr base, FieldElem factor,
                       std::int64_t index_shift)
    : base_(std::move(base)), factor_(std::move(factor)),
      index_shift_(index_shift) {
  if (!base_) throw std::invalid_argument("null base tail");
  if (factor_.is_zero())
    throw std::invalid_argument("zero factor; use the zero tail instead");
}

ExtScalar ScaledTail::value_at(std::int64_t n) const {
  return base_->value_at(n - index_shift_) + factor_.val();
}

FieldElem ScaledTail::coeff_at(std::int64_t n) const {
  return base_->coeff_at(n - index_shift_) * factor_;
}

ExtScalar ScaledTail::infimum() const { return base_->infimum() + factor_.val(); }

std::string ScaledTail::descriptor() const {
  return "scaled [" + factor_.str() + "] xshift " +
         std::to_string(index_shift_) + " of " + base_->descriptor();
}

std::string tail_descriptor(const TailRule& t) { return t.descriptor(); }

TailRulePtr parse_tail(std::string_view text, ValueGroup g) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text == "zero") return std::make_shared<ZeroTail>();
  if (text.starts_with("const "))
    return std::make_shared<ConstantTail>(GroupScalar::parse(text.substr(6)));
  if (text.starts_with("descent ")) {
    const auto off = text.rfind(" offset ");
    if (off == std::string_view::npos) parse_fail("bad descent tail", text);
    GroupScalar target = GroupScalar::parse(text.substr(8, off - 8));
    std::int64_t offset = std::stoll(std::string(text.substr(off + 8)));
    return std::make_shared<DescentTail>(
        std::make_shared<DescentSequence>(std::move(target), g), offset);
  }
  if (text.starts_with("scaled [")) {
    // factor is bracketed; find its matching close bracket
    const auto close = text.find("] xshift ");
    if (close == std::string_view::npos) parse_fail("bad scaled tail", text);
    FieldElem factor = FieldElem::parse(text.substr(8, close - 8));
    std::string_view rest = text.substr(close + 9);
    const auto of = rest.find(" of ");
    if (of == std::string_view::npos) parse_fail("bad scaled tail", text);
    std::int64_t shift = std::stoll(std::string(rest.substr(0, of)));
    TailRulePtr base = parse_tail(rest.substr(of + 4), g);
    return std::make_shared<ScaledTail>(std::move(base), std::move(factor), shift);
  }
  parse_fail("unknown tail rule", text);
}

CertifiedSeries::CertifiedSeries(SeriesPoly prefix, TailRulePtr tail)
    : prefix_(std::move(prefix)), tail_(std::move(tail)) {
  if (!tail_) throw std::invalid_argument("null tail rule");
  if (!prefix_.coeffs_in_R())
    throw std::invalid_argument("certified prefix must lie in R");
  // spot check the contract: tail values sit in R, match their coefficients,
  // never undercut the stated infimum, and do not increase
  const std::int64_t n0 = prefix_.order();
  ExtScalar prev = ExtScalar::infinity();
  for (std::int64_t n = n0; n < n0 + 4; ++n) {
    const ExtScalar v = tail_->value_at(n);
    if (v > prev) throw std::invalid_argument("tail values must not increase");
    if (v < tail_->infimum()) throw std::invalid_argument("tail undercuts infimum");
    if (v.is_finite() && v.finite().sign() < 0)
      throw std::invalid_argument("tail leaves R");
    if (!(tail_->coeff_at(n).val() == v))
      throw std::invalid_argument("tail coefficient does not match value");
    prev = v;
  }
}

FieldElem CertifiedSeries::coeff(std::int64_t n) const {
  if (n < 0) throw std::out_of_range("coefficient index");
  if (n < prefix_.order()) return prefix_.coeff(n);
  return tail_->coeff_at(n);
}

ExtScalar CertifiedSeries::coeff_val(std::int64_t n) const {
  if (n < 0) throw std::out_of_range("coefficient index");
  if (n < prefix_.order()) return prefix_.coeff(n).val();
  return tail_->value_at(n);
}

bool CertifiedSeries::is_zero() const {
  return prefix_.is_zero_view() && dynamic_cast<const ZeroTail*>(tail_.get());
}

SeriesPoly CertifiedSeries::truncated(std::int64_t order) const {
  std::vector<FieldElem> coeffs;
  coeffs.reserve(static_cast<size_t>(order));
  for (std::int64_t n = 0; n < order; ++n) coeffs.push_back(coeff(n));
  return SeriesPoly(std::move(coeffs));
}

CertifiedSeries CertifiedSeries::scaled(const FieldElem& c) const {
  if (c.is_zero())
    return CertifiedSeries(SeriesPoly(prefix_.order()), std::make_shared<ZeroTail>());
  TailRulePtr tail = dynamic_cast<const ZeroTail*>(tail_.get())
                         ? tail_
                         : std::make_shared<ScaledTail>(tail_, c, 0);
  return CertifiedSeries(prefix_.scaled(c), std::move(tail));
}

CertifiedSeries CertifiedSeries::shifted_by_x(std::int64_t j) const {
  if (j < 0) throw std::invalid_argument("negative X shift");
  if (j == 0) return *this;
  TailRulePtr tail = dynamic_cast<const ZeroTail*>(tail_.get())
                         ? tail_
                         : std::make_shared<ScaledTail>(tail_, FieldElem::one(), j);
  return CertifiedSeries(prefix_.shifted_by_x(j), std::move(tail));
}

namespace {

bool tail_is_zero(const CertifiedSeries& f) {
  return dynamic_cast<const ZeroTail*>(&f.tail()) != nullptr;
}

// index of the only nonzero prefix coefficient of a zero-tailed series
std::optional<std::int64_t> monomial_index(const CertifiedSeries& f) {
  if (!tail_is_zero(f)) return std::nullopt;
  std::optional<std::int64_t> at;
  for (std::int64_t n = 0; n < f.prefix_order(); ++n) {
    if (f.prefix().coeff(n).is_zero()) continue;
    if (at) return std::nullopt;
    at = n;
  }
  return at;
}

}  // namespace

CertifiedSeries mul_certified(const CertifiedSeries& a,
                              const CertifiedSeries& b) {
  if (a.is_zero() || b.is_zero())
    return CertifiedSeries(SeriesPoly(0), std::make_shared<ZeroTail>());
  if (auto j = monomial_index(a))
    return b.scaled(a.prefix().coeff(*j)).shifted_by_x(*j);
  if (auto j = monomial_index(b))
    return a.scaled(b.prefix().coeff(*j)).shifted_by_x(*j);
  if (tail_is_zero(a) && tail_is_zero(b)) {
    const std::int64_t n = a.prefix_order() + b.prefix_order() - 1;
    SeriesPoly prod = a.truncated(n) * b.truncated(n);
    return CertifiedSeries(std::move(prod), std::make_shared<ZeroTail>());
  }
  throw std::invalid_argument("series product has no closed tail form");
}

namespace {

// first k with v_m < (k - m) * lambda; indices >= k cannot reach the minimum
Int window_bound(std::int64_t m, const GroupScalar& vm, const GroupScalar& lambda) {
  return Int(m) + (vm / lambda).floor() + 1;
}

std::int64_t clamp_window(const Int& k) {
  return k.fits_slong_p() ? static_cast<std::int64_t>(k.get_si())
                          : std::numeric_limits<std::int64_t>::max();
}

struct RunningMin {
  ExtScalar best = ExtScalar::infinity();
  std::vector<std::int64_t> argmin;

  void feed(std::int64_t n, const ExtScalar& v, const GroupScalar& lambda) {
    if (v.is_infinite()) return;
    const ExtScalar term = ExtScalar(v.finite() + times_index(lambda, n));
    if (term < best) {
      best = term;
      argmin.assign(1, n);
    } else if (term == best) {
      argmin.push_back(n);
    }
  }
};

}  // namespace

VLambdaResult v_lambda(const SeriesPoly& f, const GroupScalar& lambda) {
  if (lambda.sign() <= 0) throw std::invalid_argument("lambda must be positive");
  if (!f.coeffs_in_R()) throw std::domain_error("series not over R");
  const GroupScalar bound = times_index(lambda, f.order());
  const auto m = f.first_nonzero();
  if (!m)  // nothing seen: only the trivial lower bound survives
    return {ExtScalar(bound), {}, false, 0};
  const GroupScalar vm = f.coeff(*m).val().finite();
  const Int k = window_bound(*m, vm, lambda);
  const std::int64_t scan_end = std::min(f.order(), clamp_window(k));
  RunningMin run;
  for (std::int64_t n = *m; n < scan_end; ++n)
    run.feed(n, f.coeff(n).val(), lambda);
  VLambdaResult out{run.best, std::move(run.argmin), true, clamp_window(k)};
  if (k > f.order() && !(out.value <= ExtScalar(bound))) {
    // window runs past the truncation and the witnessed minimum does not
    // beat what the unseen range could still contribute
    out.value = ExtScalar(bound);
    out.argmin.clear();
    out.exact = false;
  }
  return out;
}

VLambdaResult v_lambda(const CertifiedSeries& f, const GroupScalar& lambda) {
  if (lambda.sign() <= 0) throw std::invalid_argument("lambda must be positive");
  const std::int64_t n0 = f.prefix_order();
  const bool zero_tail = dynamic_cast<const ZeroTail*>(&f.tail()) != nullptr;
  std::int64_t m;
  if (const auto pm = f.prefix().first_nonzero(); pm.has_value()) {
    m = *pm;
  } else if (zero_tail) {
    return {ExtScalar::infinity(), {}, true, 0};
  } else {
    m = n0;  // nonzero tails have no zero coefficients
  }
  const GroupScalar vm = f.coeff_val(m).finite();
  const Int k = window_bound(m, vm, lambda);
  const ExtScalar inf = f.tail().infimum();
  const bool attains = f.tail().attains_infimum();
  RunningMin run;
  for (Int n = m; n < k; ++n) {
    const std::int64_t ni = static_cast<std::int64_t>(n.get_si());
    if (ni >= n0) {
      if (zero_tail) break;
      // remaining tail terms are bounded below by inf + lambda*n, strictly
      // unless the infimum is attained
      const ExtScalar floor_bound = inf + ExtScalar(times_index(lambda, ni));
      if (attains ? floor_bound > run.best : floor_bound >= run.best) break;
    }
    run.feed(ni, f.coeff_val(ni), lambda);
  }
  return {run.best, std::move(run.argmin), true, clamp_window(k)};
}

ExtScalar v_zero(const CertifiedSeries& f) {
  ExtScalar out = f.tail().infimum();
  for (std::int64_t n = 0; n < f.prefix_order(); ++n)
    out = min(out, f.coeff_val(n));
  return out;
}

std::pair<ExtScalar, ExtScalar> v_zero_bounds(const SeriesPoly& f) {
  if (!f.coeffs_in_R()) throw std::domain_error("series not over R");
  ExtScalar upper = ExtScalar::infinity();
  for (std::int64_t n = 0; n < f.order(); ++n)
    upper = min(upper, f.coeff(n).val());
  // the unseen coefficients can push the infimum anywhere down to 0
  return {min(upper, ExtScalar(GroupScalar())), upper};
}

NewtonPolygon build_polygon(std::vector<NewtonPolygon::Vertex> pts,
                            std::int64_t depth, ExtScalar tail_bound) {
  // pts arrive sorted by n with finite values
  NewtonPolygon poly;
  poly.depth_ = depth;
  poly.tail_bound_ = std::move(tail_bound);

  // only strictly descending record values can carry the minimum for some
  // lambda > 0 (and the flat at lambda = 0 keeps its leftmost point)
  std::vector<NewtonPolygon::Vertex> desc;
  for (auto& p : pts) {
    if (desc.empty() || p.v < desc.back().v) desc.push_back(std::move(p));
  }
  // lower convex hull: drop middle points on or above the chord
  std::vector<NewtonPolygon::Vertex> hull;
  for (auto& p : desc) {
    while (hull.size() >= 2) {
      const auto& p1 = hull[hull.size() - 2];
      const auto& p2 = hull[hull.size() - 1];
      const GroupScalar lhs =
          (p2.v - p1.v) * GroupScalar(Rat(static_cast<long>(p.n - p1.n)));
      const GroupScalar rhs =
          (p.v - p1.v) * GroupScalar(Rat(static_cast<long>(p2.n - p1.n)));
      if (lhs < rhs) break;  // p2 strictly below the chord: keep
      hull.pop_back();
    }
    hull.push_back(std::move(p));
  }
  poly.verts_ = std::move(hull);

  if (poly.tail_bound_.is_infinite()) {
    poly.exact_from_ = GroupScalar();
    poly.exact_at_zero_ = true;
    return poly;
  }
  // eval is exact once some vertex term stays at or below the tail floor
  // inf + lambda*depth, i.e. lambda >= (v - inf) / (depth - n) for some n
  const GroupScalar& ell = poly.tail_bound_.finite();
  std::optional<GroupScalar> from;
  for (const auto& vert : poly.verts_) {
    GroupScalar cand;
    if (!(vert.v <= ell)) {
      cand = (vert.v - ell) /
             GroupScalar(Rat(static_cast<long>(depth - vert.n)));
    }
    if (!from || cand < *from) from = cand;
  }
  poly.exact_from_ = *from;
  poly.exact_at_zero_ = poly.exact_from_.is_zero();
  return poly;
}

GroupScalar NewtonPolygon::eval(const GroupScalar& lambda) const {
  if (lambda.sign() < 0) throw std::invalid_argument("negative lambda");
  std::optional<GroupScalar> best;
  for (const auto& vert : verts_) {
    GroupScalar term = vert.v + times_index(lambda, vert.n);
    if (!best || term < *best) best = std::move(term);
  }
  if (!best) throw std::domain_error("empty polygon");
  return *best;
}

bool NewtonPolygon::exact_at(const GroupScalar& lambda) const {
  if (lambda.sign() < 0) throw std::invalid_argument("negative lambda");
  if (lambda.is_zero()) return exact_at_zero_;
  return lambda >= exact_from_;
}

std::vector<std::pair<GroupScalar, GroupScalar>> NewtonPolygon::breakpoints()
    const {
  std::vector<std::pair<GroupScalar, GroupScalar>> out;
  for (size_t i = verts_.size(); i >= 2; --i) {
    const auto& a = verts_[i - 2];
    const auto& b = verts_[i - 1];
    GroupScalar lam =
        (a.v - b.v) / GroupScalar(Rat(static_cast<long>(b.n - a.n)));
    out.emplace_back(lam, a.v + times_index(lam, a.n));
  }
  return out;
}

NewtonPolygon newton_polygon(const SeriesPoly& f) {
  if (!f.coeffs_in_R()) throw std::domain_error("series not over R");
  std::vector<NewtonPolygon::Vertex> pts;
  for (std::int64_t n = 0; n < f.order(); ++n)
    if (!f.coeff(n).is_zero())
      pts.push_back({n, f.coeff(n).val().finite()});
  if (pts.empty()) throw std::domain_error("no known support");
  // beyond the truncation nothing is known except membership in R
  return build_polygon(std::move(pts), f.order(), ExtScalar(GroupScalar()));
}

NewtonPolygon newton_polygon(const CertifiedSeries& f, std::int64_t depth) {
  if (depth <= 0) depth = f.prefix_order() + 16;
  if (depth < f.prefix_order()) throw std::invalid_argument("depth below prefix");
  const bool zero_tail = dynamic_cast<const ZeroTail*>(&f.tail()) != nullptr;
  std::vector<NewtonPolygon::Vertex> pts;
  for (std::int64_t n = 0; n < (zero_tail ? f.prefix_order() : depth); ++n) {
    const ExtScalar v = f.coeff_val(n);
    if (v.is_finite()) pts.push_back({n, v.finite()});
  }
  if (pts.empty()) throw std::domain_error("no known support");
  return build_polygon(std::move(pts), depth,
                       zero_tail ? ExtScalar::infinity() : f.tail().infimum());
}

FiltrationReport check_filtration_axioms(const SeriesPoly& f,
                                         const SeriesPoly& g,
                                         const GroupScalar& lambda) {
  FiltrationReport rep;
  rep.f = v_lambda(f, lambda);
  rep.g = v_lambda(g, lambda);
  rep.sum = v_lambda(f + g, lambda);
  rep.prod = v_lambda(f * g, lambda);
  rep.conclusive = rep.f.exact && rep.g.exact && rep.sum.exact && rep.prod.exact;
  if (rep.conclusive) {
    rep.superadditive_ok = rep.sum.value >= min(rep.f.value, rep.g.value);
    rep.multiplicative_ok = rep.prod.value == rep.f.value + rep.g.value;
  }
  return rep;
}

GroupScalar continuity_lambda(const CertifiedSeries& f, const GroupScalar& eps) {
  if (eps.sign() <= 0) throw std::invalid_argument("eps must be positive");
  const ExtScalar alpha_ext = v_zero(f);
  if (alpha_ext.is_infinite())
    throw std::domain_error("zero series has no continuity certificate");
  const GroupScalar alpha = alpha_ext.finite();
  const GroupScalar cutoff = alpha + eps;
  const ExtScalar v0 = f.coeff_val(0);
  if (v0.is_finite() && v0.finite() < cutoff)
    return GroupScalar(Rat(1));  // the constant term already settles every lambda
  constexpr std::int64_t kScanCap = 1 << 20;
  for (std::int64_t n = 1; n < kScanCap; ++n) {
    const ExtScalar v = f.coeff_val(n);
    if (v.is_finite() && v.finite() < cutoff) {
      // halving the slack keeps the certificate strictly inside the bound
      return (eps + alpha - v.finite()) /
             GroupScalar(Rat(2 * static_cast<long>(n)));
    }
  }
  throw std::logic_error("no coefficient near the infimum within scan cap");
}

namespace {

template <typename Series>
std::vector<ChiRow> chi_grid_impl(const Series& f, const GroupScalar& lambda0,
                                  std::int64_t count) {
  if (lambda0.sign() <= 0)
    throw std::invalid_argument("lambda0 must be positive");
  if (count < 1) throw std::invalid_argument("grid needs at least one point");
  std::vector<ChiRow> rows;
  rows.reserve(static_cast<size_t>(count));
  const GroupScalar half(Rat(1, 2));
  GroupScalar lambda = lambda0;
  for (std::int64_t k = 0; k < count; ++k) {
    rows.push_back({lambda, v_lambda(f, lambda)});
    lambda = lambda * half;
  }
  return rows;
}

}  // namespace

std::vector<ChiRow> chi_grid(const CertifiedSeries& f,
                             const GroupScalar& lambda0, std::int64_t count) {
  return chi_grid_impl(f, lambda0, count);
}

std::vector<ChiRow> chi_grid(const SeriesPoly& f, const GroupScalar& lambda0,
                             std::int64_t count) {
  return chi_grid_impl(f, lambda0, count);
}

std::string chi_csv(const std::vector<ChiRow>& rows) {
  for (size_t i = 1; i < rows.size(); ++i)
    if (rows[i].result.value > rows[i - 1].result.value)
      throw std::logic_error("chi rows must be nonincreasing down the grid");
  std::ostringstream out;
  out << "lambda,chi_value,exact,argmin\n";
  for (const ChiRow& row : rows) {
    out << row.lambda.str() << ',' << row.result.value.str() << ','
        << (row.result.exact ? '1' : '0') << ',';
    for (size_t i = 0; i < row.result.argmin.size(); ++i)
      out << (i ? ";" : "") << row.result.argmin[i];
    out << '\n';
  }
  return out.str();
}

}  // namespace serval
