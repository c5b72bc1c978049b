#include "serval/incoherence.hpp"

#include <memory>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace serval {

void IncoherenceConfig::validate() const {
  if (alpha.sign() < 0) throw std::invalid_argument("alpha must be >= 0");
  if (alpha.in_group(group))
    throw std::invalid_argument("alpha must lie outside the value group");
  if (seq_len < 1) throw std::invalid_argument("seq_len must be >= 1");
  if (order < 1) throw std::invalid_argument("order must be >= 1");
  if (r.is_zero()) throw std::invalid_argument("r must be nonzero");
  const GroupScalar vr = r.val().finite();
  if (!vr.in_group(group))
    throw std::invalid_argument("val(r) must lie in the value group");
  if (!(alpha < vr)) throw std::invalid_argument("val(r) must exceed alpha");
}

CriticalIdeal critical_ideal(const IncoherenceConfig& cfg) {
  cfg.validate();
  return {cfg.r.val().finite() - cfg.alpha};
}

CertifiedSeries build_witness_series(const IncoherenceConfig& cfg) {
  cfg.validate();
  auto seq = std::make_shared<DescentSequence>(cfg.alpha, cfg.group);
  std::vector<FieldElem> coeffs;
  coeffs.reserve(static_cast<size_t>(cfg.seq_len));
  for (std::int64_t n = 0; n < cfg.seq_len; ++n)
    coeffs.push_back(FieldElem::monomial(seq->at(n)));
  return CertifiedSeries(SeriesPoly(std::move(coeffs)),
                         std::make_shared<DescentTail>(seq, 0));
}

bool in_critical_ideal(const CertifiedSeries& g, const CriticalIdeal& ideal) {
  return !(v_zero(g) < ExtScalar(ideal.threshold));
}

IntersectionResult intersection_membership(const CertifiedSeries& g,
                                           const IncoherenceConfig& cfg,
                                           const CertifiedSeries& f) {
  const CriticalIdeal ideal = critical_ideal(cfg);
  const SeriesPoly prod = g.truncated(cfg.order) * f.truncated(cfg.order);
  IntersectionResult res;
  if (in_critical_ideal(g, ideal)) {
    // every coefficient of g*f has value at least val(r); divide through
    std::vector<FieldElem> y;
    y.reserve(static_cast<size_t>(cfg.order));
    for (std::int64_t i = 0; i < cfg.order; ++i)
      y.push_back(prod.coeff(i).is_zero() ? FieldElem()
                                          : divide_in_R(cfg.r, prod.coeff(i)));
    res.kind = IntersectionResult::Kind::cofactor;
    res.y = SeriesPoly(std::move(y));
    return res;
  }
  for (std::int64_t i = 0; i < cfg.order; ++i) {
    if (prod.coeff(i).val() < cfg.r.val()) {
      res.kind = IntersectionResult::Kind::refusal;
      res.low_index = i;
      res.low_value = prod.coeff(i).val();
      return res;
    }
  }
  res.kind = IntersectionResult::Kind::inconclusive;  // raise cfg.order
  return res;
}

namespace {

CertifiedSeries constant_series(const FieldElem& c) {
  return CertifiedSeries(SeriesPoly::monomial(c, 0, 1),
                         std::make_shared<ZeroTail>());
}

ExtScalar least_constant_value(const std::vector<CertifiedSeries>& cands) {
  ExtScalar beta = ExtScalar::infinity();
  for (const CertifiedSeries& g : cands) beta = min(beta, g.coeff_val(0));
  return beta;
}

}  // namespace

WitnessReport refute_generators(const std::vector<CertifiedSeries>& cands,
                                const IncoherenceConfig& cfg,
                                const CriticalIdeal& ideal) {
  if (critical_ideal(cfg).threshold != ideal.threshold)
    throw std::invalid_argument("ideal does not match the config");
  for (const CertifiedSeries& g : cands)
    if (!in_critical_ideal(g, ideal))
      throw std::invalid_argument("candidate outside the critical ideal");

  WitnessReport rep;
  rep.group = cfg.group;
  rep.threshold = ideal.threshold;
  rep.candidates = cands;
  rep.beta = least_constant_value(cands);

  // constant coefficients of ideal members have group values above the
  // irrational threshold, so the search interval is never empty
  GroupScalar upper = ideal.threshold + GroupScalar(Rat(1));
  if (rep.beta.is_finite() && rep.beta.finite() < upper)
    upper = rep.beta.finite();
  rep.gamma = find_in_interval(ideal.threshold, upper, cfg.group);
  rep.t = element_with_value(rep.gamma);

  rep.t_in_ideal = in_critical_ideal(constant_series(rep.t), ideal);
  rep.beta_above_gamma = ExtScalar(rep.gamma) < rep.beta;
  rep.gamma_above_threshold = ideal.threshold < rep.gamma;
  return rep;
}

bool verify_report(const WitnessReport& rep, const IncoherenceConfig& cfg,
                   std::string* why) {
  auto fail = [&](const char* step) {
    if (why) *why = step;
    return false;
  };
  try {
    cfg.validate();
  } catch (const std::invalid_argument&) {
    return fail("config invalid");
  }
  if (rep.group != cfg.group) return fail("group mismatch");
  const GroupScalar threshold = cfg.r.val().finite() - cfg.alpha;
  if (rep.threshold != threshold) return fail("threshold mismatch");
  if (threshold.in_group(cfg.group))
    return fail("threshold unexpectedly in the group");
  const CriticalIdeal ideal{threshold};
  for (size_t i = 0; i < rep.candidates.size(); ++i)
    if (!in_critical_ideal(rep.candidates[i], ideal))
      return fail("candidate outside the ideal");
  if (least_constant_value(rep.candidates) != rep.beta)
    return fail("beta mismatch");
  if (rep.t.is_zero() || rep.t.val() != ExtScalar(rep.gamma))
    return fail("gamma is not the value of t");
  if (!rep.gamma.in_group(cfg.group)) return fail("gamma outside the group");
  if (!rep.gamma_above_threshold || !(threshold < rep.gamma))
    return fail("gamma not strictly above the threshold");
  if (!rep.t_in_ideal || !in_critical_ideal(constant_series(rep.t), ideal))
    return fail("t outside the ideal");
  if (!rep.beta_above_gamma || !(ExtScalar(rep.gamma) < rep.beta))
    return fail("beta not strictly above gamma");
  return true;
}

namespace {

constexpr char kPass[] = "pass";

std::string_view line_value(std::string_view line, std::string_view key) {
  if (line.substr(0, key.size()) != key) return {};
  std::string_view rest = line.substr(key.size());
  if (rest.empty() || rest.front() != ':') return {};
  rest.remove_prefix(1);
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  return rest;
}

}  // namespace

std::string serialize_report(const WitnessReport& rep) {
  std::ostringstream out;
  out << "group: " << group_name(rep.group) << "\n";
  out << "threshold: " << rep.threshold.str() << "\n";
  out << "beta: " << rep.beta.str() << "\n";
  out << "t: " << rep.t.str() << "\n";
  out << "gamma: " << rep.gamma.str() << "\n";
  out << "check t_in_ideal: " << (rep.t_in_ideal ? "pass" : "fail") << "\n";
  out << "check beta_above_gamma: "
      << (rep.beta_above_gamma ? "pass" : "fail") << "\n";
  out << "check gamma_above_threshold: "
      << (rep.gamma_above_threshold ? "pass" : "fail") << "\n";
  out << "candidates: " << rep.candidates.size() << "\n";
  for (size_t i = 0; i < rep.candidates.size(); ++i) {
    const CertifiedSeries& g = rep.candidates[i];
    out << "candidate " << i << " prefix:";
    for (std::int64_t n = 0; n < g.prefix_order(); ++n)
      out << (n ? " ; " : " ") << g.prefix().coeff(n).str();
    out << "\n";
    out << "candidate " << i << " tail: " << g.tail().descriptor() << "\n";
  }
  return out.str();
}

WitnessReport parse_report(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  auto next = [&](std::string_view key) -> std::string {
    if (!std::getline(in, line))
      throw std::invalid_argument("report truncated before " +
                                  std::string(key));
    std::string_view v = line_value(line, key);
    if (v.data() == nullptr)
      throw std::invalid_argument("expected report key " + std::string(key));
    return std::string(v);
  };
  WitnessReport rep;
  rep.group = parse_group(next("group"));
  rep.threshold = GroupScalar::parse(next("threshold"));
  rep.beta = ExtScalar::parse(next("beta"));
  rep.t = FieldElem::parse(next("t"));
  rep.gamma = GroupScalar::parse(next("gamma"));
  rep.t_in_ideal = next("check t_in_ideal") == kPass;
  rep.beta_above_gamma = next("check beta_above_gamma") == kPass;
  rep.gamma_above_threshold = next("check gamma_above_threshold") == kPass;
  const long m = std::stol(next("candidates"));
  for (long i = 0; i < m; ++i) {
    std::ostringstream pk, tk;
    pk << "candidate " << i << " prefix";
    tk << "candidate " << i << " tail";
    std::string prefix_text = next(pk.str());
    std::vector<FieldElem> coeffs;
    size_t pos = 0;
    while (pos < prefix_text.size()) {
      size_t cut = prefix_text.find(" ; ", pos);
      std::string_view piece =
          cut == std::string::npos
              ? std::string_view(prefix_text).substr(pos)
              : std::string_view(prefix_text).substr(pos, cut - pos);
      coeffs.push_back(FieldElem::parse(piece));
      pos = cut == std::string::npos ? prefix_text.size() : cut + 3;
    }
    TailRulePtr tail = parse_tail(next(tk.str()), rep.group);
    rep.candidates.emplace_back(SeriesPoly(std::move(coeffs)),
                                std::move(tail));
  }
  return rep;
}

}  // namespace serval
