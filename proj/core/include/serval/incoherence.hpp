// The critical ideal machinery, end to end: a witness series whose limit
// value alpha falls outside the value group, the ideal of series with limit
// value at least val(r) - alpha, exact membership decisions for the
// intersection R[[X]]f with R[[X]]r, and a refuter that defeats any finite
// list of candidate generators.  The refutation hinges on one gap: the
// constant coefficients of the candidates have values in the group, their
// minimum beta therefore sits strictly above the irrational threshold, and
// the interval between the two holds a monomial no finite combination can
// reach.  Every produced report carries enough data to replay each
// comparison independently.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "serval/scalar.hpp"
#include "serval/series.hpp"

namespace serval {

// Parameters of one construction instance.  Validation requires alpha >= 0
// outside the group and r a scalar of group value strictly above alpha.
struct IncoherenceConfig {
  ValueGroup group = ValueGroup::rationals;
  GroupScalar alpha;
  std::int64_t seq_len = 4;  // materialized prefix length of the witness
  FieldElem r;
  std::int64_t order = 32;   // truncation order for product identities

  void validate() const;  // throws std::invalid_argument with the violation
};

// series with limit value at least threshold = val(r) - alpha; the
// threshold inherits irrationality from alpha, so no series with attained
// limit value sits exactly on it
struct CriticalIdeal {
  GroupScalar threshold;
};

CriticalIdeal critical_ideal(const IncoherenceConfig& cfg);

// f = sum of t^{alpha_n} X^n along the canonical descent toward alpha:
// prefix of cfg.seq_len materialized coefficients, rule-given beyond
CertifiedSeries build_witness_series(const IncoherenceConfig& cfg);

// exact membership: limit value of g at least the threshold
bool in_critical_ideal(const CertifiedSeries& g, const CriticalIdeal& ideal);

// Outcome of the intersection test for g*f against the ideal generated by
// r.  Membership produces the exact cofactor y with g*f = r*y at the
// truncation order; refusal exhibits a coefficient of g*f below val(r);
// a truncation too short to witness either is reported as such.
struct IntersectionResult {
  enum class Kind { cofactor, refusal, inconclusive };
  Kind kind = Kind::inconclusive;
  SeriesPoly y{0};           // cofactor
  std::int64_t low_index = 0;  // refusal: index with val below val(r)
  ExtScalar low_value;         // refusal: that coefficient's value
};

IntersectionResult intersection_membership(const CertifiedSeries& g,
                                           const IncoherenceConfig& cfg,
                                           const CertifiedSeries& f);

// Self-contained refutation certificate for one candidate list.
struct WitnessReport {
  ValueGroup group = ValueGroup::rationals;
  GroupScalar threshold;
  std::vector<CertifiedSeries> candidates;
  ExtScalar beta;      // least value of a candidate's constant coefficient
  FieldElem t;         // the monomial no combination reaches
  GroupScalar gamma;   // val(t)
  bool t_in_ideal = false;         // gamma > threshold, replayed
  bool beta_above_gamma = false;   // beta > gamma, replayed
  bool gamma_above_threshold = false;
};

// Builds the report: beta from the candidates' constant coefficients, gamma
// by the canonical interval search in (threshold, min(beta, threshold+1)),
// t = t^gamma, all three trail comparisons recorded.  Rejects any candidate
// outside the ideal.
WitnessReport refute_generators(const std::vector<CertifiedSeries>& cands,
                                const IncoherenceConfig& cfg,
                                const CriticalIdeal& ideal);

// Replays every claim of the report against cfg from scratch: threshold
// derivation, candidate memberships, beta, val(t), and the three strict
// comparisons.  On failure names the first failing step in *why.
bool verify_report(const WitnessReport& rep, const IncoherenceConfig& cfg,
                   std::string* why = nullptr);

// key: value text form, deterministic for a given report; parse inverts it
std::string serialize_report(const WitnessReport& rep);
WitnessReport parse_report(std::string_view text);

}  // namespace serval
