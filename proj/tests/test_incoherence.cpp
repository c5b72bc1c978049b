#include "serval/incoherence.hpp"

#include <random>

#include "doctest.h"
#include "oracles.hpp"

using namespace serval;

namespace {

const GroupScalar kAlpha(Rat(-1), Rat(1));  // sqrt2 - 1

Rat frac(long p, long q) {
  Rat r(p, q);
  r.canonicalize();
  return r;
}

IncoherenceConfig base_config(std::int64_t order = 16) {
  IncoherenceConfig cfg;
  cfg.group = ValueGroup::rationals;
  cfg.alpha = kAlpha;
  cfg.seq_len = 3;
  cfg.r = FieldElem::monomial(GroupScalar(Rat(1)));
  cfg.order = order;
  return cfg;
}

CertifiedSeries constant(const FieldElem& c) {
  return CertifiedSeries(SeriesPoly::monomial(c, 0, 1),
                         std::make_shared<ZeroTail>());
}

CertifiedSeries monomial_series(const GroupScalar& gamma, std::int64_t n = 0) {
  return CertifiedSeries(
      SeriesPoly::monomial(FieldElem::monomial(gamma), n, n + 1),
      std::make_shared<ZeroTail>());
}

// random member of the critical ideal, mixing attained and unattained shapes
CertifiedSeries rnd_ideal_member(std::mt19937_64& rng,
                                 const IncoherenceConfig& cfg,
                                 const CertifiedSeries& f) {
  const GroupScalar thr = critical_ideal(cfg).threshold;
  switch (rng() % 4) {
    case 0: {
      // monomial strictly above the threshold
      GroupScalar g = thr + GroupScalar(frac(1 + static_cast<long>(rng() % 6),
                                             1 + static_cast<long>(rng() % 4)));
      return monomial_series(find_in_interval(thr, g + GroupScalar(Rat(1)),
                                              cfg.group),
                             static_cast<std::int64_t>(rng() % 3));
    }
    case 1: {
      // witness scaled up: limit value alpha + eta stays irrational
      GroupScalar eta(frac(1 + static_cast<long>(rng() % 4), 2));
      return f.scaled(FieldElem::monomial(eta));
    }
    case 2:
      return CertifiedSeries(SeriesPoly(1 + static_cast<std::int64_t>(rng() % 3)),
                             std::make_shared<ZeroTail>());  // zero
    default: {
      // descent toward the threshold itself: inside by the unattained branch
      auto seq = std::make_shared<DescentSequence>(thr, cfg.group);
      return CertifiedSeries(SeriesPoly(0),
                             std::make_shared<DescentTail>(seq, 0));
    }
  }
}

}  // namespace

TEST_CASE("config validation guards every field") {
  IncoherenceConfig cfg = base_config();
  CHECK_NOTHROW(cfg.validate());

  IncoherenceConfig bad = cfg;
  bad.alpha = GroupScalar(Rat(1, 2));  // rational: inside the group
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.alpha = -kAlpha;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.r = FieldElem::monomial(GroupScalar(Rat(2), Rat(-1)));  // val not in Q
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.r = FieldElem::monomial(GroupScalar(Rat(1, 4)));  // below alpha
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.r = FieldElem();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.seq_len = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.order = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  // threshold = val(r) - alpha = 2 - sqrt2, outside the group by construction
  CriticalIdeal I = critical_ideal(cfg);
  CHECK(I.threshold == GroupScalar(Rat(2), Rat(-1)));
  CHECK(!I.threshold.in_group(cfg.group));
  CHECK(I.threshold.sign() > 0);
}

TEST_CASE("witness series realizes the canonical descent") {
  IncoherenceConfig cfg = base_config();
  CertifiedSeries f = build_witness_series(cfg);
  CHECK(f.prefix_order() == 3);
  CHECK(f.coeff_val(0) == ExtScalar(GroupScalar(Rat(1, 2))));
  CHECK(f.coeff_val(1) == ExtScalar(GroupScalar(Rat(3, 7))));
  CHECK(f.coeff_val(2) == ExtScalar(GroupScalar(Rat(5, 12))));
  CHECK(v_zero(f) == ExtScalar(kAlpha));

  // degenerate prefix still certifies the limit value through the tail
  IncoherenceConfig one = base_config();
  one.seq_len = 1;
  CertifiedSeries f1 = build_witness_series(one);
  CHECK(f1.prefix_order() == 1);
  CHECK(v_zero(f1) == ExtScalar(kAlpha));

  // sqrt2 lattice: alpha = 1/2, first exponent 2 - sqrt2
  IncoherenceConfig zc;
  zc.group = ValueGroup::z_plus_z_sqrt2;
  zc.alpha = GroupScalar(Rat(1, 2));
  zc.seq_len = 2;
  zc.r = FieldElem::monomial(GroupScalar(Rat(1)));
  zc.order = 8;
  CertifiedSeries zf = build_witness_series(zc);
  CHECK(zf.coeff_val(0) == ExtScalar(GroupScalar(Rat(2), Rat(-1))));
  CHECK(v_zero(zf) == ExtScalar(GroupScalar(Rat(1, 2))));
}

TEST_CASE("ideal membership splits on the irrational threshold") {
  IncoherenceConfig cfg = base_config();
  CriticalIdeal I = critical_ideal(cfg);

  CHECK(in_critical_ideal(monomial_series(GroupScalar(Rat(3, 5))), I));
  CHECK(!in_critical_ideal(constant(FieldElem::one()), I));
  CHECK(in_critical_ideal(
      CertifiedSeries(SeriesPoly(2), std::make_shared<ZeroTail>()), I));

  // attained limit values land in the group, never on the threshold
  std::mt19937_64 rng(614);
  for (int it = 0; it < 40; ++it) {
    GroupScalar g(frac(static_cast<long>(rng() % 30),
                       1 + static_cast<long>(rng() % 17)));
    CHECK(ExtScalar(g) != ExtScalar(I.threshold));
  }

  // unattained limit value exactly on the threshold: still inside
  auto seq = std::make_shared<DescentSequence>(I.threshold, cfg.group);
  CertifiedSeries edge(SeriesPoly(0), std::make_shared<DescentTail>(seq, 0));
  CHECK(v_zero(edge) == ExtScalar(I.threshold));
  CHECK(in_critical_ideal(edge, I));
}

TEST_CASE("intersection test: cofactor, refusal, inconclusive") {
  IncoherenceConfig cfg = base_config();
  CertifiedSeries f = build_witness_series(cfg);

  SUBCASE("member divides through exactly") {
    CertifiedSeries g = monomial_series(GroupScalar(Rat(3, 5)));
    IntersectionResult res = intersection_membership(g, cfg, f);
    REQUIRE(res.kind == IntersectionResult::Kind::cofactor);
    // y_n = t^{3/5 + alpha_n - 1}
    CHECK(res.y.coeff(0).val() == ExtScalar(GroupScalar(Rat(1, 10))));
    CHECK(res.y.coeff(1).val() == ExtScalar(GroupScalar(Rat(1, 35))));
    CHECK(res.y.coeff(2).val() == ExtScalar(GroupScalar(Rat(1, 60))));
    const SeriesPoly prod = g.truncated(cfg.order) * f.truncated(cfg.order);
    for (std::int64_t i = 0; i < prod.order(); ++i)
      CHECK(res.y.coeff(i) * cfg.r == prod.coeff(i));
  }

  SUBCASE("zero is a member with zero cofactor") {
    CertifiedSeries z(SeriesPoly(2), std::make_shared<ZeroTail>());
    IntersectionResult res = intersection_membership(z, cfg, f);
    REQUIRE(res.kind == IntersectionResult::Kind::cofactor);
    CHECK(res.y.is_zero_view());
  }

  SUBCASE("unit constant is refused at the first coefficient") {
    IntersectionResult res =
        intersection_membership(constant(FieldElem::one()), cfg, f);
    REQUIRE(res.kind == IntersectionResult::Kind::refusal);
    CHECK(res.low_index == 0);
    CHECK(res.low_value == ExtScalar(GroupScalar(Rat(1, 2))));
  }

  SUBCASE("exponent just under the threshold needs depth to refuse") {
    // 41/70 < 2 - sqrt2 by a hair: the refusing coefficient sits at index 5
    CertifiedSeries g = monomial_series(GroupScalar(frac(41, 70)));
    IncoherenceConfig shallow = base_config(2);
    CHECK(intersection_membership(g, shallow, f).kind ==
          IntersectionResult::Kind::inconclusive);
    IntersectionResult res = intersection_membership(g, cfg, f);
    REQUIRE(res.kind == IntersectionResult::Kind::refusal);
    CHECK(res.low_index == 5);
    CHECK(res.low_value == ExtScalar(GroupScalar(frac(16729, 16730))));
  }
}

TEST_CASE("intersection test characterizes ideal membership") {
  IncoherenceConfig cfg = base_config();
  CriticalIdeal I = critical_ideal(cfg);
  CertifiedSeries f = build_witness_series(cfg);
  std::mt19937_64 rng(4242);
  int members = 0, refusals = 0;
  for (int it = 0; it < 300; ++it) {
    if (rng() % 2) {
      CertifiedSeries g = rnd_ideal_member(rng, cfg, f);
      REQUIRE(in_critical_ideal(g, I));
      IntersectionResult res = intersection_membership(g, cfg, f);
      REQUIRE(res.kind == IntersectionResult::Kind::cofactor);
      const SeriesPoly prod = g.truncated(cfg.order) * f.truncated(cfg.order);
      const std::int64_t probe = std::min<std::int64_t>(prod.order(), 6);
      for (std::int64_t i = 0; i < probe; ++i)
        CHECK(res.y.coeff(i) * cfg.r == prod.coeff(i));
      ++members;
    } else {
      // monomial g = t^gamma X^n with gamma < 1/2: refused at index n with
      // value gamma + 1/2, the first product coefficient through f
      long den = 3 + static_cast<long>(rng() % 15);
      long num = static_cast<long>(rng() % ((den - 1) / 2 + 1));
      GroupScalar gamma(frac(num, den));
      std::int64_t n = static_cast<std::int64_t>(rng() % 4);
      CertifiedSeries g = monomial_series(gamma, n);
      REQUIRE(!in_critical_ideal(g, I));
      IntersectionResult res = intersection_membership(g, cfg, f);
      REQUIRE(res.kind == IntersectionResult::Kind::refusal);
      CHECK(res.low_index == n);
      CHECK(res.low_value ==
            ExtScalar(gamma + GroupScalar(Rat(1, 2))));
      ++refusals;
    }
  }
  CHECK(members > 100);
  CHECK(refusals > 100);
}

TEST_CASE("refuter pins the frozen witness monomial") {
  IncoherenceConfig cfg = base_config();
  CriticalIdeal I = critical_ideal(cfg);

  SUBCASE("single constant candidate") {
    WitnessReport rep =
        refute_generators({constant(FieldElem::monomial(GroupScalar(Rat(3, 5))))},
                          cfg, I);
    CHECK(rep.beta == ExtScalar(GroupScalar(Rat(3, 5))));
    CHECK(rep.gamma == GroupScalar(Rat(10, 17)));
    CHECK(rep.t.val() == ExtScalar(GroupScalar(Rat(10, 17))));
    CHECK(rep.t_in_ideal);
    CHECK(rep.beta_above_gamma);
    CHECK(rep.gamma_above_threshold);
    CHECK(verify_report(rep, cfg));
  }

  SUBCASE("no finite constant floor: beta infinite, gamma = 1") {
    WitnessReport rep = refute_generators(
        {CertifiedSeries(SeriesPoly(1), std::make_shared<ZeroTail>()),
         monomial_series(GroupScalar(Rat(7, 10)), 2)},
        cfg, I);
    CHECK(rep.beta.is_infinite());
    CHECK(rep.gamma == GroupScalar(Rat(1)));
    CHECK(verify_report(rep, cfg));

    WitnessReport empty = refute_generators({}, cfg, I);
    CHECK(empty.beta.is_infinite());
    CHECK(empty.gamma == GroupScalar(Rat(1)));
    CHECK(verify_report(empty, cfg));
  }

  SUBCASE("scaled witness as candidate: descent tail in the report") {
    CertifiedSeries f = build_witness_series(cfg);
    WitnessReport rep = refute_generators(
        {f.scaled(FieldElem::monomial(GroupScalar(Rat(1, 2))))}, cfg, I);
    CHECK(rep.beta == ExtScalar(GroupScalar(Rat(1))));
    CHECK(rep.gamma == GroupScalar(Rat(2, 3)));
    CHECK(verify_report(rep, cfg));
  }

  SUBCASE("sqrt2 lattice: gamma is the height-minimal lattice point") {
    IncoherenceConfig zc;
    zc.group = ValueGroup::z_plus_z_sqrt2;
    zc.alpha = GroupScalar(Rat(1, 2));
    zc.seq_len = 2;
    zc.r = FieldElem::monomial(GroupScalar(Rat(1)));
    zc.order = 8;
    CriticalIdeal zi = critical_ideal(zc);
    CHECK(zi.threshold == GroupScalar(Rat(1, 2)));
    WitnessReport rep = refute_generators(
        {constant(FieldElem::monomial(GroupScalar(Rat(2), Rat(-1))))}, zc, zi);
    CHECK(rep.beta == ExtScalar(GroupScalar(Rat(2), Rat(-1))));
    CHECK(rep.gamma == GroupScalar(Rat(9), Rat(-6)));
    CHECK(verify_report(rep, zc));
  }

  SUBCASE("rejections") {
    CHECK_THROWS_AS(
        refute_generators({constant(FieldElem::one())}, cfg, I),
        std::invalid_argument);
    CHECK_THROWS_AS(refute_generators({build_witness_series(cfg)}, cfg, I),
                    std::invalid_argument);
    CriticalIdeal wrong{GroupScalar(Rat(1), Rat(1))};
    CHECK_THROWS_AS(refute_generators({}, cfg, wrong), std::invalid_argument);
  }
}

TEST_CASE("no finite combination of candidates reaches the witness monomial") {
  IncoherenceConfig cfg = base_config();
  CriticalIdeal I = critical_ideal(cfg);
  CertifiedSeries f = build_witness_series(cfg);
  std::vector<CertifiedSeries> cands = {
      constant(FieldElem::monomial(GroupScalar(Rat(3, 5)))),
      constant(FieldElem::monomial(GroupScalar(Rat(7, 10)))),
      f.scaled(FieldElem::monomial(GroupScalar(Rat(1, 2))))};
  WitnessReport rep = refute_generators(cands, cfg, I);
  REQUIRE(rep.beta == ExtScalar(GroupScalar(Rat(3, 5))));
  REQUIRE(rep.gamma == GroupScalar(Rat(10, 17)));

  const std::int64_t ord = 4;
  std::mt19937_64 rng(77);
  auto rnd_cofactor = [&]() {
    std::vector<FieldElem> cs;
    for (std::int64_t n = 0; n < ord; ++n) {
      if (rng() % 3 == 0) {
        cs.emplace_back();
        continue;
      }
      GroupScalar e(frac(static_cast<long>(rng() % 9),
                         1 + static_cast<long>(rng() % 6)));
      cs.push_back(FieldElem::monomial(e, frac(1 + static_cast<long>(rng() % 5),
                                               1 + static_cast<long>(rng() % 3))));
    }
    return SeriesPoly(std::move(cs));
  };
  for (int it = 0; it < 200; ++it) {
    SeriesPoly sum(ord);
    for (const CertifiedSeries& g : cands)
      sum = sum + rnd_cofactor() * g.truncated(ord);
    // the constant coefficient can never descend below beta, so it misses
    // t = t^gamma, whose value sits strictly between threshold and beta
    const FieldElem c0 = sum.coeff(0);
    CHECK(c0 != rep.t);
    if (!c0.is_zero()) CHECK(!(c0.val() < rep.beta));
  }
}

TEST_CASE("report verification replays every step and names tampering") {
  IncoherenceConfig cfg = base_config();
  CriticalIdeal I = critical_ideal(cfg);
  WitnessReport rep = refute_generators(
      {constant(FieldElem::monomial(GroupScalar(Rat(3, 5))))}, cfg, I);
  const std::string text = serialize_report(rep);

  auto tampered = [&](std::string_view key, std::string replacement) {
    std::string out;
    size_t pos = 0;
    bool hit = false;
    while (pos < text.size()) {
      size_t eol = text.find('\n', pos);
      std::string_view line = std::string_view(text).substr(pos, eol - pos);
      if (line.substr(0, key.size()) == key) {
        out += replacement;
        hit = true;
      } else {
        out += line;
      }
      out += '\n';
      pos = eol + 1;
    }
    REQUIRE(hit);
    return parse_report(out);
  };
  auto why_of = [&](const WitnessReport& bad) {
    std::string why;
    CHECK(!verify_report(bad, cfg, &why));
    return why;
  };

  std::string why;
  CHECK(verify_report(rep, cfg, &why));
  CHECK(why.empty());

  IncoherenceConfig bad_cfg = cfg;
  bad_cfg.r = FieldElem();
  CHECK(!verify_report(rep, bad_cfg, &why));
  CHECK(why == "config invalid");
  bad_cfg = cfg;
  bad_cfg.r = FieldElem::monomial(GroupScalar(Rat(2)));
  CHECK(!verify_report(rep, bad_cfg, &why));
  CHECK(why == "threshold mismatch");

  CHECK(why_of(tampered("group", "group: Z_PLUS_Z_SQRT2")) ==
        "group mismatch");
  CHECK(why_of(tampered("threshold", "threshold: 1/1 + -1/2*sqrt2")) ==
        "threshold mismatch");
  CHECK(why_of(tampered(
            "candidate 0 prefix",
            "candidate 0 prefix: (1/1*t^(1/10 + 0/1*sqrt2))/"
            "(1/1*t^(0/1 + 0/1*sqrt2))")) == "candidate outside the ideal");
  CHECK(why_of(tampered("beta", "beta: 2/3 + 0/1*sqrt2")) == "beta mismatch");
  CHECK(why_of(tampered("gamma", "gamma: 4/7 + 0/1*sqrt2")) ==
        "gamma is not the value of t");
  {
    WitnessReport bad = tampered("gamma", "gamma: 0/1 + 1/2*sqrt2");
    bad.t = FieldElem::monomial(GroupScalar(Rat(0), Rat(1, 2)));
    CHECK(why_of(bad) == "gamma outside the group");
  }
  {
    WitnessReport bad = tampered("gamma", "gamma: 1/2 + 0/1*sqrt2");
    bad.t = FieldElem::monomial(GroupScalar(Rat(1, 2)));
    CHECK(why_of(bad) == "gamma not strictly above the threshold");
  }
  CHECK(why_of(tampered("check gamma_above_threshold",
                        "check gamma_above_threshold: fail")) ==
        "gamma not strictly above the threshold");
  CHECK(why_of(tampered("check t_in_ideal", "check t_in_ideal: fail")) ==
        "t outside the ideal");
  CHECK(why_of(tampered("check beta_above_gamma",
                        "check beta_above_gamma: fail")) ==
        "beta not strictly above gamma");
}

TEST_CASE("report text form is stable and invertible") {
  IncoherenceConfig cfg = base_config();
  CriticalIdeal I = critical_ideal(cfg);

  SUBCASE("golden bytes") {
    WitnessReport rep = refute_generators(
        {constant(FieldElem::monomial(GroupScalar(Rat(3, 5))))}, cfg, I);
    CHECK(serialize_report(rep) ==
          "group: RATIONALS\n"
          "threshold: 2/1 + -1/1*sqrt2\n"
          "beta: 3/5 + 0/1*sqrt2\n"
          "t: (1/1*t^(10/17 + 0/1*sqrt2))/(1/1*t^(0/1 + 0/1*sqrt2))\n"
          "gamma: 10/17 + 0/1*sqrt2\n"
          "check t_in_ideal: pass\n"
          "check beta_above_gamma: pass\n"
          "check gamma_above_threshold: pass\n"
          "candidates: 1\n"
          "candidate 0 prefix: (1/1*t^(3/5 + 0/1*sqrt2))/"
          "(1/1*t^(0/1 + 0/1*sqrt2))\n"
          "candidate 0 tail: zero\n");
  }

  SUBCASE("round trips preserve every field") {
    CertifiedSeries f = build_witness_series(cfg);
    std::mt19937_64 rng(1912);
    for (int it = 0; it < 30; ++it) {
      std::vector<CertifiedSeries> cands;
      size_t m = rng() % 4;
      for (size_t i = 0; i < m; ++i)
        cands.push_back(rnd_ideal_member(rng, cfg, f));
      WitnessReport rep = refute_generators(cands, cfg, I);
      REQUIRE(verify_report(rep, cfg));
      WitnessReport back = parse_report(serialize_report(rep));
      CHECK(back.group == rep.group);
      CHECK(back.threshold == rep.threshold);
      CHECK(back.beta == rep.beta);
      CHECK(back.gamma == rep.gamma);
      CHECK(back.t == rep.t);
      REQUIRE(back.candidates.size() == rep.candidates.size());
      for (size_t i = 0; i < m; ++i) {
        CHECK(back.candidates[i].prefix() == rep.candidates[i].prefix());
        CHECK(back.candidates[i].tail().descriptor() ==
              rep.candidates[i].tail().descriptor());
      }
      CHECK(verify_report(back, cfg));
      CHECK(serialize_report(back) == serialize_report(rep));
    }
  }

  SUBCASE("sqrt2 lattice report survives the round trip") {
    IncoherenceConfig zc;
    zc.group = ValueGroup::z_plus_z_sqrt2;
    zc.alpha = GroupScalar(Rat(1, 2));
    zc.seq_len = 2;
    zc.r = FieldElem::monomial(GroupScalar(Rat(1)));
    zc.order = 8;
    WitnessReport rep = refute_generators(
        {constant(FieldElem::monomial(GroupScalar(Rat(2), Rat(-1))))}, zc,
        critical_ideal(zc));
    WitnessReport back = parse_report(serialize_report(rep));
    CHECK(back.group == ValueGroup::z_plus_z_sqrt2);
    CHECK(back.gamma == rep.gamma);
    CHECK(verify_report(back, zc));
  }

  SUBCASE("malformed text is rejected") {
    CHECK_THROWS_AS(parse_report(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_report("group: RATIONALS\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_report("grp: RATIONALS\n"), std::invalid_argument);
  }
}

