#include <benchmark/benchmark.h>

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "serval/incoherence.hpp"
#include "serval/scalar.hpp"
#include "serval/series.hpp"

namespace {

using namespace serval;

const GroupScalar kSqrt2Minus1{Rat(-1), Rat(1)};

Rat rnd_frac(std::mt19937_64& rng, long num_range, long den_range) {
  Rat q(static_cast<long>(rng() % num_range),
        1 + static_cast<long>(rng() % den_range));
  q.canonicalize();
  return q;
}

// dense truncation with small rational exponents, the common working shape
SeriesPoly rnd_series(std::mt19937_64& rng, std::int64_t order) {
  std::vector<FieldElem> coeffs;
  coeffs.reserve(static_cast<size_t>(order));
  for (std::int64_t n = 0; n < order; ++n) {
    if (rng() % 5 == 0) {
      coeffs.push_back({});
      continue;
    }
    coeffs.push_back(FieldElem::monomial(GroupScalar(rnd_frac(rng, 9, 6)),
                                         rnd_frac(rng, 4, 3) + Rat(1)));
  }
  return SeriesPoly{std::move(coeffs)};
}

// coefficient values strictly descending toward an irrational limit keeps
// the minimum near the far end of the window
SeriesPoly descending_series(std::int64_t order) {
  DescentSequence seq(kSqrt2Minus1, ValueGroup::rationals);
  std::vector<FieldElem> coeffs;
  coeffs.reserve(static_cast<size_t>(order));
  for (std::int64_t n = 0; n < order; ++n)
    coeffs.push_back(FieldElem::monomial(seq.at(n)));
  return SeriesPoly{std::move(coeffs)};
}

void BM_WindowedValuation(benchmark::State& state) {
  SeriesPoly f = descending_series(state.range(0));
  GroupScalar lambda(Rat(1, 2));
  for (auto _ : state) {
    VLambdaResult r = v_lambda(f, lambda);
    benchmark::DoNotOptimize(r);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WindowedValuation)->RangeMultiplier(2)->Range(8, 256)->Complexity();

void BM_FullScanValuation(benchmark::State& state) {
  SeriesPoly f = descending_series(state.range(0));
  GroupScalar lambda(Rat(1, 2));
  for (auto _ : state) {
    // reference evaluation without the window cutoff
    ExtScalar best = ExtScalar::infinity();
    std::vector<std::int64_t> argmin;
    for (std::int64_t n = 0; n < f.order(); ++n) {
      ExtScalar v = f.coeff(n).val() + ExtScalar(lambda * GroupScalar(Rat(n)));
      if (v < best) {
        best = v;
        argmin.assign(1, n);
      } else if (v == best && !best.is_infinite()) {
        argmin.push_back(n);
      }
    }
    benchmark::DoNotOptimize(best);
    benchmark::DoNotOptimize(argmin);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FullScanValuation)->RangeMultiplier(2)->Range(8, 256)->Complexity();

void BM_MinimalHeightRationals(benchmark::State& state) {
  // answers climb the Stern-Brocot tree as the window tightens on the limit
  GroupScalar lo = kSqrt2Minus1;
  Rat width(1, 1L << state.range(0));
  GroupScalar hi = lo + GroupScalar(width);
  for (auto _ : state) {
    GroupScalar s = find_in_interval(lo, hi, ValueGroup::rationals);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_MinimalHeightRationals)->DenseRange(1, 8);

void BM_MinimalHeightLattice(benchmark::State& state) {
  GroupScalar lo(Rat(static_cast<long>(state.range(0)), 4));
  GroupScalar hi = lo + GroupScalar(Rat(1, 2));
  for (auto _ : state) {
    GroupScalar s = find_in_interval(lo, hi, ValueGroup::z_plus_z_sqrt2);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_MinimalHeightLattice)->DenseRange(0, 3);

void BM_TruncatedProduct(benchmark::State& state) {
  std::mt19937_64 rng(1);
  SeriesPoly f = rnd_series(rng, state.range(0));
  SeriesPoly g = rnd_series(rng, state.range(0));
  for (auto _ : state) {
    SeriesPoly h = f * g;
    benchmark::DoNotOptimize(h);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TruncatedProduct)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_ChiGridWitness(benchmark::State& state) {
  auto seq = std::make_shared<DescentSequence>(kSqrt2Minus1,
                                               ValueGroup::rationals);
  std::vector<FieldElem> coeffs;
  for (std::int64_t n = 0; n < 4; ++n)
    coeffs.push_back(FieldElem::monomial(seq->at(n)));
  CertifiedSeries f(SeriesPoly(std::move(coeffs)),
                    std::make_shared<DescentTail>(seq, 0));
  GroupScalar lambda0(Rat(1, 2));
  for (auto _ : state) {
    std::vector<ChiRow> rows = chi_grid(f, lambda0, 12);
    benchmark::DoNotOptimize(rows);
  }
}
BENCHMARK(BM_ChiGridWitness);

void BM_RefuteVerifyRoundTrip(benchmark::State& state) {
  IncoherenceConfig cfg;
  cfg.alpha = kSqrt2Minus1;
  cfg.r = FieldElem::monomial(GroupScalar(Rat(1)));
  cfg.order = 16;
  cfg.validate();
  CriticalIdeal ideal = critical_ideal(cfg);

  std::vector<CertifiedSeries> cands;
  cands.emplace_back(SeriesPoly::monomial(FieldElem::monomial(
                                              GroupScalar(Rat(3, 5))),
                                          0, 1),
                     std::make_shared<ZeroTail>());
  cands.emplace_back(SeriesPoly::monomial(FieldElem::monomial(
                                              GroupScalar(Rat(7, 10))),
                                          2, 3),
                     std::make_shared<ZeroTail>());
  cands.emplace_back(SeriesPoly(2), std::make_shared<ZeroTail>());

  for (auto _ : state) {
    WitnessReport rep = refute_generators(cands, cfg, ideal);
    std::string text = serialize_report(rep);
    WitnessReport parsed = parse_report(text);
    std::string why;
    bool ok = verify_report(parsed, cfg, &why);
    benchmark::DoNotOptimize(ok);
    benchmark::DoNotOptimize(why);
  }
}
BENCHMARK(BM_RefuteVerifyRoundTrip);

}  // namespace

BENCHMARK_MAIN();
