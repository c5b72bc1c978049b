#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "serval/localization.hpp"

namespace serval::cli {

namespace {

constexpr std::int64_t kDefaultSeed = 42;

const GroupScalar kSqrt2Minus1(Rat(-1), Rat(1));

std::int64_t seed_of(const ConfigFile& cfg, const std::string& section,
                     const CommonFlags& flags) {
  if (flags.seed) return *flags.seed;
  return cfg.int_or(section, "seed", kDefaultSeed);
}

// a literal series from `coeffs` (field elements joined by " ; ") and an
// optional `tail` descriptor; without a tail only the truncated view exists
struct SeriesChoice {
  std::optional<CertifiedSeries> certified;
  std::optional<SeriesPoly> view;
};

std::vector<FieldElem> parse_coeff_list(const std::string& text) {
  std::vector<FieldElem> coeffs;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t cut = text.find(" ; ", pos);
    std::string_view piece =
        cut == std::string::npos
            ? std::string_view(text).substr(pos)
            : std::string_view(text).substr(pos, cut - pos);
    coeffs.push_back(FieldElem::parse(piece));
    pos = cut == std::string::npos ? text.size() : cut + 3;
  }
  return coeffs;
}

SeriesChoice series_from_config(const ConfigFile& cfg,
                                const std::string& section,
                                const CommonFlags& flags) {
  SeriesChoice choice;
  const std::string kind = cfg.text_or(section, "series", "witness");
  if (kind == "witness") {
    ValueGroup group = cfg.group_or(section, "group", ValueGroup::rationals);
    GroupScalar alpha = cfg.scalar_or(section, "alpha", kSqrt2Minus1);
    std::int64_t seq_len = cfg.int_or(section, "seq_len", 4);
    choice.certified = make_witness_series(group, alpha, seq_len);
    return choice;
  }
  if (kind != "literal")
    throw std::invalid_argument("config key " + section +
                                ".series: expected witness or literal");
  const std::string* coeff_text = cfg.find(section, "coeffs");
  if (!coeff_text)
    throw std::invalid_argument("literal series needs " + section +
                                ".coeffs");
  std::vector<FieldElem> coeffs = parse_coeff_list(*coeff_text);
  if (const std::string* tail_text = cfg.find(section, "tail")) {
    ValueGroup group = cfg.group_or(section, "group", ValueGroup::rationals);
    choice.certified = CertifiedSeries(SeriesPoly(std::move(coeffs)),
                                       parse_tail(*tail_text, group));
    return choice;
  }
  std::int64_t order = flags.order ? *flags.order
                                   : cfg.int_or(section, "order", 32);
  SeriesPoly view{std::move(coeffs)};
  if (view.order() < order) {
    // pad the declared truncation out to the requested order with zeros
    std::vector<FieldElem> padded = view.coeffs();
    padded.resize(static_cast<size_t>(order));
    view = SeriesPoly(std::move(padded));
  }
  choice.view = std::move(view);
  return choice;
}

std::string join_indices(const std::vector<std::int64_t>& xs) {
  std::ostringstream out;
  for (size_t i = 0; i < xs.size(); ++i) out << (i ? ";" : "") << xs[i];
  return out.str();
}

}  // namespace

ConfigFile load_config(const CommonFlags& flags) {
  return flags.config_path.empty() ? ConfigFile()
                                   : ConfigFile::load(flags.config_path);
}

void write_output(const CommonFlags& flags, const std::string& text) {
  if (flags.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(flags.out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::invalid_argument("cannot open " + flags.out_path);
  out << text;
  if (!out.flush())
    throw std::runtime_error("short write to " + flags.out_path);
}

CertifiedSeries make_witness_series(ValueGroup group, const GroupScalar& alpha,
                                    std::int64_t seq_len) {
  if (alpha.sign() < 0)
    throw std::invalid_argument("witness target must be >= 0");
  if (seq_len < 1) throw std::invalid_argument("seq_len must be >= 1");
  auto seq = std::make_shared<DescentSequence>(alpha, group);
  std::vector<FieldElem> coeffs;
  coeffs.reserve(static_cast<size_t>(seq_len));
  for (std::int64_t n = 0; n < seq_len; ++n)
    coeffs.push_back(FieldElem::monomial(seq->at(n)));
  return CertifiedSeries(SeriesPoly(std::move(coeffs)),
                         std::make_shared<DescentTail>(std::move(seq), 0));
}

std::vector<CertifiedSeries> seeded_candidates(std::mt19937_64& rng,
                                               const IncoherenceConfig& cfg,
                                               std::int64_t count) {
  const GroupScalar threshold = critical_ideal(cfg).threshold;
  std::vector<CertifiedSeries> cands;
  cands.reserve(static_cast<size_t>(count));
  auto rnd_rat = [&](long num_range, long den_range) {
    Rat q(static_cast<long>(rng() % num_range),
          1 + static_cast<long>(rng() % den_range));
    q.canonicalize();
    return GroupScalar(q);
  };
  for (std::int64_t i = 0; i < count; ++i) {
    switch (rng() % 4) {
      case 0: {
        // monomial with exponent drawn just above the threshold
        GroupScalar lo = threshold + rnd_rat(5, 3);
        GroupScalar gamma =
            find_in_interval(lo, lo + GroupScalar(Rat(1)), cfg.group);
        cands.push_back(CertifiedSeries(
            SeriesPoly::monomial(FieldElem::monomial(gamma), 0, 1),
            std::make_shared<ZeroTail>()));
        break;
      }
      case 1: {
        GroupScalar lo = threshold + rnd_rat(4, 4);
        GroupScalar gamma =
            find_in_interval(lo, lo + GroupScalar(Rat(1, 2)), cfg.group);
        std::int64_t shift = 1 + static_cast<std::int64_t>(rng() % 3);
        cands.push_back(CertifiedSeries(
            SeriesPoly::monomial(FieldElem::monomial(gamma), shift, shift + 1),
            std::make_shared<ZeroTail>()));
        break;
      }
      case 2:
        cands.push_back(CertifiedSeries(
            SeriesPoly(1 + static_cast<std::int64_t>(rng() % 4)),
            std::make_shared<ZeroTail>()));
        break;
      default: {
        // scaled witness: limit value alpha + q lands above the threshold
        GroupScalar floor = threshold - cfg.alpha;
        if (floor.sign() < 0) floor = GroupScalar();
        GroupScalar q =
            find_in_interval(floor, floor + GroupScalar(Rat(1)), cfg.group);
        cands.push_back(
            make_witness_series(cfg.group, cfg.alpha, cfg.seq_len)
                .scaled(FieldElem::monomial(q)));
        break;
      }
    }
  }
  return cands;
}

IncoherenceConfig incoherence_config(const ConfigFile& cfg,
                                     const CommonFlags& flags) {
  IncoherenceConfig out;
  out.group = cfg.group_or("incoherence", "group", ValueGroup::rationals);
  out.alpha = cfg.scalar_or("incoherence", "alpha", kSqrt2Minus1);
  out.seq_len = cfg.int_or("incoherence", "seq_len", 4);
  out.r = FieldElem::monomial(
      cfg.scalar_or("incoherence", "r_exponent", GroupScalar(Rat(1))));
  out.order = flags.order ? *flags.order
                          : cfg.int_or("incoherence", "order", 32);
  out.validate();
  return out;
}

int cmd_chi(const CommonFlags& flags) {
  ConfigFile cfg = load_config(flags);
  SeriesChoice series = series_from_config(cfg, "chi", flags);
  GroupScalar lambda0 =
      cfg.scalar_or("chi", "lambda0", GroupScalar(Rat(1, 2)));
  std::int64_t grid = cfg.int_or("chi", "grid", 12);
  std::vector<ChiRow> rows = series.certified
                                 ? chi_grid(*series.certified, lambda0, grid)
                                 : chi_grid(*series.view, lambda0, grid);
  write_output(flags, chi_csv(rows));
  return 0;
}

int cmd_vlambda(const CommonFlags& flags) {
  ConfigFile cfg = load_config(flags);
  SeriesChoice series = series_from_config(cfg, "vlambda", flags);
  GroupScalar lambda =
      cfg.scalar_or("vlambda", "lambda", GroupScalar(Rat(1, 2)));
  if (lambda.sign() <= 0)
    throw std::invalid_argument("vlambda.lambda must be positive");
  VLambdaResult res = series.certified ? v_lambda(*series.certified, lambda)
                                       : v_lambda(*series.view, lambda);
  std::ostringstream out;
  out << "value: " << res.value.str() << "\n";
  out << "exact: " << (res.exact ? "yes" : "no") << "\n";
  out << "argmin: " << join_indices(res.argmin) << "\n";
  out << "window_end: " << res.window_end << "\n";
  write_output(flags, out.str());
  return 0;
}

int cmd_incoherence(const CommonFlags& flags) {
  ConfigFile cfg = load_config(flags);
  IncoherenceConfig inc = incoherence_config(cfg, flags);
  CriticalIdeal ideal = critical_ideal(inc);
  std::int64_t count = cfg.int_or("incoherence", "candidates", 4);
  if (count < 0) throw std::invalid_argument("candidate count must be >= 0");
  std::mt19937_64 rng(
      static_cast<std::uint64_t>(seed_of(cfg, "incoherence", flags)));
  std::vector<CertifiedSeries> cands = seeded_candidates(rng, inc, count);
  WitnessReport rep = refute_generators(cands, inc, ideal);
  std::string why;
  const bool ok = verify_report(rep, inc, &why);
  write_output(flags, serialize_report(rep));
  if (!ok) {
    std::cerr << "verification failed at: " << why << "\n";
    return 1;
  }
  std::cerr << "report verified: no finite candidate list generates the "
               "critical ideal\n";
  return 0;
}

int cmd_verify(const CommonFlags& flags, const std::string& certificate_path) {
  ConfigFile cfg = load_config(flags);
  IncoherenceConfig inc = incoherence_config(cfg, flags);
  std::ifstream in(certificate_path);
  if (!in)
    throw std::invalid_argument("cannot read certificate " +
                                certificate_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  WitnessReport rep = parse_report(buf.str());
  std::string why;
  if (!verify_report(rep, inc, &why)) {
    write_output(flags, "certificate rejected: " + why + "\n");
    return 1;
  }
  write_output(flags, "certificate ok\n");
  return 0;
}

int cmd_purity(const CommonFlags& flags) {
  ConfigFile cfg = load_config(flags);
  const std::int64_t count = cfg.int_or("purity", "count", 200);
  const std::int64_t order =
      flags.order ? *flags.order : cfg.int_or("purity", "order", 12);
  if (count < 1 || order < 2)
    throw std::invalid_argument("purity needs count >= 1 and order >= 2");
  std::mt19937_64 rng(
      static_cast<std::uint64_t>(seed_of(cfg, "purity", flags)));

  auto rnd_r_elem = [&](int zero_in_four) -> FieldElem {
    if (zero_in_four > 0 && rng() % 4 < static_cast<std::uint64_t>(zero_in_four))
      return {};
    Rat e(static_cast<long>(rng() % 6), 1 + static_cast<long>(rng() % 4));
    e.canonicalize();
    Rat c(1 + static_cast<long>(rng() % 7), 1 + static_cast<long>(rng() % 3));
    c.canonicalize();
    return FieldElem::monomial(GroupScalar(e), c);
  };

  std::int64_t round_trips = 0;
  std::int64_t rejected = 0;
  for (std::int64_t it = 0; it < count; ++it) {
    FieldElem a = rnd_r_elem(0);
    std::vector<FieldElem> g_coeffs, u_coeffs;
    for (std::int64_t n = 0; n < order; ++n) {
      g_coeffs.push_back(rnd_r_elem(1));
      // keep the unit sparse: dense units make the solved cofactor's term
      // count grow geometrically with the order
      u_coeffs.push_back(n == 0 ? FieldElem::one() : rnd_r_elem(3));
    }
    SeriesPoly g{std::move(g_coeffs)};
    SeriesPoly u_view{std::move(u_coeffs)};
    // h = g / u coefficientwise (u has unit constant term), then f = a*h,
    // which makes (a, f, g, u) a valid division witness by construction
    std::vector<FieldElem> h_coeffs(static_cast<size_t>(order));
    for (std::int64_t n = 0; n < order; ++n) {
      FieldElem acc = g.coeff(n);
      for (std::int64_t j = 0; j < n; ++j)
        acc = acc - h_coeffs[static_cast<size_t>(j)] * u_view.coeff(n - j);
      h_coeffs[static_cast<size_t>(n)] = acc;
    }
    SeriesPoly h{std::move(h_coeffs)};
    SeriesPoly f = h.scaled(a);
    CertifiedSeries u(u_view, std::make_shared<ZeroTail>());

    SeriesPoly back = pure_divide(a, f, g, u);
    if (!(back == h) || !(back.scaled(a) == f)) {
      std::cerr << "purity round trip failed at iteration " << it << "\n";
      return 1;
    }
    ++round_trips;

    if (it % 4 == 0) {
      // fabricate an inconsistent witness: nudge one coefficient of g
      SeriesPoly bad_g = g + SeriesPoly::monomial(FieldElem::one(),
                                                  0, order);
      try {
        pure_divide(a, f, bad_g, u);
        std::cerr << "fabricated witness accepted at iteration " << it
                  << "\n";
        return 1;
      } catch (const std::invalid_argument&) {
        ++rejected;
      }
    }
  }
  std::ostringstream out;
  out << "purity: " << round_trips << " witnessed divisions round-tripped\n";
  out << "purity: " << rejected << " fabricated witnesses rejected\n";
  write_output(flags, out.str());
  return 0;
}

}  // namespace serval::cli
