// Subcommand pipelines behind the command line front end.  Each command
// parses and validates its configuration completely before any output file
// is opened, computes with the exact kernel, and reports through the exit
// status: 0 for a verified result, 1 for a domain-level failure, with usage
// and configuration errors thrown for the caller to map to 2.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "run_config.hpp"
#include "serval/incoherence.hpp"
#include "serval/series.hpp"

namespace serval::cli {

struct CommonFlags {
  std::string config_path;            // empty: built-in defaults
  std::optional<std::int64_t> seed;   // overrides config
  std::optional<std::int64_t> order;  // overrides config
  std::string out_path;               // empty: stdout
};

// the parsed --config file, or an empty ConfigFile when none was given
ConfigFile load_config(const CommonFlags& flags);

// single sink for every byte a command emits: --out file or stdout; called
// only after all computation has succeeded
void write_output(const CommonFlags& flags, const std::string& text);

// canonical descent series toward alpha: prefix of seq_len coefficients,
// rule-given beyond; alpha >= 0 and outside the group
CertifiedSeries make_witness_series(ValueGroup group, const GroupScalar& alpha,
                                    std::int64_t seq_len);

// seeded members of the critical ideal: monomials with exponents drawn by
// interval search strictly above the threshold, shifted monomials, zero,
// and scaled witness series
std::vector<CertifiedSeries> seeded_candidates(std::mt19937_64& rng,
                                               const IncoherenceConfig& cfg,
                                               std::int64_t count);

// the incoherence construction parameters of the [incoherence] section
IncoherenceConfig incoherence_config(const ConfigFile& cfg,
                                     const CommonFlags& flags);

int cmd_chi(const CommonFlags& flags);
int cmd_vlambda(const CommonFlags& flags);
int cmd_incoherence(const CommonFlags& flags);
int cmd_verify(const CommonFlags& flags, const std::string& certificate_path);
int cmd_purity(const CommonFlags& flags);
int cmd_selftest(const CommonFlags& flags, const std::string& inject_fault);

}  // namespace serval::cli
