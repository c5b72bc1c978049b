// Command line front end over the exact valuation kernel.  Exit codes:
// 0 verified result, 1 domain-level failure (rejected certificate, failing
// selftest suite), 2 configuration or usage error.

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

void attach_common(CLI::App& sub, serval::cli::CommonFlags& flags) {
  sub.add_option("--config", flags.config_path,
                 "key = value configuration file with [section] headers");
  sub.add_option("--seed", flags.seed, "seed for the pseudo-random draws");
  sub.add_option("--order", flags.order, "truncation order override");
  sub.add_option("--out", flags.out_path,
                 "output file (default: standard output)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exact workbench for power series valuations over a dense value "
      "group"};
  app.require_subcommand(1);

  serval::cli::CommonFlags flags;
  std::string certificate_path;
  std::string inject_fault;

  CLI::App* chi = app.add_subcommand(
      "chi", "sample chi(lambda) over a geometric grid into CSV");
  attach_common(*chi, flags);

  CLI::App* vlambda = app.add_subcommand(
      "vlambda", "evaluate one weighted valuation and print the result");
  attach_common(*vlambda, flags);

  CLI::App* incoherence = app.add_subcommand(
      "incoherence",
      "refute a candidate generating set and emit the certificate");
  attach_common(*incoherence, flags);

  CLI::App* verify = app.add_subcommand(
      "verify", "replay a certificate file against the configuration");
  attach_common(*verify, flags);
  verify->add_option("certificate", certificate_path, "certificate file")
      ->required();

  CLI::App* purity = app.add_subcommand(
      "purity", "run witnessed exact divisions and report the counts");
  attach_common(*purity, flags);

  CLI::App* selftest = app.add_subcommand(
      "selftest", "run every module's invariant sweep under one seed");
  attach_common(*selftest, flags);
  selftest->add_option("--inject-fault", inject_fault,
                       "test fixture: force the named suite to fail");

  CLI11_PARSE(app, argc, argv);

  try {
    if (chi->parsed()) return serval::cli::cmd_chi(flags);
    if (vlambda->parsed()) return serval::cli::cmd_vlambda(flags);
    if (incoherence->parsed()) return serval::cli::cmd_incoherence(flags);
    if (verify->parsed())
      return serval::cli::cmd_verify(flags, certificate_path);
    if (purity->parsed()) return serval::cli::cmd_purity(flags);
    if (selftest->parsed())
      return serval::cli::cmd_selftest(flags, inject_fault);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
