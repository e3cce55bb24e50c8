// vibronic: command-line front end.
//
//   vibronic respfn   --config run.cfg [--out table.tsv]
//   vibronic spectrum --config preset.cfg [--out spectrum.tsv]
//   vibronic verify   [--config run.cfg] [--seed N] [--fock-dim D]

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vibronic/commands.hpp"
#include "vibronic/config.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> fock_dim;
  std::optional<int> max_ht_order;
  std::string prefactor;
};

void add_flags(CLI::App* cmd, Flags& f, bool config_required) {
  auto* c = cmd->add_option("--config", f.config, "run configuration file");
  if (config_required) c->required();
  cmd->add_option("--out", f.out, "output file (default: [run] output, else stdout)");
  cmd->add_option("--seed", f.seed, "RNG seed for randomized verification");
  cmd->add_option("--fock-dim", f.fock_dim, "Fock-space truncation D")->check(CLI::Range(2, 4096));
  cmd->add_option("--max-ht-order", f.max_ht_order, "highest Herzberg-Teller order kept")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--prefactor", f.prefactor, "overall phase convention")
      ->check(CLI::IsMember({"paper", "unity"}));
}

void apply_overrides(vibronic::RunConfig& c, const Flags& f) {
  if (f.seed) c.seed = *f.seed;
  if (f.fock_dim) c.fock_dim = *f.fock_dim;
  if (f.max_ht_order) c.max_ht_order = *f.max_ht_order;
  if (!f.prefactor.empty()) c.prefactor = vibronic::parse_prefactor(f.prefactor);
  if (!f.out.empty()) c.output = f.out;
}

template <class Fn>
int with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") return fn(std::cout);
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    std::cerr << "vibronic: cannot write '" << path << "'\n";
    return 2;
  }
  const int rc = fn(file);
  file.flush();
  if (!file) {
    std::cerr << "vibronic: write to '" << path << "' failed\n";
    return 2;
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytical vibronic response functions with Herzberg-Teller coupling"};
  app.require_subcommand(1);
  Flags respfn_flags, spectrum_flags, verify_flags;
  auto* respfn = app.add_subcommand("respfn", "tabulate R(t_1..t_M) at the configured times");
  auto* spectrum = app.add_subcommand("spectrum", "2D spectrum of a third-order pathway");
  auto* verify = app.add_subcommand("verify", "analytic engine vs brute-force Fock oracle");
  add_flags(respfn, respfn_flags, true);
  add_flags(spectrum, spectrum_flags, true);
  add_flags(verify, verify_flags, false);
  CLI11_PARSE(app, argc, argv);

  try {
    if (*respfn || *spectrum) {
      const Flags& f = *respfn ? respfn_flags : spectrum_flags;
      vibronic::RunConfig c = vibronic::load_config(f.config);
      apply_overrides(c, f);
      return with_output(c.output, [&](std::ostream& os) {
        if (*respfn) {
          vibronic::cmd_respfn(c, os);
        } else {
          vibronic::cmd_spectrum(c, os);
        }
        return 0;
      });
    }
    std::optional<vibronic::RunConfig> c;
    if (!verify_flags.config.empty()) c = vibronic::load_config(verify_flags.config);
    vibronic::VerifyOptions opts;
    if (c) {
      apply_overrides(*c, verify_flags);
      opts.seed = c->seed;
      opts.fock_dim = c->fock_dim;
    } else {
      if (verify_flags.seed) opts.seed = *verify_flags.seed;
      if (verify_flags.fock_dim) opts.fock_dim = *verify_flags.fock_dim;
    }
    const std::string out = c ? c->output : verify_flags.out;
    return with_output(out, [&](std::ostream& os) {
      return vibronic::cmd_verify(c ? &*c : nullptr, opts, os);
    });
  } catch (const vibronic::ConfigError& e) {
    std::cerr << "vibronic: config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "vibronic: " << e.what() << '\n';
    return 2;
  }
}
