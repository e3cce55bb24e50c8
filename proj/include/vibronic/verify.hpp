#pragma once

// Randomized analytic-vs-brute-force suite shared by the CLI `verify`
// command and the acceptance tests.

#include <cstdint>
#include <optional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "vibronic/model.hpp"

namespace vibronic {

struct RandomSystemOptions {
  int n_levels = 3;
  double z_max = 0.3;       // |z_j| <= z_max, z_0 = 0
  double mu_max = 1.0;      // symmetric mu0, mu1 entries in [-mu_max, mu_max]
  double omega_min = 0.5;   // omega drawn from [omega_min, omega_max]
  double omega_max = 2.0;
  double energy_max = 3.0;  // eps_j in [0, energy_max] for j >= 1, eps_0 = 0
};

VibronicSystem random_system(std::mt19937_64& rng, const RandomSystemOptions& options = {});

/// Times with omega * t_k uniform in [0, max_phase).
WaitingTimes random_times(std::mt19937_64& rng, int order, double omega,
                          double max_phase = 4.0 * std::numbers::pi);

struct CheckResult {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  int samples = 0;
  bool passed = false;
  std::string note;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  int fock_dim = 48;
  int random_systems = 5;
  /// Test hook: perturbs every closed-form value by this much relative amount
  /// so that the differential check must fail.
  bool corrupt_closed_form = false;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

/// Runs the suite on `random_systems` seeded systems plus `extra` if given.
VerifyReport run_verification(const VerifyOptions& options,
                              const std::optional<VibronicSystem>& extra = std::nullopt);

}  // namespace vibronic
