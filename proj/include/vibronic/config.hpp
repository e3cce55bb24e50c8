#pragma once

// Run configuration: a flat, sectioned key = value text format.
//
//   [system]
//   n_levels = 3
//   omega = 1
//   energies = 0, 10, 19
//   displacements = 0, 0.3, 0.2
//   mu0 =
//     0, 1, 0.3
//     1, 0, 0.8
//     0.3, 0.8, 0
//   [pathway]
//   states = 1, 2, 1
//   diagram = all-left
//   [run]
//   times =
//     0.5, 0, 1.25
//
// Lists are comma separated; a matrix or a list of time tuples follows its
// key on indented lines, one row per line. '#' starts a comment. Unknown
// sections or keys are rejected.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vibronic/diagrams.hpp"
#include "vibronic/ht_expansion.hpp"
#include "vibronic/model.hpp"
#include "vibronic/spectra.hpp"

namespace vibronic {

/// Parse or validation failure. line() is 0 when the error is not tied to a
/// particular line; field() names the offending key when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line = 0, std::string field = {});
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

struct RunConfig {
  VibronicSystem system;
  std::optional<Pathway> pathway;
  DiagramKind diagram = DiagramKind::all_left;
  std::vector<std::vector<double>> times;  // one tuple per row; empty if absent
  std::optional<TimeGrid> grid;
  std::optional<int> max_ht_order;
  std::optional<double> gamma;  // spectra default to 0.05 omega
  int fock_dim = 48;
  std::uint64_t seed = 1;
  std::string output;
  PrefactorConvention prefactor = PrefactorConvention::paper;
  double peak_threshold = 0.05;

  bool has_times() const { return !times.empty(); }
  double damping() const { return gamma.value_or(default_gamma(system.omega)); }
  ResponseOptions response_options() const { return {max_ht_order, prefactor}; }
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Canonical text form; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig& config);

bool operator==(const RunConfig& a, const RunConfig& b);

std::string to_string(PrefactorConvention convention);
PrefactorConvention parse_prefactor(std::string_view name);

}  // namespace vibronic
