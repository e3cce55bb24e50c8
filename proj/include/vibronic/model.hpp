#pragma once

// Physical model of an N-level electronic system coupled to a single displaced
// harmonic mode, plus the two scalar building blocks (phase factors and
// displacement factors) that the response engines are assembled from.
//
// Index conventions follow the usual response-function bookkeeping: waiting
// times t_1..t_M and dipole slots 1..M+1 are 1-based; electronic states are
// 0-based with 0 the ground state.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vibronic {

using complex = std::complex<double>;

/// Raised when an argument violates a documented precondition.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for valid-but-unimplemented combinations (e.g. closed forms above M=3).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VibronicSystem {
  int n_levels = 2;
  double omega = 1.0;
  std::vector<double> energies;       // epsilon_j, j = 0..N-1
  std::vector<double> displacements;  // z_j, z_0 == 0
  Eigen::MatrixXd mu0;                // <j|mu_0|k>
  Eigen::MatrixXd mu1;                // <j|mu_1|k>

  double z(int state) const { return displacements.at(static_cast<std::size_t>(state)); }
  double energy(int state) const { return energies.at(static_cast<std::size_t>(state)); }
};

struct ValidationIssue {
  std::string invariant;  // short stable name, e.g. "mu0 not symmetric"
  std::string detail;
};

/// Returns the first violated invariant, or nullopt for a well-formed system.
std::optional<ValidationIssue> validate(const VibronicSystem& system);

/// Throws ArgumentError carrying the first violated invariant.
void require_valid(const VibronicSystem& system);

/// Waiting times t_1..t_M. Negative entries are legal here: diagram
/// transforms evaluate the engine at negated times.
class WaitingTimes {
 public:
  explicit WaitingTimes(std::vector<double> t);
  WaitingTimes(std::initializer_list<double> t) : WaitingTimes(std::vector<double>(t)) {}

  int order() const { return static_cast<int>(t_.size()); }
  /// 1-based access.
  double operator()(int k) const;
  std::span<const double> values() const { return t_; }
  WaitingTimes negated() const;

 private:
  std::vector<double> t_;
};

/// Electronic states e_1..e_M occupied during the waiting times. The boundary
/// states e_0 = e_{M+1} = 0 are implicit.
class Pathway {
 public:
  explicit Pathway(std::vector<int> states);
  Pathway(std::initializer_list<int> states) : Pathway(std::vector<int>(states)) {}

  int order() const { return static_cast<int>(states_.size()); }
  /// State for k = 0..M+1 (0 at both boundaries).
  int state(int k) const;
  std::span<const int> states() const { return states_; }

  /// Throws ArgumentError if any state lies outside 0..n_levels-1.
  void check_against(const VibronicSystem& system) const;

  bool operator==(const Pathway&) const = default;

 private:
  std::vector<int> states_;
};

std::string to_string(const Pathway& pathway);

/// All pathways of length M over N levels, lexicographic order.
std::vector<Pathway> all_pathways(int n_levels, int order);

/// chi_{kl} = exp(-i omega (t_k + ... + t_l)); empty product (k > l) gives 1.
/// Valid ranges: 1 <= k <= M+1, 0 <= l <= M, and both in 1..M when k <= l.
complex chi(int k, int l, const WaitingTimes& times, double omega);

/// f_{state,l} = z_state (chi_l - 1).
complex f_disp(int state, int l, const VibronicSystem& system, const WaitingTimes& times);

}  // namespace vibronic
