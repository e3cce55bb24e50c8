#pragma once

// Brute-force reference: every operator is a dense matrix in a truncated
// number basis {|0>, ..., |D-1>} for the vibrational mode (times the N
// electronic states where needed). Slow and simple on purpose.

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vibronic/ht_expansion.hpp"
#include "vibronic/model.hpp"

namespace vibronic {

struct FockConfig {
  int dim = 48;
};

namespace fock {

Eigen::MatrixXd annihilation(int dim);
Eigen::MatrixXd creation(int dim);
/// omega (a^dagger + z)(a + z), built from the truncated ladder matrices.
Eigen::MatrixXd vibrational_hamiltonian(double z, double omega, int dim);
/// exp[z (a^dagger - a)] exponentiated inside the truncated space.
Eigen::MatrixXcd displacement(double z, int dim);
/// exp(i phi a^dagger a).
Eigen::MatrixXcd rotation(double phi, int dim);
/// D(-z) R(-omega t) D(z).
Eigen::MatrixXcd factorized_propagator(double z, double omega, double t, int dim);

/// Max |entry| of the leading block x block corner (clamped to the matrix size).
double leading_block_max_abs(const Eigen::MatrixXcd& m, int block);

}  // namespace fock

/// exp(-i H_{v,j} t) via eigendecomposition of the truncated Hamiltonian.
Eigen::MatrixXcd build_vibrational_propagator(int state, double t, const VibronicSystem& system,
                                              const FockConfig& cfg = {});

/// Holds the per-state eigendecompositions of one system. Immutable after
/// construction; all queries are const.
class FockOracle {
 public:
  explicit FockOracle(VibronicSystem system, FockConfig cfg = {});

  const VibronicSystem& system() const { return system_; }
  int dim() const { return cfg_.dim; }
  int full_dim() const { return system_.n_levels * cfg_.dim; }

  Eigen::MatrixXcd vibrational_propagator(int state, double t) const;
  /// Full propagator on N*D including electronic phases exp(-i eps_j t).
  Eigen::MatrixXcd propagator(double t) const;
  /// mu0 (x) I + mu1 (x) (a + a^dagger).
  const Eigen::MatrixXcd& dipole() const { return dipole_; }

  /// <psi0| mu U(t_M) mu ... mu U(t_1) mu |psi0> with electronic projectors
  /// onto the pathway's states inserted after each mu.
  complex correlation(const Pathway& pathway, const WaitingTimes& times) const;
  /// Same without projectors (all pathways summed).
  complex correlation_total(const WaitingTimes& times) const;

  /// <0| U_{e_M}(t_M) ... U_{e_1}(t_1) |0> on the vibrational space alone.
  complex vibrational_overlap(const Pathway& pathway, const WaitingTimes& times) const;

  /// <0| X_{M+1} U_M X_M ... U_1 X_1 |0> / overlap, X_k = a, a^dagger or 1.
  complex pattern(const InsertionPattern& pattern, const Pathway& pathway,
                  const WaitingTimes& times) const;

  /// <psi0| mu(tau_1) mu(tau_2) ... mu(tau_n) |psi0> with Heisenberg-picture
  /// dipoles mu(tau) = U^dagger(tau) mu U(tau), tau listed left to right.
  /// With a pathway of length n-1, projectors onto e_1, e_2, ... are inserted
  /// after the rightmost, second-rightmost, ... dipole.
  complex heisenberg_chain(std::span<const double> dipole_times,
                           const std::optional<Pathway>& pathway = std::nullopt) const;

 private:
  Eigen::VectorXcd apply_propagator(double t, const Eigen::VectorXcd& v) const;
  Eigen::VectorXcd project(int state, const Eigen::VectorXcd& v) const;

  VibronicSystem system_;
  FockConfig cfg_;
  std::vector<Eigen::VectorXd> eigenvalues_;
  std::vector<Eigen::MatrixXd> eigenvectors_;
  Eigen::MatrixXcd dipole_;
};

complex brute_force_G(const Pathway& pathway, const VibronicSystem& system,
                      const WaitingTimes& times, const FockConfig& cfg = {});

complex brute_force_pattern(const InsertionPattern& pattern, const Pathway& pathway,
                            const VibronicSystem& system, const WaitingTimes& times,
                            const FockConfig& cfg = {});

struct CommutatorReport {
  double annihilation_residual = 0.0;  // a U - U [a chi + z (chi - 1)]
  double creation_residual = 0.0;      // U a^dagger - [a^dagger chi + z (chi - 1)] U
  double factorization_residual = 0.0; // eigendecomposition U vs D(-z) R D(z)
  int interior = 12;

  double max_residual() const;
};

/// Number states |0>..|11>: far enough from the truncation edge for D >= 24
/// at |z| <= 0.3 that residuals sit at rounding level.
inline constexpr int kDefaultInterior = 12;

/// Checks the ladder-operator/propagator commutation relations for every
/// electronic state of the system, restricted to the leading `interior`
/// number states. Truncation corrupts matrix elements within roughly
/// z*sqrt(D) states of the edge, so the block is fixed rather than D - k.
CommutatorReport verify_commutators(const VibronicSystem& system, const FockConfig& cfg, double t,
                                    int interior = kDefaultInterior);

/// Same check for a single displacement.
CommutatorReport commutator_residuals(double z, double omega, double t, const FockConfig& cfg,
                                      int interior = kDefaultInterior);

}  // namespace vibronic
