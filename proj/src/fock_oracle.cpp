#include "vibronic/fock_oracle.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace vibronic {

namespace fock {

Eigen::MatrixXd annihilation(int dim) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Eigen::MatrixXd creation(int dim) { return annihilation(dim).transpose(); }

Eigen::MatrixXd vibrational_hamiltonian(double z, double omega, int dim) {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
  const Eigen::MatrixXd a = annihilation(dim);
  return omega * (a.transpose() + z * id) * (a + z * id);
}

Eigen::MatrixXcd displacement(double z, int dim) {
  // i z (a^dagger - a) is Hermitian; exp[z (a^dagger - a)] = exp(-i H) for H = i z (a^dagger - a).
  const Eigen::MatrixXd a = annihilation(dim);
  const Eigen::MatrixXcd h = complex{0.0, 1.0} * z * (a.transpose() - a).cast<complex>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  const Eigen::VectorXcd phases =
      solver.eigenvalues().unaryExpr([](double l) { return std::polar(1.0, -l); });
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

Eigen::MatrixXcd rotation(double phi, int dim) {
  Eigen::VectorXcd d(dim);
  for (int n = 0; n < dim; ++n) d(n) = std::polar(1.0, phi * n);
  return d.asDiagonal();
}

Eigen::MatrixXcd factorized_propagator(double z, double omega, double t, int dim) {
  return displacement(-z, dim) * rotation(-omega * t, dim) * displacement(z, dim);
}

double leading_block_max_abs(const Eigen::MatrixXcd& m, int block) {
  const int n = std::min(block, static_cast<int>(std::min(m.rows(), m.cols())));
  if (n <= 0) return 0.0;
  return m.topLeftCorner(n, n).cwiseAbs().maxCoeff();
}

}  // namespace fock

namespace {

void check_dim(const FockConfig& cfg) {
  if (cfg.dim < 2) throw ArgumentError("Fock truncation must keep at least 2 states");
}

Eigen::MatrixXcd propagator_from_eigen(const Eigen::VectorXd& values, const Eigen::MatrixXd& vectors,
                                       double t) {
  const Eigen::VectorXcd phases = values.unaryExpr([t](double l) { return std::polar(1.0, -l * t); });
  const Eigen::MatrixXcd v = vectors.cast<complex>();
  return v * phases.asDiagonal() * v.transpose();
}

void check_times(const Pathway& pathway, const WaitingTimes& times, const VibronicSystem& system) {
  if (pathway.order() != times.order()) {
    throw ArgumentError("pathway length does not match waiting times");
  }
  pathway.check_against(system);
}

}  // namespace

Eigen::MatrixXcd build_vibrational_propagator(int state, double t, const VibronicSystem& system,
                                              const FockConfig& cfg) {
  check_dim(cfg);
  if (state < 0 || state >= system.n_levels) throw ArgumentError("state out of range");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      fock::vibrational_hamiltonian(system.z(state), system.omega, cfg.dim));
  return propagator_from_eigen(solver.eigenvalues(), solver.eigenvectors(), t);
}

FockOracle::FockOracle(VibronicSystem system, FockConfig cfg)
    : system_(std::move(system)), cfg_(cfg) {
  check_dim(cfg_);
  require_valid(system_);
  const int d = cfg_.dim;
  for (int j = 0; j < system_.n_levels; ++j) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        fock::vibrational_hamiltonian(system_.z(j), system_.omega, d));
    eigenvalues_.push_back(solver.eigenvalues());
    eigenvectors_.push_back(solver.eigenvectors());
  }
  const Eigen::MatrixXd x = fock::annihilation(d) + fock::creation(d);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  dipole_ = Eigen::MatrixXcd::Zero(full_dim(), full_dim());
  for (int j = 0; j < system_.n_levels; ++j) {
    for (int k = 0; k < system_.n_levels; ++k) {
      dipole_.block(j * d, k * d, d, d) =
          (system_.mu0(j, k) * id + system_.mu1(j, k) * x).cast<complex>();
    }
  }
}

Eigen::MatrixXcd FockOracle::vibrational_propagator(int state, double t) const {
  if (state < 0 || state >= system_.n_levels) throw ArgumentError("state out of range");
  const auto s = static_cast<std::size_t>(state);
  return propagator_from_eigen(eigenvalues_[s], eigenvectors_[s], t);
}

Eigen::MatrixXcd FockOracle::propagator(double t) const {
  const int d = cfg_.dim;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(full_dim(), full_dim());
  for (int j = 0; j < system_.n_levels; ++j) {
    u.block(j * d, j * d, d, d) =
        std::polar(1.0, -system_.energy(j) * t) * vibrational_propagator(j, t);
  }
  return u;
}

Eigen::VectorXcd FockOracle::apply_propagator(double t, const Eigen::VectorXcd& v) const {
  const int d = cfg_.dim;
  Eigen::VectorXcd out(v.size());
  for (int j = 0; j < system_.n_levels; ++j) {
    out.segment(j * d, d) = std::polar(1.0, -system_.energy(j) * t) *
                            (vibrational_propagator(j, t) * v.segment(j * d, d));
  }
  return out;
}

Eigen::VectorXcd FockOracle::project(int state, const Eigen::VectorXcd& v) const {
  const int d = cfg_.dim;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  out.segment(state * d, d) = v.segment(state * d, d);
  return out;
}

complex FockOracle::correlation(const Pathway& pathway, const WaitingTimes& times) const {
  check_times(pathway, times, system_);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(full_dim());
  v(0) = 1.0;
  for (int k = 1; k <= times.order(); ++k) {
    v = project(pathway.state(k), dipole_ * v);
    v = apply_propagator(times(k), v);
  }
  v = dipole_ * v;
  return v(0);
}

complex FockOracle::correlation_total(const WaitingTimes& times) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(full_dim());
  v(0) = 1.0;
  for (int k = 1; k <= times.order(); ++k) v = apply_propagator(times(k), dipole_ * v);
  v = dipole_ * v;
  return v(0);
}

complex FockOracle::vibrational_overlap(const Pathway& pathway, const WaitingTimes& times) const {
  check_times(pathway, times, system_);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(cfg_.dim);
  v(0) = 1.0;
  for (int k = 1; k <= times.order(); ++k) v = vibrational_propagator(pathway.state(k), times(k)) * v;
  return v(0);
}

complex FockOracle::pattern(const InsertionPattern& pattern, const Pathway& pathway,
                            const WaitingTimes& times) const {
  check_times(pathway, times, system_);
  const int m = times.order();
  // Validates slot ranges and disjointness.
  const InsertionPattern checked = make_pattern(pattern.ann, pattern.cre, m);
  const Eigen::MatrixXcd a = fock::annihilation(cfg_.dim).cast<complex>();
  const Eigen::MatrixXcd ad = fock::creation(cfg_.dim).cast<complex>();
  auto has = [](const std::vector<int>& slots, int k) {
    return std::find(slots.begin(), slots.end(), k) != slots.end();
  };
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(cfg_.dim);
  v(0) = 1.0;
  for (int k = 1; k <= m + 1; ++k) {
    if (has(checked.ann, k)) v = a * v;
    if (has(checked.cre, k)) v = ad * v;
    if (k <= m) v = vibrational_propagator(pathway.state(k), times(k)) * v;
  }
  const complex overlap = vibrational_overlap(pathway, times);
  if (std::abs(overlap) < 1e-300) {
    throw std::domain_error("brute-force pattern: vanishing vibrational overlap");
  }
  return v(0) / overlap;
}

complex FockOracle::heisenberg_chain(std::span<const double> dipole_times,
                                     const std::optional<Pathway>& pathway) const {
  const int n = static_cast<int>(dipole_times.size());
  if (n < 1) throw ArgumentError("heisenberg_chain: need at least one dipole");
  if (pathway) {
    if (pathway->order() != n - 1) {
      throw ArgumentError("heisenberg_chain: pathway length must be one less than dipole count");
    }
    pathway->check_against(system_);
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(full_dim());
  v(0) = 1.0;
  for (int i = n - 1, k = 1; i >= 0; --i, ++k) {
    const double tau = dipole_times[static_cast<std::size_t>(i)];
    v = apply_propagator(-tau, dipole_ * apply_propagator(tau, v));
    if (pathway && k <= pathway->order()) v = project(pathway->state(k), v);
  }
  return v(0);
}

complex brute_force_G(const Pathway& pathway, const VibronicSystem& system,
                      const WaitingTimes& times, const FockConfig& cfg) {
  return FockOracle(system, cfg).correlation(pathway, times);
}

complex brute_force_pattern(const InsertionPattern& pattern, const Pathway& pathway,
                            const VibronicSystem& system, const WaitingTimes& times,
                            const FockConfig& cfg) {
  return FockOracle(system, cfg).pattern(pattern, pathway, times);
}

double CommutatorReport::max_residual() const {
  return std::max({annihilation_residual, creation_residual, factorization_residual});
}

CommutatorReport commutator_residuals(double z, double omega, double t, const FockConfig& cfg,
                                      int interior) {
  check_dim(cfg);
  const int d = cfg.dim;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(fock::vibrational_hamiltonian(z, omega, d));
  const Eigen::MatrixXcd u = propagator_from_eigen(solver.eigenvalues(), solver.eigenvectors(), t);
  const Eigen::MatrixXcd a = fock::annihilation(d).cast<complex>();
  const Eigen::MatrixXcd ad = fock::creation(d).cast<complex>();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  const complex phase = std::polar(1.0, -omega * t);
  const complex shift = z * (phase - 1.0);

  CommutatorReport r;
  r.interior = interior;
  r.annihilation_residual =
      fock::leading_block_max_abs(a * u - u * (a * phase + shift * id), interior);
  r.creation_residual = fock::leading_block_max_abs(u * ad - (ad * phase + shift * id) * u, interior);
  r.factorization_residual =
      fock::leading_block_max_abs(u - fock::factorized_propagator(z, omega, t, d), interior);
  return r;
}

CommutatorReport verify_commutators(const VibronicSystem& system, const FockConfig& cfg, double t,
                                    int interior) {
  require_valid(system);
  CommutatorReport worst;
  worst.interior = interior;
  for (int j = 0; j < system.n_levels; ++j) {
    const CommutatorReport r = commutator_residuals(system.z(j), system.omega, t, cfg, interior);
    worst.annihilation_residual = std::max(worst.annihilation_residual, r.annihilation_residual);
    worst.creation_residual = std::max(worst.creation_residual, r.creation_residual);
    worst.factorization_residual = std::max(worst.factorization_residual, r.factorization_residual);
  }
  return worst;
}

}  // namespace vibronic
