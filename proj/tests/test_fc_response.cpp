#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "vibronic/closed_form.hpp"
#include "vibronic/fc_response.hpp"
#include "vibronic/fock_oracle.hpp"
#include "vibronic/verify.hpp"

using namespace vibronic;
using std::numbers::pi;

namespace {

VibronicSystem with_displacements(std::vector<double> z, double omega = 1.0) {
  VibronicSystem s;
  s.n_levels = static_cast<int>(z.size());
  s.omega = omega;
  s.energies.assign(z.size(), 0.0);
  for (std::size_t j = 1; j < z.size(); ++j) s.energies[j] = 1.0 + 0.7 * static_cast<double>(j);
  s.displacements = std::move(z);
  s.mu0 = Eigen::MatrixXd::Ones(s.n_levels, s.n_levels);
  s.mu1 = Eigen::MatrixXd::Zero(s.n_levels, s.n_levels);
  return s;
}

// Exponents written out term by term for two and three waiting times.
complex exponent_m2(double zj, double zk, const WaitingTimes& t, double w) {
  auto x = [&](int a, int b) { return chi(a, b, t, w) - 1.0; };
  return zj * (zj - zk) * x(1, 1) + (zk - zj) * zk * x(2, 2) + zj * zk * x(1, 2);
}

complex exponent_m3(double zj, double zk, double zl, const WaitingTimes& t, double w) {
  auto x = [&](int a, int b) { return chi(a, b, t, w) - 1.0; };
  return zj * (zj - zk) * x(1, 1) + (zk - zj) * (zk - zl) * x(2, 2) + (zl - zk) * zl * x(3, 3) +
         zj * (zk - zl) * x(1, 2) + (zk - zj) * zl * x(2, 3) + zj * zl * x(1, 3);
}

}  // namespace

TEST_CASE("g_vibrational: zero displacement and zero time", "[fc]") {
  std::mt19937_64 rng(5);
  const auto flat = with_displacements({0.0, 0.0, 0.0});
  for (int m = 1; m <= 4; ++m) {
    const WaitingTimes t = random_times(rng, m, 1.0);
    for (const auto& p : all_pathways(3, m)) CHECK(g_vibrational_fc(p, flat, t) == complex(1.0));
  }
  const auto s = with_displacements({0.0, 0.3, -0.2});
  const WaitingTimes zero{0.0, 0.0, 0.0};
  CHECK(std::abs(g_vibrational_fc(Pathway{1, 2, 1}, s, zero) - 1.0) < 1e-15);
}

TEST_CASE("g_vibrational, M=1 at omega t = pi", "[fc]") {
  const auto s = with_displacements({0.0, 0.3});
  const complex g = g_vibrational_fc(Pathway{1}, s, WaitingTimes{pi});
  CHECK(std::abs(g - std::exp(-0.18)) < 1e-15);
}

TEST_CASE("general exponent matches the per-order expansions", "[fc]") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> z(-0.5, 0.5);
  for (int i = 0; i < 100; ++i) {
    const auto s = with_displacements({0.0, z(rng), z(rng), z(rng)}, 0.9);
    const WaitingTimes t1 = random_times(rng, 1, s.omega);
    const WaitingTimes t2 = random_times(rng, 2, s.omega);
    const WaitingTimes t3 = random_times(rng, 3, s.omega);
    const double zj = s.z(1), zk = s.z(2), zl = s.z(3);

    const complex m1 = std::exp(zj * zj * (chi(1, 1, t1, s.omega) - 1.0));
    CHECK(std::abs(g_vibrational_fc(Pathway{1}, s, t1) - m1) < 1e-13);

    const complex m2 = std::exp(exponent_m2(zj, zk, t2, s.omega));
    CHECK(std::abs(g_vibrational_fc(Pathway{1, 2}, s, t2) - m2) < 1e-13);

    const complex m3 = std::exp(exponent_m3(zj, zk, zl, t3, s.omega));
    CHECK(std::abs(g_vibrational_fc(Pathway{1, 2, 3}, s, t3) - m3) < 1e-13);

    for (const Pathway& p : {Pathway{3}, Pathway{2, 1}, Pathway{1, 3, 2}, Pathway{3, 3, 1}}) {
      const WaitingTimes& t = p.order() == 1 ? t1 : p.order() == 2 ? t2 : t3;
      CHECK(std::abs(g_vibrational_fc(p, s, t) - closed_form_g_vibrational(p, s, t)) < 1e-13);
    }
  }
}

TEST_CASE("FC overlap against truncated Fock propagation", "[fc][oracle]") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 4; ++i) {
    const VibronicSystem s = random_system(rng);
    const FockOracle oracle(s);
    for (int m = 1; m <= 3; ++m) {
      for (const auto& p : all_pathways(s.n_levels, m)) {
        const WaitingTimes t = random_times(rng, m, s.omega);
        CHECK(std::abs(g_vibrational_fc(p, s, t) - oracle.vibrational_overlap(p, t)) < 1e-9);
      }
    }
  }
}

TEST_CASE("g_electronic is the accumulated phase", "[fc]") {
  auto s = with_displacements({0.0, 0.1, 0.2});
  s.energies = {0.0, 2.0, 3.5};
  const WaitingTimes t{0.4, 1.1, 0.25};
  const complex g = g_electronic(Pathway{1, 2, 1}, s, t);
  CHECK(std::abs(g - std::polar(1.0, -(2.0 * 0.4 + 3.5 * 1.1 + 2.0 * 0.25))) < 1e-15);
  CHECK_THROWS_AS(g_electronic(Pathway{1, 2}, s, t), ArgumentError);
}

TEST_CASE("fc_prefactor", "[fc]") {
  auto s = with_displacements({0.0, 0.1, 0.2});
  CHECK(fc_prefactor(Pathway{1, 2, 1}, s) == 1.0);  // all-ones mu0

  s.mu0 = Eigen::MatrixXd{{0.0, 0.7, 0.0}, {0.7, 0.1, 0.8}, {0.0, 0.8, 0.0}};
  CHECK(fc_prefactor(Pathway{1}, s) == 0.7 * 0.7);
  CHECK(fc_prefactor(Pathway{2}, s) == 0.0);  // forbidden 0-2 link
  CHECK(fc_prefactor(Pathway{1, 2, 1}, s) == 0.7 * 0.8 * 0.8 * 0.7);
  CHECK(fc_prefactor(Pathway{1, 1}, s) == 0.7 * 0.1 * 0.7);

  const auto f = fc_factorization(Pathway{1, 2, 1}, s, WaitingTimes{0.1, 0.2, 0.3});
  CHECK(f.c_fc == fc_prefactor(Pathway{1, 2, 1}, s));
}
