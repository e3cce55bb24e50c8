#include "vibronic/fc_response.hpp"

namespace vibronic {

namespace {

void check_lengths(const Pathway& pathway, const VibronicSystem& system,
                   const WaitingTimes& times) {
  if (pathway.order() != times.order()) {
    throw ArgumentError("pathway length " + std::to_string(pathway.order()) +
                        " does not match " + std::to_string(times.order()) + " waiting times");
  }
  pathway.check_against(system);
}

}  // namespace

complex g_electronic(const Pathway& pathway, const VibronicSystem& system,
                     const WaitingTimes& times) {
  check_lengths(pathway, system, times);
  double phase = 0.0;
  for (int k = 1; k <= times.order(); ++k) phase += system.energy(pathway.state(k)) * times(k);
  return std::polar(1.0, -phase);
}

complex vibrational_exponent(const Pathway& pathway, const VibronicSystem& system,
                             const WaitingTimes& times) {
  check_lengths(pathway, system, times);
  const int m = times.order();
  auto zs = [&](int k) { return system.z(pathway.state(k)); };
  complex f{0.0, 0.0};
  for (int span = 0; span < m; ++span) {
    for (int j = 1; j + span <= m; ++j) {
      const double left = zs(j) - zs(j - 1);
      const double right = zs(j + span) - zs(j + span + 1);
      if (left == 0.0 || right == 0.0) continue;
      f += left * right * (chi(j, j + span, times, system.omega) - 1.0);
    }
  }
  return f;
}

complex g_vibrational_fc(const Pathway& pathway, const VibronicSystem& system,
                         const WaitingTimes& times) {
  return std::exp(vibrational_exponent(pathway, system, times));
}

double fc_prefactor(const Pathway& pathway, const VibronicSystem& system) {
  pathway.check_against(system);
  double c = 1.0;
  for (int k = 1; k <= pathway.order() + 1; ++k) {
    c *= system.mu0(pathway.state(k), pathway.state(k - 1));
  }
  return c;
}

FCFactorization fc_factorization(const Pathway& pathway, const VibronicSystem& system,
                                 const WaitingTimes& times) {
  return {g_electronic(pathway, system, times), g_vibrational_fc(pathway, system, times),
          fc_prefactor(pathway, system)};
}

}  // namespace vibronic
