#pragma once

// Franck-Condon factorization of a single pathway: electronic phase,
// vibrational overlap <0|U_M...U_1|0> and the product of mu_0 elements.

#include "vibronic/model.hpp"

namespace vibronic {

struct FCFactorization {
  complex g_electronic;
  complex g_vibrational;
  double c_fc = 0.0;
};

/// exp(-i sum_k eps_{e_k} t_k).
complex g_electronic(const Pathway& pathway, const VibronicSystem& system,
                     const WaitingTimes& times);

/// exp(f), with f the double sum over contiguous time blocks
///   f = sum_{k=0}^{M-1} sum_{j=1}^{M-k} (z_{e_j}-z_{e_{j-1}})(z_{e_{j+k}}-z_{e_{j+k+1}})(chi_{j,j+k}-1).
complex g_vibrational_fc(const Pathway& pathway, const VibronicSystem& system,
                         const WaitingTimes& times);

/// The exponent f above; exposed for tests and for log-domain users.
complex vibrational_exponent(const Pathway& pathway, const VibronicSystem& system,
                             const WaitingTimes& times);

/// <0|mu0|e_M> ... <e_1|mu0|0>.
double fc_prefactor(const Pathway& pathway, const VibronicSystem& system);

FCFactorization fc_factorization(const Pathway& pathway, const VibronicSystem& system,
                                 const WaitingTimes& times);

}  // namespace vibronic
