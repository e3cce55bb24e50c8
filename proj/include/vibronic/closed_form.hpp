#pragma once

// Hand-written response functions for M = 1, 2, 3: every f_{p..|q..} term is
// spelled out explicitly in terms of f_{j,k} and chi, the FC overlap uses the
// per-order expansions rather than the general double sum. Nothing here calls
// into the pattern reducer, so it doubles as an independent check of it.

#include "vibronic/ht_expansion.hpp"
#include "vibronic/model.hpp"

namespace vibronic {

/// exp[z_j^2 (chi_1 - 1)], exp[z_j z_jk (chi_1 - 1) + ...] etc. for M <= 3.
complex closed_form_g_vibrational(const Pathway& pathway, const VibronicSystem& system,
                                  const WaitingTimes& times);

/// r_p for M <= 3, p = 0..M+1, from the explicit tables.
complex closed_form_r(int ht_order, const Pathway& pathway, const VibronicSystem& system,
                      const WaitingTimes& times);

/// Same assembly and prefactor rules as response(). Throws UnsupportedError
/// for M > 3.
ResponseSample closed_form_response(const Pathway& pathway, const VibronicSystem& system,
                                    const WaitingTimes& times, const ResponseOptions& options = {});

}  // namespace vibronic
