#pragma once

// Herzberg-Teller expansion of the M-th order response function.
//
// Replacing the mu_0 at dipole slot k by mu_1 (a + a^dagger) inserts either an
// annihilation or a creation operator between U_{k-1} and U_k. Slot 1 sits to
// the right of U_1 (next to |0>), slot M+1 to the left of U_M (next to <0|).
// Each choice of slots and operator kinds is an InsertionPattern; its
// vibrational expectation value, normalized by the FC overlap g^(v), is
// obtained by pushing creation operators to the left one at a time and
// collecting the contractions with annihilation operators they cross.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vibronic/fc_response.hpp"
#include "vibronic/model.hpp"

namespace vibronic {

struct InsertionPattern {
  std::vector<int> ann;  // slots holding a, sorted ascending
  std::vector<int> cre;  // slots holding a^dagger, sorted ascending

  int ht_order() const { return static_cast<int>(ann.size() + cre.size()); }
  bool operator==(const InsertionPattern&) const = default;
};

/// Sorts the index lists and checks them against order M (slots 1..M+1,
/// disjoint, no repeats). Throws ArgumentError on malformed input.
InsertionPattern make_pattern(std::vector<int> ann, std::vector<int> cre, int order);

/// Parses "34|12" (annihilations left of the bar, creations right). Slots
/// above 9 are written comma-separated, e.g. "10,2|1".
InsertionPattern parse_pattern(std::string_view notation, int order);

std::string to_string(const InsertionPattern& pattern);

/// a_k = sum_{j=1}^{k-1} f_{e_j,j} chi_{j+1,k-1}; a_1 = 0.
complex a_coeff(int k, const Pathway& pathway, const VibronicSystem& system,
                const WaitingTimes& times);

/// c_k = sum_{j=k}^{M} f_{e_j,j} chi_{k,j-1}; c_{M+1} = 0.
/// Pushing a^dagger left through U gives U a^dagger = [a^dagger chi + z (chi - 1)] U,
/// so c_k carries the same sign as a_k (U is symmetric in the number basis).
complex c_coeff(int k, const Pathway& pathway, const VibronicSystem& system,
                const WaitingTimes& times);

/// Contraction phase: chi_{kl} for k <= l, zero otherwise (a^dagger at slot k
/// can only meet an annihilator that sits to its left).
complex chi_or_zero(int k, int l, const WaitingTimes& times, double omega);

/// a_k and c_k for every slot, built with the one-step recursions
///   a_k = a_{k-1} chi_{k-1} + f_{e_{k-1},k-1},   c_k = c_{k+1} chi_k + f_{e_k,k}.
/// Index 0 is unused; valid indices are 1..M+1.
struct SlotCoefficients {
  std::vector<complex> a;
  std::vector<complex> c;

  static SlotCoefficients by_recursion(const Pathway& pathway, const VibronicSystem& system,
                                       const WaitingTimes& times);
};

/// <0| ... |0> / g^(v) for the pattern.
complex reduce_pattern(const InsertionPattern& pattern, const Pathway& pathway,
                       const VibronicSystem& system, const WaitingTimes& times);

/// Every way of placing p operators on the M+1 slots. Patterns that vanish
/// identically (a at slot 1, a^dagger at slot M+1) are included.
std::vector<InsertionPattern> enumerate_patterns(int order, int ht_order);

/// prod_k <e_k|mu_{b_k}|e_{k-1}> with b_k = 1 on the pattern's slots.
double ht_coefficient(const InsertionPattern& pattern, const Pathway& pathway,
                      const VibronicSystem& system);

/// r_p = sum over patterns of HT order p of ht_coefficient * reduce_pattern.
complex r_factor(int ht_order, const Pathway& pathway, const VibronicSystem& system,
                 const WaitingTimes& times);

enum class PrefactorConvention {
  paper,  // i, 1, -i for M = 1, 2, 3; 1 beyond
  unity,  // always 1: the bare correlation function G
};

complex response_prefactor(int order, PrefactorConvention convention);

struct ResponseOptions {
  std::optional<int> max_ht_order;  // defaults to M+1
  PrefactorConvention prefactor = PrefactorConvention::paper;
};

struct ResponseSample {
  complex value;
  complex fc_part;
  std::vector<complex> ht_parts;  // ht_parts[p-1] for p = 1..max_ht_order
  complex prefactor{1.0, 0.0};
  complex g_electronic{1.0, 0.0};
  complex g_vibrational{1.0, 0.0};

  /// value / prefactor: the pathway-resolved correlation function G.
  complex correlation() const { return value / prefactor; }
};

ResponseSample response(const Pathway& pathway, const VibronicSystem& system,
                        const WaitingTimes& times, const ResponseOptions& options = {});

}  // namespace vibronic
