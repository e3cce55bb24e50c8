#include "vibronic/ht_expansion.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

namespace vibronic {

namespace {

using SlotMask = std::uint64_t;
constexpr int kMaxSlots = 62;

constexpr SlotMask bit(int slot) { return SlotMask{1} << slot; }

void check_alignment(const Pathway& pathway, const VibronicSystem& system,
                     const WaitingTimes& times) {
  if (pathway.order() != times.order()) {
    throw ArgumentError("pathway length " + std::to_string(pathway.order()) +
                        " does not match " + std::to_string(times.order()) + " waiting times");
  }
  if (pathway.order() + 1 > kMaxSlots) throw ArgumentError("order too large");
  pathway.check_against(system);
}

void check_slot(int k, int order, const char* what) {
  if (k < 1 || k > order + 1) {
    throw ArgumentError(std::string(what) + ": slot " + std::to_string(k) + " outside 1.." +
                        std::to_string(order + 1));
  }
}

// Evaluates f_{p...|q...} for one (pathway, times) point. Patterns are bit
// masks over slots 1..M+1.
class PatternReducer {
 public:
  PatternReducer(const Pathway& pathway, const VibronicSystem& system, const WaitingTimes& times)
      : order_(times.order()),
        coeffs_(SlotCoefficients::by_recursion(pathway, system, times)),
        chi_(static_cast<std::size_t>((order_ + 2) * (order_ + 2)), complex{0.0, 0.0}) {
    for (int k = 1; k <= order_ + 1; ++k) {
      for (int l = 0; l <= order_; ++l) chi_[index(k, l)] = chi_or_zero(k, l, times, system.omega);
    }
  }

  complex reduce(SlotMask ann, SlotMask cre) const {
    if (cre == 0) return product_a(ann);
    const int lowest_cre = std::countr_zero(cre);
    const int highest_ann = ann == 0 ? 0 : 63 - std::countl_zero(ann);
    if (highest_ann < lowest_cre) return product_a(ann) * product_c(cre);

    const SlotMask rest = cre & ~bit(lowest_cre);
    complex value = coeffs_.c[static_cast<std::size_t>(lowest_cre)] * reduce(ann, rest);
    for (SlotMask scan = ann; scan != 0; scan &= scan - 1) {
      const int p = std::countr_zero(scan);
      if (p <= lowest_cre) continue;
      value += contraction(lowest_cre, p - 1) * reduce(ann & ~bit(p), rest);
    }
    return value;
  }

 private:
  std::size_t index(int k, int l) const { return static_cast<std::size_t>(k * (order_ + 2) + l); }
  complex contraction(int k, int l) const { return chi_[index(k, l)]; }

  complex product_a(SlotMask mask) const {
    complex v{1.0, 0.0};
    for (; mask != 0; mask &= mask - 1) v *= coeffs_.a[static_cast<std::size_t>(std::countr_zero(mask))];
    return v;
  }
  complex product_c(SlotMask mask) const {
    complex v{1.0, 0.0};
    for (; mask != 0; mask &= mask - 1) v *= coeffs_.c[static_cast<std::size_t>(std::countr_zero(mask))];
    return v;
  }

  int order_;
  SlotCoefficients coeffs_;
  std::vector<complex> chi_;
};

SlotMask to_mask(const std::vector<int>& slots) {
  SlotMask m = 0;
  for (int s : slots) m |= bit(s);
  return m;
}

double coefficient_for_mask(SlotMask ht_slots, const Pathway& pathway,
                            const VibronicSystem& system) {
  double c = 1.0;
  for (int k = 1; k <= pathway.order() + 1; ++k) {
    const Eigen::MatrixXd& mu = (ht_slots & bit(k)) ? system.mu1 : system.mu0;
    c *= mu(pathway.state(k), pathway.state(k - 1));
    if (c == 0.0) return 0.0;
  }
  return c;
}

void check_pattern(const InsertionPattern& p, int order) {
  SlotMask seen = 0;
  auto visit = [&](const std::vector<int>& slots, const char* kind) {
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const int s = slots[i];
      if (s < 1 || s > order + 1) {
        throw ArgumentError(std::string("pattern: ") + kind + " slot " + std::to_string(s) +
                            " outside 1.." + std::to_string(order + 1));
      }
      if (i > 0 && slots[i - 1] >= s) {
        throw ArgumentError(std::string("pattern: ") + kind + " slots not strictly ascending");
      }
      if (seen & bit(s)) {
        throw ArgumentError("pattern: slot " + std::to_string(s) + " used twice");
      }
      seen |= bit(s);
    }
  };
  visit(p.ann, "annihilation");
  visit(p.cre, "creation");
}

}  // namespace

InsertionPattern make_pattern(std::vector<int> ann, std::vector<int> cre, int order) {
  if (order < 1 || order + 1 > kMaxSlots) throw ArgumentError("pattern: unsupported order");
  for (auto* v : {&ann, &cre}) {
    std::sort(v->begin(), v->end());
    if (std::adjacent_find(v->begin(), v->end()) != v->end()) {
      throw ArgumentError("pattern: repeated slot index");
    }
  }
  InsertionPattern p{std::move(ann), std::move(cre)};
  check_pattern(p, order);
  return p;
}

InsertionPattern parse_pattern(std::string_view notation, int order) {
  const auto bar = notation.find('|');
  if (bar == std::string_view::npos || notation.find('|', bar + 1) != std::string_view::npos) {
    throw ArgumentError("pattern notation needs exactly one '|': " + std::string(notation));
  }
  auto parse_side = [&](std::string_view side) {
    std::vector<int> slots;
    const bool comma = side.find(',') != std::string_view::npos;
    int current = -1;
    for (char ch : side) {
      if (ch == ' ') continue;
      if (ch == ',') {
        if (current < 0) throw ArgumentError("pattern notation: empty slot");
        slots.push_back(current);
        current = -1;
      } else if (ch >= '0' && ch <= '9') {
        if (comma) {
          current = (current < 0 ? 0 : current * 10) + (ch - '0');
        } else {
          slots.push_back(ch - '0');
        }
      } else {
        throw ArgumentError("pattern notation: unexpected character in " + std::string(notation));
      }
    }
    if (comma) {
      if (current < 0) throw ArgumentError("pattern notation: trailing comma");
      slots.push_back(current);
    }
    return slots;
  };
  return make_pattern(parse_side(notation.substr(0, bar)), parse_side(notation.substr(bar + 1)),
                      order);
}

std::string to_string(const InsertionPattern& pattern) {
  const bool wide = (!pattern.ann.empty() && pattern.ann.back() > 9) ||
                    (!pattern.cre.empty() && pattern.cre.back() > 9);
  auto side = [&](const std::vector<int>& slots) {
    std::string s;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (wide && i > 0) s += ",";
      s += std::to_string(slots[i]);
    }
    return s;
  };
  return side(pattern.ann) + "|" + side(pattern.cre);
}

complex a_coeff(int k, const Pathway& pathway, const VibronicSystem& system,
                const WaitingTimes& times) {
  check_alignment(pathway, system, times);
  check_slot(k, times.order(), "a_coeff");
  complex sum{0.0, 0.0};
  for (int j = 1; j <= k - 1; ++j) {
    sum += f_disp(pathway.state(j), j, system, times) * chi(j + 1, k - 1, times, system.omega);
  }
  return sum;
}

complex c_coeff(int k, const Pathway& pathway, const VibronicSystem& system,
                const WaitingTimes& times) {
  check_alignment(pathway, system, times);
  check_slot(k, times.order(), "c_coeff");
  complex sum{0.0, 0.0};
  for (int j = k; j <= times.order(); ++j) {
    sum += f_disp(pathway.state(j), j, system, times) * chi(k, j - 1, times, system.omega);
  }
  return sum;
}

complex chi_or_zero(int k, int l, const WaitingTimes& times, double omega) {
  if (k > l) return {0.0, 0.0};
  return chi(k, l, times, omega);
}

SlotCoefficients SlotCoefficients::by_recursion(const Pathway& pathway,
                                                const VibronicSystem& system,
                                                const WaitingTimes& times) {
  check_alignment(pathway, system, times);
  const int m = times.order();
  SlotCoefficients out;
  out.a.assign(static_cast<std::size_t>(m + 2), complex{0.0, 0.0});
  out.c.assign(static_cast<std::size_t>(m + 2), complex{0.0, 0.0});
  for (int k = 2; k <= m + 1; ++k) {
    out.a[static_cast<std::size_t>(k)] =
        out.a[static_cast<std::size_t>(k - 1)] * chi(k - 1, k - 1, times, system.omega) +
        f_disp(pathway.state(k - 1), k - 1, system, times);
  }
  for (int k = m; k >= 1; --k) {
    out.c[static_cast<std::size_t>(k)] =
        out.c[static_cast<std::size_t>(k + 1)] * chi(k, k, times, system.omega) +
        f_disp(pathway.state(k), k, system, times);
  }
  return out;
}

complex reduce_pattern(const InsertionPattern& pattern, const Pathway& pathway,
                       const VibronicSystem& system, const WaitingTimes& times) {
  check_alignment(pathway, system, times);
  check_pattern(pattern, times.order());
  const PatternReducer reducer(pathway, system, times);
  return reducer.reduce(to_mask(pattern.ann), to_mask(pattern.cre));
}

std::vector<InsertionPattern> enumerate_patterns(int order, int ht_order) {
  const int slots = order + 1;
  if (order < 1 || slots > kMaxSlots) throw ArgumentError("enumerate_patterns: bad order");
  if (ht_order < 0 || ht_order > slots) {
    throw ArgumentError("enumerate_patterns: HT order " + std::to_string(ht_order) +
                        " outside 0.." + std::to_string(slots));
  }
  std::vector<InsertionPattern> out;
  // Subsets of {1..M+1} of size p in lexicographic order, then every a/a^dagger
  // assignment with the annihilation-heavy assignment first.
  std::vector<int> chosen(static_cast<std::size_t>(ht_order));
  for (int i = 0; i < ht_order; ++i) chosen[static_cast<std::size_t>(i)] = i + 1;
  while (true) {
    const SlotMask assignments = SlotMask{1} << ht_order;
    for (SlotMask kinds = 0; kinds < assignments; ++kinds) {
      InsertionPattern p;
      for (int i = 0; i < ht_order; ++i) {
        const int slot = chosen[static_cast<std::size_t>(i)];
        ((kinds >> i) & 1U ? p.cre : p.ann).push_back(slot);
      }
      out.push_back(std::move(p));
    }
    int i = ht_order - 1;
    while (i >= 0 && chosen[static_cast<std::size_t>(i)] == slots - (ht_order - 1 - i)) --i;
    if (i < 0) break;
    ++chosen[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < ht_order; ++j) {
      chosen[static_cast<std::size_t>(j)] = chosen[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

double ht_coefficient(const InsertionPattern& pattern, const Pathway& pathway,
                      const VibronicSystem& system) {
  pathway.check_against(system);
  check_pattern(pattern, pathway.order());
  return coefficient_for_mask(to_mask(pattern.ann) | to_mask(pattern.cre), pathway, system);
}

complex r_factor(int ht_order, const Pathway& pathway, const VibronicSystem& system,
                 const WaitingTimes& times) {
  check_alignment(pathway, system, times);
  const PatternReducer reducer(pathway, system, times);
  complex sum{0.0, 0.0};
  for (const auto& p : enumerate_patterns(times.order(), ht_order)) {
    const SlotMask ann = to_mask(p.ann);
    const SlotMask cre = to_mask(p.cre);
    const double c = coefficient_for_mask(ann | cre, pathway, system);
    if (c != 0.0) sum += c * reducer.reduce(ann, cre);
  }
  return sum;
}

complex response_prefactor(int order, PrefactorConvention convention) {
  if (convention == PrefactorConvention::unity) return {1.0, 0.0};
  switch (order) {
    case 1:
      return {0.0, 1.0};
    case 2:
      return {1.0, 0.0};
    case 3:
      return {0.0, -1.0};
    default:
      return {1.0, 0.0};
  }
}

ResponseSample response(const Pathway& pathway, const VibronicSystem& system,
                        const WaitingTimes& times, const ResponseOptions& options) {
  check_alignment(pathway, system, times);
  const int m = times.order();
  const int slots = m + 1;
  const int max_order = options.max_ht_order.value_or(slots);
  if (max_order < 0 || max_order > slots) {
    throw ArgumentError("max_ht_order " + std::to_string(max_order) + " outside 0.." +
                        std::to_string(slots));
  }

  // Slot k holds mu_0 (digit 0), mu_1 a (digit 1) or mu_1 a^dagger (digit 2).
  std::vector<complex> r(static_cast<std::size_t>(slots + 1), complex{0.0, 0.0});
  const PatternReducer reducer(pathway, system, times);
  std::vector<double> coefficient(std::size_t{1} << slots);
  for (SlotMask s = 0; s < coefficient.size(); ++s) {
    coefficient[s] = coefficient_for_mask(s << 1, pathway, system);
  }
  std::vector<int> digits(static_cast<std::size_t>(slots), 0);
  while (true) {
    SlotMask ann = 0, cre = 0;
    int order = 0;
    for (int k = 1; k <= slots; ++k) {
      const int d = digits[static_cast<std::size_t>(k - 1)];
      if (d == 1) ann |= bit(k);
      if (d == 2) cre |= bit(k);
      order += d != 0;
    }
    if (order <= max_order) {
      const double c = coefficient[(ann | cre) >> 1];
      if (c != 0.0) r[static_cast<std::size_t>(order)] += c * reducer.reduce(ann, cre);
    }
    int pos = 0;
    while (pos < slots && ++digits[static_cast<std::size_t>(pos)] == 3) {
      digits[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == slots) break;
  }

  ResponseSample out;
  out.prefactor = response_prefactor(m, options.prefactor);
  out.g_electronic = g_electronic(pathway, system, times);
  out.g_vibrational = g_vibrational_fc(pathway, system, times);
  const complex common = out.prefactor * out.g_electronic * out.g_vibrational;
  out.fc_part = common * r[0];
  out.value = out.fc_part;
  out.ht_parts.reserve(static_cast<std::size_t>(max_order));
  for (int p = 1; p <= max_order; ++p) {
    out.ht_parts.push_back(common * r[static_cast<std::size_t>(p)]);
    out.value += out.ht_parts.back();
  }
  return out;
}

}  // namespace vibronic
