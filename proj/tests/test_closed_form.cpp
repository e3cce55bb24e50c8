#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "vibronic/closed_form.hpp"
#include "vibronic/ht_expansion.hpp"
#include "vibronic/verify.hpp"

using namespace vibronic;

TEST_CASE("closed forms agree with the recursive engine, order by order", "[closed]") {
  std::mt19937_64 rng(61);
  for (int n = 0; n < 10; ++n) {
    const VibronicSystem s = random_system(rng);
    for (int m = 1; m <= 3; ++m) {
      for (const auto& p : all_pathways(3, m)) {
        const WaitingTimes t = random_times(rng, m, s.omega);
        for (int q = 0; q <= m + 1; ++q) {
          CHECK(std::abs(closed_form_r(q, p, s, t) - r_factor(q, p, s, t)) < 1e-13);
        }
        CHECK(std::abs(closed_form_g_vibrational(p, s, t) - g_vibrational_fc(p, s, t)) < 1e-13);
      }
    }
  }
}

TEST_CASE("closed-form response assembly", "[closed]") {
  std::mt19937_64 rng(67);
  const VibronicSystem s = random_system(rng);
  for (int m = 1; m <= 3; ++m) {
    const WaitingTimes t = random_times(rng, m, s.omega);
    const Pathway p(std::vector<int>(static_cast<std::size_t>(m), 1));
    for (auto conv : {PrefactorConvention::paper, PrefactorConvention::unity}) {
      for (int max = 0; max <= m + 1; ++max) {
        const ResponseOptions o{max, conv};
        const auto a = closed_form_response(p, s, t, o);
        const auto b = response(p, s, t, o);
        CHECK(a.prefactor == b.prefactor);
        REQUIRE(a.ht_parts.size() == b.ht_parts.size());
        CHECK(std::abs(a.value - b.value) < 1e-12);
        CHECK(std::abs(a.fc_part - b.fc_part) < 1e-12);
        for (std::size_t i = 0; i < a.ht_parts.size(); ++i) {
          CHECK(std::abs(a.ht_parts[i] - b.ht_parts[i]) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("closed forms stop at third order", "[closed]") {
  std::mt19937_64 rng(71);
  const VibronicSystem s = random_system(rng);
  const WaitingTimes t = random_times(rng, 4, s.omega);
  CHECK_THROWS_AS(closed_form_response(Pathway{1, 2, 1, 2}, s, t), UnsupportedError);
  CHECK_THROWS_AS(closed_form_r(1, Pathway{1, 2, 1, 2}, s, t), UnsupportedError);
  CHECK_THROWS_AS(closed_form_r(5, Pathway{1, 2, 1}, s, random_times(rng, 3, s.omega)),
                  ArgumentError);
}
