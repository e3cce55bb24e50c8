// Acceptance suite: one PASS/FAIL line per criterion, details indented below.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "vibronic/closed_form.hpp"
#include "vibronic/config.hpp"
#include "vibronic/diagrams.hpp"
#include "vibronic/fc_response.hpp"
#include "vibronic/fock_oracle.hpp"
#include "vibronic/ht_expansion.hpp"
#include "vibronic/spectra.hpp"
#include "vibronic/verify.hpp"

using namespace vibronic;
using std::numbers::pi;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = true;
  std::vector<std::string> details;

  void note(const char* fmt, auto... args) {
    if constexpr (sizeof...(args) == 0) {
      details.emplace_back(fmt);
    } else {
      char buf[512];
      std::snprintf(buf, sizeof buf, fmt, args...);
      details.emplace_back(buf);
    }
  }
  // Records a bounded quantity; NaN never passes.
  void bound(const std::string& what, double value, double limit) {
    const bool ok = value <= limit;
    passed = passed && ok;
    note("%-52s %.3e  (limit %.0e)  %s", what.c_str(), value, limit, ok ? "ok" : "BREACH");
  }
  void require(const std::string& what, bool ok) {
    passed = passed && ok;
    note("%-52s %s", what.c_str(), ok ? "ok" : "BREACH");
  }
};

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

const ResponseOptions kBare{std::nullopt, PrefactorConvention::unity};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<VibronicSystem> seeded_systems(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<VibronicSystem> out;
  for (int i = 0; i < count; ++i) out.push_back(random_system(rng));
  return out;
}

Pathway random_pathway(std::mt19937_64& rng, int order, int n_levels) {
  std::uniform_int_distribution<int> st(0, n_levels - 1);
  std::vector<int> e(static_cast<std::size_t>(order));
  for (auto& v : e) v = st(rng);
  return Pathway(std::move(e));
}

// 1 -------------------------------------------------------------------------
Outcome oracle_low_orders() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto systems = seeded_systems(1001, 20);
  std::mt19937_64 rng(1002);
  double worst[4] = {0, 0, 0, 0}, gate = 0.0;
  int samples = 0;
  for (const auto& s : systems) {
    const FockOracle oracle(s, {48}), finer(s, {64});
    for (int m = 1; m <= 3; ++m) {
      for (const auto& p : all_pathways(s.n_levels, m)) {
        const WaitingTimes t = random_times(rng, m, s.omega);
        const complex g = oracle.correlation(p, t);
        worst[m] = std::max(worst[m], std::abs(response(p, s, t, kBare).correlation() - g));
        gate = std::max(gate, std::abs(g - finer.correlation(p, t)));
        ++samples;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  o.note("20 systems, every pathway of M=1..3, D=48: %d samples", samples);
  o.bound("truncation check |G(D=48) - G(D=64)|", gate, 1e-10);
  for (int m = 1; m <= 3; ++m) o.bound("max |R - G_oracle|, M=" + std::to_string(m), worst[m], 1e-8);
  o.bound("runtime [s]", elapsed, 60.0);
  return o;
}

// 2 -------------------------------------------------------------------------
Outcome oracle_fourth_order() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto systems = seeded_systems(1001, 20);
  std::mt19937_64 rng(2002);
  const Pathway p{1, 2, 1, 2};
  double worst = 0.0, gate = 0.0;
  for (const auto& s : systems) {
    const FockOracle oracle(s, {48}), finer(s, {64});
    for (int i = 0; i < 5; ++i) {
      const WaitingTimes t = random_times(rng, 4, s.omega);
      const complex g = oracle.correlation(p, t);
      worst = std::max(worst, std::abs(response(p, s, t, kBare).correlation() - g));
      gate = std::max(gate, std::abs(g - finer.correlation(p, t)));
    }
  }
  o.note("pathway (1,2,1,2), 20 systems x 5 time tuples, D=48");
  o.bound("truncation check |G(D=48) - G(D=64)|", gate, 1e-10);
  o.bound("max |R - G_oracle|, M=4", worst, 1e-8);
  o.bound("runtime [s]", seconds_since(t0), 120.0);
  return o;
}

// 3 -------------------------------------------------------------------------
Outcome closed_forms() {
  Outcome o;
  std::mt19937_64 rng(3003);
  for (int m = 1; m <= 3; ++m) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const VibronicSystem s = random_system(rng);
      const Pathway p = random_pathway(rng, m, s.n_levels);
      const WaitingTimes t = random_times(rng, m, s.omega);
      worst = std::max(worst, std::abs(closed_form_response(p, s, t).value - response(p, s, t).value));
    }
    o.bound("1000 draws, max |closed form - engine|, M=" + std::to_string(m), worst, 1e-12);
  }
  return o;
}

// 4 -------------------------------------------------------------------------
// The four one-operator identities for pathway (1,2,1) at t2 = 0, taken as
// stated. The brute-force value is printed alongside to show which side
// ground truth takes where they disagree.
Outcome worked_identities() {
  Outcome o;
  std::mt19937_64 rng(4004);
  VibronicSystem s = random_system(rng);
  const double z1 = s.z(1), w = s.omega;
  const Pathway p{1, 2, 1};
  const FockOracle oracle(s);

  struct Identity {
    const char* pattern;
    std::function<complex(complex, complex)> stated;  // (chi1, chi3) -> value
  };
  const std::vector<Identity> ids = {
      {"|1", [&](complex x1, complex x3) { return -z1 * (x1 * x3 - 1.0); }},
      {"2|", [&](complex x1, complex) { return z1 * (x1 - 1.0); }},
      {"|2", [&](complex, complex x3) { return -z1 * (x3 - 1.0); }},
      {"4|", [&](complex x1, complex x3) { return z1 * (x1 * x3 - 1.0); }},
  };
  std::uniform_real_distribution<double> phase(0.0, 4.0 * pi);
  std::vector<WaitingTimes> times;
  for (int i = 0; i < 100; ++i) times.push_back(WaitingTimes{phase(rng) / w, 0.0, phase(rng) / w});

  o.note("z1 = %.6f, omega = %.6f, 100 random (t1, t3), t2 = 0", z1, w);
  for (const auto& id : ids) {
    const InsertionPattern pat = parse_pattern(id.pattern, 3);
    double vs_stated = 0.0, vs_oracle = 0.0, oracle_vs_stated = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const WaitingTimes& t = times[i];
      const complex stated = id.stated(chi(1, 1, t, w), chi(3, 3, t, w));
      const complex engine = reduce_pattern(pat, p, s, t);
      const complex truth = i < 20 ? oracle.pattern(pat, p, t) : engine;
      vs_stated = std::max(vs_stated, std::abs(engine - stated));
      vs_oracle = std::max(vs_oracle, std::abs(engine - truth));
      if (i < 20) oracle_vs_stated = std::max(oracle_vs_stated, std::abs(truth - stated));
    }
    o.bound(std::string("f_{") + id.pattern + "}: |reduce_pattern - stated identity|", vs_stated,
            1e-13);
    o.note("    f_{%s}: |reduce_pattern - brute force| = %.3e, |brute force - stated| = %.3e "
           "(20 of the draws)",
           id.pattern, vs_oracle, oracle_vs_stated);
  }
  return o;
}

// 5 -------------------------------------------------------------------------
Outcome diagram_traces() {
  Outcome o;
  const auto systems = seeded_systems(5005, 10);
  std::mt19937_64 rng(5006);
  const auto d2 = make_diagram(2, DiagramKind::left_right);
  const auto d3 = make_diagram(3, DiagramKind::left_right_right_left);
  double worst2 = 0.0, worst3 = 0.0;
  for (const auto& s : systems) {
    const FockOracle oracle(s);
    for (const auto& p : all_pathways(s.n_levels, 2)) {
      const WaitingTimes t = random_times(rng, 2, s.omega);
      // <mu(0) mu(t1 + t2) mu(t1)>: ket-side U(t1), bra-side U^dagger(t2)
      const double chain[] = {0.0, t(1) + t(2), t(1)};
      const complex trace = static_cast<double>(d2.sign) * oracle.heisenberg_chain(chain, p);
      worst2 = std::max(worst2, std::abs(transformed_response(d2, p, s, t, kBare).correlation() - trace));
    }
    for (const auto& p : all_pathways(s.n_levels, 3)) {
      const WaitingTimes t = random_times(rng, 3, s.omega);
      // <mu U^dagger(t2) mu U^dagger(t3) mu U(t1 + t2 + t3) mu>
      const double chain[] = {t(1), t(1) + t(2), t(1) + t(2) + t(3), 0.0};
      const complex trace = static_cast<double>(d3.sign) * oracle.heisenberg_chain(chain, p);
      worst3 = std::max(worst3, std::abs(transformed_response(d3, p, s, t, kBare).correlation() - trace));
    }
  }
  o.note("10 systems, every pathway, D=48");
  o.bound("left-right (M=2) vs trace form", worst2, 1e-8);
  o.bound("left-right-right-left (M=3) vs trace form", worst3, 1e-8);
  return o;
}

// 6 -------------------------------------------------------------------------
// At t2 = 0 every r_p of pathway (1,2,1) is a polynomial in chi1, chi3. Its
// monomial coefficients come from a K x K DFT over one period of each phase;
// each monomial's spectrum must be the FC spectrum moved by (k omega, l omega),
// and the replicas together must rebuild the HT spectrum computed directly.
Outcome replicas() {
  Outcome o;
  const RunConfig cfg = load_config(VIBRONIC_CONFIG_DIR "/preset_121.cfg");
  const VibronicSystem& s = cfg.system;
  const Pathway p{1, 2, 1};
  const auto diagram = make_diagram(3, DiagramKind::all_left);
  const double w = s.omega;
  const TimeGrid grid = bin_aligned_grid(256, w, 8);

  SampleOptions opts;
  opts.gamma = default_gamma(w);
  opts.response.prefactor = PrefactorConvention::unity;
  opts.component = 0;
  const Spectrum2D fc = compute_spectrum(grid, p, diagram, s, opts);
  const double peak = fc.max_abs();
  Eigen::Index i = 0, j = 0;
  fc.amplitude.cwiseAbs().maxCoeff(&i, &j);
  const double e1 = s.energy(1) - s.energy(0);
  o.note("grid 256 x 256, domega = omega/8, gamma = %.3f, FC peak |S| = %.6f", opts.gamma, peak);
  o.note("FC maximum at (omega1, omega3) = (%.6f, %.6f), expected (%.6f, %.6f)",
         fc.omega1[static_cast<std::size_t>(i)], fc.omega3[static_cast<std::size_t>(j)], e1, e1);
  o.require("FC peak on-bin at omega1 = omega3 = eps1 - eps0",
            fc.omega1[static_cast<std::size_t>(i)] == e1 && fc.omega3[static_cast<std::size_t>(j)] == e1);

  const double r0 = fc_prefactor(p, s);
  constexpr int K = 16;
  for (int order = 1; order <= 4; ++order) {
    // r_p at chi1 = exp(-2 pi i a / K), chi3 = exp(-2 pi i b / K)
    Eigen::MatrixXcd values(K, K);
    for (int a = 0; a < K; ++a) {
      for (int b = 0; b < K; ++b) {
        values(a, b) = r_factor(order, p, s, WaitingTimes{2 * pi * a / (K * w), 0.0, 2 * pi * b / (K * w)});
      }
    }
    std::map<std::pair<int, int>, complex> coeff;
    for (int k = 0; k < K; ++k) {
      for (int l = 0; l < K; ++l) {
        complex c{0.0, 0.0};
        for (int a = 0; a < K; ++a) {
          for (int b = 0; b < K; ++b) c += values(a, b) * std::polar(1.0, 2 * pi * (k * a + l * b) / K);
        }
        c /= double(K * K);
        if (std::abs(c) > 1e-15) coeff[{k, l}] = c;
      }
    }
    int top_k = 0, top_l = 0;
    for (const auto& [kl, c] : coeff) {
      top_k = std::max(top_k, kl.first);
      top_l = std::max(top_l, kl.second);
    }
    // The polynomial must close well below the aliasing limit.
    o.require("r_" + std::to_string(order) + " degree below DFT size", top_k < K / 2 && top_l < K / 2);
    std::mt19937_64 rng(6000 + order);
    std::uniform_real_distribution<double> ph(0.0, 4 * pi);
    double fit = 0.0;
    for (int n = 0; n < 20; ++n) {
      const WaitingTimes t{ph(rng) / w, 0.0, ph(rng) / w};
      complex sum{0.0, 0.0};
      for (const auto& [kl, c] : coeff) {
        sum += c * std::pow(chi(1, 1, t, w), kl.first) * std::pow(chi(3, 3, t, w), kl.second);
      }
      fit = std::max(fit, std::abs(sum - r_factor(order, p, s, t)));
    }
    o.bound("r_" + std::to_string(order) + " monomial expansion residual", fit, 1e-12);

    // Each monomial on its own.
    double worst_monomial = 0.0;
    Eigen::MatrixXcd rebuilt = Eigen::MatrixXcd::Zero(fc.amplitude.rows(), fc.amplitude.cols());
    for (const auto& [kl, c] : coeff) {
      const auto [k, l] = kl;
      const auto samples = sample_function(grid, opts.gamma, [&](double t1, double t3) {
        const WaitingTimes t{t1, 0.0, t3};
        return g_electronic(p, s, t) * g_vibrational_fc(p, s, t) * c *
               std::pow(chi(1, 1, t, w), k) * std::pow(chi(3, 3, t, w), l);
      });
      const Spectrum2D term = fourier_2d(samples, grid);
      worst_monomial = std::max(worst_monomial, replica_check(term, fc, k, l, w, c / r0) * std::abs(c / r0));
      rebuilt += (c / r0) * shifted_spectrum(fc, k, l, w);
    }
    o.note("r_%d: %zu monomials, highest powers chi1^%d chi3^%d", order, coeff.size(), top_k, top_l);
    o.bound("r_" + std::to_string(order) + " max monomial deviation / FC peak", worst_monomial / peak, 1e-6);

    SampleOptions ht = opts;
    ht.component = order;
    const Spectrum2D direct = compute_spectrum(grid, p, diagram, s, ht);
    o.bound("r_" + std::to_string(order) + " HT spectrum vs sum of replicas / FC peak",
            (direct.amplitude - rebuilt).cwiseAbs().maxCoeff() / peak, 1e-6);
  }
  return o;
}

// 7 -------------------------------------------------------------------------
Outcome commutators() {
  Outcome o;
  const double z = 0.3, w = 1.0;
  double worst = 0.0, fact = 0.0;
  for (double wt : {0.3, 1.7, 4.1, 9.0}) {
    const auto r = commutator_residuals(z, w, wt / w, {48});
    worst = std::max({worst, r.annihilation_residual, r.creation_residual});
    fact = std::max(fact, r.factorization_residual);
  }
  o.bound("commutator residual, z = 0.3, D = 48, 12 x 12 block", worst, 1e-9);
  o.bound("U vs D(-z) R D(z), D = 48, 12 x 12 block", fact, 1e-10);
  std::vector<double> by_dim;
  for (int d : {16, 24, 32, 48}) {
    by_dim.push_back(commutator_residuals(z, w, 1.7 / w, {d}).max_residual());
    o.note("    D = %2d: residual %.3e", d, by_dim.back());
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < by_dim.size(); ++k) decreasing = decreasing && by_dim[k] <= by_dim[k - 1];
  o.require("residual non-increasing in D", decreasing);
  o.require("residual drops from D = 16 to D = 48", by_dim.back() < by_dim.front());

  std::mt19937_64 rng(7007);
  const VibronicSystem s = random_system(rng);
  o.bound("verify_commutators on a random 3-level system", verify_commutators(s, {48}, 2.3).max_residual(), 1e-9);
  return o;
}

// 8 -------------------------------------------------------------------------
Outcome degenerate_limits() {
  Outcome o;
  const auto systems = seeded_systems(8008, 5);
  std::mt19937_64 rng(8009);

  bool fc_exact = true, flat_exact = true, chi_exact = true, finite = true;
  double continuity = 0.0, zero_vs_oracle = 0.0;
  for (const auto& base : systems) {
    VibronicSystem fc_only = base;
    fc_only.mu1.setZero();
    VibronicSystem flat = base;
    std::fill(flat.displacements.begin(), flat.displacements.end(), 0.0);
    const FockOracle oracle(base);
    for (int m = 1; m <= 4; ++m) {
      const WaitingTimes t = random_times(rng, m, base.omega);
      const WaitingTimes zero(std::vector<double>(static_cast<std::size_t>(m), 0.0));
      const WaitingTimes tiny(std::vector<double>(static_cast<std::size_t>(m), 1e-9 / base.omega));
      for (int n = 0; n < 6; ++n) {
        const Pathway p = random_pathway(rng, m, base.n_levels);
        const auto r = response(p, fc_only, t);
        fc_exact = fc_exact && r.value == r.fc_part;
        for (const auto& h : r.ht_parts) fc_exact = fc_exact && h == complex(0.0);

        flat_exact = flat_exact && g_vibrational_fc(p, flat, t) == complex(1.0) &&
                     response(p, flat, t).g_vibrational == complex(1.0);

        for (int k = 1; k <= m; ++k) {
          for (int l = k; l <= m; ++l) chi_exact = chi_exact && chi(k, l, zero, base.omega) == complex(1.0);
        }
        for (int q = 1; q <= m + 1; ++q) {
          const complex at0 = r_factor(q, p, base, zero);
          finite = finite && std::isfinite(at0.real()) && std::isfinite(at0.imag());
          continuity = std::max(continuity, std::abs(at0 - r_factor(q, p, base, tiny)));
          // t = 0: pure ladder algebra, no propagation.
          complex algebra{0.0, 0.0};
          for (const auto& pat : enumerate_patterns(m, q)) {
            const double c = ht_coefficient(pat, p, base);
            if (c != 0.0) algebra += c * oracle.pattern(pat, p, zero);
          }
          zero_vs_oracle = std::max(zero_vs_oracle, std::abs(at0 - algebra));
        }
      }
    }
  }
  o.require("mu1 = 0: value == fc_part and every ht_part == 0 (exact)", fc_exact);
  o.require("all z = 0: g_vibrational == 1 (exact)", flat_exact);
  o.require("all t = 0: chi == 1 (exact)", chi_exact);
  o.require("all t = 0: r_p finite for p >= 1", finite);
  o.bound("all t = 0: |r_p(0) - ladder-algebra value|", zero_vs_oracle, 1e-12);
  o.bound("|r_p(0) - r_p(1e-9 / omega)|", continuity, 1e-7);
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence, M = 1..3", oracle_low_orders},
      {2, "recursive engine vs oracle, M = 4", oracle_fourth_order},
      {3, "closed forms vs recursive engine", closed_forms},
      {4, "one-operator identities, pathway (1,2,1), t2 = 0", worked_identities},
      {5, "diagram transforms vs trace forms", diagram_traces},
      {6, "replica structure of the (1,2,1) spectrum", replicas},
      {7, "commutation relations and propagator factorization", commutators},
      {8, "degenerate limits", degenerate_limits},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.passed = false;
      out.note("exception: %s", e.what());
    }
    std::printf("criterion %d: %s  %s  (%.2f s)\n", c.id, out.passed ? "PASS" : "FAIL", c.title,
                seconds_since(t0));
    for (const auto& d : out.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    failures += out.passed ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
