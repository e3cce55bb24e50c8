#include "vibronic/closed_form.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "vibronic/fc_response.hpp"

namespace vibronic {

namespace {

void check_supported(const Pathway& pathway, const VibronicSystem& system,
                     const WaitingTimes& times) {
  if (pathway.order() != times.order()) {
    throw ArgumentError("pathway length does not match waiting times");
  }
  if (times.order() > 3) {
    throw UnsupportedError("closed forms exist only for orders 1..3, got " +
                           std::to_string(times.order()));
  }
  pathway.check_against(system);
}

const Eigen::MatrixXd& mu(int b, const VibronicSystem& s) { return b ? s.mu1 : s.mu0; }

// Phase factors chi_k = exp(-i w t_k) and their products.
struct Phases {
  complex x1, x2, x3, x12, x23, x13;

  Phases(const WaitingTimes& t, double w) {
    auto ph = [w](double s) { return std::polar(1.0, -w * s); };
    const int m = t.order();
    const double t1 = t(1), t2 = m >= 2 ? t(2) : 0.0, t3 = m >= 3 ? t(3) : 0.0;
    x1 = ph(t1);
    x2 = ph(t2);
    x3 = ph(t3);
    x12 = ph(t1 + t2);
    x23 = ph(t2 + t3);
    x13 = ph(t1 + t2 + t3);
  }
};

// ---- M = 1 ---------------------------------------------------------------

std::array<complex, 3> r_first(const Pathway& e, const VibronicSystem& s, const WaitingTimes& t) {
  const int j = e.state(1);
  const Phases x(t, s.omega);
  const complex f1 = s.z(j) * (x.x1 - 1.0);
  // C^j_ab = <0|mu_a|j><j|mu_b|0>
  auto C = [&](int a, int b) { return mu(a, s)(0, j) * mu(b, s)(j, 0); };

  const complex c1 = f1;   // f_|1
  const complex a2 = f1;   // f_2|
  const complex f2_1 = x.x1 + f1 * f1;
  return {C(0, 0), C(0, 1) * c1 + C(1, 0) * a2, C(1, 1) * f2_1};
}

// ---- M = 2 ---------------------------------------------------------------

std::array<complex, 4> r_second(const Pathway& e, const VibronicSystem& s, const WaitingTimes& t) {
  const int j = e.state(1), k = e.state(2);
  const Phases x(t, s.omega);
  const complex fj1 = s.z(j) * (x.x1 - 1.0);
  const complex fk2 = s.z(k) * (x.x2 - 1.0);
  auto C = [&](int a, int b, int c) {
    return mu(a, s)(0, k) * mu(b, s)(k, j) * mu(c, s)(j, 0);
  };

  // First order.
  const complex f_1 = fj1 + x.x1 * fk2;  // c_1
  const complex f2_ = fj1;               // a_2
  const complex f_2 = fk2;               // c_2
  const complex f3_ = fk2 + x.x2 * fj1;  // a_3

  // Second order.
  const complex f_12 = fk2 * (fj1 + x.x1 * fk2);
  const complex f2_1 = x.x1 + fj1 * (fj1 + x.x1 * fk2);
  const complex f23_ = fj1 * (fk2 + x.x2 * fj1);
  const complex f3_2 = x.x2 + fk2 * (fk2 + x.x2 * fj1);
  const complex f3_1 = x.x12 + (fk2 + x.x2 * fj1) * (fj1 + x.x1 * fk2);

  // Third order.
  const complex f23_1 =
      x.x1 * (fk2 + x.x2 * fj1) + x.x12 * fj1 + fj1 * (fk2 + x.x2 * fj1) * (fj1 + x.x1 * fk2);
  const complex f3_12 = x.x2 * (fj1 + x.x1 * fk2) + x.x12 * fk2 +
                        fk2 * (fk2 + x.x2 * fj1) * (fj1 + x.x1 * fk2);

  return {
      C(0, 0, 0),
      C(0, 0, 1) * f_1 + C(0, 1, 0) * (f2_ + f_2) + C(1, 0, 0) * f3_,
      C(0, 1, 1) * (f_12 + f2_1) + C(1, 1, 0) * (f23_ + f3_2) + C(1, 0, 1) * f3_1,
      C(1, 1, 1) * (f23_1 + f3_12),
  };
}

// ---- M = 3 ---------------------------------------------------------------

std::array<complex, 5> r_third(const Pathway& e, const VibronicSystem& s, const WaitingTimes& t) {
  const int j = e.state(1), k = e.state(2), l = e.state(3);
  const Phases x(t, s.omega);
  const complex fj1 = s.z(j) * (x.x1 - 1.0);
  const complex fk2 = s.z(k) * (x.x2 - 1.0);
  const complex fl3 = s.z(l) * (x.x3 - 1.0);
  // C^{jkl}_{abcd}: a sits at slot 4, d at slot 1.
  auto C = [&](int a, int b, int c, int d) {
    return mu(a, s)(0, l) * mu(b, s)(l, k) * mu(c, s)(k, j) * mu(d, s)(j, 0);
  };

  const complex c1 = (fl3 * x.x2 + fk2) * x.x1 + fj1;
  const complex c2 = fl3 * x.x2 + fk2;
  const complex c3 = fl3;
  const complex a2 = fj1;
  const complex a3 = fj1 * x.x2 + fk2;
  const complex a4 = (fj1 * x.x2 + fk2) * x.x3 + fl3;

  // p = 2
  const complex f2_1 = x.x1 + a2 * c1;
  const complex f_12 = c2 * c1;
  const complex f_13 = c3 * c1;
  const complex f3_1 = x.x12 + a3 * c1;
  const complex f4_1 = x.x13 + a4 * c1;
  const complex f3_2 = x.x2 + a3 * c2;
  const complex f23_ = a3 * a2;
  const complex f_23 = c3 * c2;
  const complex f2_3 = c3 * a2;
  const complex f24_ = a4 * a2;
  const complex f4_2 = x.x23 + a4 * c2;
  const complex f34_ = a4 * a3;
  const complex f4_3 = x.x3 + a4 * c3;

  // p = 3
  const complex f234_ = a4 * a3 * a2;
  const complex f34_2 = x.x2 * a4 + x.x23 * a3 + a4 * a3 * c2;
  const complex f4_23 = x.x3 * c2 + x.x23 * c3 + a4 * c3 * c2;
  const complex f24_3 = c3 * a2 * a4 + x.x3 * a2;
  const complex f34_1 = x.x12 * a4 + x.x13 * a3 + a4 * a3 * c1;
  const complex f4_13 = x.x3 * c1 + x.x13 * c3 + a4 * c3 * c1;
  const complex f24_1 = x.x1 * a4 + x.x13 * a2 + a4 * a2 * c1;
  const complex f4_12 = x.x23 * c1 + x.x13 * c2 + a4 * c2 * c1;
  const complex f_123 = c3 * c2 * c1;
  const complex f23_1 = x.x1 * a3 + x.x12 * a2 + a3 * a2 * c1;
  const complex f3_12 = x.x2 * c1 + x.x12 * c2 + a3 * c2 * c1;
  const complex f2_13 = c1 * c3 * a2 + x.x1 * c3;

  // p = 4
  const complex f234_1 =
      a4 * a3 * a2 * c1 + x.x1 * a4 * a3 + x.x12 * a4 * a2 + x.x13 * a3 * a2;
  const complex f34_12 = a4 * a3 * c2 * c1 + x.x2 * (a4 * c1 + x.x13) +
                         x.x23 * (a3 * c1 + x.x12) + x.x12 * a4 * c2 + x.x13 * a3 * c2;
  const complex f24_13 =
      a4 * c3 * a2 * c1 + x.x3 * (a2 * c1 + x.x1) + x.x13 * c3 * a2 + x.x1 * a4 * c3;
  const complex f4_123 =
      a4 * c3 * c2 * c1 + x.x3 * c2 * c1 + x.x23 * c3 * c1 + x.x13 * c3 * c2;

  return {
      C(0, 0, 0, 0),
      C(0, 0, 0, 1) * c1 + C(0, 0, 1, 0) * (a2 + c2) + C(0, 1, 0, 0) * (a3 + c3) +
          C(1, 0, 0, 0) * a4,
      C(0, 0, 1, 1) * (f2_1 + f_12) + C(0, 1, 0, 1) * (f3_1 + f_13) + C(1, 0, 0, 1) * f4_1 +
          C(0, 1, 1, 0) * (f23_ + f2_3 + f3_2 + f_23) + C(1, 0, 1, 0) * (f24_ + f4_2) +
          C(1, 1, 0, 0) * (f34_ + f4_3),
      C(1, 1, 1, 0) * (f234_ + f34_2 + f4_23 + f24_3) + C(1, 1, 0, 1) * (f34_1 + f4_13) +
          C(1, 0, 1, 1) * (f24_1 + f4_12) + C(0, 1, 1, 1) * (f_123 + f23_1 + f3_12 + f2_13),
      C(1, 1, 1, 1) * (f234_1 + f34_12 + f24_13 + f4_123),
  };
}

}  // namespace

complex closed_form_g_vibrational(const Pathway& pathway, const VibronicSystem& system,
                                  const WaitingTimes& times) {
  check_supported(pathway, system, times);
  const Phases x(times, system.omega);
  switch (times.order()) {
    case 1: {
      const double zj = system.z(pathway.state(1));
      return std::exp(zj * zj * (x.x1 - 1.0));
    }
    case 2: {
      const double zj = system.z(pathway.state(1)), zk = system.z(pathway.state(2));
      return std::exp(zj * (zj - zk) * (x.x1 - 1.0) + (zk - zj) * zk * (x.x2 - 1.0) +
                      zj * zk * (x.x12 - 1.0));
    }
    default: {
      const double zj = system.z(pathway.state(1)), zk = system.z(pathway.state(2)),
                   zl = system.z(pathway.state(3));
      return std::exp(zj * (zj - zk) * (x.x1 - 1.0) + (zk - zj) * (zk - zl) * (x.x2 - 1.0) +
                      (zl - zk) * zl * (x.x3 - 1.0) + zj * (zk - zl) * (x.x12 - 1.0) +
                      (zk - zj) * zl * (x.x23 - 1.0) + zj * zl * (x.x13 - 1.0));
    }
  }
}

complex closed_form_r(int ht_order, const Pathway& pathway, const VibronicSystem& system,
                      const WaitingTimes& times) {
  check_supported(pathway, system, times);
  const int m = times.order();
  if (ht_order < 0 || ht_order > m + 1) throw ArgumentError("HT order out of range");
  const auto i = static_cast<std::size_t>(ht_order);
  switch (m) {
    case 1:
      return r_first(pathway, system, times)[i];
    case 2:
      return r_second(pathway, system, times)[i];
    default:
      return r_third(pathway, system, times)[i];
  }
}

ResponseSample closed_form_response(const Pathway& pathway, const VibronicSystem& system,
                                    const WaitingTimes& times, const ResponseOptions& options) {
  check_supported(pathway, system, times);
  const int m = times.order();
  const int max_order = options.max_ht_order.value_or(m + 1);
  if (max_order < 0 || max_order > m + 1) throw ArgumentError("max_ht_order out of range");

  std::array<complex, 5> r{};
  if (m == 1) {
    const auto v = r_first(pathway, system, times);
    std::copy(v.begin(), v.end(), r.begin());
  } else if (m == 2) {
    const auto v = r_second(pathway, system, times);
    std::copy(v.begin(), v.end(), r.begin());
  } else {
    r = r_third(pathway, system, times);
  }

  ResponseSample out;
  out.prefactor = response_prefactor(m, options.prefactor);
  out.g_electronic = g_electronic(pathway, system, times);
  out.g_vibrational = closed_form_g_vibrational(pathway, system, times);
  const complex common = out.prefactor * out.g_electronic * out.g_vibrational;
  out.fc_part = common * r[0];
  out.value = out.fc_part;
  for (int p = 1; p <= max_order; ++p) {
    out.ht_parts.push_back(common * r[static_cast<std::size_t>(p)]);
    out.value += out.ht_parts.back();
  }
  return out;
}

}  // namespace vibronic
