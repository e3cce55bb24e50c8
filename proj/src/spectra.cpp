#include "vibronic/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

namespace vibronic {

namespace {

// FFTW planning touches global state and is not thread-safe.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

double periodic_sample_1d(int n, double pos) { return pos - n * std::floor(pos / n); }

}  // namespace

void TimeGrid::validate() const {
  if (n1 < 8 || n3 < 8) throw ArgumentError("grid needs at least 8 points per axis");
  if (!(dt1 > 0.0) || !(dt3 > 0.0) || !std::isfinite(dt1) || !std::isfinite(dt3)) {
    throw ArgumentError("grid spacing dt must be positive and finite");
  }
  if (!std::isfinite(t2) || !std::isfinite(omega1_min) || !std::isfinite(omega3_min)) {
    throw ArgumentError("grid offsets must be finite");
  }
  if (pad < 1) throw ArgumentError("zero-padding factor must be >= 1");
}

double TimeGrid::domega1() const { return 2.0 * std::numbers::pi / (out1() * dt1); }
double TimeGrid::domega3() const { return 2.0 * std::numbers::pi / (out3() * dt3); }

TimeGrid bin_aligned_grid(int n, double omega, int bins_per_quantum, double t2) {
  if (bins_per_quantum < 1) throw ArgumentError("bins_per_quantum must be >= 1");
  if (!(omega > 0.0)) throw ArgumentError("omega must be positive");
  TimeGrid g;
  g.n1 = g.n3 = n;
  // dw = omega / m  <=>  dt = 2 pi m / (n omega)
  g.dt1 = g.dt3 = 2.0 * std::numbers::pi * bins_per_quantum / (n * omega);
  g.t2 = t2;
  g.validate();
  return g;
}

Eigen::MatrixXcd sample_function(const TimeGrid& grid, double gamma,
                                 const std::function<complex(double, double)>& fn) {
  grid.validate();
  Eigen::MatrixXcd s(grid.n1, grid.n3);
  for (int a = 0; a < grid.n1; ++a) {
    const double t1 = a * grid.dt1;
    for (int b = 0; b < grid.n3; ++b) {
      const double t3 = b * grid.dt3;
      s(a, b) = fn(t1, t3) * std::exp(-gamma * (t1 + t3));
    }
  }
  return s;
}

Eigen::MatrixXcd sample_response(const TimeGrid& grid, const Pathway& pathway,
                                 const DiagramSpec& diagram, const VibronicSystem& system,
                                 const SampleOptions& options) {
  if (pathway.order() != 3 || diagram.order != 3) {
    throw UnsupportedError("spectra are defined for third-order pathways only");
  }
  pathway.check_against(system);
  const int max_order = options.response.max_ht_order.value_or(4);
  if (options.component && (*options.component < 0 || *options.component > max_order)) {
    throw ArgumentError("spectrum component outside 0..max_ht_order");
  }
  return sample_function(grid, options.gamma, [&](double t1, double t3) {
    const ResponseSample r =
        transformed_response(diagram, pathway, system, WaitingTimes{t1, grid.t2, t3},
                             options.response);
    if (!options.component) return r.value;
    if (*options.component == 0) return r.fc_part;
    return r.ht_parts[static_cast<std::size_t>(*options.component - 1)];
  });
}

double Spectrum2D::max_abs() const {
  return amplitude.size() == 0 ? 0.0 : amplitude.cwiseAbs().maxCoeff();
}

Spectrum2D fourier_2d(const Eigen::MatrixXcd& samples, const TimeGrid& grid) {
  grid.validate();
  if (samples.rows() != grid.n1 || samples.cols() != grid.n3) {
    throw ArgumentError("sample matrix shape does not match the grid");
  }
  const int n1 = grid.out1(), n3 = grid.out3();
  const auto total = static_cast<std::size_t>(n1) * static_cast<std::size_t>(n3);

  // Pre-modulating by exp(i w_min t) turns the offset axis into a plain DFT;
  // FFTW_BACKWARD carries the exp(+i ...) sign.
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
  if (!buf) throw std::bad_alloc();
  std::fill_n(reinterpret_cast<double*>(buf), 2 * total, 0.0);
  for (int a = 0; a < grid.n1; ++a) {
    const complex m1 = std::polar(1.0, grid.omega1_min * a * grid.dt1);
    for (int b = 0; b < grid.n3; ++b) {
      const complex v = samples(a, b) * m1 * std::polar(1.0, grid.omega3_min * b * grid.dt3);
      const std::size_t idx = static_cast<std::size_t>(a) * n3 + b;
      buf[idx][0] = v.real();
      buf[idx][1] = v.imag();
    }
  }
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_2d(n1, n3, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);

  Spectrum2D out;
  out.amplitude.resize(n1, n3);
  const double norm = grid.dt1 * grid.dt3;
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n3; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * n3 + j;
      out.amplitude(i, j) = norm * complex{buf[idx][0], buf[idx][1]};
    }
  }
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);

  out.omega1.resize(static_cast<std::size_t>(n1));
  out.omega3.resize(static_cast<std::size_t>(n3));
  for (int i = 0; i < n1; ++i) out.omega1[static_cast<std::size_t>(i)] = grid.omega1_min + i * grid.domega1();
  for (int j = 0; j < n3; ++j) out.omega3[static_cast<std::size_t>(j)] = grid.omega3_min + j * grid.domega3();
  out.meta.t2 = grid.t2;
  return out;
}

std::pair<double, double> zero_phonon_position(const Pathway& pathway, const DiagramSpec& diagram,
                                               const VibronicSystem& system) {
  if (pathway.order() != 3 || diagram.order != 3) {
    throw UnsupportedError("zero-phonon position defined for third-order spectra only");
  }
  double nu1 = 0.0, nu3 = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const double e = system.energy(pathway.state(k));
    nu1 += e * diagram.time_map(k - 1, 0);
    nu3 += e * diagram.time_map(k - 1, 2);
  }
  return {nu1, nu3};
}

Spectrum2D compute_spectrum(const TimeGrid& grid, const Pathway& pathway,
                            const DiagramSpec& diagram, const VibronicSystem& system,
                            const SampleOptions& options) {
  Spectrum2D s = fourier_2d(sample_response(grid, pathway, diagram, system, options), grid);
  s.meta.pathway = pathway;
  s.meta.diagram = diagram.kind;
  s.meta.gamma = options.gamma;
  s.meta.max_ht_order = options.response.max_ht_order.value_or(4);
  s.meta.omega = system.omega;
  std::tie(s.meta.zero_phonon1, s.meta.zero_phonon3) =
      zero_phonon_position(pathway, diagram, system);
  return s;
}

Eigen::MatrixXcd shifted_spectrum(const Spectrum2D& fc, int k, int l, double omega) {
  const auto n1 = static_cast<int>(fc.amplitude.rows());
  const auto n3 = static_cast<int>(fc.amplitude.cols());
  if (n1 < 2 || n3 < 2) throw ArgumentError("spectrum too small to shift");
  const double d1 = fc.omega1[1] - fc.omega1[0];
  const double d3 = fc.omega3[1] - fc.omega3[0];
  const double s1 = k * omega / d1;
  const double s3 = l * omega / d3;
  if (std::abs(s1) >= n1 || std::abs(s3) >= n3) {
    throw std::out_of_range("replica shift exceeds the frequency grid");
  }
  const double r1 = std::round(s1), r3 = std::round(s3);
  const bool on_bin = std::abs(s1 - r1) < 1e-9 && std::abs(s3 - r3) < 1e-9;

  Eigen::MatrixXcd out(n1, n3);
  auto at = [&](int i, int j) {
    return fc.amplitude(((i % n1) + n1) % n1, ((j % n3) + n3) % n3);
  };
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n3; ++j) {
      if (on_bin) {
        out(i, j) = at(i - static_cast<int>(r1), j - static_cast<int>(r3));
        continue;
      }
      const double p1 = periodic_sample_1d(n1, i - s1);
      const double p3 = periodic_sample_1d(n3, j - s3);
      const int i0 = static_cast<int>(std::floor(p1)), j0 = static_cast<int>(std::floor(p3));
      const double u = p1 - i0, v = p3 - j0;
      out(i, j) = (1 - u) * (1 - v) * at(i0, j0) + u * (1 - v) * at(i0 + 1, j0) +
                  (1 - u) * v * at(i0, j0 + 1) + u * v * at(i0 + 1, j0 + 1);
    }
  }
  return out;
}

double replica_check(const Spectrum2D& ht, const Spectrum2D& fc, int k, int l, double omega,
                     complex scale) {
  if (ht.amplitude.rows() != fc.amplitude.rows() || ht.amplitude.cols() != fc.amplitude.cols()) {
    throw ArgumentError("replica_check: spectra on different grids");
  }
  if (scale == complex{0.0, 0.0}) throw ArgumentError("replica_check: zero scale");
  const Eigen::MatrixXcd expected = shifted_spectrum(fc, k, l, omega);
  return (ht.amplitude / scale - expected).cwiseAbs().maxCoeff();
}

std::vector<Peak> find_peaks(const Spectrum2D& spectrum, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ArgumentError("peak threshold must lie in (0, 1)");
  }
  const Eigen::MatrixXd mag = spectrum.amplitude.cwiseAbs();
  const auto n1 = static_cast<int>(mag.rows());
  const auto n3 = static_cast<int>(mag.cols());
  const double top = n1 * n3 == 0 ? 0.0 : mag.maxCoeff();
  std::vector<Peak> peaks;
  if (top <= 0.0) return peaks;
  const double floor_value = threshold * top;
  const double omega = spectrum.meta.omega;

  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n3; ++j) {
      const double v = mag(i, j);
      if (v < floor_value) continue;
      bool is_max = true;
      for (int di = -1; di <= 1 && is_max; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const int a = i + di, b = j + dj;
          if (a < 0 || a >= n1 || b < 0 || b >= n3) continue;
          // Ties go to the first index in row-major order.
          if (mag(a, b) > v || (mag(a, b) == v && (a < i || (a == i && b < j)))) {
            is_max = false;
            break;
          }
        }
      }
      if (!is_max) continue;
      Peak p;
      p.i1 = i;
      p.i3 = j;
      p.omega1 = spectrum.omega1[static_cast<std::size_t>(i)];
      p.omega3 = spectrum.omega3[static_cast<std::size_t>(j)];
      p.amplitude = spectrum.amplitude(i, j);
      if (omega > 0.0) {
        p.k = static_cast<int>(std::lround((p.omega1 - spectrum.meta.zero_phonon1) / omega));
        p.l = static_cast<int>(std::lround((p.omega3 - spectrum.meta.zero_phonon3) / omega));
      }
      peaks.push_back(p);
    }
  }
  std::stable_sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
    return std::abs(a.amplitude) > std::abs(b.amplitude);
  });
  return peaks;
}

}  // namespace vibronic
