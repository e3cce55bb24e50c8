#pragma once

// Two-dimensional spectra over (omega_1, omega_3) at fixed t_2.
//
// Transform convention: one-sided rectangle rule,
//   S(w1, w3) = dt1 dt3 sum_{a,b} s(a dt1, b dt3) exp[i (w1 a dt1 + w3 b dt3)],
// evaluated on w = w_min + k dw, dw = 2 pi / (n dt). The axes are periodic
// with period n dw, which the replica check exploits.

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "vibronic/diagrams.hpp"
#include "vibronic/ht_expansion.hpp"
#include "vibronic/model.hpp"

namespace vibronic {

struct TimeGrid {
  int n1 = 64;
  int n3 = 64;
  double dt1 = 0.1;
  double dt3 = 0.1;
  double t2 = 0.0;
  double omega1_min = 0.0;
  double omega3_min = 0.0;
  int pad = 1;  // zero-padding factor applied before the transform

  /// Throws ArgumentError unless n >= 8, dt > 0, pad >= 1 and all finite.
  void validate() const;
  int out1() const { return n1 * pad; }
  int out3() const { return n3 * pad; }
  double domega1() const;
  double domega3() const;
};

/// Grid with dw = omega / bins_per_quantum on both axes, so integer multiples
/// of omega land exactly on frequency bins.
TimeGrid bin_aligned_grid(int n, double omega, int bins_per_quantum, double t2 = 0.0);

struct SampleOptions {
  ResponseOptions response;
  double gamma = 0.0;               // damping exp[-gamma (t1 + t3)]
  std::optional<int> component;     // nullopt: total; 0: FC part; p: HT order p
};

/// Default damping, 5% of the vibrational frequency.
inline double default_gamma(double omega) { return 0.05 * omega; }

/// s(t1, t3) for an arbitrary function, damping applied. Rows index t1.
Eigen::MatrixXcd sample_function(const TimeGrid& grid, double gamma,
                                 const std::function<complex(double t1, double t3)>& fn);

/// Diagram-transformed third-order response on the grid. Only M = 3 pathways.
Eigen::MatrixXcd sample_response(const TimeGrid& grid, const Pathway& pathway,
                                 const DiagramSpec& diagram, const VibronicSystem& system,
                                 const SampleOptions& options);

struct SpectrumMeta {
  std::optional<Pathway> pathway;
  DiagramKind diagram = DiagramKind::all_left;
  double t2 = 0.0;
  double gamma = 0.0;
  std::optional<int> max_ht_order;
  double omega = 0.0;          // vibrational quantum used for replica labels
  double zero_phonon1 = 0.0;   // bare electronic peak position per axis
  double zero_phonon3 = 0.0;
};

struct Spectrum2D {
  Eigen::MatrixXcd amplitude;  // rows: omega_1, cols: omega_3
  std::vector<double> omega1;
  std::vector<double> omega3;
  SpectrumMeta meta;

  double max_abs() const;
};

Spectrum2D fourier_2d(const Eigen::MatrixXcd& samples, const TimeGrid& grid);

/// Position of the electronic (zero-phonon) peak: sum_k eps_{e_k} A_{k,axis}
/// for the diagram's time map A.
std::pair<double, double> zero_phonon_position(const Pathway& pathway, const DiagramSpec& diagram,
                                               const VibronicSystem& system);

/// sample_response + fourier_2d with metadata filled in.
Spectrum2D compute_spectrum(const TimeGrid& grid, const Pathway& pathway,
                            const DiagramSpec& diagram, const VibronicSystem& system,
                            const SampleOptions& options);

/// max |ht(w) / scale - fc(w - k omega, w - l omega)| over the whole grid.
/// A factor chi_1^k chi_3^l on the samples moves the spectrum up by
/// (k omega, l omega). Integer bin shifts are matched exactly (the discrete
/// axes wrap around); fractional ones use bilinear interpolation.
/// Throws std::out_of_range if a shift spans the full axis.
double replica_check(const Spectrum2D& ht, const Spectrum2D& fc, int k, int l, double omega,
                     complex scale = {1.0, 0.0});

/// fc shifted by (k omega, l omega) on fc's own grid, same conventions as above.
Eigen::MatrixXcd shifted_spectrum(const Spectrum2D& fc, int k, int l, double omega);

struct Peak {
  int i1 = 0, i3 = 0;
  double omega1 = 0.0, omega3 = 0.0;
  complex amplitude;
  int k = 0, l = 0;  // replica indices relative to the zero-phonon position
};

/// Local maxima of |S| (8-neighbourhood, edges not wrapped) at or above
/// threshold * max|S|, sorted by decreasing |S|. Requires 0 < threshold < 1.
std::vector<Peak> find_peaks(const Spectrum2D& spectrum, double threshold);

}  // namespace vibronic
