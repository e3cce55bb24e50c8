#include "vibronic/commands.hpp"

#include <cstdio>
#include <stdexcept>

#include "vibronic/diagrams.hpp"
#include "vibronic/spectra.hpp"

namespace vibronic {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void put_complex(std::ostream& out, complex z) {
  out << '\t' << format_number(z.real()) << '\t' << format_number(z.imag());
}

const Pathway& need_pathway(const RunConfig& c, const char* command) {
  if (!c.pathway) throw ConfigError(std::string(command) + ": config has no [pathway] states", 0, "states");
  return *c.pathway;
}

int effective_max_order(const RunConfig& c, int order) {
  const int max = c.max_ht_order.value_or(order + 1);
  if (max < 0 || max > order + 1) {
    throw ConfigError("max_ht_order must be in 0.." + std::to_string(order + 1), 0, "max_ht_order");
  }
  return max;
}

}  // namespace

void cmd_respfn(const RunConfig& config, std::ostream& out) {
  const Pathway& pathway = need_pathway(config, "respfn");
  if (!config.has_times()) throw ConfigError("respfn needs [run] times", 0, "times");
  if (config.grid) throw ConfigError("respfn takes times, not a [grid]", 0, "grid");
  const int m = pathway.order();
  const int max = effective_max_order(config, m);
  const DiagramSpec diagram = make_diagram(m, config.diagram);
  ResponseOptions opts = config.response_options();
  opts.max_ht_order = max;

  out << kFormatHeader << '\n';
  for (int k = 1; k <= m; ++k) out << (k > 1 ? "\t" : "") << 't' << k;
  out << "\tre_R\tim_R\tre_fc\tim_fc";
  for (int p = 1; p <= max; ++p) out << "\tre_ht" << p << "\tim_ht" << p;
  out << '\n';

  for (const auto& row : config.times) {
    const WaitingTimes t(row);
    ResponseSample s;
    try {
      s = transformed_response(diagram, pathway, config.system, t, opts);
    } catch (const std::exception& e) {
      throw std::runtime_error("respfn: evaluation failed at t = (" + format_number(row.front()) +
                               ", ...): " + e.what());
    }
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "\t" : "") << format_number(row[k]);
    put_complex(out, s.value);
    put_complex(out, s.fc_part);
    for (const auto& h : s.ht_parts) put_complex(out, h);
    out << '\n';
  }
}

void cmd_spectrum(const RunConfig& config, std::ostream& out) {
  const Pathway& pathway = need_pathway(config, "spectrum");
  if (!config.grid) throw ConfigError("spectrum needs a [grid] section", 0, "grid");
  if (pathway.order() != 3) {
    throw ConfigError("spectrum needs a third-order pathway (three states)", 0, "states");
  }
  const int max = effective_max_order(config, 3);
  const DiagramSpec diagram = make_diagram(3, config.diagram);
  SampleOptions opts;
  opts.response = config.response_options();
  opts.response.max_ht_order = max;
  opts.gamma = config.damping();
  const Spectrum2D s = compute_spectrum(*config.grid, pathway, diagram, config.system, opts);
  const auto peaks = find_peaks(s, config.peak_threshold);

  out << kFormatHeader << '\n';
  out << "# spectrum pathway=" << to_string(pathway) << " diagram=" << to_string(config.diagram)
      << " t2=" << format_number(s.meta.t2) << " gamma=" << format_number(s.meta.gamma)
      << " max_ht_order=" << max << " omega=" << format_number(s.meta.omega)
      << " zero_phonon=" << format_number(s.meta.zero_phonon1) << ','
      << format_number(s.meta.zero_phonon3) << '\n';
  out << "axis\tvalues\n";
  out << "omega1";
  for (double w : s.omega1) out << '\t' << format_number(w);
  out << "\nomega3";
  for (double w : s.omega3) out << '\t' << format_number(w);
  out << '\n';
  out << "# amplitude rows=" << s.amplitude.rows() << " cols=" << s.amplitude.cols()
      << " (re, im per omega3 column)\n";
  for (Eigen::Index i = 0; i < s.amplitude.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.amplitude.cols(); ++j) {
      const complex z = s.amplitude(i, j);
      out << (j ? "\t" : "") << format_number(z.real()) << '\t' << format_number(z.imag());
    }
    out << '\n';
  }
  out << "# peaks count=" << peaks.size() << " threshold=" << format_number(config.peak_threshold)
      << '\n';
  out << "omega1\tomega3\tre\tim\tabs\tk\tl\n";
  for (const auto& p : peaks) {
    out << format_number(p.omega1) << '\t' << format_number(p.omega3);
    put_complex(out, p.amplitude);
    out << '\t' << format_number(std::abs(p.amplitude)) << '\t' << p.k << '\t' << p.l << '\n';
  }
}

int cmd_verify(const RunConfig* config, const VerifyOptions& options, std::ostream& out) {
  std::optional<VibronicSystem> extra;
  if (config) extra = config->system;
  const VerifyReport report = run_verification(options, extra);

  out << kFormatHeader << '\n';
  out << "# verify seed=" << options.seed << " fock_dim=" << options.fock_dim
      << " random_systems=" << options.random_systems << (config ? " +config" : "") << '\n';
  out << "check\tstatus\tmax_deviation\ttolerance\tsamples\tnote\n";
  for (const auto& c : report.checks) {
    out << c.name << '\t' << (c.passed ? "PASS" : "FAIL") << '\t' << format_number(c.max_deviation)
        << '\t' << format_number(c.tolerance) << '\t' << c.samples << '\t' << c.note << '\n';
  }
  out << "# overall " << (report.passed() ? "PASS" : "FAIL") << '\n';
  return report.passed() ? 0 : 1;
}

}  // namespace vibronic
