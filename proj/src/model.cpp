#include "vibronic/model.hpp"

#include <cmath>
#include <sstream>

namespace vibronic {

namespace {

std::optional<ValidationIssue> check_matrix(const Eigen::MatrixXd& m, const char* name, int n) {
  if (m.rows() != n || m.cols() != n) {
    std::ostringstream os;
    os << name << " is " << m.rows() << "x" << m.cols() << ", expected " << n << "x" << n;
    return ValidationIssue{std::string(name) + " wrong shape", os.str()};
  }
  if (!m.allFinite()) {
    return ValidationIssue{std::string(name) + " not finite", "non-finite matrix element"};
  }
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      if (m(j, k) != m(k, j)) {
        std::ostringstream os;
        os << name << "(" << j << "," << k << ") = " << m(j, k) << " but " << name << "(" << k
           << "," << j << ") = " << m(k, j);
        return ValidationIssue{std::string(name) + " not symmetric", os.str()};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<ValidationIssue> validate(const VibronicSystem& s) {
  if (s.n_levels < 2) {
    return ValidationIssue{"n_levels below 2", "n_levels = " + std::to_string(s.n_levels)};
  }
  if (!(s.omega > 0.0) || !std::isfinite(s.omega)) {
    return ValidationIssue{"omega not positive", "omega must be a finite positive frequency"};
  }
  const auto n = static_cast<std::size_t>(s.n_levels);
  if (s.energies.size() != n) {
    return ValidationIssue{"energies wrong length", std::to_string(s.energies.size()) +
                                                        " energies for " + std::to_string(n) +
                                                        " levels"};
  }
  if (s.displacements.size() != n) {
    return ValidationIssue{"displacements wrong length",
                           std::to_string(s.displacements.size()) + " displacements for " +
                               std::to_string(n) + " levels"};
  }
  for (double e : s.energies) {
    if (!std::isfinite(e)) return ValidationIssue{"energies not finite", "non-finite energy"};
  }
  for (double z : s.displacements) {
    if (!std::isfinite(z)) {
      return ValidationIssue{"displacements not finite", "non-finite displacement"};
    }
  }
  if (s.displacements[0] != 0.0) {
    std::ostringstream os;
    os << "displacements[0] = " << s.displacements[0];
    return ValidationIssue{"ground displacement nonzero", os.str()};
  }
  if (auto issue = check_matrix(s.mu0, "mu0", s.n_levels)) return issue;
  if (auto issue = check_matrix(s.mu1, "mu1", s.n_levels)) return issue;
  return std::nullopt;
}

void require_valid(const VibronicSystem& system) {
  if (auto issue = validate(system)) {
    throw ArgumentError("invalid system: " + issue->invariant + " (" + issue->detail + ")");
  }
}

WaitingTimes::WaitingTimes(std::vector<double> t) : t_(std::move(t)) {
  if (t_.empty()) throw ArgumentError("waiting times: need at least one time");
  for (double v : t_) {
    if (!std::isfinite(v)) throw ArgumentError("waiting times: non-finite entry");
  }
}

double WaitingTimes::operator()(int k) const {
  if (k < 1 || k > order()) {
    throw ArgumentError("waiting time index " + std::to_string(k) + " outside 1.." +
                        std::to_string(order()));
  }
  return t_[static_cast<std::size_t>(k - 1)];
}

WaitingTimes WaitingTimes::negated() const {
  std::vector<double> n(t_.size());
  for (std::size_t i = 0; i < t_.size(); ++i) n[i] = -t_[i];
  return WaitingTimes(std::move(n));
}

Pathway::Pathway(std::vector<int> states) : states_(std::move(states)) {
  if (states_.empty()) throw ArgumentError("pathway: need at least one state");
  for (int s : states_) {
    if (s < 0) throw ArgumentError("pathway: negative state index");
  }
}

int Pathway::state(int k) const {
  if (k < 0 || k > order() + 1) {
    throw ArgumentError("pathway index " + std::to_string(k) + " outside 0.." +
                        std::to_string(order() + 1));
  }
  if (k == 0 || k == order() + 1) return 0;
  return states_[static_cast<std::size_t>(k - 1)];
}

void Pathway::check_against(const VibronicSystem& system) const {
  for (int s : states_) {
    if (s >= system.n_levels) {
      throw ArgumentError("pathway state " + std::to_string(s) + " outside 0.." +
                          std::to_string(system.n_levels - 1));
    }
  }
}

std::string to_string(const Pathway& pathway) {
  std::string out = "(";
  for (int k = 1; k <= pathway.order(); ++k) {
    if (k > 1) out += ",";
    out += std::to_string(pathway.state(k));
  }
  return out + ")";
}

std::vector<Pathway> all_pathways(int n_levels, int order) {
  if (n_levels < 1 || order < 1) throw ArgumentError("all_pathways: need n_levels, order >= 1");
  std::vector<Pathway> out;
  std::vector<int> digits(static_cast<std::size_t>(order), 0);
  while (true) {
    out.emplace_back(digits);
    int pos = order - 1;
    while (pos >= 0 && ++digits[static_cast<std::size_t>(pos)] == n_levels) {
      digits[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

complex chi(int k, int l, const WaitingTimes& times, double omega) {
  const int m = times.order();
  if (k < 1 || k > m + 1 || l < 0 || l > m) {
    throw ArgumentError("chi(" + std::to_string(k) + "," + std::to_string(l) +
                        ") out of range for M=" + std::to_string(m));
  }
  if (k > l) return {1.0, 0.0};
  double sum = 0.0;
  for (int j = k; j <= l; ++j) sum += times(j);
  return std::polar(1.0, -omega * sum);
}

complex f_disp(int state, int l, const VibronicSystem& system, const WaitingTimes& times) {
  if (state < 0 || state >= system.n_levels) {
    throw ArgumentError("f_disp: state " + std::to_string(state) + " out of range");
  }
  if (l < 1 || l > times.order()) {
    throw ArgumentError("f_disp: time index " + std::to_string(l) + " out of range");
  }
  return system.z(state) * (chi(l, l, times, system.omega) - 1.0);
}

}  // namespace vibronic
