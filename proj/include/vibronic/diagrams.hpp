#pragma once

// Double-sided Feynman diagrams other than the all-left one are obtained from
// the all-left response by an integer affine change of waiting times plus an
// overall sign (one factor -1 per interaction moved to the bra side).

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "vibronic/ht_expansion.hpp"
#include "vibronic/model.hpp"

namespace vibronic {

enum class DiagramKind {
  all_left,               // every interaction on the ket
  left_right,             // M = 2: second interaction on the bra
  left_right_right_left,  // M = 3: second and third interactions on the bra
};

std::string to_string(DiagramKind kind);
/// Accepts "all-left", "left-right", "left-right-right-left".
DiagramKind parse_diagram_kind(std::string_view name);

struct DiagramSpec {
  int order = 1;
  DiagramKind kind = DiagramKind::all_left;
  std::string label;           // human-readable figure tag, e.g. "1c"
  Eigen::MatrixXi time_map;    // effective times t' = time_map * t
  int sign = 1;

  WaitingTimes apply(const WaitingTimes& times) const;
};

/// all_left exists for every M; the other kinds only for the order they are
/// defined at. Anything else throws UnsupportedError.
DiagramSpec make_diagram(int order, DiagramKind kind);

/// The catalogued diagrams for M = 1, 2, 3 (all-left listed first).
std::vector<DiagramSpec> list_diagrams(int order);

/// response() at the mapped times, electronic factor multiplied by the sign.
/// The mu coefficients are those of the all-left pathway.
ResponseSample transformed_response(const DiagramSpec& diagram, const Pathway& pathway,
                                    const VibronicSystem& system, const WaitingTimes& times,
                                    const ResponseOptions& options = {});

}  // namespace vibronic
