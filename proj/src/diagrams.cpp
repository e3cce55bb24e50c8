#include "vibronic/diagrams.hpp"

#include <cmath>

namespace vibronic {

std::string to_string(DiagramKind kind) {
  switch (kind) {
    case DiagramKind::all_left:
      return "all-left";
    case DiagramKind::left_right:
      return "left-right";
    case DiagramKind::left_right_right_left:
      return "left-right-right-left";
  }
  return "unknown";
}

DiagramKind parse_diagram_kind(std::string_view name) {
  if (name == "all-left") return DiagramKind::all_left;
  if (name == "left-right") return DiagramKind::left_right;
  if (name == "left-right-right-left") return DiagramKind::left_right_right_left;
  throw ArgumentError("unknown diagram kind '" + std::string(name) + "'");
}

WaitingTimes DiagramSpec::apply(const WaitingTimes& times) const {
  if (times.order() != order) {
    throw ArgumentError("diagram of order " + std::to_string(order) + " applied to " +
                        std::to_string(times.order()) + " waiting times");
  }
  std::vector<double> out(static_cast<std::size_t>(order), 0.0);
  for (int r = 0; r < order; ++r) {
    for (int c = 0; c < order; ++c) out[static_cast<std::size_t>(r)] += time_map(r, c) * times(c + 1);
  }
  return WaitingTimes(std::move(out));
}

DiagramSpec make_diagram(int order, DiagramKind kind) {
  if (order < 1) throw ArgumentError("diagram order must be positive");
  DiagramSpec d;
  d.order = order;
  d.kind = kind;
  switch (kind) {
    case DiagramKind::all_left:
      d.time_map = Eigen::MatrixXi::Identity(order, order);
      d.label = order == 1 ? "1a" : order == 2 ? "1b" : order == 3 ? "2a/2b" : "all-left";
      return d;
    case DiagramKind::left_right:
      if (order != 2) break;
      // t1 -> t2, t2 -> -t1 - t2
      d.time_map.resize(2, 2);
      d.time_map << 0, 1,
                   -1, -1;
      d.sign = -1;
      d.label = "1c";
      return d;
    case DiagramKind::left_right_right_left:
      if (order != 3) break;
      // t1 -> t1 + t2 + t3, t2 -> -t3, t3 -> -t2
      d.time_map.resize(3, 3);
      d.time_map << 1, 1, 1,
                    0, 0, -1,
                    0, -1, 0;
      d.label = "2c";
      return d;
  }
  throw UnsupportedError("diagram '" + to_string(kind) + "' is not defined at order " +
                         std::to_string(order));
}

std::vector<DiagramSpec> list_diagrams(int order) {
  switch (order) {
    case 1:
      return {make_diagram(1, DiagramKind::all_left)};
    case 2:
      return {make_diagram(2, DiagramKind::all_left), make_diagram(2, DiagramKind::left_right)};
    case 3:
      return {make_diagram(3, DiagramKind::all_left),
              make_diagram(3, DiagramKind::left_right_right_left)};
    default:
      throw UnsupportedError("no diagram catalogue beyond order 3");
  }
}

ResponseSample transformed_response(const DiagramSpec& diagram, const Pathway& pathway,
                                    const VibronicSystem& system, const WaitingTimes& times,
                                    const ResponseOptions& options) {
  if (diagram.order != times.order() || diagram.order != pathway.order()) {
    throw ArgumentError("diagram order does not match pathway/times");
  }
  ResponseSample s = response(pathway, system, diagram.apply(times), options);
  if (diagram.sign != 1) {
    const double sign = static_cast<double>(diagram.sign);
    s.g_electronic *= sign;
    s.value *= sign;
    s.fc_part *= sign;
    for (auto& h : s.ht_parts) h *= sign;
  }
  return s;
}

}  // namespace vibronic
