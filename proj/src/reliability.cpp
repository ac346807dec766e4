#include "misflow/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "misflow/error.hpp"

namespace misflow {

std::size_t MonitoringAssignment::subnetwork_of(CommunityId id) const {
  for (std::size_t i = 0; i < subnetworks.size(); ++i) {
    if (subnetworks[i].contains(id)) return i;
  }
  throw ArgumentError("community " + std::to_string(id) + " is not assigned to a sub-network");
}

double arc_reliability(const Arc& arc, const MonitoringAssignment& assignment, double window_hours) {
  if (!(window_hours > 0.0)) throw ArgumentError("reliability window must be positive");
  if (assignment.chosen_tr.size() != assignment.subnetworks.size()) {
    throw ArgumentError("one chosen response time is required per sub-network");
  }
  const std::size_t a = assignment.subnetwork_of(arc.src);
  const std::size_t b = assignment.subnetwork_of(arc.dst);
  const auto tr = [&](std::size_t s) {
    const auto& value = assignment.chosen_tr[s];
    if (!value) {
      throw InfeasibleError("sub-network " + std::to_string(s + 1) +
                            " has an unstable response time; reliability is undefined");
    }
    return *value;
  };
  const double delay = a == b ? tr(a) : tr(a) + tr(b);
  return std::clamp((1.0 - delay / window_hours) * 100.0, 0.0, 100.0);
}

std::int64_t effective_capacity(double reliability_pct, std::int64_t x_old) {
  // The epsilon keeps products such as 0.65 * 10 on the upper side of .5.
  return static_cast<std::int64_t>(std::floor(reliability_pct / 100.0 * static_cast<double>(x_old) + 0.5 + 1e-9));
}

ReliabilityTable effective_capacities(const CommunityGraph& graph, const std::vector<double>& reliabilities,
                                      double window_hours) {
  if (reliabilities.size() != graph.arcs().size()) {
    throw ArgumentError("one reliability value is required per arc");
  }
  ReliabilityTable table;
  table.window_hours = window_hours;
  for (std::size_t i = 0; i < reliabilities.size(); ++i) {
    const Arc& arc = graph.arcs()[i];
    const double pct = reliabilities[i];
    if (!(pct >= 0.0 && pct <= 100.0)) throw ArgumentError("reliability outside [0, 100] on arc " + std::to_string(arc.id));
    table.rows.push_back({arc.id, arc.src, arc.dst, pct, arc.weight, effective_capacity(pct, arc.weight)});
  }
  return table;
}

ReliabilityTable reliability_table(const CommunityGraph& graph, const MonitoringAssignment& assignment,
                                   double window_hours) {
  std::vector<double> reliabilities;
  reliabilities.reserve(graph.arcs().size());
  for (const Arc& arc : graph.arcs()) reliabilities.push_back(arc_reliability(arc, assignment, window_hours));
  return effective_capacities(graph, reliabilities, window_hours);
}

}  // namespace misflow
