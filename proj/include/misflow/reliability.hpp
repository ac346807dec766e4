#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "misflow/network_model.hpp"

namespace misflow {

/// Which sub-network each community belongs to and the response time chosen
/// for that sub-network's agent.
struct MonitoringAssignment {
  std::vector<Subnetwork> subnetworks;
  std::vector<std::optional<double>> chosen_tr;  // parallel to subnetworks; empty = infeasible

  /// Index into subnetworks. Throws ArgumentError if unassigned.
  std::size_t subnetwork_of(CommunityId id) const;
};

/// (1 - TR / window) * 100 within a sub-network, (1 - (TR_a + TR_b) / window) * 100
/// across two, clamped to [0, 100].
double arc_reliability(const Arc& arc, const MonitoringAssignment& assignment, double window_hours = 24.0);

struct ReliabilityRow {
  int arc = 0;
  CommunityId src = 0;
  CommunityId dst = 0;
  double reliability_pct = 0.0;
  std::int64_t x_old = 0;
  std::int64_t x_new = 0;
};

struct ReliabilityTable {
  double window_hours = 24.0;
  std::vector<ReliabilityRow> rows;
};

/// round-half-up(pct / 100 * x_old)
std::int64_t effective_capacity(double reliability_pct, std::int64_t x_old);

/// `reliabilities` is parallel to graph.arcs().
ReliabilityTable effective_capacities(const CommunityGraph& graph, const std::vector<double>& reliabilities,
                                      double window_hours = 24.0);

/// Convenience: arc_reliability over every arc, then effective_capacities.
ReliabilityTable reliability_table(const CommunityGraph& graph, const MonitoringAssignment& assignment,
                                   double window_hours = 24.0);

}  // namespace misflow
