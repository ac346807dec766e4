#pragma once

#include <map>
#include <optional>
#include <vector>

#include "misflow/network_model.hpp"

namespace misflow {

/// Hub-and-spoke view of one sub-network. Travel between two spokes passes
/// through the hub.
struct StarTopology {
  std::vector<CommunityId> subnetwork;
  CommunityId hub = 0;
  std::map<CommunityId, double> spoke_lengths;

  double distance(CommunityId a, CommunityId b) const;
};

/// Hub is the member with the largest total arc weight to the other members
/// (ties to the lower id). Throws TopologyError when the hub has no positive
/// arc to some member.
StarTopology build_star(const CommunityGraph& graph, const Subnetwork& subnetwork);

struct AgentParameters {
  double service_rate = 55.0;       // V, messages per hour
  double service_multiplier = 2.0;  // beta
};

struct CandidateResult {
  CommunityId candidate = 0;
  double t_bar = 0.0;   // mean travel, hours
  double s_bar = 0.0;   // mean service, hours
  double s2_bar = 0.0;  // second moment of service, hours^2
  std::optional<double> tr;  // empty when the queue is unstable
  double raw_tr = 0.0;       // signed value, kept even when unstable

  bool feasible() const { return tr.has_value(); }
  double queue_delay() const { return tr ? *tr - t_bar : raw_tr - t_bar; }
};

/// Expected response time for an agent stationed at `candidate`:
///   t = sum_j (h_j / lambda) * d(candidate, j) / V
///   S = beta * t
///   S2 = sum_j (h_j / lambda) * (beta * d(candidate, j) / V)^2
///   TR = lambda * S2 / (2 (1 - lambda * S)) + t
/// The candidate contributes no travel term. TR is empty when
/// 1 - lambda * S <= 0.
CandidateResult evaluate_candidate(const StarTopology& star, const RateMap& rates, double load,
                                   const AgentParameters& params, CommunityId candidate);

/// Every member of the star evaluated as candidate, in ascending id order.
std::vector<CandidateResult> evaluate_subnetwork(const StarTopology& star, const RateMap& rates,
                                                 double load, const AgentParameters& params);

struct CombinationRow {
  std::vector<CommunityId> candidates;    // one per sub-network
  std::vector<std::optional<double>> trs;  // empty = infeasible

  std::size_t infeasible_count() const;
};

/// Cross product of per-sub-network candidates ordered by infeasible count,
/// then component TRs (infeasible last), then candidate ids.
std::vector<CombinationRow> rank_combinations(const std::vector<std::vector<CandidateResult>>& results);

}  // namespace misflow
