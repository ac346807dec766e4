#include "misflow/one_median.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "misflow/error.hpp"

namespace misflow {

double StarTopology::distance(CommunityId a, CommunityId b) const {
  if (a == b) return 0.0;
  const auto spoke = [&](CommunityId id) {
    if (id == hub) return 0.0;
    auto it = spoke_lengths.find(id);
    if (it == spoke_lengths.end()) throw ArgumentError("community " + std::to_string(id) + " not in star");
    return it->second;
  };
  return spoke(a) + spoke(b);
}

StarTopology build_star(const CommunityGraph& graph, const Subnetwork& subnetwork) {
  if (subnetwork.members.empty()) throw ArgumentError("empty sub-network");
  for (CommunityId id : subnetwork.members) {
    if (!graph.contains(id)) throw ArgumentError("sub-network references missing community " + std::to_string(id));
  }

  StarTopology star;
  star.subnetwork = subnetwork.members;
  std::sort(star.subnetwork.begin(), star.subnetwork.end());

  std::int64_t best = -1;
  for (CommunityId id : star.subnetwork) {
    std::int64_t total = 0;
    for (CommunityId other : star.subnetwork) {
      if (other == id) continue;
      if (const Arc* arc = graph.find_arc(id, other)) total += arc->weight;
    }
    if (total > best) {
      best = total;
      star.hub = id;
    }
  }

  for (CommunityId id : star.subnetwork) {
    if (id == star.hub) continue;
    const Arc* arc = graph.find_arc(star.hub, id);
    if (arc == nullptr || arc->weight <= 0) {
      throw TopologyError("community " + std::to_string(id) + " has no link to hub " +
                          std::to_string(star.hub));
    }
    star.spoke_lengths[id] = static_cast<double>(arc->weight);
  }
  return star;
}

CandidateResult evaluate_candidate(const StarTopology& star, const RateMap& rates, double load,
                                   const AgentParameters& params, CommunityId candidate) {
  if (!std::binary_search(star.subnetwork.begin(), star.subnetwork.end(), candidate)) {
    throw ArgumentError("candidate " + std::to_string(candidate) + " is outside the sub-network");
  }
  if (!(params.service_rate > 0.0) || !(params.service_multiplier > 0.0)) {
    throw ArgumentError("service rate and multiplier must be positive");
  }
  if (!(load > 0.0 && load < 1.0)) throw ArgumentError("sub-network load must lie in (0, 1)");

  CandidateResult r;
  r.candidate = candidate;
  for (CommunityId j : star.subnetwork) {
    if (j == candidate) continue;
    const auto it = rates.find(j);
    if (it == rates.end()) throw ArgumentError("no rate for community " + std::to_string(j));
    const double share = it->second / load;
    const double travel = star.distance(candidate, j) / params.service_rate;
    const double service = params.service_multiplier * travel;
    r.t_bar += share * travel;
    r.s2_bar += share * service * service;
  }
  r.s_bar = params.service_multiplier * r.t_bar;

  const double slack = 1.0 - load * r.s_bar;
  if (slack == 0.0) {
    r.raw_tr = std::numeric_limits<double>::infinity();
  } else {
    r.raw_tr = load * r.s2_bar / (2.0 * slack) + r.t_bar;
  }
  if (slack > 0.0) r.tr = r.raw_tr;
  return r;
}

std::vector<CandidateResult> evaluate_subnetwork(const StarTopology& star, const RateMap& rates,
                                                 double load, const AgentParameters& params) {
  std::vector<CandidateResult> out;
  out.reserve(star.subnetwork.size());
  for (CommunityId id : star.subnetwork) out.push_back(evaluate_candidate(star, rates, load, params, id));
  return out;
}

std::size_t CombinationRow::infeasible_count() const {
  return static_cast<std::size_t>(std::count_if(trs.begin(), trs.end(), [](const auto& t) { return !t; }));
}

std::vector<CombinationRow> rank_combinations(const std::vector<std::vector<CandidateResult>>& results) {
  if (results.empty()) return {};
  for (const auto& group : results) {
    if (group.empty()) throw ArgumentError("sub-network without evaluated candidates");
  }

  std::vector<CombinationRow> rows;
  std::vector<std::size_t> pick(results.size(), 0);
  while (true) {
    CombinationRow row;
    for (std::size_t g = 0; g < results.size(); ++g) {
      row.candidates.push_back(results[g][pick[g]].candidate);
      row.trs.push_back(results[g][pick[g]].tr);
    }
    rows.push_back(std::move(row));
    bool wrapped = true;
    for (std::size_t g = results.size(); g-- > 0;) {
      if (++pick[g] < results[g].size()) {
        wrapped = false;
        break;
      }
      pick[g] = 0;
    }
    if (wrapped) break;
  }

  const auto key = [](const CombinationRow& r) {
    std::vector<double> trs;
    for (const auto& t : r.trs) trs.push_back(t ? *t : std::numeric_limits<double>::infinity());
    return std::tuple(r.infeasible_count(), trs, r.candidates);
  };
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const CombinationRow& a, const CombinationRow& b) { return key(a) < key(b); });
  return rows;
}

}  // namespace misflow
