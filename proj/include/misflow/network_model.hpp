#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace misflow {

using CommunityId = int;

struct Community {
  CommunityId id = 0;
  std::int64_t size = 0;
  std::string label;

  bool operator==(const Community&) const = default;
};

/// Undirected inter-community link bundle. Both directions share this record.
struct Arc {
  int id = 0;
  CommunityId src = 0;
  CommunityId dst = 0;
  std::int64_t weight = 0;

  bool operator==(const Arc&) const = default;
};

/// Communities numbered 1..n plus at most one arc per unordered pair.
class CommunityGraph {
 public:
  CommunityGraph() = default;
  /// Validates and takes ownership. Throws ValidationError.
  CommunityGraph(std::vector<Community> communities, std::vector<Arc> arcs);

  const std::vector<Community>& communities() const { return communities_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  std::int64_t total_users() const { return total_users_; }
  std::size_t size() const { return communities_.size(); }

  const Community& community(CommunityId id) const;
  bool contains(CommunityId id) const { return id >= 1 && id <= static_cast<int>(communities_.size()); }

  /// Arc joining a and b in either direction, or nullptr.
  const Arc* find_arc(CommunityId a, CommunityId b) const;

  bool operator==(const CommunityGraph&) const = default;

 private:
  std::vector<Community> communities_;
  std::vector<Arc> arcs_;
  std::int64_t total_users_ = 0;
};

// Readers accept an optional header row and skip blank lines. Errors carry
// the 1-based line number of the offending record.
std::vector<Community> read_communities(std::istream& in);
std::vector<Arc> read_edges(std::istream& in);

CommunityGraph ingest_graph(std::istream& communities, std::istream& edges);
CommunityGraph load_graph(const std::string& communities_path, const std::string& edges_path);

void write_communities(std::ostream& out, const CommunityGraph& graph);
void write_edges(std::ostream& out, const CommunityGraph& graph);

/// Keeps the `keep` largest communities (ties to the lower id) and folds the
/// rest into one residual community with id keep + 1. Kept communities are
/// renumbered 1..keep in their original id order. Parallel arcs created by
/// the merge are summed; self-loops are dropped.
CommunityGraph aggregate_tail(const CommunityGraph& graph, int keep);

using RateMap = std::map<CommunityId, double>;

/// h_j = |N_j| / N.
RateMap spread_rates(const CommunityGraph& graph);

/// Rounds each rate to `decimals` places (half away from zero). A negative
/// count returns the rates unchanged.
RateMap quantize_rates(const RateMap& rates, int decimals);

struct Subnetwork {
  std::vector<CommunityId> members;  // ascending
  double load = 0.0;                 // lambda_i

  bool contains(CommunityId id) const;
};

/// Splits communities into `agents` groups with every load below `load_cap`.
/// Greedy: descending rate (ties to lower id) into the least-loaded group
/// (ties to lower index). If greedy breaks the cap, an exhaustive search runs
/// before reporting infeasibility. Groups are returned ordered by their
/// smallest member.
std::vector<Subnetwork> partition_subnetworks(const RateMap& rates, int agents, double load_cap);

}  // namespace misflow
