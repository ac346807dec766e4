#include "misflow/network_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <set>
#include <utility>

#include "misflow/csv.hpp"
#include "misflow/error.hpp"

namespace misflow {

CommunityGraph::CommunityGraph(std::vector<Community> communities, std::vector<Arc> arcs)
    : communities_(std::move(communities)), arcs_(std::move(arcs)) {
  if (communities_.empty()) throw ValidationError("graph has no communities");
  std::sort(communities_.begin(), communities_.end(),
            [](const Community& a, const Community& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < communities_.size(); ++i) {
    const Community& c = communities_[i];
    if (c.id != static_cast<int>(i) + 1) {
      throw ValidationError("community ids must be unique and contiguous from 1; found " +
                            std::to_string(c.id) + " where " + std::to_string(i + 1) + " was expected");
    }
    if (c.size < 1) {
      throw ValidationError("community " + std::to_string(c.id) + " has non-positive size " +
                            std::to_string(c.size));
    }
    total_users_ += c.size;
  }

  std::set<std::pair<CommunityId, CommunityId>> pairs;
  for (const Arc& a : arcs_) {
    if (!contains(a.src) || !contains(a.dst)) {
      throw ValidationError("arc " + std::to_string(a.id) + " references missing community " +
                            std::to_string(contains(a.src) ? a.dst : a.src));
    }
    if (a.src == a.dst) {
      throw ValidationError("arc " + std::to_string(a.id) + " is a self-loop on community " +
                            std::to_string(a.src));
    }
    if (a.weight < 0) {
      throw ValidationError("arc " + std::to_string(a.id) + " has negative weight");
    }
    if (!pairs.emplace(std::minmax(a.src, a.dst)).second) {
      throw ValidationError("duplicate arc between communities " + std::to_string(a.src) + " and " +
                            std::to_string(a.dst));
    }
  }
}

const Community& CommunityGraph::community(CommunityId id) const {
  if (!contains(id)) throw ArgumentError("no community " + std::to_string(id));
  return communities_[static_cast<std::size_t>(id - 1)];
}

const Arc* CommunityGraph::find_arc(CommunityId a, CommunityId b) const {
  for (const Arc& arc : arcs_) {
    if ((arc.src == a && arc.dst == b) || (arc.src == b && arc.dst == a)) return &arc;
  }
  return nullptr;
}

std::vector<Community> read_communities(std::istream& in) {
  std::vector<Community> out;
  for (const csv::Record& rec : csv::read(in, "id")) {
    csv::expect_columns(rec, 2);
    Community c;
    c.id = static_cast<CommunityId>(csv::to_int(rec, 0));
    c.size = csv::to_int(rec, 1);
    if (c.size < 1) throw ParseError("community size must be positive", rec.line);
    for (std::size_t i = 2; i < rec.fields.size(); ++i) {
      if (i > 2) c.label += ',';
      c.label += rec.fields[i];
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Arc> read_edges(std::istream& in) {
  std::vector<Arc> out;
  for (const csv::Record& rec : csv::read(in, "src_id")) {
    if (rec.fields.size() != 3) {
      throw ParseError("expected src_id,dst_id,weight", rec.line);
    }
    Arc a;
    a.id = static_cast<int>(out.size()) + 1;
    a.src = static_cast<CommunityId>(csv::to_int(rec, 0));
    a.dst = static_cast<CommunityId>(csv::to_int(rec, 1));
    a.weight = csv::to_int(rec, 2);
    if (a.weight < 0) throw ParseError("arc weight must be non-negative", rec.line);
    out.push_back(a);
  }
  return out;
}

CommunityGraph ingest_graph(std::istream& communities, std::istream& edges) {
  return CommunityGraph(read_communities(communities), read_edges(edges));
}

CommunityGraph load_graph(const std::string& communities_path, const std::string& edges_path) {
  std::ifstream communities(communities_path);
  if (!communities) throw ConfigError("cannot open community file: " + communities_path);
  std::ifstream edges(edges_path);
  if (!edges) throw ConfigError("cannot open edge-list file: " + edges_path);
  return ingest_graph(communities, edges);
}

void write_communities(std::ostream& out, const CommunityGraph& graph) {
  out << "id,size,label\n";
  for (const Community& c : graph.communities()) {
    out << c.id << ',' << c.size << ',' << c.label << '\n';
  }
}

void write_edges(std::ostream& out, const CommunityGraph& graph) {
  out << "src_id,dst_id,weight\n";
  for (const Arc& a : graph.arcs()) out << a.src << ',' << a.dst << ',' << a.weight << '\n';
}

CommunityGraph aggregate_tail(const CommunityGraph& graph, int keep) {
  const int n = static_cast<int>(graph.size());
  if (keep < 1 || keep >= n) {
    throw ArgumentError("keep must be in [1, " + std::to_string(n - 1) + "], got " + std::to_string(keep));
  }

  std::vector<Community> by_size = graph.communities();
  std::stable_sort(by_size.begin(), by_size.end(),
                   [](const Community& a, const Community& b) { return a.size > b.size; });
  std::vector<CommunityId> kept;
  for (int i = 0; i < keep; ++i) kept.push_back(by_size[static_cast<std::size_t>(i)].id);
  std::sort(kept.begin(), kept.end());

  const CommunityId residual = keep + 1;
  std::vector<CommunityId> remap(static_cast<std::size_t>(n) + 1, residual);
  std::vector<Community> communities;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const Community& old = graph.community(kept[i]);
    remap[static_cast<std::size_t>(old.id)] = static_cast<CommunityId>(i) + 1;
    communities.push_back({static_cast<CommunityId>(i) + 1, old.size, old.label});
  }
  std::int64_t residual_size = 0;
  for (const Community& c : graph.communities()) {
    if (remap[static_cast<std::size_t>(c.id)] == residual) residual_size += c.size;
  }
  communities.push_back({residual, residual_size, "residual"});

  // Merged arcs keep the orientation and position of their first occurrence.
  std::vector<Arc> arcs;
  std::map<std::pair<CommunityId, CommunityId>, std::size_t> index;
  for (const Arc& a : graph.arcs()) {
    const CommunityId src = remap[static_cast<std::size_t>(a.src)];
    const CommunityId dst = remap[static_cast<std::size_t>(a.dst)];
    if (src == dst) continue;
    const auto key = std::minmax(src, dst);
    if (auto it = index.find(key); it != index.end()) {
      arcs[it->second].weight += a.weight;
    } else {
      index.emplace(key, arcs.size());
      arcs.push_back({static_cast<int>(arcs.size()) + 1, src, dst, a.weight});
    }
  }
  return CommunityGraph(std::move(communities), std::move(arcs));
}

RateMap spread_rates(const CommunityGraph& graph) {
  if (graph.total_users() <= 0) throw ArgumentError("graph has no users");
  RateMap rates;
  const double total = static_cast<double>(graph.total_users());
  for (const Community& c : graph.communities()) rates[c.id] = static_cast<double>(c.size) / total;
  return rates;
}

RateMap quantize_rates(const RateMap& rates, int decimals) {
  if (decimals < 0) return rates;
  const double scale = std::pow(10.0, decimals);
  RateMap out;
  for (const auto& [id, h] : rates) out[id] = std::round(h * scale) / scale;
  return out;
}

bool Subnetwork::contains(CommunityId id) const {
  return std::binary_search(members.begin(), members.end(), id);
}

namespace {

std::vector<Subnetwork> finish(std::vector<Subnetwork> groups) {
  for (Subnetwork& g : groups) std::sort(g.members.begin(), g.members.end());
  std::stable_sort(groups.begin(), groups.end(), [](const Subnetwork& a, const Subnetwork& b) {
    if (a.members.empty() || b.members.empty()) return !a.members.empty() && b.members.empty();
    return a.members.front() < b.members.front();
  });
  return groups;
}

std::string describe(const Subnetwork& g) {
  std::string s = "{";
  for (std::size_t i = 0; i < g.members.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(g.members[i]);
  }
  return s + "}";
}

// Depth-first assignment in descending-rate order. The first empty group is
// the only empty group tried at each level, which removes group relabelings.
bool search(const std::vector<std::pair<CommunityId, double>>& order, std::size_t next,
            double cap, std::vector<Subnetwork>& groups) {
  if (next == order.size()) return true;
  const auto& [id, h] = order[next];
  bool tried_empty = false;
  for (Subnetwork& g : groups) {
    if (g.members.empty()) {
      if (tried_empty) continue;
      tried_empty = true;
    }
    if (g.load + h >= cap) continue;
    g.members.push_back(id);
    g.load += h;
    if (search(order, next + 1, cap, groups)) return true;
    g.members.pop_back();
    g.load -= h;
  }
  return false;
}

}  // namespace

std::vector<Subnetwork> partition_subnetworks(const RateMap& rates, int agents, double load_cap) {
  if (agents < 1) throw ArgumentError("agent count must be positive");
  if (static_cast<std::size_t>(agents) > rates.size()) {
    throw ArgumentError("agent count " + std::to_string(agents) + " exceeds community count " +
                        std::to_string(rates.size()));
  }
  if (!(load_cap > 0.0)) throw ArgumentError("load cap must be positive");

  std::vector<std::pair<CommunityId, double>> order(rates.begin(), rates.end());
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  std::vector<Subnetwork> groups(static_cast<std::size_t>(agents));
  for (const auto& [id, h] : order) {
    auto lightest = std::min_element(groups.begin(), groups.end(),
                                     [](const Subnetwork& a, const Subnetwork& b) { return a.load < b.load; });
    lightest->members.push_back(id);
    lightest->load += h;
  }
  const auto worst = std::max_element(groups.begin(), groups.end(),
                                      [](const Subnetwork& a, const Subnetwork& b) { return a.load < b.load; });
  if (worst->load < load_cap) return finish(std::move(groups));

  constexpr std::size_t kExhaustiveLimit = 24;
  if (order.size() <= kExhaustiveLimit) {
    std::vector<Subnetwork> exhaustive(static_cast<std::size_t>(agents));
    if (search(order, 0, load_cap, exhaustive)) return finish(std::move(exhaustive));
  }
  Subnetwork violating = *worst;
  std::sort(violating.members.begin(), violating.members.end());
  throw InfeasibleError("no partition into " + std::to_string(agents) + " sub-networks meets load cap " +
                        csv::number(load_cap, 6) + "; greedy load " + csv::number(violating.load, 6) +
                        " on " + describe(violating));
}

}  // namespace misflow
