#include "misflow/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "misflow/csv.hpp"
#include "misflow/error.hpp"
#include "misflow/network_model.hpp"
#include "misflow/one_median.hpp"
#include "misflow/reliability.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace misflow {
namespace {

constexpr int kRateDigits = 10;
constexpr int kValueDigits = 6;

std::string fmt_tr(const std::optional<double>& tr) { return tr ? csv::number(*tr, kValueDigits) : "inf"; }

std::ifstream open_artifact(const RunConfig& config, const char* name) {
  const fs::path path = config.out / name;
  std::ifstream in(path);
  if (!in) throw ConfigError("missing upstream artifact: " + path.string());
  return in;
}

std::ifstream open_input(const fs::path& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string("no ") + what + " path configured");
  std::ifstream in(path);
  if (!in) throw ConfigError(std::string("cannot open ") + what + " file: " + path.string());
  return in;
}

fs::path write_artifact(const RunConfig& config, const char* name, const std::string& content) {
  fs::create_directories(config.out);
  const fs::path path = config.out / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
  if (!out) throw ConfigError("failed writing " + path.string());
  return path;
}

CommunityGraph read_network(const RunConfig& config, const char* communities, const char* edges) {
  auto c = open_artifact(config, communities);
  auto e = open_artifact(config, edges);
  return ingest_graph(c, e);
}

CommunityGraph read_network(const RunConfig& config) {
  return read_network(config, artifact::kNetworkCommunities, artifact::kNetworkEdges);
}

RateMap read_rates(const RunConfig& config) {
  auto in = open_artifact(config, artifact::kRates);
  RateMap rates;
  for (const csv::Record& rec : csv::read(in, "community")) {
    csv::expect_columns(rec, 3);
    rates[static_cast<CommunityId>(csv::to_int(rec, 0))] = csv::to_double(rec, 2);
  }
  if (rates.empty()) throw ConfigError("rates artifact is empty");
  return quantize_rates(rates, config.rate_decimals);
}

std::vector<Subnetwork> read_partition(const RunConfig& config, const RateMap& rates) {
  auto in = open_artifact(config, artifact::kPartition);
  std::map<int, Subnetwork> groups;
  for (const csv::Record& rec : csv::read(in, "subnetwork")) {
    csv::expect_columns(rec, 2);
    const int s = static_cast<int>(csv::to_int(rec, 0));
    const auto id = static_cast<CommunityId>(csv::to_int(rec, 1));
    const auto it = rates.find(id);
    if (it == rates.end()) throw ParseError("partition references community without a rate", rec.line);
    groups[s].members.push_back(id);
    groups[s].load += it->second;
  }
  std::vector<Subnetwork> out;
  for (auto& [_, g] : groups) {
    std::sort(g.members.begin(), g.members.end());
    out.push_back(std::move(g));
  }
  if (out.empty()) throw ConfigError("partition artifact is empty");
  return out;
}

struct ReliabilityArtifact {
  std::vector<ReliabilityRow> rows;
};

ReliabilityArtifact read_reliability(const RunConfig& config) {
  auto in = open_artifact(config, artifact::kReliability);
  ReliabilityArtifact art;
  for (const csv::Record& rec : csv::read(in, "arc")) {
    csv::expect_columns(rec, 6);
    ReliabilityRow row;
    row.arc = static_cast<int>(csv::to_int(rec, 0));
    row.src = static_cast<CommunityId>(csv::to_int(rec, 1));
    row.dst = static_cast<CommunityId>(csv::to_int(rec, 2));
    row.reliability_pct = csv::to_double(rec, 3);
    row.x_old = csv::to_int(rec, 4);
    row.x_new = csv::to_int(rec, 5);
    art.rows.push_back(row);
  }
  return art;
}

FlowScenario read_scenario(const RunConfig& config) {
  const CommunityGraph graph = read_network(config);
  const ReliabilityArtifact rel = read_reliability(config);
  if (rel.rows.size() != graph.arcs().size()) {
    throw ConfigError("reliability artifact does not match the network arcs");
  }
  FlowScenario sc;
  sc.graph = graph;
  for (std::size_t a = 0; a < rel.rows.size(); ++a) {
    const Arc& arc = graph.arcs()[a];
    if (rel.rows[a].src != arc.src || rel.rows[a].dst != arc.dst) {
      throw ConfigError("reliability artifact arc " + std::to_string(rel.rows[a].arc) + " does not match the network");
    }
    sc.capacities.push_back(static_cast<double>(rel.rows[a].x_new));
  }
  auto commodities = open_input(config.commodities, "commodity");
  sc.commodities = read_commodities(commodities, config.penalty);
  sc.throughput = config.throughput;
  sc.unit_length = config.unit_length;
  sc.link_count = config.link_count;
  sc.capacity_factor = config.capacity_factor;
  sc.validate();
  return sc;
}

std::string frontier_csv(const std::vector<FrontierRow>& rows) {
  std::ostringstream out;
  out << "delay,handled,unserved,z1,z2,z3\n";
  for (const FrontierRow& r : rows) {
    out << delay_label(r.delay) << ',' << csv::number(r.handled, kValueDigits) << ','
        << csv::number(r.unserved, kValueDigits) << ',' << csv::number(r.z1, kValueDigits) << ','
        << csv::number(r.z2, kValueDigits) << ',' << csv::number(r.z3, kValueDigits) << '\n';
  }
  return out.str();
}

std::optional<double> json_number(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if (!j[key].is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return j[key].get<double>();
}

}  // namespace

std::vector<Delay> parse_delays(const std::string& text) {
  std::vector<Delay> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    if (item == "none" || item == "None" || item == "NONE") {
      out.emplace_back(std::nullopt);
      continue;
    }
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.emplace_back(v);
    } catch (const std::exception&) {
      throw ConfigError("bad delay threshold '" + item + "'");
    }
  }
  return out;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("configuration " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");

  RunConfig c;
  const fs::path base = path.parent_path();
  const auto resolve = [&](const char* key) -> fs::path {
    if (!j.contains(key)) return {};
    const fs::path p = j[key].get<std::string>();
    return p.is_absolute() ? p : base / p;
  };
  try {
    c.communities = resolve("communities");
    c.edges = resolve("edges");
    c.commodities = resolve("commodities");
    c.keep_top = j.value("keep_top", c.keep_top);
    c.agents = j.value("agents", c.agents);
    c.load_cap = j.value("load_cap", c.load_cap);
    c.service_rate = j.value("service_rate", c.service_rate);
    c.service_multiplier = j.value("service_multiplier", c.service_multiplier);
    c.rate_decimals = j.value("rate_decimals", c.rate_decimals);
    c.window_hours = j.value("window_hours", c.window_hours);
    if (j.contains("delays")) {
      c.delays.clear();
      for (const json& d : j["delays"]) {
        if (d.is_null() || (d.is_string() && d.get<std::string>() == "none")) {
          c.delays.emplace_back(std::nullopt);
        } else {
          c.delays.emplace_back(d.get<double>());
        }
      }
    }
    c.solve_delay = json_number(j, "solve_delay");
    c.penalty = j.value("penalty", c.penalty);
    c.unit_length = j.value("unit_length", c.unit_length);
    c.throughput = j.value("throughput", c.throughput);
    c.link_count = j.value("link_count", c.link_count);
    c.capacity_factor = j.value("capacity_factor", c.capacity_factor);
    if (j.contains("out")) {
      const fs::path out = j["out"].get<std::string>();
      c.out = out.is_absolute() ? out : base / out;
    }
    c.seed = j.value("seed", c.seed);
    if (j.contains("queue")) {
      const json& q = j["queue"];
      c.queue.arrival_rate = json_number(q, "arrival_rate");
      c.queue.service_mean = json_number(q, "service_mean");
      c.queue.service_second_moment = json_number(q, "service_second_moment");
      if (q.contains("distribution")) c.queue.distribution = parse_distribution(q["distribution"].get<std::string>());
      c.queue.events = q.value("events", c.queue.events);
      c.queue.warmup = q.value("warmup", c.queue.warmup);
      c.queue.replications = q.value("replications", c.queue.replications);
    }
  } catch (const json::exception& e) {
    throw ConfigError("configuration " + path.string() + ": " + e.what());
  }
  return c;
}

void validate(const RunConfig& c) {
  if (c.keep_top < 0) throw ConfigError("keep_top must be non-negative");
  if (c.agents < 1) throw ConfigError("agents must be positive");
  if (!(c.load_cap > 0.0)) throw ConfigError("load_cap must be positive");
  if (!(c.service_rate > 0.0) || !(c.service_multiplier > 0.0)) {
    throw ConfigError("service_rate and service_multiplier must be positive");
  }
  if (!(c.window_hours > 0.0)) throw ConfigError("window_hours must be positive");
  for (const Delay& d : c.delays) {
    if (d && *d < 0.0) throw ConfigError("delay thresholds must be non-negative");
  }
  if (c.solve_delay && *c.solve_delay < 0.0) throw ConfigError("solve_delay must be non-negative");
  if (!(c.penalty > 0.0)) throw ConfigError("penalty must be positive");
  if (c.queue.replications < 1) throw ConfigError("queue replications must be positive");
}

StageOutputs stage_ingest(const RunConfig& config) {
  auto communities = open_input(config.communities, "community");
  auto edges = open_input(config.edges, "edge-list");
  const CommunityGraph graph = ingest_graph(communities, edges);
  std::ostringstream c, e;
  write_communities(c, graph);
  write_edges(e, graph);
  return {write_artifact(config, artifact::kGraphCommunities, c.str()),
          write_artifact(config, artifact::kGraphEdges, e.str())};
}

StageOutputs stage_aggregate(const RunConfig& config) {
  CommunityGraph graph = read_network(config, artifact::kGraphCommunities, artifact::kGraphEdges);
  if (config.keep_top > 0 && static_cast<std::size_t>(config.keep_top) < graph.size()) {
    graph = aggregate_tail(graph, config.keep_top);
  }
  std::ostringstream c, e;
  write_communities(c, graph);
  write_edges(e, graph);
  return {write_artifact(config, artifact::kNetworkCommunities, c.str()),
          write_artifact(config, artifact::kNetworkEdges, e.str())};
}

StageOutputs stage_rates(const RunConfig& config) {
  const CommunityGraph graph = read_network(config);
  const RateMap rates = spread_rates(graph);
  std::ostringstream out;
  out << "community,size,h,label\n";
  for (const Community& c : graph.communities()) {
    out << c.id << ',' << c.size << ',' << csv::number(rates.at(c.id), kRateDigits) << ',' << c.label << '\n';
  }
  return {write_artifact(config, artifact::kRates, out.str())};
}

StageOutputs stage_partition(const RunConfig& config) {
  const RateMap rates = read_rates(config);
  const std::vector<Subnetwork> groups = partition_subnetworks(rates, config.agents, config.load_cap);
  std::ostringstream out;
  out << "subnetwork,community,h,load\n";
  for (std::size_t s = 0; s < groups.size(); ++s) {
    for (CommunityId id : groups[s].members) {
      out << s + 1 << ',' << id << ',' << csv::number(rates.at(id), kRateDigits) << ','
          << csv::number(groups[s].load, kRateDigits) << '\n';
    }
  }
  return {write_artifact(config, artifact::kPartition, out.str())};
}

StageOutputs stage_prioritize(const RunConfig& config) {
  const CommunityGraph graph = read_network(config);
  const RateMap rates = read_rates(config);
  const std::vector<Subnetwork> groups = read_partition(config, rates);
  const AgentParameters params{config.service_rate, config.service_multiplier};

  std::vector<std::vector<CandidateResult>> results;
  std::ostringstream cand;
  cand << "subnetwork,candidate,hub,load,t_bar,s_bar,s2_bar,tr,raw_tr\n";
  for (std::size_t s = 0; s < groups.size(); ++s) {
    const StarTopology star = build_star(graph, groups[s]);
    results.push_back(evaluate_subnetwork(star, rates, groups[s].load, params));
    for (const CandidateResult& r : results.back()) {
      cand << s + 1 << ',' << r.candidate << ',' << star.hub << ',' << csv::number(groups[s].load, kRateDigits) << ','
           << csv::number(r.t_bar, kValueDigits) << ',' << csv::number(r.s_bar, kValueDigits) << ','
           << csv::number(r.s2_bar, kValueDigits) << ',' << fmt_tr(r.tr) << ','
           << csv::number(r.raw_tr, kValueDigits) << '\n';
    }
  }

  std::ostringstream comb;
  for (std::size_t s = 0; s < groups.size(); ++s) comb << (s ? "," : "") << "candidate_sub" << s + 1;
  for (std::size_t s = 0; s < groups.size(); ++s) comb << ",tr" << s + 1;
  comb << '\n';
  for (const CombinationRow& row : rank_combinations(results)) {
    for (std::size_t s = 0; s < row.candidates.size(); ++s) comb << (s ? "," : "") << row.candidates[s];
    for (const auto& tr : row.trs) comb << ',' << fmt_tr(tr);
    comb << '\n';
  }
  return {write_artifact(config, artifact::kCandidates, cand.str()),
          write_artifact(config, artifact::kCombinations, comb.str())};
}

namespace {

MonitoringAssignment read_assignment(const RunConfig& config) {
  const RateMap rates = read_rates(config);
  MonitoringAssignment assignment;
  assignment.subnetworks = read_partition(config, rates);
  auto in = open_artifact(config, artifact::kCombinations);
  const auto records = csv::read(in, "candidate_sub1");
  if (records.empty()) throw ConfigError("combinations artifact has no rows");
  const csv::Record& best = records.front();
  const std::size_t m = assignment.subnetworks.size();
  csv::expect_columns(best, 2 * m);
  for (std::size_t s = 0; s < m; ++s) {
    const std::string& f = csv::field(best, m + s);
    assignment.chosen_tr.push_back(f == "inf" ? std::nullopt : std::optional<double>(csv::to_double(best, m + s)));
  }
  return assignment;
}

}  // namespace

StageOutputs stage_reliability(const RunConfig& config) {
  const CommunityGraph graph = read_network(config);
  const MonitoringAssignment assignment = read_assignment(config);
  const ReliabilityTable table = reliability_table(graph, assignment, config.window_hours);
  std::ostringstream out;
  out << "arc,src,dst,reliability,x_old,x_new\n";
  for (const ReliabilityRow& r : table.rows) {
    out << r.arc << ',' << r.src << ',' << r.dst << ',' << csv::number(r.reliability_pct, kValueDigits) << ','
        << r.x_old << ',' << r.x_new << '\n';
  }
  return {write_artifact(config, artifact::kReliability, out.str())};
}

StageOutputs stage_capacities(const RunConfig& config) {
  const FlowScenario sc = read_scenario(config);
  std::ostringstream out;
  out << "arc,src,dst";
  for (const Delay& d : config.delays) out << ',' << delay_label(d);
  out << '\n';
  for (std::size_t a = 0; a < sc.graph.arcs().size(); ++a) {
    const Arc& arc = sc.graph.arcs()[a];
    out << arc.id << ',' << arc.src << ',' << arc.dst;
    for (const Delay& d : config.delays) {
      FlowScenario delayed = sc;
      delayed.delay = d;
      out << ',' << csv::number(delayed.shared_capacity(a), kValueDigits);
    }
    out << '\n';
  }
  return {write_artifact(config, artifact::kCapacities, out.str())};
}

StageOutputs stage_solve(const RunConfig& config) {
  FlowScenario sc = read_scenario(config);
  sc.delay = config.solve_delay;
  const FlowSolution sol = solve_scenario(sc);

  std::ostringstream perf;
  perf << "id,source,dest,demand,handled,unserved\n";
  double demand = 0.0;
  for (std::size_t k = 0; k < sc.commodities.size(); ++k) {
    const Commodity& c = sc.commodities[k];
    demand += c.demand;
    perf << c.id << ',' << c.source << ',' << c.dest << ',' << csv::number(c.demand, kValueDigits) << ','
         << csv::number(sol.handled[k], kValueDigits) << ',' << csv::number(sol.unserved[k], kValueDigits) << '\n';
  }
  perf << "total,,," << csv::number(demand, kValueDigits) << ',' << csv::number(sol.total_handled(), kValueDigits)
       << ',' << csv::number(sol.total_unserved(), kValueDigits) << '\n';

  std::ostringstream flows;
  flows << "commodity,src,dst,flow\n";
  for (std::size_t k = 0; k < sc.commodities.size(); ++k) {
    for (std::size_t v = 0; v < sol.flows[k].size(); ++v) {
      const double x = sol.flows[k][v];
      if (x <= 1e-9) continue;
      const Arc& arc = sc.graph.arcs()[v / 2];
      const bool forward = v % 2 == 0;
      flows << sc.commodities[k].id << ',' << (forward ? arc.src : arc.dst) << ',' << (forward ? arc.dst : arc.src)
            << ',' << csv::number(x, kValueDigits) << '\n';
    }
  }
  return {write_artifact(config, artifact::kPerformance, perf.str()),
          write_artifact(config, artifact::kFlows, flows.str())};
}

StageOutputs stage_sweep(const RunConfig& config) {
  const FlowScenario sc = read_scenario(config);
  return {write_artifact(config, artifact::kFrontier, frontier_csv(sweep_delays(sc, config.delays)))};
}

StageOutputs stage_simulate_queue(const RunConfig& config) {
  std::vector<SimConfig> settings;
  const QueueSettings& q = config.queue;
  const auto base = [&](double lambda, double mean, double second) {
    SimConfig s;
    s.arrival_rate = lambda;
    s.service_mean = mean;
    s.service_second_moment = second;
    s.distribution = q.distribution;
    s.horizon_events = q.events;
    s.warmup_events = q.warmup;
    return s;
  };
  if (q.arrival_rate || q.service_mean) {
    if (!q.arrival_rate || !q.service_mean) {
      throw ConfigError("queue simulation needs both arrival_rate and service_mean");
    }
    const double second = q.service_second_moment.value_or(*q.service_mean * *q.service_mean);
    settings.push_back(base(*q.arrival_rate, *q.service_mean, second));
  } else {
    // Fall back to the monitored candidate of every sub-network.
    const MonitoringAssignment assignment = read_assignment(config);
    auto in = open_artifact(config, artifact::kCombinations);
    const csv::Record best = csv::read(in, "candidate_sub1").front();
    auto cin = open_artifact(config, artifact::kCandidates);
    const auto candidates = csv::read(cin, "subnetwork");
    for (std::size_t s = 0; s < assignment.subnetworks.size(); ++s) {
      const auto chosen = csv::to_int(best, s);
      for (const csv::Record& rec : candidates) {
        if (csv::to_int(rec, 0) == static_cast<std::int64_t>(s + 1) && csv::to_int(rec, 1) == chosen) {
          settings.push_back(base(csv::to_double(rec, 3), csv::to_double(rec, 5), csv::to_double(rec, 6)));
        }
      }
    }
  }

  std::ostringstream out;
  for (SimConfig s : settings) {
    for (int r = 0; r < q.replications; ++r) {
      s.seed = config.seed + static_cast<std::uint64_t>(r);
      out << to_json(s, simulate(s)) << '\n';
    }
  }
  return {write_artifact(config, artifact::kQueue, out.str())};
}

const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names{"ingest",      "aggregate",  "rates", "partition", "prioritize",
                                              "reliability", "capacities", "solve", "sweep",     "simulate-queue"};
  return names;
}

StageOutputs run_stage(const std::string& name, const RunConfig& config) {
  validate(config);
  if (name == "ingest") return stage_ingest(config);
  if (name == "aggregate") return stage_aggregate(config);
  if (name == "rates") return stage_rates(config);
  if (name == "partition") return stage_partition(config);
  if (name == "prioritize") return stage_prioritize(config);
  if (name == "reliability") return stage_reliability(config);
  if (name == "capacities") return stage_capacities(config);
  if (name == "solve") return stage_solve(config);
  if (name == "sweep") return stage_sweep(config);
  if (name == "simulate-queue") return stage_simulate_queue(config);
  throw ArgumentError("unknown stage '" + name + "'");
}

StageOutputs run_pipeline(const RunConfig& config) {
  StageOutputs written;
  std::string current = "config";
  try {
    validate(config);
    for (const char* stage : {"ingest", "aggregate", "rates", "partition", "prioritize", "reliability",
                              "capacities", "solve", "sweep"}) {
      current = stage;
      const StageOutputs out = run_stage(stage, config);
      written.insert(written.end(), out.begin(), out.end());
    }

    current = "summary";
    json summary;
    const RateMap rates = read_rates(config);
    const MonitoringAssignment assignment = read_assignment(config);
    auto cin = open_artifact(config, artifact::kCombinations);
    const csv::Record best = csv::read(cin, "candidate_sub1").front();
    json agents = json::array();
    for (std::size_t s = 0; s < assignment.subnetworks.size(); ++s) {
      json a;
      a["subnetwork"] = s + 1;
      a["members"] = assignment.subnetworks[s].members;
      a["load"] = assignment.subnetworks[s].load;
      a["monitored"] = csv::to_int(best, s);
      a["tr"] = assignment.chosen_tr[s] ? json(*assignment.chosen_tr[s]) : json("inf");
      agents.push_back(a);
    }
    summary["agents"] = agents;

    const FlowScenario sc = read_scenario(config);
    double demand = 0.0;
    for (const Commodity& c : sc.commodities) demand += c.demand;
    summary["total_demand"] = demand;

    auto fin = open_artifact(config, artifact::kFrontier);
    json frontier = json::array();
    std::vector<std::pair<double, double>> numeric;
    for (const csv::Record& rec : csv::read(fin, "delay")) {
      json row;
      row["delay"] = rec.fields[0] == "none" ? json(nullptr) : json(csv::to_double(rec, 0));
      row["handled"] = csv::to_double(rec, 1);
      frontier.push_back(row);
      if (rec.fields[0] != "none") numeric.emplace_back(csv::to_double(rec, 0), csv::to_double(rec, 1));
    }
    summary["frontier"] = frontier;
    // Smallest threshold from which every larger threshold serves all demand.
    std::optional<double> saturation;
    for (auto it = numeric.rbegin(); it != numeric.rend(); ++it) {
      if (std::abs(it->second - demand) > 1e-6) break;
      saturation = it->first;
    }
    summary["saturation_delay"] = saturation ? json(*saturation) : json(nullptr);
    written.push_back(write_artifact(config, artifact::kSummary, summary.dump(2) + "\n"));
  } catch (const std::exception& e) {
    for (const fs::path& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    throw StageError(current, e.what());
  }
  return written;
}

}  // namespace misflow
