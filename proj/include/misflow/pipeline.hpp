#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "misflow/mcf_solver.hpp"
#include "misflow/queue_sim.hpp"

namespace misflow {

struct QueueSettings {
  std::optional<double> arrival_rate;
  std::optional<double> service_mean;
  std::optional<double> service_second_moment;
  ServiceDistribution distribution = ServiceDistribution::TwoPoint;
  std::uint64_t events = 1'000'000;
  std::uint64_t warmup = 0;
  int replications = 1;
};

struct RunConfig {
  std::filesystem::path communities;
  std::filesystem::path edges;
  std::filesystem::path commodities;
  int keep_top = 0;  // 0 keeps every community
  int agents = 2;
  double load_cap = 0.55;
  double service_rate = 55.0;
  double service_multiplier = 2.0;
  /// Rates are rounded to this many decimals before partitioning and
  /// prioritizing; negative keeps full precision.
  int rate_decimals = -1;
  double window_hours = 24.0;
  std::vector<Delay> delays{std::nullopt, 0.01, 0.02, 0.03, 0.04, 0.05, 0.1};
  Delay solve_delay;  // delay used by the single `solve` stage
  double penalty = 100.0;
  double unit_length = 1.0;
  double throughput = 0.0;  // 0 means total demand
  int link_count = 0;       // 0 means number of arcs
  double capacity_factor = 1.0;
  std::filesystem::path out = "out";
  std::uint64_t seed = 1;
  QueueSettings queue;
};

/// Reads a JSON run configuration. Relative input paths resolve against the
/// configuration file's directory. Throws ConfigError.
RunConfig load_config(const std::filesystem::path& path);

/// Parses "none,0.01,0.1" style lists.
std::vector<Delay> parse_delays(const std::string& text);

/// Checks value ranges. Input files are checked by the stages that read them.
void validate(const RunConfig& config);

/// Artifact file names inside the output directory.
namespace artifact {
inline constexpr const char* kGraphCommunities = "graph_communities.csv";
inline constexpr const char* kGraphEdges = "graph_edges.csv";
inline constexpr const char* kNetworkCommunities = "network_communities.csv";
inline constexpr const char* kNetworkEdges = "network_edges.csv";
inline constexpr const char* kRates = "rates.csv";
inline constexpr const char* kPartition = "partition.csv";
inline constexpr const char* kCandidates = "candidates.csv";
inline constexpr const char* kCombinations = "combinations.csv";
inline constexpr const char* kReliability = "reliability.csv";
inline constexpr const char* kCapacities = "capacities.csv";
inline constexpr const char* kPerformance = "performance.csv";
inline constexpr const char* kFlows = "flows.csv";
inline constexpr const char* kFrontier = "frontier.csv";
inline constexpr const char* kQueue = "queue.jsonl";
inline constexpr const char* kSummary = "summary.json";
}  // namespace artifact

/// Every stage reads its upstream artifacts from config.out, writes its own
/// artifacts there, and returns the paths written. A missing upstream
/// artifact raises ConfigError naming the file.
using StageOutputs = std::vector<std::filesystem::path>;

StageOutputs stage_ingest(const RunConfig& config);
StageOutputs stage_aggregate(const RunConfig& config);
StageOutputs stage_rates(const RunConfig& config);
StageOutputs stage_partition(const RunConfig& config);
StageOutputs stage_prioritize(const RunConfig& config);
StageOutputs stage_reliability(const RunConfig& config);
StageOutputs stage_capacities(const RunConfig& config);
StageOutputs stage_solve(const RunConfig& config);
StageOutputs stage_sweep(const RunConfig& config);
StageOutputs stage_simulate_queue(const RunConfig& config);

/// Runs every analysis stage in order and writes summary.json. On failure
/// the files written by this run are removed and the error is rethrown as
/// StageError.
StageOutputs run_pipeline(const RunConfig& config);

/// Stage-tagged wrapper around the underlying error.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// Dispatches a stage by its CLI name. Throws ArgumentError for unknown names.
StageOutputs run_stage(const std::string& name, const RunConfig& config);

const std::vector<std::string>& stage_names();

}  // namespace misflow
