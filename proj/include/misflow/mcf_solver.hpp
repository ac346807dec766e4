#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "misflow/network_model.hpp"
#include "misflow/simplex.hpp"

namespace misflow {

struct Commodity {
  std::string id;
  CommunityId source = 0;
  CommunityId dest = 0;
  double demand = 0.0;
  double weight = 100.0;  // penalty per unserved unit
};

std::vector<Commodity> read_commodities(std::istream& in, double default_weight = 100.0);
std::vector<Commodity> load_commodities(const std::string& path, double default_weight = 100.0);

/// Empty delay means no diffusion-delay cap.
using Delay = std::optional<double>;

std::string delay_label(const Delay& delay);

/// floor(delay * throughput * unit_length * capacity / link_count), or the
/// capacity unchanged when no delay is given.
double delay_capacity(double capacity, const Delay& delay, double throughput, double unit_length, int link_count);

struct FlowScenario {
  CommunityGraph graph;
  std::vector<double> capacities;  // C_u, parallel to graph.arcs()
  std::vector<Commodity> commodities;
  Delay delay;
  double throughput = 0.0;  // gamma; <= 0 means the sum of demands
  double unit_length = 1.0;  // mu
  int link_count = 0;        // |u|; <= 0 means the number of arcs
  std::vector<double> arc_costs;  // l_u, parallel to arcs; empty means 1
  double capacity_factor = 1.0;   // applied to C_u before the delay cap
  /// Per-commodity bound on each directed arc. Empty means the shared cap.
  std::optional<double> per_commodity_bound;

  /// Validates commodities and capacities. Throws ValidationError.
  void validate() const;
  double effective_throughput() const;
  int effective_link_count() const;
  double arc_cost(std::size_t arc) const;
  /// Shared cap for arc index `arc` under this scenario's delay.
  double shared_capacity(std::size_t arc) const;
};

/// LP plus the index maps needed to decode a solution.
struct LpInstance {
  lp::LinearProgram program;
  std::size_t num_commodities = 0;
  std::size_t num_nodes = 0;
  std::size_t num_arcs = 0;
  // flow[k][2 * a] is arc a in stored orientation, flow[k][2 * a + 1] reversed.
  std::vector<std::vector<int>> flow;
  std::vector<std::vector<int>> slack_in;   // Y1[k][node - 1]
  std::vector<std::vector<int>> slack_out;  // Y2[k][node - 1]
  std::size_t conservation_rows = 0;
  std::size_t capacity_rows = 0;
  std::size_t bound_rows = 0;
  std::vector<double> shared_caps;
  FlowScenario scenario;
};

/// Variables X[k][i][j] >= 0 per commodity and directed arc, slacks Y1, Y2
/// per commodity and node. Objective sum l X + w (Y1 + Y2). Conservation:
/// inflow - outflow = b + Y1 - Y2 with b = -d at the source and +d at the
/// sink. Capacity: sum_k X[k][i][j] + X[k][j][i] <= shared cap.
LpInstance build_lp(const FlowScenario& scenario);

enum class FlowStatus { Optimal, Infeasible };

struct FlowSolution {
  FlowStatus status = FlowStatus::Infeasible;
  std::vector<std::vector<double>> flows;  // [commodity][2 * arc + direction]
  std::vector<double> unserved;
  std::vector<double> handled;
  std::vector<double> arc_load;  // shared flow per arc, both directions
  std::vector<double> capacities;
  double z1 = 0.0;  // sum w * unserved
  double z2 = 0.0;  // sum l * X
  double z3 = 0.0;  // sum f / (cap - f); +inf when an arc saturates
  double objective = 0.0;  // LP objective, sum l X + w (Y1 + Y2)
  double conservation_residual = 0.0;
  double capacity_residual = 0.0;
  double min_reduced_cost = 0.0;
  std::size_t iterations = 0;

  double total_handled() const;
  double total_unserved() const;
};

FlowSolution solve_lp(const LpInstance& instance, const lp::SolveOptions& options = {});

inline FlowSolution solve_scenario(const FlowScenario& scenario) { return solve_lp(build_lp(scenario)); }

/// sum f / (cap - f) over arcs carrying capacity. Idle zero-capacity arcs
/// contribute nothing; a saturated arc makes the sum infinite.
double congestion_delay(const std::vector<double>& arc_load, const std::vector<double>& capacities);

struct FrontierRow {
  Delay delay;
  std::vector<double> capacities;
  double handled = 0.0;
  double unserved = 0.0;
  double z1 = 0.0;
  double z2 = 0.0;
  double z3 = 0.0;
  FlowSolution solution;
};

/// One solve per threshold. An empty Delay may appear first as a sentinel;
/// numeric thresholds must be ascending.
std::vector<FrontierRow> sweep_delays(const FlowScenario& scenario, const std::vector<Delay>& thresholds);

}  // namespace misflow
