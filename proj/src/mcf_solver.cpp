#include "misflow/mcf_solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>

#include "misflow/csv.hpp"
#include "misflow/error.hpp"

namespace misflow {

std::vector<Commodity> read_commodities(std::istream& in, double default_weight) {
  std::vector<Commodity> out;
  std::set<std::string> ids;
  for (const csv::Record& rec : csv::read(in, "id")) {
    if (rec.fields.size() != 4 && rec.fields.size() != 5) {
      throw ParseError("expected id,source,dest,demand[,weight]", rec.line);
    }
    Commodity c;
    c.id = rec.fields[0];
    if (c.id.empty()) throw ParseError("empty commodity id", rec.line);
    if (!ids.insert(c.id).second) throw ParseError("duplicate commodity id '" + c.id + "'", rec.line);
    c.source = static_cast<CommunityId>(csv::to_int(rec, 1));
    c.dest = static_cast<CommunityId>(csv::to_int(rec, 2));
    c.demand = csv::to_double(rec, 3);
    c.weight = rec.fields.size() == 5 ? csv::to_double(rec, 4) : default_weight;
    if (c.source == c.dest) throw ParseError("commodity source equals destination", rec.line);
    if (c.demand < 0.0) throw ParseError("commodity demand must be non-negative", rec.line);
    if (!(c.weight > 0.0)) throw ParseError("commodity weight must be positive", rec.line);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Commodity> load_commodities(const std::string& path, double default_weight) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open commodity file: " + path);
  return read_commodities(in, default_weight);
}

std::string delay_label(const Delay& delay) { return delay ? csv::number(*delay, 6) : "none"; }

double delay_capacity(double capacity, const Delay& delay, double throughput, double unit_length, int link_count) {
  if (capacity < 0.0 || throughput < 0.0 || unit_length < 0.0) {
    throw ArgumentError("delay_capacity arguments must be non-negative");
  }
  if (link_count < 1) throw ArgumentError("link count must be at least 1");
  if (!delay) return capacity;
  if (*delay < 0.0) throw ArgumentError("delay must be non-negative");
  const double scaled = *delay * throughput * unit_length * capacity / static_cast<double>(link_count);
  // Guard against products such as 0.03 * 250 * 10 / 15 landing just under an integer.
  return std::floor(scaled + 1e-9);
}

void FlowScenario::validate() const {
  if (capacities.size() != graph.arcs().size()) {
    throw ValidationError("scenario needs one capacity per arc (" + std::to_string(graph.arcs().size()) + "), got " +
                          std::to_string(capacities.size()));
  }
  for (double c : capacities) {
    if (!(c >= 0.0)) throw ValidationError("arc capacities must be non-negative");
  }
  if (!arc_costs.empty() && arc_costs.size() != graph.arcs().size()) {
    throw ValidationError("scenario needs one arc cost per arc");
  }
  if (!(capacity_factor >= 0.0)) throw ValidationError("capacity factor must be non-negative");
  for (const Commodity& c : commodities) {
    if (!graph.contains(c.source) || !graph.contains(c.dest)) {
      throw ValidationError("commodity " + c.id + " references a missing community");
    }
    if (c.source == c.dest) throw ValidationError("commodity " + c.id + " has identical endpoints");
    if (c.demand < 0.0) throw ValidationError("commodity " + c.id + " has negative demand");
    if (!(c.weight > 0.0)) throw ValidationError("commodity " + c.id + " has non-positive weight");
  }
}

double FlowScenario::effective_throughput() const {
  if (throughput > 0.0) return throughput;
  double total = 0.0;
  for (const Commodity& c : commodities) total += c.demand;
  return total;
}

int FlowScenario::effective_link_count() const {
  if (link_count > 0) return link_count;
  return std::max<int>(1, static_cast<int>(graph.arcs().size()));
}

double FlowScenario::arc_cost(std::size_t arc) const { return arc_costs.empty() ? 1.0 : arc_costs[arc]; }

double FlowScenario::shared_capacity(std::size_t arc) const {
  return delay_capacity(capacities[arc] * capacity_factor, delay, effective_throughput(), unit_length,
                        effective_link_count());
}

LpInstance build_lp(const FlowScenario& scenario) {
  scenario.validate();
  LpInstance inst;
  inst.scenario = scenario;
  const CommunityGraph& g = scenario.graph;
  inst.num_commodities = scenario.commodities.size();
  inst.num_nodes = g.size();
  inst.num_arcs = g.arcs().size();
  for (std::size_t a = 0; a < inst.num_arcs; ++a) inst.shared_caps.push_back(scenario.shared_capacity(a));

  lp::LinearProgram& prog = inst.program;
  for (std::size_t k = 0; k < inst.num_commodities; ++k) {
    const Commodity& c = scenario.commodities[k];
    std::vector<int> flow;
    for (std::size_t a = 0; a < inst.num_arcs; ++a) {
      const Arc& arc = g.arcs()[a];
      const double l = scenario.arc_cost(a);
      flow.push_back(prog.add_variable("X_" + c.id + "_" + std::to_string(arc.src) + "_" + std::to_string(arc.dst), l));
      flow.push_back(prog.add_variable("X_" + c.id + "_" + std::to_string(arc.dst) + "_" + std::to_string(arc.src), l));
    }
    inst.flow.push_back(std::move(flow));
  }
  for (std::size_t k = 0; k < inst.num_commodities; ++k) {
    const Commodity& c = scenario.commodities[k];
    std::vector<int> y1, y2;
    for (std::size_t i = 1; i <= inst.num_nodes; ++i) {
      y1.push_back(prog.add_variable("Y1_" + c.id + "_" + std::to_string(i), c.weight));
      y2.push_back(prog.add_variable("Y2_" + c.id + "_" + std::to_string(i), c.weight));
    }
    inst.slack_in.push_back(std::move(y1));
    inst.slack_out.push_back(std::move(y2));
  }

  for (std::size_t k = 0; k < inst.num_commodities; ++k) {
    const Commodity& c = scenario.commodities[k];
    for (std::size_t i = 1; i <= inst.num_nodes; ++i) {
      const auto node = static_cast<CommunityId>(i);
      lp::Row row;
      row.sense = lp::Sense::Equal;
      row.name = "flow_" + c.id + "_" + std::to_string(i);
      for (std::size_t a = 0; a < inst.num_arcs; ++a) {
        const Arc& arc = g.arcs()[a];
        if (arc.dst == node) {
          row.terms.emplace_back(inst.flow[k][2 * a], 1.0);
          row.terms.emplace_back(inst.flow[k][2 * a + 1], -1.0);
        } else if (arc.src == node) {
          row.terms.emplace_back(inst.flow[k][2 * a], -1.0);
          row.terms.emplace_back(inst.flow[k][2 * a + 1], 1.0);
        }
      }
      row.terms.emplace_back(inst.slack_in[k][i - 1], -1.0);
      row.terms.emplace_back(inst.slack_out[k][i - 1], 1.0);
      row.rhs = node == c.source ? -c.demand : node == c.dest ? c.demand : 0.0;
      prog.add_row(std::move(row));
      ++inst.conservation_rows;
    }
  }

  for (std::size_t a = 0; a < inst.num_arcs; ++a) {
    const Arc& arc = g.arcs()[a];
    lp::Row row;
    row.sense = lp::Sense::LessEqual;
    row.rhs = inst.shared_caps[a];
    row.name = "cap_" + std::to_string(arc.src) + "_" + std::to_string(arc.dst);
    for (std::size_t k = 0; k < inst.num_commodities; ++k) {
      row.terms.emplace_back(inst.flow[k][2 * a], 1.0);
      row.terms.emplace_back(inst.flow[k][2 * a + 1], 1.0);
    }
    prog.add_row(std::move(row));
    ++inst.capacity_rows;
  }

  if (scenario.per_commodity_bound) {
    const double uk = *scenario.per_commodity_bound;
    if (uk < 0.0) throw ValidationError("per-commodity bound must be non-negative");
    for (std::size_t k = 0; k < inst.num_commodities; ++k) {
      for (std::size_t a = 0; a < inst.num_arcs; ++a) {
        if (uk >= inst.shared_caps[a]) continue;
        for (std::size_t dir = 0; dir < 2; ++dir) {
          lp::Row row;
          row.sense = lp::Sense::LessEqual;
          row.rhs = uk;
          row.name = "bound_" + prog.names[static_cast<std::size_t>(inst.flow[k][2 * a + dir])];
          row.terms.emplace_back(inst.flow[k][2 * a + dir], 1.0);
          prog.add_row(std::move(row));
          ++inst.bound_rows;
        }
      }
    }
  }
  return inst;
}

double congestion_delay(const std::vector<double>& arc_load, const std::vector<double>& capacities) {
  double total = 0.0;
  for (std::size_t a = 0; a < arc_load.size(); ++a) {
    const double f = arc_load[a];
    const double cap = capacities[a];
    if (cap <= 0.0 && f <= 1e-9) continue;
    if (cap - f <= 1e-9) return std::numeric_limits<double>::infinity();
    total += f / (cap - f);
  }
  return total;
}

FlowSolution solve_lp(const LpInstance& inst, const lp::SolveOptions& options) {
  const lp::Solution lps = lp::solve(inst.program, options);
  FlowSolution sol;
  sol.iterations = lps.iterations;
  sol.min_reduced_cost = lps.min_reduced_cost;
  sol.capacities = inst.shared_caps;
  if (lps.status != lp::Status::Optimal) {
    // Slacks make the LP feasible and bounded by construction.
    throw SolverError(std::string("flow LP terminated ") + lp::to_string(lps.status));
  }
  sol.status = FlowStatus::Optimal;
  sol.objective = lps.objective;

  const auto value = [&](int var) { return lps.x[static_cast<std::size_t>(var)]; };
  const FlowScenario& sc = inst.scenario;
  sol.arc_load.assign(inst.num_arcs, 0.0);
  for (std::size_t k = 0; k < inst.num_commodities; ++k) {
    const Commodity& c = sc.commodities[k];
    std::vector<double> flows;
    for (std::size_t v = 0; v < inst.flow[k].size(); ++v) {
      const double x = value(inst.flow[k][v]);
      flows.push_back(x);
      sol.arc_load[v / 2] += x;
      sol.z2 += sc.arc_cost(v / 2) * x;
    }
    sol.flows.push_back(std::move(flows));
    const std::size_t q = static_cast<std::size_t>(c.dest) - 1;
    const double unserved = std::clamp(value(inst.slack_out[k][q]) - value(inst.slack_in[k][q]), 0.0, c.demand);
    sol.unserved.push_back(unserved);
    sol.handled.push_back(c.demand - unserved);
    sol.z1 += c.weight * unserved;
  }
  sol.z3 = congestion_delay(sol.arc_load, sol.capacities);

  // Residuals split by constraint family.
  for (std::size_t r = 0; r < inst.program.rows.size(); ++r) {
    const lp::Row& row = inst.program.rows[r];
    double lhs = 0.0;
    for (const auto& [j, a] : row.terms) lhs += a * lps.x[static_cast<std::size_t>(j)];
    if (r < inst.conservation_rows) {
      sol.conservation_residual = std::max(sol.conservation_residual, std::abs(lhs - row.rhs));
    } else {
      sol.capacity_residual = std::max(sol.capacity_residual, lhs - row.rhs);
    }
  }
  return sol;
}

double FlowSolution::total_handled() const { return std::accumulate(handled.begin(), handled.end(), 0.0); }
double FlowSolution::total_unserved() const { return std::accumulate(unserved.begin(), unserved.end(), 0.0); }

std::vector<FrontierRow> sweep_delays(const FlowScenario& scenario, const std::vector<Delay>& thresholds) {
  std::optional<double> previous;
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const Delay& d = thresholds[i];
    if (!d) {
      if (i != 0) throw ArgumentError("the no-delay sentinel must come first");
      continue;
    }
    if (*d < 0.0) throw ArgumentError("delay thresholds must be non-negative");
    if (previous && *d < *previous) throw ArgumentError("delay thresholds must be ascending");
    previous = d;
  }

  std::vector<FrontierRow> rows;
  for (const Delay& d : thresholds) {
    FlowScenario sc = scenario;
    sc.delay = d;
    FrontierRow row;
    row.delay = d;
    row.solution = solve_scenario(sc);
    row.capacities = row.solution.capacities;
    row.handled = row.solution.total_handled();
    row.unserved = row.solution.total_unserved();
    row.z1 = row.solution.z1;
    row.z2 = row.solution.z2;
    row.z3 = row.solution.z3;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace misflow
