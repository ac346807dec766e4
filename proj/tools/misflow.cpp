// Command-line driver: one subcommand per pipeline stage plus `pipeline`.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "misflow/error.hpp"
#include "misflow/pipeline.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string out;
  std::string communities, edges, commodities;
  std::optional<int> keep_top, agents, rate_decimals, link_count, replications;
  std::optional<double> load_cap, service_rate, service_multiplier, window_hours, penalty, unit_length, throughput,
      capacity_factor;
  std::string delays;
  std::string solve_delay;
  std::optional<std::uint64_t> seed, events, warmup;
  std::optional<double> arrival_rate, service_mean, service_second_moment;
  std::string distribution;
};

void add_options(CLI::App& app, Overrides& o) {
  app.add_option("--config", o.config, "JSON run configuration");
  app.add_option("--out", o.out, "artifact directory");
  app.add_option("--communities", o.communities, "community file (id,size,label)");
  app.add_option("--edges", o.edges, "edge-list file (src_id,dst_id,weight)");
  app.add_option("--commodities", o.commodities, "commodity file (id,source,dest,demand)");
  app.add_option("--keep-top", o.keep_top, "keep the K largest communities, merge the rest");
  app.add_option("--agents", o.agents, "number of agents M");
  app.add_option("--load-cap", o.load_cap, "maximum load per agent");
  app.add_option("--service-rate", o.service_rate, "V, messages per hour");
  app.add_option("--service-multiplier", o.service_multiplier, "beta");
  app.add_option("--rate-decimals", o.rate_decimals, "rounding of spread rates before prioritizing (-1 = none)");
  app.add_option("--window-hours", o.window_hours, "reliability window");
  app.add_option("--delays", o.delays, "comma-separated delay thresholds, 'none' allowed first");
  app.add_option("--delay", o.solve_delay, "delay threshold for `solve` ('none' for no cap)");
  app.add_option("--penalty", o.penalty, "default penalty per unserved unit");
  app.add_option("--unit-length", o.unit_length, "mu");
  app.add_option("--throughput", o.throughput, "gamma (default: total demand)");
  app.add_option("--link-count", o.link_count, "|u| (default: number of arcs)");
  app.add_option("--capacity-factor", o.capacity_factor, "scale applied to capacities before the delay cap");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--arrival-rate", o.arrival_rate, "queue arrival rate");
  app.add_option("--service-mean", o.service_mean, "queue mean service time");
  app.add_option("--service-second-moment", o.service_second_moment, "queue service second moment");
  app.add_option("--distribution", o.distribution, "deterministic | two_point | lognormal");
  app.add_option("--events", o.events, "simulated customers per replication");
  app.add_option("--warmup", o.warmup, "discarded customers (default 10%)");
  app.add_option("--replications", o.replications, "seeded replications");
}

misflow::RunConfig resolve(const Overrides& o) {
  misflow::RunConfig c = o.config.empty() ? misflow::RunConfig{} : misflow::load_config(o.config);
  if (!o.out.empty()) c.out = o.out;
  if (!o.communities.empty()) c.communities = o.communities;
  if (!o.edges.empty()) c.edges = o.edges;
  if (!o.commodities.empty()) c.commodities = o.commodities;
  if (o.keep_top) c.keep_top = *o.keep_top;
  if (o.agents) c.agents = *o.agents;
  if (o.rate_decimals) c.rate_decimals = *o.rate_decimals;
  if (o.link_count) c.link_count = *o.link_count;
  if (o.load_cap) c.load_cap = *o.load_cap;
  if (o.service_rate) c.service_rate = *o.service_rate;
  if (o.service_multiplier) c.service_multiplier = *o.service_multiplier;
  if (o.window_hours) c.window_hours = *o.window_hours;
  if (o.penalty) c.penalty = *o.penalty;
  if (o.unit_length) c.unit_length = *o.unit_length;
  if (o.throughput) c.throughput = *o.throughput;
  if (o.capacity_factor) c.capacity_factor = *o.capacity_factor;
  if (!o.delays.empty()) c.delays = misflow::parse_delays(o.delays);
  if (!o.solve_delay.empty()) {
    const auto parsed = misflow::parse_delays(o.solve_delay);
    if (parsed.size() != 1) throw misflow::ConfigError("--delay takes a single value");
    c.solve_delay = parsed.front();
  }
  if (o.seed) c.seed = *o.seed;
  if (o.events) c.queue.events = *o.events;
  if (o.warmup) c.queue.warmup = *o.warmup;
  if (o.replications) c.queue.replications = *o.replications;
  if (o.arrival_rate) c.queue.arrival_rate = o.arrival_rate;
  if (o.service_mean) c.queue.service_mean = o.service_mean;
  if (o.service_second_moment) c.queue.service_second_moment = o.service_second_moment;
  if (!o.distribution.empty()) c.queue.distribution = misflow::parse_distribution(o.distribution);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Misinformation-response agent allocation and flow analysis"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides overrides;
  add_options(app, overrides);

  for (const std::string& name : misflow::stage_names()) app.add_subcommand(name, "run the " + name + " stage");
  app.add_subcommand("pipeline", "run every stage and write summary.json");

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const misflow::RunConfig config = resolve(overrides);
    const misflow::StageOutputs written =
        command == "pipeline" ? misflow::run_pipeline(config) : misflow::run_stage(command, config);
    for (const auto& path : written) std::cout << path.string() << '\n';
  } catch (const misflow::StageError& e) {
    std::cerr << "error [" << e.stage() << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error [" << command << "]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
