#pragma once

#include <cstdint>
#include <string>

namespace misflow {

/// Mean wait in queue of an M/G/1 FIFO server:
/// lambda * S2 / (2 (1 - lambda * S)). Throws ArgumentError unless
/// lambda * S < 1.
double pk_wait(double arrival_rate, double service_mean, double service_second_moment);

enum class ServiceDistribution { Deterministic, TwoPoint, Lognormal };

ServiceDistribution parse_distribution(const std::string& name);
std::string to_string(ServiceDistribution d);

struct SimConfig {
  double arrival_rate = 0.0;           // per hour
  double service_mean = 0.0;           // hours
  double service_second_moment = 0.0;  // hours^2
  ServiceDistribution distribution = ServiceDistribution::TwoPoint;
  std::uint64_t horizon_events = 1'000'000;
  std::uint64_t warmup_events = 0;  // 0 means 10% of the horizon
  std::uint64_t seed = 1;
  int batches = 20;
};

struct SimResult {
  double mean_wait = 0.0;
  double wait_half_width = 0.0;  // 95% batch-means half-width
  double mean_service = 0.0;
  double mean_system_time = 0.0;
  double utilization = 0.0;
  std::uint64_t observed = 0;  // post-warmup customers

  bool operator==(const SimResult&) const = default;
};

/// Single-server FIFO queue with Poisson arrivals and i.i.d. service times
/// matched to (mean, second moment):
///   Deterministic  requires S2 == S^2.
///   TwoPoint       0 w.p. 1 - p, S2 / S w.p. p = S^2 / S2.
///   Lognormal      sigma^2 = ln(S2 / S^2), mu = ln S - sigma^2 / 2.
/// Throws ArgumentError for unstable configs and ConfigError for moments the
/// family cannot realize.
SimResult simulate(const SimConfig& config);

std::string to_json(const SimConfig& config, const SimResult& result);

}  // namespace misflow
