#include "misflow/queue_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <nlohmann/json.hpp>

#include "misflow/csv.hpp"
#include "misflow/error.hpp"

namespace misflow {

double pk_wait(double arrival_rate, double service_mean, double service_second_moment) {
  if (arrival_rate < 0.0 || service_mean < 0.0 || service_second_moment < 0.0) {
    throw ArgumentError("queue parameters must be non-negative");
  }
  const double rho = arrival_rate * service_mean;
  if (rho >= 1.0) throw ArgumentError("unstable queue: utilization " + csv::number(rho, 6) + " >= 1");
  return arrival_rate * service_second_moment / (2.0 * (1.0 - rho));
}

ServiceDistribution parse_distribution(const std::string& name) {
  if (name == "deterministic") return ServiceDistribution::Deterministic;
  if (name == "two_point" || name == "two-point") return ServiceDistribution::TwoPoint;
  if (name == "lognormal") return ServiceDistribution::Lognormal;
  throw ConfigError("unknown service distribution '" + name + "'");
}

std::string to_string(ServiceDistribution d) {
  switch (d) {
    case ServiceDistribution::Deterministic: return "deterministic";
    case ServiceDistribution::TwoPoint: return "two_point";
    case ServiceDistribution::Lognormal: return "lognormal";
  }
  return "unknown";
}

namespace {

class ServiceSampler {
 public:
  explicit ServiceSampler(const SimConfig& c) : kind_(c.distribution), mean_(c.service_mean) {
    const double m = c.service_mean;
    const double s2 = c.service_second_moment;
    if (!(m > 0.0)) throw ConfigError("service mean must be positive");
    const double variance = s2 - m * m;
    const double tol = 1e-9 * std::max(1.0, s2);
    if (variance < -tol) throw ConfigError("second moment is below the squared mean");
    switch (kind_) {
      case ServiceDistribution::Deterministic:
        if (std::abs(variance) > tol) throw ConfigError("deterministic service needs S2 equal to S^2");
        break;
      case ServiceDistribution::TwoPoint:
        high_ = s2 / m;
        p_high_ = m * m / s2;
        break;
      case ServiceDistribution::Lognormal: {
        if (variance <= tol) throw ConfigError("lognormal service needs S2 greater than S^2");
        const double sigma2 = std::log(s2 / (m * m));
        lognormal_ = std::lognormal_distribution<double>(std::log(m) - sigma2 / 2.0, std::sqrt(sigma2));
        break;
      }
    }
  }

  double operator()(std::mt19937_64& rng) {
    switch (kind_) {
      case ServiceDistribution::Deterministic: return mean_;
      case ServiceDistribution::TwoPoint: return uniform_(rng) < p_high_ ? high_ : 0.0;
      case ServiceDistribution::Lognormal: return lognormal_(rng);
    }
    return mean_;
  }

 private:
  ServiceDistribution kind_;
  double mean_;
  double high_ = 0.0;
  double p_high_ = 1.0;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::lognormal_distribution<double> lognormal_;
};

}  // namespace

SimResult simulate(const SimConfig& config) {
  if (!(config.arrival_rate > 0.0)) throw ArgumentError("arrival rate must be positive");
  if (config.arrival_rate * config.service_mean >= 1.0) {
    throw ArgumentError("unstable queue: utilization " + csv::number(config.arrival_rate * config.service_mean, 6) +
                        " >= 1");
  }
  if (config.batches < 2) throw ConfigError("at least two batches are required");
  const std::uint64_t warmup = config.warmup_events ? config.warmup_events : config.horizon_events / 10;
  if (config.horizon_events <= warmup ||
      config.horizon_events - warmup < static_cast<std::uint64_t>(config.batches)) {
    throw ConfigError("horizon too short for warmup and batches");
  }

  ServiceSampler service(config);
  std::mt19937_64 rng(config.seed);
  std::exponential_distribution<double> interarrival(config.arrival_rate);

  const std::uint64_t observed = config.horizon_events - warmup;
  const std::uint64_t per_batch = observed / static_cast<std::uint64_t>(config.batches);
  std::vector<double> batch_sums(static_cast<std::size_t>(config.batches), 0.0);

  // Lindley recursion: W[n+1] = max(0, W[n] + S[n] - A[n+1]).
  double arrival = 0.0;
  double wait = 0.0;
  double wait_sum = 0.0;
  double service_sum = 0.0;
  double first_arrival = 0.0;
  double last_departure = 0.0;
  for (std::uint64_t n = 0; n < config.horizon_events; ++n) {
    const double s = service(rng);
    if (n == warmup) first_arrival = arrival;
    if (n >= warmup) {
      const std::uint64_t b =
          std::min<std::uint64_t>((n - warmup) / per_batch, static_cast<std::uint64_t>(config.batches) - 1);
      batch_sums[b] += wait;
      wait_sum += wait;
      service_sum += s;
    }
    last_departure = arrival + wait + s;
    const double gap = interarrival(rng);
    wait = std::max(0.0, wait + s - gap);
    arrival += gap;
  }

  SimResult r;
  r.observed = observed;
  r.mean_wait = wait_sum / static_cast<double>(observed);
  r.mean_service = service_sum / static_cast<double>(observed);
  r.mean_system_time = r.mean_wait + r.mean_service;
  const double span = last_departure - first_arrival;
  r.utilization = span > 0.0 ? std::min(1.0, service_sum / span) : 0.0;

  std::vector<double> means;
  for (std::size_t b = 0; b < batch_sums.size(); ++b) {
    const std::uint64_t count =
        b + 1 == batch_sums.size() ? observed - per_batch * (batch_sums.size() - 1) : per_batch;
    means.push_back(batch_sums[b] / static_cast<double>(count));
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= static_cast<double>(means.size());
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= static_cast<double>(means.size() - 1);
  const boost::math::students_t t(static_cast<double>(means.size() - 1));
  r.wait_half_width = boost::math::quantile(boost::math::complement(t, 0.025)) *
                      std::sqrt(var / static_cast<double>(means.size()));
  return r;
}

std::string to_json(const SimConfig& config, const SimResult& result) {
  nlohmann::ordered_json j;
  j["seed"] = config.seed;
  j["arrival_rate"] = config.arrival_rate;
  j["service_mean"] = config.service_mean;
  j["service_second_moment"] = config.service_second_moment;
  j["distribution"] = to_string(config.distribution);
  j["events"] = config.horizon_events;
  j["observed"] = result.observed;
  j["mean_wait"] = result.mean_wait;
  j["wait_half_width"] = result.wait_half_width;
  j["mean_service"] = result.mean_service;
  j["mean_system_time"] = result.mean_system_time;
  j["utilization"] = result.utilization;
  j["pk_wait"] = pk_wait(config.arrival_rate, config.service_mean, config.service_second_moment);
  return j.dump();
}

}  // namespace misflow
