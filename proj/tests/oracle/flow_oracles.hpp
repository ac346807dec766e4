#pragma once

// Independent reference models for the multi-commodity flow tests:
//  - an exact rational LP of the slack-penalized model, built from raw
//    instance data rather than from misflow::build_lp;
//  - Edmonds-Karp max flow on undirected capacities.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "rational_lp.hpp"

namespace oracle {

struct Link {
  int u = 0;  // 1-based
  int v = 0;
  long cap = 0;
};

struct Demand {
  int source = 0;
  int dest = 0;
  long units = 0;
  long weight = 100;
};

struct Instance {
  int nodes = 0;
  std::vector<Link> links;
  std::vector<Demand> demands;
};

struct ExactFlow {
  mpq_class objective;
  std::vector<mpq_class> unserved;
};

namespace detail {

struct Model {
  RationalLp lp;
  std::vector<std::size_t> y_in_dest, y_out_dest;  // per commodity, at its sink
};

inline Model build(const Instance& inst) {
  Model m;
  const std::size_t K = inst.demands.size();
  const std::size_t L = inst.links.size();
  std::vector<std::vector<std::size_t>> fwd(K), rev(K), yin(K), yout(K);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t l = 0; l < L; ++l) {
      fwd[k].push_back(m.lp.add_var(1));
      rev[k].push_back(m.lp.add_var(1));
    }
    for (int i = 0; i < inst.nodes; ++i) {
      yin[k].push_back(m.lp.add_var(inst.demands[k].weight));
      yout[k].push_back(m.lp.add_var(inst.demands[k].weight));
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    const Demand& d = inst.demands[k];
    for (int i = 1; i <= inst.nodes; ++i) {
      const mpq_class b = i == d.source ? mpq_class(-d.units) : i == d.dest ? mpq_class(d.units) : mpq_class(0);
      const std::size_t r = m.lp.add_row('=', b);
      for (std::size_t l = 0; l < L; ++l) {
        const Link& e = inst.links[l];
        if (e.v == i) {
          m.lp.rows[r][fwd[k][l]] += 1;
          m.lp.rows[r][rev[k][l]] -= 1;
        }
        if (e.u == i) {
          m.lp.rows[r][fwd[k][l]] -= 1;
          m.lp.rows[r][rev[k][l]] += 1;
        }
      }
      m.lp.rows[r][yin[k][static_cast<std::size_t>(i - 1)]] = -1;
      m.lp.rows[r][yout[k][static_cast<std::size_t>(i - 1)]] = 1;
    }
    m.y_in_dest.push_back(yin[k][static_cast<std::size_t>(d.dest - 1)]);
    m.y_out_dest.push_back(yout[k][static_cast<std::size_t>(d.dest - 1)]);
  }
  for (std::size_t l = 0; l < L; ++l) {
    const std::size_t r = m.lp.add_row('<', inst.links[l].cap);
    for (std::size_t k = 0; k < K; ++k) {
      m.lp.rows[r][fwd[k][l]] = 1;
      m.lp.rows[r][rev[k][l]] = 1;
    }
  }
  return m;
}

inline mpq_class unserved(const Model& m, const RationalResult& r, std::size_t k) {
  mpq_class u = r.x[m.y_out_dest[k]] - r.x[m.y_in_dest[k]];
  return u < 0 ? mpq_class(0) : u;
}

}  // namespace detail

inline ExactFlow solve_exact_flow(const Instance& inst) {
  const detail::Model m = detail::build(inst);
  const RationalResult r = solve_exact(m.lp);
  if (!r.feasible || !r.bounded) throw std::runtime_error("oracle flow LP not solvable");
  ExactFlow out;
  out.objective = r.objective;
  for (std::size_t k = 0; k < inst.demands.size(); ++k) out.unserved.push_back(detail::unserved(m, r, k));
  return out;
}

/// [min, max] of commodity k's unserved amount over all optimal solutions.
inline std::pair<mpq_class, mpq_class> unserved_range(const Instance& inst, const mpq_class& optimum, std::size_t k) {
  std::pair<mpq_class, mpq_class> range;
  for (int sign : {1, -1}) {
    detail::Model m = detail::build(inst);
    const std::vector<mpq_class> original = m.lp.cost;
    const std::size_t r = m.lp.add_row('<', optimum);
    for (std::size_t j = 0; j < original.size(); ++j) m.lp.rows[r][j] = original[j];
    std::fill(m.lp.cost.begin(), m.lp.cost.end(), mpq_class(0));
    m.lp.cost[m.y_out_dest[k]] = sign;
    m.lp.cost[m.y_in_dest[k]] = -sign;
    const RationalResult res = solve_exact(m.lp);
    if (!res.feasible || !res.bounded) throw std::runtime_error("oracle range LP not solvable");
    const mpq_class value = detail::unserved(m, res, k);
    (sign > 0 ? range.first : range.second) = value;
  }
  return range;
}

/// Max flow from s to t when every link carries up to `cap` in total over
/// both directions (equivalent to two opposing arcs of capacity cap).
inline double max_flow(int nodes, const std::vector<std::tuple<int, int, double>>& links, int s, int t) {
  const std::size_t n = static_cast<std::size_t>(nodes) + 1;
  std::vector<std::vector<double>> cap(n, std::vector<double>(n, 0.0));
  for (const auto& [u, v, c] : links) {
    cap[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] += c;
    cap[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] += c;
  }
  double total = 0.0;
  while (true) {
    std::vector<int> parent(n, -1);
    parent[static_cast<std::size_t>(s)] = s;
    std::queue<int> q;
    q.push(s);
    while (!q.empty() && parent[static_cast<std::size_t>(t)] < 0) {
      const int u = q.front();
      q.pop();
      for (std::size_t v = 1; v < n; ++v) {
        if (parent[v] < 0 && cap[static_cast<std::size_t>(u)][v] > 1e-12) {
          parent[v] = u;
          q.push(static_cast<int>(v));
        }
      }
    }
    if (parent[static_cast<std::size_t>(t)] < 0) return total;
    double push = std::numeric_limits<double>::infinity();
    for (int v = t; v != s; v = parent[static_cast<std::size_t>(v)]) {
      push = std::min(push, cap[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])][static_cast<std::size_t>(v)]);
    }
    for (int v = t; v != s; v = parent[static_cast<std::size_t>(v)]) {
      const auto u = static_cast<std::size_t>(parent[static_cast<std::size_t>(v)]);
      cap[u][static_cast<std::size_t>(v)] -= push;
      cap[static_cast<std::size_t>(v)][u] += push;
    }
    total += push;
  }
}

}  // namespace oracle
