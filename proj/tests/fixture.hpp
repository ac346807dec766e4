#pragma once

#include <string>
#include <vector>

#include "misflow/mcf_solver.hpp"
#include "misflow/network_model.hpp"

namespace fixture {

inline std::string path(const std::string& name) { return std::string(MISFLOW_FIXTURE_DIR) + "/" + name; }

inline misflow::CommunityGraph graph() {
  return misflow::load_graph(path("communities.csv"), path("edges.csv"));
}

inline std::vector<misflow::Commodity> commodities() { return misflow::load_commodities(path("commodities.csv")); }

// Published spread rates, four decimals.
inline const std::vector<double> kPublishedRates{0.2189, 0.1944, 0.1621, 0.085, 0.0656, 0.274};

// Published effective capacities per arc, in file order.
inline const std::vector<long> kPublishedXNew{8, 8, 25, 59, 74, 40, 13, 18, 42, 125, 8, 25, 4, 13, 29};

inline const std::vector<double> kDelays{0.01, 0.02, 0.03, 0.04, 0.05, 0.1};

// Published delay-capped capacities: rows are arcs, columns none then kDelays.
inline const std::vector<std::vector<long>> kPublishedDelayCaps{
    {8, 1, 2, 4, 5, 7, 13},      {8, 1, 2, 4, 5, 7, 13},        {25, 4, 8, 12, 17, 21, 42},
    {59, 10, 19, 29, 38, 50, 98}, {74, 12, 24, 37, 48, 62, 123}, {40, 7, 13, 20, 26, 33, 67},
    {13, 2, 4, 6, 8, 11, 22},    {18, 3, 5, 9, 11, 15, 30},     {42, 7, 13, 21, 27, 35, 70},
    {125, 21, 41, 62, 82, 104, 208}, {8, 1, 2, 4, 5, 7, 13},    {25, 4, 8, 12, 17, 21, 42},
    {4, 0, 1, 2, 2, 3, 7},       {13, 2, 4, 6, 8, 11, 22},      {29, 9, 9, 14, 19, 24, 48},
};

// Effective capacities recomputed from the fixture (published column with arcs 2 and 14 corrected).
inline const std::vector<double> kXNew{8, 7, 25, 59, 74, 40, 13, 18, 42, 125, 8, 25, 4, 8, 29};

inline misflow::FlowScenario scenario(misflow::Delay delay) {
  misflow::FlowScenario sc;
  sc.graph = graph();
  sc.capacities = kXNew;
  sc.commodities = commodities();
  sc.delay = delay;
  return sc;
}

}  // namespace fixture
