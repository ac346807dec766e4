#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace misflow::lp {

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Row {
  std::vector<std::pair<int, double>> terms;  // (variable, coefficient)
  Sense sense = Sense::Equal;
  double rhs = 0.0;
  std::string name;
};

/// min c'x subject to rows, x >= 0.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<std::string> names;
  std::vector<Row> rows;

  int add_variable(std::string name, double cost);
  void add_row(Row row) { rows.push_back(std::move(row)); }
  std::size_t num_variables() const { return objective.size(); }

  /// Largest violation of any row by `x` (and of x >= 0).
  double max_residual(const std::vector<double>& x) const;
  double evaluate(const std::vector<double>& x) const;
};

enum class Status { Optimal, Infeasible, Unbounded };

const char* to_string(Status status);

struct SolveOptions {
  double pivot_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  std::size_t stall_limit = 50;
  bool bland_only = false;
  /// 0 picks a limit from the problem size.
  std::size_t max_iterations = 0;
};

struct Solution {
  Status status = Status::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  /// Smallest reduced cost over non-basic structural and slack columns at
  /// termination. Non-negative (to tolerance) certifies optimality.
  double min_reduced_cost = 0.0;
  std::size_t iterations = 0;
  std::size_t bland_pivots = 0;
};

/// Two-phase dense tableau simplex. Dantzig pricing, falling back to Bland's
/// rule while pivots stall. Throws SolverError when the iteration limit is
/// hit or the final reduced costs fail the 1e-7 certificate.
Solution solve(const LinearProgram& program, const SolveOptions& options = {});

}  // namespace misflow::lp
