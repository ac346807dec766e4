#include "misflow/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "misflow/error.hpp"

namespace misflow::lp {

int LinearProgram::add_variable(std::string name, double cost) {
  objective.push_back(cost);
  names.push_back(std::move(name));
  return static_cast<int>(objective.size()) - 1;
}

double LinearProgram::evaluate(const std::vector<double>& x) const {
  double total = 0.0;
  for (std::size_t j = 0; j < objective.size(); ++j) total += objective[j] * x[j];
  return total;
}

double LinearProgram::max_residual(const std::vector<double>& x) const {
  double worst = 0.0;
  for (double v : x) worst = std::max(worst, -v);
  for (const Row& row : rows) {
    double lhs = 0.0;
    for (const auto& [j, a] : row.terms) lhs += a * x[static_cast<std::size_t>(j)];
    const double diff = lhs - row.rhs;
    switch (row.sense) {
      case Sense::LessEqual: worst = std::max(worst, diff); break;
      case Sense::GreaterEqual: worst = std::max(worst, -diff); break;
      case Sense::Equal: worst = std::max(worst, std::abs(diff)); break;
    }
  }
  return worst;
}

const char* to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "OPTIMAL";
    case Status::Infeasible: return "INFEASIBLE";
    case Status::Unbounded: return "UNBOUNDED";
  }
  return "UNKNOWN";
}

namespace {

constexpr double kCertificateTolerance = 1e-7;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), data_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (n_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (n_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, n_); }
  double rhs(std::size_t r) const { return at(r, n_); }
  double& cost(std::size_t c) { return at(m_, c); }
  double cost(std::size_t c) const { return at(m_, c); }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    for (std::size_t j = 0; j <= n_; ++j) at(r, j) /= p;
    at(r, c) = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) {
        double& v = at(i, j);
        v -= f * at(r, j);
        if (std::abs(v) < 1e-13) v = 0.0;
      }
      at(i, c) = 0.0;
    }
    basis_[r] = c;
  }

  // Reduced-cost row for `costs` given the current basis.
  void price(const std::vector<double>& costs) {
    for (std::size_t j = 0; j <= n_; ++j) cost(j) = j < n_ ? costs[j] : 0.0;
    for (std::size_t r = 0; r < m_; ++r) {
      const double cb = costs[basis_[r]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) cost(j) -= cb * at(r, j);
    }
  }

 private:
  std::size_t m_, n_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

struct Runner {
  Tableau& t;
  const SolveOptions& opt;
  const std::vector<bool>& allowed;  // columns permitted to enter
  std::size_t& iterations;
  std::size_t& bland_pivots;
  std::size_t limit;
  const char* phase;

  // Returns false when unbounded.
  bool run() {
    std::size_t stalled = 0;
    while (true) {
      const bool bland = opt.bland_only || stalled >= opt.stall_limit;
      std::size_t enter = t.cols();
      double best = -opt.optimality_tolerance;
      for (std::size_t j = 0; j < t.cols(); ++j) {
        if (!allowed[j]) continue;
        const double d = t.cost(j);
        if (d < best) {
          enter = j;
          if (bland) break;
          best = d;
        }
      }
      if (enter == t.cols()) return true;

      std::size_t leave = t.rows();
      double ratio = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < t.rows(); ++r) {
        const double a = t.at(r, enter);
        if (a <= opt.pivot_tolerance) continue;
        const double q = std::max(t.rhs(r), 0.0) / a;
        if (q < ratio - 1e-12 ||
            (q <= ratio + 1e-12 && leave < t.rows() && t.basis()[r] < t.basis()[leave])) {
          ratio = std::min(ratio, q);
          leave = r;
        }
      }
      if (leave == t.rows()) return false;

      if (++iterations > limit) {
        throw SolverError(std::string("simplex iteration limit ") + std::to_string(limit) + " reached in " +
                          phase + " (objective " + std::to_string(-t.rhs(t.rows())) + ", " +
                          std::to_string(t.rows()) + " rows, " + std::to_string(t.cols()) + " columns)");
      }
      if (bland) ++bland_pivots;
      stalled = ratio <= 1e-12 ? stalled + 1 : 0;
      t.pivot(leave, enter);
    }
  }
};

}  // namespace

Solution solve(const LinearProgram& program, const SolveOptions& options) {
  const std::size_t n = program.num_variables();
  const std::size_t m = program.rows.size();

  // Normalized rows with non-negative right-hand sides.
  std::vector<Row> rows = program.rows;
  for (Row& row : rows) {
    for (const auto& [j, a] : row.terms) {
      if (j < 0 || static_cast<std::size_t>(j) >= n) throw ArgumentError("row '" + row.name + "' references unknown variable");
    }
    if (row.rhs < 0.0) {
      row.rhs = -row.rhs;
      for (auto& term : row.terms) term.second = -term.second;
      if (row.sense == Sense::LessEqual) row.sense = Sense::GreaterEqual;
      else if (row.sense == Sense::GreaterEqual) row.sense = Sense::LessEqual;
    }
  }

  std::size_t logicals = 0;
  for (const Row& row : rows) logicals += row.sense != Sense::Equal;

  // Dense constraint block; artificial columns appended once we know which
  // rows lack a ready-made unit column.
  std::vector<std::vector<double>> dense(m, std::vector<double>(n + logicals, 0.0));
  std::vector<double> costs(n + logicals, 0.0);
  std::copy(program.objective.begin(), program.objective.end(), costs.begin());
  std::size_t next = n;
  for (std::size_t r = 0; r < m; ++r) {
    for (const auto& [j, a] : rows[r].terms) dense[r][static_cast<std::size_t>(j)] += a;
    if (rows[r].sense == Sense::LessEqual) dense[r][next++] = 1.0;
    else if (rows[r].sense == Sense::GreaterEqual) dense[r][next++] = -1.0;
  }

  std::vector<std::size_t> nonzeros(n + logicals, 0);
  for (const auto& row : dense) {
    for (std::size_t j = 0; j < row.size(); ++j) nonzeros[j] += row[j] != 0.0;
  }
  std::vector<std::size_t> basis(m, SIZE_MAX);
  std::vector<bool> used(n + logicals, false);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = n + logicals; j-- > 0;) {
      if (!used[j] && nonzeros[j] == 1 && dense[r][j] == 1.0) {
        basis[r] = j;
        used[j] = true;
        break;
      }
    }
  }
  std::size_t artificials = 0;
  for (std::size_t r = 0; r < m; ++r) artificials += basis[r] == SIZE_MAX;

  const std::size_t cols = n + logicals + artificials;
  Tableau t(m, cols);
  std::size_t art = n + logicals;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n + logicals; ++j) t.at(r, j) = dense[r][j];
    t.rhs(r) = rows[r].rhs;
    if (basis[r] == SIZE_MAX) {
      t.at(r, art) = 1.0;
      basis[r] = art++;
    }
    t.basis()[r] = basis[r];
  }
  costs.resize(cols, 0.0);

  Solution sol;
  const std::size_t limit = options.max_iterations ? options.max_iterations : 50 * (m + cols) + 1000;

  if (artificials > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t j = n + logicals; j < cols; ++j) phase1[j] = 1.0;
    std::vector<bool> allowed(cols, true);
    t.price(phase1);
    Runner{t, options, allowed, sol.iterations, sol.bland_pivots, limit, "phase 1"}.run();
    double infeasibility = 0.0;
    double scale = 1.0;
    for (std::size_t r = 0; r < m; ++r) {
      if (t.basis()[r] >= n + logicals) infeasibility += t.rhs(r);
      scale = std::max(scale, rows[r].rhs);
    }
    if (infeasibility > 1e-9 * scale) {
      sol.status = Status::Infeasible;
      return sol;
    }
    // Drive zero-valued artificials out where a structural pivot exists.
    for (std::size_t r = 0; r < m; ++r) {
      if (t.basis()[r] < n + logicals) continue;
      for (std::size_t j = 0; j < n + logicals; ++j) {
        if (std::abs(t.at(r, j)) > options.pivot_tolerance) {
          t.pivot(r, j);
          break;
        }
      }
    }
  }

  std::vector<bool> allowed(cols, true);
  for (std::size_t j = n + logicals; j < cols; ++j) allowed[j] = false;
  t.price(costs);
  if (!Runner{t, options, allowed, sol.iterations, sol.bland_pivots, limit, "phase 2"}.run()) {
    sol.status = Status::Unbounded;
    return sol;
  }

  std::vector<double> full(cols, 0.0);
  for (std::size_t r = 0; r < m; ++r) full[t.basis()[r]] = std::max(t.rhs(r), 0.0);
  sol.x.assign(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(n));

  // Certificate from a freshly priced row rather than the accumulated one.
  t.price(costs);
  std::vector<bool> basic(cols, false);
  for (std::size_t b : t.basis()) basic[b] = true;
  sol.min_reduced_cost = 0.0;
  for (std::size_t j = 0; j < n + logicals; ++j) {
    if (!basic[j]) sol.min_reduced_cost = std::min(sol.min_reduced_cost, t.cost(j));
  }
  if (sol.min_reduced_cost < -kCertificateTolerance) {
    throw SolverError("optimality certificate failed: reduced cost " + std::to_string(sol.min_reduced_cost) +
                      " after " + std::to_string(sol.iterations) + " iterations");
  }
  sol.objective = program.evaluate(sol.x);
  sol.status = Status::Optimal;
  return sol;
}

}  // namespace misflow::lp
