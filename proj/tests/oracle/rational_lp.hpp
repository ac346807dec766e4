#pragma once

// Exact-arithmetic LP oracle for tests. Textbook two-phase tableau over GMP
// rationals with Bland's rule on every pivot; shares no code with the
// production solver.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace oracle {

struct RationalLp {
  std::vector<mpq_class> cost;
  std::vector<std::vector<mpq_class>> rows;
  std::vector<char> sense;  // '<', '=', '>'
  std::vector<mpq_class> rhs;

  std::size_t add_var(const mpq_class& c) {
    cost.push_back(c);
    for (auto& r : rows) r.push_back(0);
    return cost.size() - 1;
  }
  std::size_t add_row(char s, const mpq_class& b) {
    rows.emplace_back(cost.size(), mpq_class(0));
    sense.push_back(s);
    rhs.push_back(b);
    return rows.size() - 1;
  }
};

struct RationalResult {
  bool feasible = false;
  bool bounded = true;
  mpq_class objective;
  std::vector<mpq_class> x;
};

inline RationalResult solve_exact(const RationalLp& lp) {
  const std::size_t n = lp.cost.size();
  const std::size_t m = lp.rows.size();
  std::vector<std::vector<mpq_class>> a = lp.rows;
  std::vector<mpq_class> b = lp.rhs;
  std::vector<char> sense = lp.sense;
  for (std::size_t i = 0; i < m; ++i) {
    if (b[i] < 0) {
      b[i] = -b[i];
      for (auto& v : a[i]) v = -v;
      if (sense[i] == '<') sense[i] = '>';
      else if (sense[i] == '>') sense[i] = '<';
    }
  }
  // Columns: structural | slack/surplus | artificial.
  std::size_t logical = 0, artificial = 0;
  for (char s : sense) {
    logical += s != '=';
    artificial += s != '<';
  }
  const std::size_t cols = n + logical + artificial;
  std::vector<std::vector<mpq_class>> t(m + 1, std::vector<mpq_class>(cols + 1, 0));
  std::vector<std::size_t> basis(m);
  std::size_t ls = n, as = n + logical;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][cols] = b[i];
    if (sense[i] == '<') {
      t[i][ls] = 1;
      basis[i] = ls++;
    } else {
      if (sense[i] == '>') t[i][ls++] = -1;
      t[i][as] = 1;
      basis[i] = as++;
    }
  }

  auto pivot = [&](std::size_t r, std::size_t c) {
    const mpq_class p = t[r][c];
    for (auto& v : t[r]) v /= p;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == r || t[i][c] == 0) continue;
      const mpq_class f = t[i][c];
      for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[r][j];
    }
    basis[r] = c;
  };
  auto price = [&](const std::vector<mpq_class>& c) {
    for (std::size_t j = 0; j <= cols; ++j) t[m][j] = j < cols ? c[j] : mpq_class(0);
    for (std::size_t i = 0; i < m; ++i) {
      if (c[basis[i]] == 0) continue;
      for (std::size_t j = 0; j <= cols; ++j) t[m][j] -= c[basis[i]] * t[i][j];
    }
  };
  // Bland: lowest-index improving column, lowest-index basic variable on ties.
  auto run = [&](std::size_t enter_limit) -> bool {
    while (true) {
      std::size_t enter = cols;
      for (std::size_t j = 0; j < enter_limit; ++j) {
        if (t[m][j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter == cols) return true;
      std::size_t leave = m;
      mpq_class best;
      for (std::size_t i = 0; i < m; ++i) {
        if (t[i][enter] <= 0) continue;
        const mpq_class q = t[i][cols] / t[i][enter];
        if (leave == m || q < best || (q == best && basis[i] < basis[leave])) {
          best = q;
          leave = i;
        }
      }
      if (leave == m) return false;
      pivot(leave, enter);
    }
  };

  RationalResult res;
  if (artificial > 0) {
    std::vector<mpq_class> phase1(cols, 0);
    for (std::size_t j = n + logical; j < cols; ++j) phase1[j] = 1;
    price(phase1);
    run(cols);
    if (t[m][cols] != 0) return res;  // -objective of phase 1
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < n + logical) continue;
      for (std::size_t j = 0; j < n + logical; ++j) {
        if (t[i][j] != 0) {
          pivot(i, j);
          break;
        }
      }
    }
  }
  res.feasible = true;
  std::vector<mpq_class> phase2(cols, 0);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = lp.cost[j];
  price(phase2);
  if (!run(n + logical)) {
    res.bounded = false;
    return res;
  }
  res.x.assign(n, 0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) res.x[basis[i]] = t[i][cols];
  }
  res.objective = 0;
  for (std::size_t j = 0; j < n; ++j) res.objective += lp.cost[j] * res.x[j];
  return res;
}

inline double to_double(const mpq_class& q) { return q.get_d(); }

}  // namespace oracle
