#pragma once

// Dense two-phase tableau simplex with Bland's anti-cycling rule.
//
//   minimize   c^T x
//   subject to a_i^T x <= b_i   (RowSense::LessEqual)
//              a_i^T x  = b_i   (RowSense::Equal)
//              x >= 0,  b >= 0
//
// Sized for the small path formulations built here; no sparsity is exploited.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace netdesign::lp {

enum class RowSense { LessEqual, Equal };

struct Problem {
  std::vector<double> cost;
  std::vector<std::vector<double>> rows;
  std::vector<RowSense> sense;
  std::vector<double> rhs;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
  Status status = Status::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  /// Row duals y with c - A^T y >= 0 at optimality (y_i <= 0 on <= rows).
  std::vector<double> duals;
  std::size_t pivots = 0;
};

inline constexpr double kPivotTol = 1e-9;

namespace detail {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * (n_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return t_[r * (n_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, n_); }
  /// Row m_ is the objective row holding reduced costs and -objective.
  double& obj(std::size_t c) { return at(m_, c); }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= n_; ++c) at(pr, c) /= p;
    for (std::size_t r = 0; r <= m_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= n_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
  }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<double> t_;
};

/// Runs Bland-rule pivots over columns with allowed[c] set. Returns false when unbounded.
inline bool run(Tableau& t, std::vector<std::size_t>& basis, const std::vector<bool>& allowed, std::size_t& pivots) {
  const std::size_t max_pivots = 50000 + 100 * (t.rows() + t.cols());
  while (true) {
    std::size_t enter = t.cols();
    for (std::size_t c = 0; c < t.cols(); ++c) {
      if (allowed[c] && t.obj(c) < -kPivotTol) {
        enter = c;
        break;
      }
    }
    if (enter == t.cols()) return true;
    std::size_t leave = t.rows();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a <= kPivotTol) continue;
      const double ratio = t.rhs(r) / a;
      if (ratio < best - 1e-12 || (std::abs(ratio - best) <= 1e-12 && basis[r] < basis[leave])) {
        best = ratio;
        leave = r;
      }
    }
    if (leave == t.rows()) return false;
    t.pivot(leave, enter);
    basis[leave] = enter;
    if (++pivots > max_pivots) throw std::runtime_error("simplex pivot limit reached");
  }
}

}  // namespace detail

inline Solution solve(const Problem& p) {
  const std::size_t n = p.cost.size();
  const std::size_t m = p.rows.size();
  if (p.sense.size() != m || p.rhs.size() != m) throw std::invalid_argument("lp: inconsistent row data");

  // Columns: structural [0, n), one auxiliary per row [n, n + m) acting as a
  // slack on <= rows and an artificial on = rows.
  const std::size_t cols = n + m;
  detail::Tableau t(m, cols);
  std::vector<std::size_t> basis(m);
  std::vector<bool> artificial(cols, false);
  for (std::size_t r = 0; r < m; ++r) {
    if (p.rows[r].size() != n) throw std::invalid_argument("lp: row width mismatch");
    if (p.rhs[r] < 0.0) throw std::invalid_argument("lp: negative right-hand side");
    for (std::size_t c = 0; c < n; ++c) t.at(r, c) = p.rows[r][c];
    t.at(r, n + r) = 1.0;
    t.rhs(r) = p.rhs[r];
    basis[r] = n + r;
    artificial[n + r] = p.sense[r] == RowSense::Equal;
  }

  Solution sol;
  // Phase 1: minimize the sum of artificials.
  for (std::size_t r = 0; r < m; ++r) {
    if (!artificial[n + r]) continue;
    for (std::size_t c = 0; c <= cols; ++c) t.obj(c) -= t.at(r, c);
    t.obj(n + r) = 0.0;
  }
  std::vector<bool> allowed(cols, true);
  detail::run(t, basis, allowed, sol.pivots);
  if (-t.obj(cols) > 1e-7 * (1.0 + [&] {
        double s = 0.0;
        for (double b : p.rhs) s += std::abs(b);
        return s;
      }())) {
    sol.status = Status::Infeasible;
    return sol;
  }
  // Pivot zero-level artificials out of the basis where possible.
  for (std::size_t r = 0; r < m; ++r) {
    if (!artificial[basis[r]]) continue;
    for (std::size_t c = 0; c < cols; ++c) {
      if (!artificial[c] && std::abs(t.at(r, c)) > kPivotTol) {
        t.pivot(r, c);
        basis[r] = c;
        break;
      }
    }
  }

  // Phase 2 objective row: reduced costs of c with the current basis.
  for (std::size_t c = 0; c <= cols; ++c) t.obj(c) = c < n ? p.cost[c] : 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    const double cb = basis[r] < n ? p.cost[basis[r]] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c <= cols; ++c) t.obj(c) -= cb * t.at(r, c);
  }
  for (std::size_t c = 0; c < cols; ++c) allowed[c] = !artificial[c];
  if (!detail::run(t, basis, allowed, sol.pivots)) {
    sol.status = Status::Unbounded;
    return sol;
  }

  sol.status = Status::Optimal;
  sol.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) sol.x[basis[r]] = std::max(0.0, t.rhs(r));
  }
  sol.objective = 0.0;
  for (std::size_t c = 0; c < n; ++c) sol.objective += p.cost[c] * sol.x[c];
  // The auxiliary column of row r starts as e_r with zero cost, so its
  // reduced cost is -y_r.
  sol.duals.assign(m, 0.0);
  for (std::size_t r = 0; r < m; ++r) sol.duals[r] = -t.obj(n + r);
  return sol;
}

}  // namespace netdesign::lp
