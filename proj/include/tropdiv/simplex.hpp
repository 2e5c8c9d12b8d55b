#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tropdiv/common.hpp"

namespace tropdiv {

enum class LPStatus { Optimal, Infeasible, Unbounded };

// Dense linear program over nonnegative variables:
//   max/min  objective . x
//   s.t.     eq_lhs x  = eq_rhs
//            ub_lhs x <= ub_rhs
//            x >= 0
struct LPProblem {
  bool maximize = true;
  Eigen::VectorXd objective;
  Eigen::MatrixXd eq_lhs;
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd ub_lhs;
  Eigen::VectorXd ub_rhs;
};

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  Eigen::VectorXd x;
  double value = 0.0;
};

namespace detail {

// Full-tableau simplex with Bland's pivot rule (anti-cycling). Minimizes
// cost over the tableau's columns; `basis` must index an identity submatrix.
// Returns false when unbounded.
inline bool simplex_pivot_loop(Eigen::MatrixXd& T, Eigen::VectorXd& rhs,
                               Eigen::RowVectorXd& cost, double& cost_rhs,
                               std::vector<int>& basis, int num_pivot_cols) {
  constexpr double eps = 1e-11;
  const int m = static_cast<int>(T.rows());
  int guard = 0;
  const int guard_max = 50000;
  for (;;) {
    if (++guard > guard_max)
      throw numeric_error("lp_solve: pivot cycling guard exceeded");
    // Bland: entering = smallest column index with negative reduced cost.
    int enter = -1;
    for (int j = 0; j < num_pivot_cols; ++j) {
      if (cost[j] < -eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return true;  // optimal
    // Ratio test; ties broken by smallest basis variable index (Bland).
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      if (T(i, enter) > eps) {
        const double ratio = rhs[i] / T(i, enter);
        if (leave < 0 || ratio < best_ratio - eps ||
            (ratio < best_ratio + eps && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) return false;  // unbounded
    // Pivot on (leave, enter).
    const double piv = T(leave, enter);
    T.row(leave) /= piv;
    rhs[leave] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      const double f = T(i, enter);
      if (f != 0.0) {
        T.row(i) -= f * T.row(leave);
        rhs[i] -= f * rhs[leave];
      }
    }
    const double cf = cost[enter];
    if (cf != 0.0) {
      cost -= cf * T.row(leave);
      cost_rhs -= cf * rhs[leave];
    }
    basis[leave] = enter;
  }
}

}  // namespace detail

inline LPSolution lp_solve(const LPProblem& prob) {
  const int n = static_cast<int>(prob.objective.size());
  const int m_eq = static_cast<int>(prob.eq_rhs.size());
  const int m_ub = static_cast<int>(prob.ub_rhs.size());
  const int m = m_eq + m_ub;
  if ((m_eq > 0 && prob.eq_lhs.cols() != n) ||
      (m_ub > 0 && prob.ub_lhs.cols() != n) ||
      (m_eq > 0 && prob.eq_lhs.rows() != m_eq) ||
      (m_ub > 0 && prob.ub_lhs.rows() != m_ub))
    throw input_error("lp_solve: inconsistent problem shapes");

  // Equality standard form: [eq; ub + slack I] x' = b, x' >= 0, then flip
  // rows until b >= 0. Artificial columns follow the slack block.
  const int n_slack = m_ub;
  const int n_struct = n + n_slack;
  const int n_total = n_struct + m;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, n_total);
  Eigen::VectorXd rhs(m);
  if (m_eq > 0) {
    T.block(0, 0, m_eq, n) = prob.eq_lhs;
    rhs.head(m_eq) = prob.eq_rhs;
  }
  if (m_ub > 0) {
    T.block(m_eq, 0, m_ub, n) = prob.ub_lhs;
    T.block(m_eq, n, m_ub, n_slack) = Eigen::MatrixXd::Identity(m_ub, n_slack);
    rhs.tail(m_ub) = prob.ub_rhs;
  }
  for (int i = 0; i < m; ++i) {
    if (rhs[i] < 0.0) {
      T.row(i) = -T.row(i);
      rhs[i] = -rhs[i];
    }
  }
  T.block(0, n_struct, m, m) = Eigen::MatrixXd::Identity(m, m);

  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n_struct + i;

  // Phase 1: minimize the artificial sum. With the artificial basis the
  // canonical reduced-cost row is -(column sums) on structural columns.
  Eigen::RowVectorXd cost = Eigen::RowVectorXd::Zero(n_total);
  double cost_rhs = 0.0;
  for (int i = 0; i < m; ++i) {
    cost.head(n_struct) -= T.row(i).head(n_struct);
    cost_rhs -= rhs[i];
  }
  detail::simplex_pivot_loop(T, rhs, cost, cost_rhs, basis, n_struct);
  LPSolution sol;
  if (cost_rhs < -1e-7) {
    sol.status = LPStatus::Infeasible;
    return sol;
  }
  // Drive leftover basic artificials out (they sit at value ~0) or drop
  // redundant rows.
  std::vector<int> keep_rows;
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= n_struct) {
      int piv_col = -1;
      for (int j = 0; j < n_struct; ++j) {
        if (std::abs(T(i, j)) > 1e-9) {
          piv_col = j;
          break;
        }
      }
      if (piv_col < 0) continue;  // redundant row
      const double piv = T(i, piv_col);
      T.row(i) /= piv;
      rhs[i] /= piv;
      for (int k = 0; k < m; ++k) {
        if (k == i) continue;
        const double f = T(k, piv_col);
        if (f != 0.0) {
          T.row(k) -= f * T.row(i);
          rhs[k] -= f * rhs[i];
        }
      }
      basis[i] = piv_col;
    }
    keep_rows.push_back(i);
  }
  if (static_cast<int>(keep_rows.size()) < m) {
    Eigen::MatrixXd T2(keep_rows.size(), n_total);
    Eigen::VectorXd rhs2(keep_rows.size());
    std::vector<int> basis2;
    for (std::size_t r = 0; r < keep_rows.size(); ++r) {
      T2.row(r) = T.row(keep_rows[r]);
      rhs2[r] = rhs[keep_rows[r]];
      basis2.push_back(basis[keep_rows[r]]);
    }
    T = std::move(T2);
    rhs = std::move(rhs2);
    basis = std::move(basis2);
  }

  // Phase 2 on the structural columns.
  Eigen::RowVectorXd c2 = Eigen::RowVectorXd::Zero(n_total);
  for (int j = 0; j < n; ++j)
    c2[j] = prob.maximize ? -prob.objective[j] : prob.objective[j];
  Eigen::RowVectorXd cost2 = c2;
  double cost2_rhs = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double cb = c2[basis[i]];
    if (cb != 0.0) {
      cost2 -= cb * T.row(i);
      cost2_rhs -= cb * rhs[i];
    }
  }
  const bool bounded =
      detail::simplex_pivot_loop(T, rhs, cost2, cost2_rhs, basis, n_struct);
  if (!bounded) {
    sol.status = LPStatus::Unbounded;
    return sol;
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (basis[i] < n) x[basis[i]] = rhs[i];
  // Certificate: residuals of the original constraints.
  if (m_eq > 0 &&
      (prob.eq_lhs * x - prob.eq_rhs).cwiseAbs().maxCoeff() > kLpTol)
    throw numeric_error("lp_solve: equality residual exceeds tolerance");
  if (m_ub > 0 && (prob.ub_lhs * x - prob.ub_rhs).maxCoeff() > kLpTol)
    throw numeric_error("lp_solve: inequality residual exceeds tolerance");
  sol.status = LPStatus::Optimal;
  sol.x = std::move(x);
  sol.value = prob.objective.dot(sol.x);
  return sol;
}

}  // namespace tropdiv
