#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <vector>

#include "tropdiv/common.hpp"
#include "tropdiv/division.hpp"
#include "tropdiv/lattice.hpp"
#include "tropdiv/polytope.hpp"

namespace tropdiv {

// Adds shift = max(0, 1 - min coeff) to every coefficient so all become >= 1;
// callers subtract the returned shift from downstream results.
inline std::pair<LatticePolynomial, double> positivity_shift(
    const LatticePolynomial& p) {
  if (p.empty()) return {p, 0.0};
  double mn = std::numeric_limits<double>::infinity();
  for (const auto& [j, v] : p.coeffs()) mn = std::min(mn, v);
  const double shift = std::max(0.0, 1.0 - mn);
  LatticePolynomial out(p.dim());
  for (const auto& [j, v] : p.coeffs()) out.set(j, v + shift);
  return {out, shift};
}

// Division posed as a geometric program over positive coefficient values:
//   minimize sum_c 1/l_c
//   s.t.     l_c <= q_c,   q_c + d_i <= p_{c+i}  for all c in C, i in deg(d).
// p and d are canonical and lifted so that every upper bound on q_c stays
// >= 1, keeping the program solvable in the positive orthant. shift_p and
// shift_d undo the lift.
struct GGPDivisionProblem {
  LatticePolynomial p;
  LatticePolynomial d;
  std::vector<DegreeKey> shifts;
  double shift_p = 0.0;
  double shift_d = 0.0;
};

inline GGPDivisionProblem make_division_ggp(const TropicalPolynomial& p,
                                            const TropicalPolynomial& d) {
  if (p.dim() != d.dim())
    throw input_error("make_division_ggp: dimension mismatch");
  if (p.is_bottom() || d.is_bottom())
    throw input_error("make_division_ggp: polynomials must be nonempty");
  const LatticePolynomial np = canonicalize(p);
  const LatticePolynomial nd = canonicalize(d);
  GGPDivisionProblem prob;
  prob.shifts = valid_shifts(NewtonPolytope::from_polynomial(d),
                             NewtonPolytope::from_polynomial(p));
  double d_min = std::numeric_limits<double>::infinity(), d_max = kNegInf;
  for (const auto& [i, v] : nd.coeffs()) {
    d_min = std::min(d_min, v);
    d_max = std::max(d_max, v);
  }
  prob.shift_d = std::max(0.0, 1.0 - d_min);
  double p_min = std::numeric_limits<double>::infinity();
  for (const auto& [j, v] : np.coeffs()) p_min = std::min(p_min, v);
  prob.shift_p = std::max(0.0, 1.0 + (d_max + prob.shift_d) - p_min);
  prob.p = LatticePolynomial(np.dim());
  for (const auto& [j, v] : np.coeffs()) prob.p.set(j, v + prob.shift_p);
  prob.d = LatticePolynomial(nd.dim());
  for (const auto& [i, v] : nd.coeffs()) prob.d.set(i, v + prob.shift_d);
  return prob;
}

namespace detail {

// Interior-point solve of one shift's block:
//   minimize 1/l  s.t.  l <= q,  q <= u_i for all i
// via the barrier 1/l - mu*[log(q-l) + sum_i log(u_i - q)] driven along a
// decreasing mu schedule with damped 2x2 Newton steps. The bound values u
// are never aggregated outside the barrier, so this path is independent of
// the erosion closed form it is checked against.
inline std::pair<double, double> ggp_block_solve(const std::vector<double>& u) {
  const double u_min = *std::min_element(u.begin(), u.end());
  double q = u_min - std::min(0.5, u_min / 4.0);
  double l = q / 2.0;
  for (double mu = 1.0; mu > 1e-12; mu *= 0.1) {
    for (int it = 0; it < 100; ++it) {
      const double gap = q - l;
      double sum_inv = 0.0, sum_inv2 = 0.0;
      for (double ui : u) {
        sum_inv += 1.0 / (ui - q);
        sum_inv2 += 1.0 / ((ui - q) * (ui - q));
      }
      const double gq = -mu / gap + mu * sum_inv;
      const double gl = -1.0 / (l * l) + mu / gap;
      const double B = mu / (gap * gap);
      const double hqq = B + mu * sum_inv2;
      const double hll = B + 2.0 / (l * l * l);
      const double det = hqq * hll - B * B;
      double dq = -(hll * gq + B * gl) / det;
      double dl = -(B * gq + hqq * gl) / det;
      double t = 1.0;
      auto feasible = [&](double qq, double ll) {
        if (ll <= 0.0 || qq - ll <= 0.0) return false;
        for (double ui : u)
          if (ui - qq <= 0.0) return false;
        return true;
      };
      while (t > 1e-14 && !feasible(q + t * dq, l + t * dl)) t *= 0.5;
      if (t <= 1e-14) break;
      q += t * dq;
      l += t * dl;
      if (std::abs(gq) + std::abs(gl) < 1e-13 * (1.0 + 1.0 / (l * l))) break;
    }
  }
  return {q, l};
}

}  // namespace detail

// Solves the division GGP; returns the quotient in original coordinates.
inline LatticePolynomial solve_division_ggp(const GGPDivisionProblem& prob) {
  LatticePolynomial quotient(prob.p.dim());
  for (const DegreeKey& c : prob.shifts) {
    std::vector<double> bounds;
    bounds.reserve(prob.d.size());
    for (const auto& [i, di] : prob.d.coeffs())
      bounds.push_back(prob.p.at(add_keys(c, i)) - di);
    const auto [q, l] = detail::ggp_block_solve(bounds);
    (void)l;
    quotient.set(c, q - prob.shift_p + prob.shift_d);
  }
  return quotient;
}

inline LatticePolynomial solve_division_ggp(const TropicalPolynomial& p,
                                            const TropicalPolynomial& d) {
  return solve_division_ggp(make_division_ggp(p, d));
}

// Coefficient-space squared error between q + d and p over deg(p):
//   sum_j ((q (+) d)_j - p_j)^2.
// Degrees of p that q + d cannot reach contribute +infinity.
inline double eval_goal0(const LatticePolynomial& q, const LatticePolynomial& p,
                         const LatticePolynomial& d) {
  if (p.empty()) return 0.0;
  if (q.empty() || d.empty()) return std::numeric_limits<double>::infinity();
  const LatticePolynomial conv = maxplus_convolution(q, d);
  double total = 0.0;
  for (const auto& [j, pj] : p.coeffs()) {
    if (!conv.contains(j)) return std::numeric_limits<double>::infinity();
    const double diff = conv.at(j) - pj;
    total += diff * diff;
  }
  return total;
}

// The relaxed direct-approximation program. In the lifted positive space:
//   minimize (sum_j ((q(+)d)_j^2 + p_j^2))^r / prod_c l_c + R sum_j xi_j
//   s.t.     l_c <= q_c,   (q(+)d)_j <= xi_j p_j,   xi_j >= 1
// with r = |C|. l_c is active at q_c at any optimum (the objective is
// strictly decreasing in l_c) and xi_j at its lower envelope, so both are
// eliminated, leaving a smooth composite in y_c = log q_c once each max is
// replaced by a softmax of sharpness beta. beta doubles on a schedule; the
// smooth objective is pointwise non-increasing in beta, so the recorded
// trace stays monotone across stages.
struct DirectApproxProblem {
  LatticePolynomial p;  // lifted
  LatticePolynomial d;  // lifted
  LatticePolynomial orig_p;
  LatticePolynomial orig_d;
  std::vector<DegreeKey> shifts;
  double shift_p = 0.0;
  double shift_d = 0.0;
  double R = 1e3;
  double beta0 = 50.0;
  double beta_max = 204800.0;
  int max_iters_per_stage = 400;
};

inline DirectApproxProblem make_direct_approx(const TropicalPolynomial& p,
                                              const TropicalPolynomial& d,
                                              double R, double beta0 = 50.0) {
  if (R <= 0.0) throw input_error("make_direct_approx: R must be positive");
  if (beta0 <= 0.0) throw input_error("make_direct_approx: beta must be positive");
  const GGPDivisionProblem base = make_division_ggp(p, d);
  DirectApproxProblem prob;
  prob.p = base.p;
  prob.d = base.d;
  prob.orig_p = canonicalize(p);
  prob.orig_d = canonicalize(d);
  prob.shifts = base.shifts;
  prob.shift_p = base.shift_p;
  prob.shift_d = base.shift_d;
  prob.R = R;
  prob.beta0 = beta0;
  return prob;
}

struct DirectApproxResult {
  LatticePolynomial quotient;      // original coordinates
  std::map<DegreeKey, double> xi;  // lifted space, certified with the true max
  std::map<DegreeKey, double> lower_bounds;  // l_c, lifted space
  std::vector<double> objective_trace;       // log of the composite objective
  double goal0 = 0.0;
  int iterations = 0;
};

namespace detail {

struct DirectApproxTerms {
  // For each degree j of p: the shift indices that can reach j and the
  // matching divisor coefficients.
  std::vector<std::vector<int>> who;
  std::vector<std::vector<double>> dval;
  std::vector<double> pval;
  double const_sq = 0.0;  // sum of p_j^2 over unreachable degrees
};

inline DirectApproxTerms direct_approx_terms(const DirectApproxProblem& prob) {
  DirectApproxTerms t;
  for (const auto& [j, pj] : prob.p.coeffs()) {
    std::vector<int> who;
    std::vector<double> dv;
    for (std::size_t ci = 0; ci < prob.shifts.size(); ++ci) {
      const DegreeKey i = sub_keys(j, prob.shifts[ci]);
      if (prob.d.contains(i)) {
        who.push_back(static_cast<int>(ci));
        dv.push_back(prob.d.at(i));
      }
    }
    if (who.empty()) {
      t.const_sq += pj * pj;
      continue;
    }
    t.who.push_back(std::move(who));
    t.dval.push_back(std::move(dv));
    t.pval.push_back(pj);
  }
  return t;
}

// Objective (log of composite) and gradient w.r.t. y = log q.
inline double direct_approx_objective(const DirectApproxTerms& t,
                                      const Eigen::VectorXd& y, double R,
                                      double beta, double r_exp,
                                      Eigen::VectorXd* grad) {
  const int nc = static_cast<int>(y.size());
  const int nj = static_cast<int>(t.pval.size());
  Eigen::VectorXd q = y.array().exp();
  double S = t.const_sq;
  double xi_sum = 0.0;
  Eigen::VectorXd dS = Eigen::VectorXd::Zero(nc);
  Eigen::VectorXd dXi = Eigen::VectorXd::Zero(nc);
  for (int j = 0; j < nj; ++j) {
    const auto& who = t.who[j];
    const auto& dv = t.dval[j];
    double m = kNegInf;
    for (std::size_t k = 0; k < who.size(); ++k)
      m = std::max(m, q[who[k]] + dv[k]);
    double z = 0.0;
    for (std::size_t k = 0; k < who.size(); ++k)
      z += std::exp(beta * (q[who[k]] + dv[k] - m));
    const double smax = m + std::log(z) / beta;
    S += smax * smax + t.pval[j] * t.pval[j];
    const double ratio = smax / t.pval[j];
    // xi_j = softmax(1, ratio); sigma is the weight on the ratio branch.
    const double e = beta * (ratio - 1.0);
    double xi, sigma;
    if (e > 0) {
      xi = ratio + std::log1p(std::exp(-e)) / beta;
      sigma = 1.0 / (1.0 + std::exp(-e));
    } else {
      xi = 1.0 + std::log1p(std::exp(e)) / beta;
      sigma = std::exp(e) / (1.0 + std::exp(e));
    }
    xi_sum += xi;
    for (std::size_t k = 0; k < who.size(); ++k) {
      const double w = std::exp(beta * (q[who[k]] + dv[k] - m)) / z;
      const double dsmax = w * q[who[k]];
      dS[who[k]] += 2.0 * smax * dsmax;
      dXi[who[k]] += sigma * dsmax / t.pval[j];
    }
  }
  const double a1 = r_exp * std::log(S) - y.sum();
  const double log_t2 = std::log(R) + std::log(xi_sum);
  const double M = std::max(a1, log_t2);
  const double A = std::exp(a1 - M);
  const double B = std::exp(log_t2 - M);
  const double G = M + std::log(A + B);
  if (grad) {
    Eigen::VectorXd da1 = (r_exp / S) * dS - Eigen::VectorXd::Ones(nc);
    Eigen::VectorXd dlog_t2 = dXi / xi_sum;
    *grad = (A * da1 + B * dlog_t2) / (A + B);
  }
  return G;
}

}  // namespace detail

inline DirectApproxResult solve_direct_approx(const DirectApproxProblem& prob) {
  DirectApproxResult res;
  res.quotient = LatticePolynomial(prob.p.dim());
  if (prob.shifts.empty()) {
    res.goal0 = eval_goal0(res.quotient, prob.orig_p, prob.orig_d);
    return res;
  }
  const int nc = static_cast<int>(prob.shifts.size());
  const detail::DirectApproxTerms terms = detail::direct_approx_terms(prob);
  const double r_exp = static_cast<double>(nc);

  // Start at the erosion closed form (feasible and near-optimal for large R).
  Eigen::VectorXd y(nc);
  for (int ci = 0; ci < nc; ++ci) {
    double u = std::numeric_limits<double>::infinity();
    for (const auto& [i, di] : prob.d.coeffs()) {
      const DegreeKey j = add_keys(prob.shifts[ci], i);
      u = std::min(u, prob.p.at(j) - di);
    }
    y[ci] = std::log(u);
  }

  Eigen::VectorXd grad(nc);
  for (double beta = prob.beta0; beta <= prob.beta_max; beta *= 2.0) {
    double G = detail::direct_approx_objective(terms, y, prob.R, beta, r_exp,
                                               &grad);
    res.objective_trace.push_back(G);
    for (int it = 0; it < prob.max_iters_per_stage; ++it) {
      const double gnorm2 = grad.squaredNorm();
      if (std::sqrt(gnorm2) < 1e-10 * (1.0 + std::abs(G))) break;
      double t = 1.0 / (1.0 + std::sqrt(gnorm2));
      bool accepted = false;
      while (t > 1e-16) {
        const Eigen::VectorXd y_new = y - t * grad;
        const double G_new = detail::direct_approx_objective(
            terms, y_new, prob.R, beta, r_exp, nullptr);
        if (G_new <= G - 1e-4 * t * gnorm2) {
          y = y_new;
          G = detail::direct_approx_objective(terms, y, prob.R, beta, r_exp,
                                              &grad);
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) break;
      if (!res.objective_trace.empty() && G > res.objective_trace.back() + 1e-12)
        throw numeric_error("solve_direct_approx: objective increased after " +
                            std::to_string(res.iterations) + " iterations");
      res.objective_trace.push_back(G);
      ++res.iterations;
    }
  }

  // Certify with the true max and report in both coordinate systems.
  Eigen::VectorXd q = y.array().exp();
  LatticePolynomial q_lifted(prob.p.dim());
  for (int ci = 0; ci < nc; ++ci) {
    q_lifted.set(prob.shifts[ci], q[ci]);
    res.quotient.set(prob.shifts[ci], q[ci] - prob.shift_p + prob.shift_d);
    res.lower_bounds[prob.shifts[ci]] = q[ci];
  }
  for (const auto& [j, pj] : prob.p.coeffs()) {
    double conv = kNegInf;
    for (int ci = 0; ci < nc; ++ci) {
      const DegreeKey i = sub_keys(j, prob.shifts[ci]);
      if (prob.d.contains(i)) conv = std::max(conv, q[ci] + prob.d.at(i));
    }
    res.xi[j] = conv == kNegInf ? 1.0 : std::max(1.0, conv / pj);
  }
  res.goal0 = eval_goal0(res.quotient, prob.orig_p, prob.orig_d);
  return res;
}

// Solves one instance per regularization weight; entries keep the R order
// given. The best entry is the one with the smallest goal-0 value.
struct RSweepEntry {
  double R = 0.0;
  DirectApproxResult result;
};

struct RSweepOutcome {
  std::vector<RSweepEntry> entries;
  std::size_t best_index = 0;
};

inline RSweepOutcome r_sweep(const TropicalPolynomial& p,
                             const TropicalPolynomial& d,
                             const std::vector<double>& r_values,
                             double beta0 = 50.0) {
  if (r_values.empty()) throw input_error("r_sweep: empty R list");
  RSweepOutcome out;
  for (double R : r_values) {
    DirectApproxProblem prob = make_direct_approx(p, d, R, beta0);
    out.entries.push_back({R, solve_direct_approx(prob)});
  }
  for (std::size_t i = 1; i < out.entries.size(); ++i)
    if (out.entries[i].result.goal0 <
        out.entries[out.best_index].result.goal0)
      out.best_index = i;
  return out;
}

}  // namespace tropdiv
