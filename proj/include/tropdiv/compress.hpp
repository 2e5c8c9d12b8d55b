#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tropdiv/common.hpp"
#include "tropdiv/dataset.hpp"
#include "tropdiv/network.hpp"
#include "tropdiv/train.hpp"

namespace tropdiv {

// Activation-pattern tally of the extended-Newton-polytope vertices a sample
// set activates, sorted by count descending. Equal counts tie-break
// lexicographically on the pattern bitmask so the order is deterministic.
struct VertexStatsEntry {
  std::vector<bool> pattern;
  Eigen::VectorXd extended;
  int count = 0;
};

struct VertexStats {
  std::vector<VertexStatsEntry> entries;
};

inline VertexStats harvest_vertices(const TropicalPart& part,
                                    const Eigen::MatrixXd& X) {
  if (X.rows() < 1) throw input_error("harvest_vertices: empty sample set");
  std::map<std::vector<bool>, std::pair<Eigen::VectorXd, int>> tally;
  for (int s = 0; s < X.rows(); ++s) {
    const ActivatedVertex v = activated_vertex(part, X.row(s).transpose());
    auto it = tally.find(v.pattern);
    if (it == tally.end())
      tally.emplace(v.pattern, std::make_pair(v.extended, 1));
    else
      ++it->second.second;
  }
  VertexStats stats;
  stats.entries.reserve(tally.size());
  for (const auto& [pattern, rec] : tally)
    stats.entries.push_back({pattern, rec.first, rec.second});
  std::stable_sort(stats.entries.begin(), stats.entries.end(),
                   [](const VertexStatsEntry& a, const VertexStatsEntry& b) {
                     if (a.count != b.count) return a.count > b.count;
                     return a.pattern < b.pattern;
                   });
  return stats;
}

// Phase-1 weight assignment: the first row takes the most frequent vertex;
// each later vertex is subtracted from one uniformly chosen earlier row and
// then becomes its own row. Rows live in extended space, bias coordinate
// last. When the distinct vertices run out, the remaining rows are zero
// (inert neurons) and counted in zero_filled.
struct Phase1Rows {
  Eigen::MatrixXd rows;  // k x (d+1)
  int zero_filled = 0;
};

inline Phase1Rows phase1(const VertexStats& stats, int k, Rng& rng) {
  if (k < 1) throw input_error("phase1: target neuron count must be >= 1");
  if (stats.entries.empty())
    throw input_error("phase1: vertex statistics are empty");
  const int width = static_cast<int>(stats.entries.front().extended.size());
  Phase1Rows out;
  out.rows = Eigen::MatrixXd::Zero(k, width);
  const int have = static_cast<int>(stats.entries.size());
  out.rows.row(0) = stats.entries[0].extended;
  for (int j = 1; j < k; ++j) {
    if (j < have) {
      const Eigen::VectorXd& v = stats.entries[j].extended;
      const int pick = rng.uniform_int(j);
      out.rows.row(pick) -= v.transpose();
      out.rows.row(j) = v.transpose();
    } else {
      ++out.zero_filled;
    }
  }
  return out;
}

// Phase-2 bias: the mean gap between the original preactivation (sans its
// output bias) and the reduced network's, plus the original output bias.
// Minimizes the mean squared preactivation error over X among constant
// corrections.
inline double phase2(const TwoLayerNet& original, const TwoLayerNet& reduced,
                     const Eigen::MatrixXd& X) {
  if (X.rows() < 1) throw input_error("phase2: empty sample set");
  if (original.input_dim() != reduced.input_dim())
    throw input_error("phase2: dimension mismatch");
  const Eigen::VectorXd f_orig = preactivations(original, X);
  const Eigen::VectorXd f_red =
      preactivations(reduced, X).array() - reduced.b2;
  return (f_orig.array() - original.b2 - f_red.array()).mean() + original.b2;
}

// Constant quotient minimizing sum_x |q0 + d(x) - p(x)|^2: the mean of the
// pointwise differences.
inline double mean_quotient(const TropicalPart& p, const TropicalPart& d,
                            const Eigen::MatrixXd& X) {
  if (X.rows() < 1) throw input_error("mean_quotient: empty sample set");
  return (p.eval_batch(X) - d.eval_batch(X)).mean();
}

// Max-affine fit with fixed term slopes: samples are assigned to their
// argmax term, then each term's coefficient is refit as the mean residual
// intercept. A step that would raise the objective is rejected and the loop
// stops, so the recorded trace is non-increasing.
struct MaxLinearFitResult {
  Eigen::VectorXd coeffs;
  std::vector<double> objective_trace;
  int iterations = 0;
};

inline MaxLinearFitResult maxlinear_fit(const Eigen::MatrixXd& X,
                                        const Eigen::VectorXd& target,
                                        const Eigen::MatrixXd& degrees,
                                        Eigen::VectorXd init, int max_iters) {
  const int n = static_cast<int>(X.rows());
  const int k = static_cast<int>(degrees.rows());
  if (n < 1) throw input_error("maxlinear_fit: empty sample set");
  if (k < 1) throw input_error("maxlinear_fit: at least one term required");
  if (init.size() != k)
    throw input_error("maxlinear_fit: init size != term count");
  const Eigen::MatrixXd slopes = X * degrees.transpose();  // n x k

  auto objective = [&](const Eigen::VectorXd& q) {
    double total = 0.0;
    for (int s = 0; s < n; ++s) {
      const double v = (slopes.row(s).transpose() + q).maxCoeff();
      total += (v - target[s]) * (v - target[s]);
    }
    return total;
  };

  MaxLinearFitResult res;
  res.coeffs = std::move(init);
  res.objective_trace.push_back(objective(res.coeffs));
  std::vector<int> assign(n, -1);
  for (int iter = 0; iter < max_iters; ++iter) {
    std::vector<int> new_assign(n);
    for (int s = 0; s < n; ++s) {
      int best = 0;
      double bv = slopes(s, 0) + res.coeffs[0];
      for (int c = 1; c < k; ++c) {
        const double v = slopes(s, c) + res.coeffs[c];
        if (v > bv + kTol) {
          bv = v;
          best = c;
        }
      }
      new_assign[s] = best;
    }
    // Empty clusters steal the worst-residual sample from a cluster that
    // can spare one.
    std::vector<int> sizes(k, 0);
    for (int a : new_assign) ++sizes[a];
    for (int c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      int worst = -1;
      double worst_res = -1.0;
      for (int s = 0; s < n; ++s) {
        if (sizes[new_assign[s]] < 2) continue;
        const double v = (slopes.row(s).transpose() + res.coeffs).maxCoeff();
        const double r = std::abs(v - target[s]);
        if (r > worst_res) {
          worst_res = r;
          worst = s;
        }
      }
      if (worst < 0) continue;
      --sizes[new_assign[worst]];
      new_assign[worst] = c;
      ++sizes[c];
    }
    const bool stable = new_assign == assign;
    assign = new_assign;
    Eigen::VectorXd q_new = res.coeffs;
    for (int c = 0; c < k; ++c) {
      if (sizes[c] == 0) continue;
      double sum = 0.0;
      for (int s = 0; s < n; ++s)
        if (assign[s] == c) sum += target[s] - slopes(s, c);
      q_new[c] = sum / sizes[c];
    }
    const double J = objective(q_new);
    if (J > res.objective_trace.back() + 1e-12) break;  // reject and stop
    res.coeffs = q_new;
    res.objective_trace.push_back(J);
    ++res.iterations;
    if (stable) break;
  }
  return res;
}

struct CompressionReport {
  int schema_version = 1;
  std::string dataset;
  std::string model;
  double fraction = 0.0;
  int original_neurons = 0;
  int compressed_neurons = 0;
  int positive_neurons = 0;
  int negative_neurons = 0;
  int zero_filled = 0;
  double phase2_bias = 0.0;
  double preactivation_rmse = 0.0;
  double accuracy_before = 0.0;
  double accuracy_after = 0.0;
  int sample_count = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// ceil(f * n) with a guard against float excess (0.1 * 200 must give 20).
inline int budget_ceil(double f, int n) {
  return static_cast<int>(std::ceil(f * n - 1e-9));
}

// Largest-remainder split of `total` proportional to counts; ties on the
// fractional part go to the earlier (positive) part.
inline std::pair<int, int> split_budget(int total, int n_plus, int n_minus) {
  const int denom = n_plus + n_minus;
  if (denom == 0) return {total, 0};
  const double share_plus = static_cast<double>(total) * n_plus / denom;
  const double share_minus = static_cast<double>(total) * n_minus / denom;
  int k_plus = static_cast<int>(std::floor(share_plus + 1e-12));
  int k_minus = static_cast<int>(std::floor(share_minus + 1e-12));
  int left = total - k_plus - k_minus;
  const double rem_plus = share_plus - k_plus;
  const double rem_minus = share_minus - k_minus;
  while (left-- > 0) {
    if (rem_plus >= rem_minus && n_plus > 0) {
      if (k_plus < total) ++k_plus; else ++k_minus;
    } else if (n_minus > 0) {
      ++k_minus;
    } else {
      ++k_plus;
    }
  }
  return {k_plus, k_minus};
}

}  // namespace detail

// Full two-phase approximation: decompose, harvest activated vertices over
// X, phase-1 rows per part (+1/-1 output weights), phase-2 bias. The hidden
// budget is ceil(f * n1), split between the parts by largest remainder, and
// the result is deterministic given the seed.
inline std::pair<TwoLayerNet, CompressionReport> compress(
    const TwoLayerNet& net, const Dataset& X, double f, std::uint64_t seed) {
  net.validate();
  X.validate();
  if (f <= 0.0 || f > 1.0)
    throw input_error("compress: fraction must be in (0, 1]");
  if (X.dim() != net.input_dim())
    throw input_error("compress: sample dimension mismatch");

  const Decomposition dec = decompose(net);
  const int n1 = net.hidden_count();
  const int total = std::max(1, detail::budget_ceil(f, n1));
  const auto [k_plus, k_minus] = detail::split_budget(
      total, dec.plus.segment_count(), dec.minus.segment_count());
  if ((dec.plus.segment_count() > 0 && k_plus == 0) ||
      (dec.minus.segment_count() > 0 && k_minus == 0))
    throw input_error("compress: fraction yields zero neurons on a nonempty part");

  Rng rng(seed);
  const int d = net.input_dim();
  TwoLayerNet reduced;
  reduced.W1 = Eigen::MatrixXd::Zero(total, d);
  reduced.b1 = Eigen::VectorXd::Zero(total);
  reduced.w2 = Eigen::VectorXd::Zero(total);
  reduced.b2 = 0.0;
  int zero_filled = 0;
  int row0 = 0;
  for (int sign = 0; sign < 2; ++sign) {
    const TropicalPart& part = sign == 0 ? dec.plus : dec.minus;
    const int k = sign == 0 ? k_plus : k_minus;
    if (k == 0) continue;
    const VertexStats stats = harvest_vertices(part, X.features);
    const Phase1Rows rows = phase1(stats, k, rng);
    zero_filled += rows.zero_filled;
    reduced.W1.block(row0, 0, k, d) = rows.rows.leftCols(d);
    reduced.b1.segment(row0, k) = rows.rows.col(d);
    reduced.w2.segment(row0, k).setConstant(sign == 0 ? 1.0 : -1.0);
    row0 += k;
  }
  reduced.b2 = phase2(net, reduced, X.features);

  CompressionReport report;
  report.fraction = f;
  report.original_neurons = n1;
  report.compressed_neurons = total;
  report.positive_neurons = k_plus;
  report.negative_neurons = k_minus;
  report.zero_filled = zero_filled;
  report.phase2_bias = reduced.b2;
  const Eigen::VectorXd gap = preactivations(net, X.features) -
                              preactivations(reduced, X.features);
  report.preactivation_rmse = std::sqrt(gap.squaredNorm() / X.size());
  report.accuracy_before = accuracy(net, X);
  report.accuracy_after = accuracy(reduced, X);
  report.sample_count = X.size();
  report.seed = seed;
  return {reduced, report};
}

// Repeatedly halves the hidden layer and retrains. Iteration t compresses
// with seed + t and retrains with the given config at `retrain_epochs`
// (0 skips retraining).
struct IterativeOutcome {
  TwoLayerNet net;
  std::vector<CompressionReport> reports;
};

inline IterativeOutcome iterative_compress(const TwoLayerNet& net,
                                           const Dataset& train_data,
                                           const Dataset& X, int halvings,
                                           int retrain_epochs,
                                           TrainConfig config,
                                           std::uint64_t seed = 0) {
  if (halvings < 1) throw input_error("iterative_compress: halvings must be >= 1");
  IterativeOutcome out;
  out.net = net;
  for (int t = 0; t < halvings; ++t) {
    auto [smaller, report] = compress(out.net, X, 0.5, seed + t);
    if (retrain_epochs > 0) {
      TrainConfig c = config;
      c.epochs = retrain_epochs;
      c.seed = config.seed + t;
      smaller = train(smaller, train_data, c);
      report.accuracy_after = accuracy(smaller, X);
    }
    out.net = std::move(smaller);
    out.reports.push_back(std::move(report));
  }
  return out;
}

}  // namespace tropdiv
