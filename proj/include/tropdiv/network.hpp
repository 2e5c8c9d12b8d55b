#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tropdiv/common.hpp"

namespace tropdiv {

// Two-layer ReLU binary classifier: hidden layer W1 x + b1 under ReLU, one
// output neuron w2 . y + b2 feeding a sigmoid.
struct TwoLayerNet {
  Eigen::MatrixXd W1;  // n1 x d
  Eigen::VectorXd b1;  // n1
  Eigen::VectorXd w2;  // n1
  double b2 = 0.0;

  int input_dim() const { return static_cast<int>(W1.cols()); }
  int hidden_count() const { return static_cast<int>(W1.rows()); }

  void validate() const {
    if (W1.rows() != b1.size() || W1.rows() != w2.size())
      throw input_error("TwoLayerNet: inconsistent shapes");
    if (!W1.allFinite() || !b1.allFinite() || !w2.allFinite() ||
        !std::isfinite(b2))
      throw input_error("TwoLayerNet: entries must be finite");
  }
};

// Output-neuron value before the sigmoid.
inline double preactivation(const TwoLayerNet& net, const Eigen::VectorXd& x) {
  if (x.size() != net.input_dim())
    throw input_error("preactivation: input dimension mismatch");
  return net.w2.dot((net.W1 * x + net.b1).cwiseMax(0.0)) + net.b2;
}

// Batched variant; rows of X are samples.
inline Eigen::VectorXd preactivations(const TwoLayerNet& net,
                                      const Eigen::MatrixXd& X) {
  if (X.cols() != net.input_dim())
    throw input_error("preactivations: input dimension mismatch");
  Eigen::MatrixXd z = (X * net.W1.transpose()).rowwise() + net.b1.transpose();
  return z.cwiseMax(0.0) * net.w2 + Eigen::VectorXd::Constant(X.rows(), net.b2);
}

// One signed half of the network: a weighted sum of ReLU units
//   part(x) = sum_i scales_i * max(weights_i . x + biases_i, 0)
// whose Newton polytope is the zonotope of the scaled generators. Only
// units with a strictly positive scale are kept.
struct TropicalPart {
  Eigen::MatrixXd weights;  // m x d
  Eigen::VectorXd biases;   // m
  Eigen::VectorXd scales;   // m, all > 0

  int dim() const { return static_cast<int>(weights.cols()); }
  int segment_count() const { return static_cast<int>(weights.rows()); }

  double eval(const Eigen::VectorXd& x) const {
    if (x.size() != dim()) throw input_error("TropicalPart: dim mismatch");
    if (segment_count() == 0) return 0.0;
    return scales.dot((weights * x + biases).cwiseMax(0.0));
  }

  Eigen::VectorXd eval_batch(const Eigen::MatrixXd& X) const {
    if (segment_count() == 0) return Eigen::VectorXd::Zero(X.rows());
    Eigen::MatrixXd z =
        (X * weights.transpose()).rowwise() + biases.transpose();
    return z.cwiseMax(0.0) * scales;
  }
};

struct Decomposition {
  TropicalPart plus;
  TropicalPart minus;
  double bias = 0.0;  // output bias, re-added after division/compression
};

// Splits w2 = w2_plus - w2_minus with nonnegative entries, giving
//   preactivation(x) = plus(x) - minus(x) + bias  for all x.
inline Decomposition decompose(const TwoLayerNet& net) {
  net.validate();
  Decomposition out;
  out.bias = net.b2;
  for (int sign = 0; sign < 2; ++sign) {
    TropicalPart& part = sign == 0 ? out.plus : out.minus;
    std::vector<int> keep;
    for (int i = 0; i < net.hidden_count(); ++i) {
      const double s = sign == 0 ? net.w2[i] : -net.w2[i];
      if (s > 0.0) keep.push_back(i);
    }
    part.weights.resize(keep.size(), net.input_dim());
    part.biases.resize(keep.size());
    part.scales.resize(keep.size());
    for (std::size_t r = 0; r < keep.size(); ++r) {
      part.weights.row(r) = net.W1.row(keep[r]);
      part.biases[r] = net.b1[keep[r]];
      part.scales[r] = std::abs(net.w2[keep[r]]);
    }
  }
  return out;
}

// The extended-Newton-polytope vertex a given input activates: the pattern
// records which units fire (strictly positive pre-activation; exact zeros
// count as inactive) and `extended` is the sum of the firing units' scaled
// generators, one vector of length d+1 with the bias last.
struct ActivatedVertex {
  std::vector<bool> pattern;
  Eigen::VectorXd extended;
};

inline ActivatedVertex activated_vertex(const TropicalPart& part,
                                        const Eigen::VectorXd& x) {
  if (x.size() != part.dim())
    throw input_error("activated_vertex: dim mismatch");
  ActivatedVertex v;
  v.pattern.resize(part.segment_count());
  v.extended = Eigen::VectorXd::Zero(part.dim() + 1);
  for (int i = 0; i < part.segment_count(); ++i) {
    const double z = part.weights.row(i).dot(x) + part.biases[i];
    v.pattern[i] = z > 0.0;
    if (v.pattern[i]) {
      v.extended.head(part.dim()) +=
          part.scales[i] * part.weights.row(i).transpose();
      v.extended[part.dim()] += part.scales[i] * part.biases[i];
    }
  }
  return v;
}

// Extended vector for a known firing pattern.
inline Eigen::VectorXd pattern_vertex(const TropicalPart& part,
                                      const std::vector<bool>& pattern) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(part.dim() + 1);
  for (int i = 0; i < part.segment_count(); ++i) {
    if (pattern[i]) {
      v.head(part.dim()) += part.scales[i] * part.weights.row(i).transpose();
      v[part.dim()] += part.scales[i] * part.biases[i];
    }
  }
  return v;
}

// Checks that the part divides exactly by its i-th constituent segment:
// with d the segment and q the remaining units, part(x) = q(x) + d(x) must
// hold at every sampled point.
inline bool check_divisibility(const TropicalPart& part, int segment,
                               int samples, std::uint64_t seed = 0,
                               double box = 3.0) {
  if (segment < 0 || segment >= part.segment_count())
    throw input_error("check_divisibility: segment index out of range");
  if (part.scales[segment] <= 0.0)
    throw input_error("check_divisibility: zero-scale segment");
  TropicalPart rest;
  const int m = part.segment_count();
  rest.weights.resize(m - 1, part.dim());
  rest.biases.resize(m - 1);
  rest.scales.resize(m - 1);
  for (int i = 0, r = 0; i < m; ++i) {
    if (i == segment) continue;
    rest.weights.row(r) = part.weights.row(i);
    rest.biases[r] = part.biases[i];
    rest.scales[r] = part.scales[i];
    ++r;
  }
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd x(part.dim());
    for (int k = 0; k < part.dim(); ++k) x[k] = rng.uniform(-box, box);
    const double seg = part.scales[segment] *
        std::max(part.weights.row(segment).dot(x) + part.biases[segment], 0.0);
    if (std::abs(part.eval(x) - (rest.eval(x) + seg)) > kTol) return false;
  }
  return true;
}

}  // namespace tropdiv
