#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "tropdiv/common.hpp"
#include "tropdiv/dataset.hpp"
#include "tropdiv/network.hpp"

namespace tropdiv {

// Plain SGD configuration. patience > 0 enables early stopping on an 80/20
// train-validation split (the best-validation snapshot is returned);
// patience == 0 trains on the full data for exactly `epochs`.
struct TrainConfig {
  int epochs = 30;
  int batch_size = 32;
  double learning_rate = 0.05;
  std::uint64_t seed = 0;
  int patience = 0;

  void validate() const {
    if (epochs < 0 || batch_size < 1 || learning_rate < 0.0 || patience < 0)
      throw input_error("TrainConfig: hyperparameters must be positive");
  }
};

inline double sigmoid(double z) {
  return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                  : std::exp(z) / (1.0 + std::exp(z));
}

// Numerically stable binary cross-entropy of sigmoid(f) against y in {0,1}:
// softplus(f) - y*f.
inline double bce_loss(double f, double y) {
  const double sp = f > 0.0 ? f + std::log1p(std::exp(-f))
                            : std::log1p(std::exp(f));
  return sp - y * f;
}

inline TwoLayerNet init_net(int input_dim, int hidden, std::uint64_t seed) {
  if (input_dim < 1 || hidden < 1)
    throw input_error("init_net: dimensions must be positive");
  Rng rng(seed);
  TwoLayerNet net;
  const double lim1 = std::sqrt(6.0 / (input_dim + hidden));
  const double lim2 = std::sqrt(6.0 / (hidden + 1));
  net.W1.resize(hidden, input_dim);
  for (int i = 0; i < hidden; ++i)
    for (int k = 0; k < input_dim; ++k) net.W1(i, k) = rng.uniform(-lim1, lim1);
  net.b1 = Eigen::VectorXd::Zero(hidden);
  net.w2.resize(hidden);
  for (int i = 0; i < hidden; ++i) net.w2[i] = rng.uniform(-lim2, lim2);
  net.b2 = 0.0;
  return net;
}

inline double mean_loss(const TwoLayerNet& net, const Eigen::MatrixXd& X,
                        const Eigen::VectorXi& y) {
  const Eigen::VectorXd f = preactivations(net, X);
  double total = 0.0;
  for (int i = 0; i < f.size(); ++i) total += bce_loss(f[i], y[i]);
  return total / f.size();
}

// SGD on binary cross-entropy. Batch order is a seeded shuffle per epoch, so
// identical (net, data, config) reproduce the identical result.
inline TwoLayerNet train(TwoLayerNet net, const Dataset& data,
                         const TrainConfig& config) {
  net.validate();
  data.validate();
  config.validate();
  if (data.dim() != net.input_dim())
    throw input_error("train: dataset dimension mismatch");
  Rng rng(config.seed);

  std::vector<int> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  // Fisher-Yates with our own rng for a stdlib-independent sequence.
  auto shuffle = [&rng](std::vector<int>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i)
      std::swap(v[i], v[rng.uniform_int(i + 1)]);
  };

  int n_train = data.size();
  Eigen::MatrixXd val_X;
  Eigen::VectorXi val_y;
  if (config.patience > 0) {
    shuffle(order);
    n_train = std::max(1, (data.size() * 4) / 5);
    const int n_val = data.size() - n_train;
    if (n_val > 0) {
      val_X.resize(n_val, data.dim());
      val_y.resize(n_val);
      for (int i = 0; i < n_val; ++i) {
        val_X.row(i) = data.features.row(order[n_train + i]);
        val_y[i] = data.labels[order[n_train + i]];
      }
    }
    order.resize(n_train);
  }

  TwoLayerNet best = net;
  double best_val = std::numeric_limits<double>::infinity();
  int stale = 0;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(order);
    for (int start = 0; start < n_train; start += config.batch_size) {
      const int bs = std::min(config.batch_size, n_train - start);
      Eigen::MatrixXd xb(bs, data.dim());
      Eigen::VectorXd yb(bs);
      for (int i = 0; i < bs; ++i) {
        xb.row(i) = data.features.row(order[start + i]);
        yb[i] = data.labels[order[start + i]];
      }
      const Eigen::MatrixXd z =
          (xb * net.W1.transpose()).rowwise() + net.b1.transpose();
      const Eigen::MatrixXd a = z.cwiseMax(0.0);
      const Eigen::VectorXd f =
          a * net.w2 + Eigen::VectorXd::Constant(bs, net.b2);
      Eigen::VectorXd g(bs);
      for (int i = 0; i < bs; ++i) g[i] = (sigmoid(f[i]) - yb[i]) / bs;
      if (!g.allFinite())
        throw numeric_error("train: NaN loss at epoch " +
                            std::to_string(epoch));
      const Eigen::VectorXd gw2 = a.transpose() * g;
      const double gb2 = g.sum();
      const Eigen::MatrixXd ga =
          (g * net.w2.transpose()).cwiseProduct((z.array() > 0.0).cast<double>().matrix());
      net.W1 -= config.learning_rate * (ga.transpose() * xb);
      net.b1 -= config.learning_rate * ga.colwise().sum().transpose();
      net.w2 -= config.learning_rate * gw2;
      net.b2 -= config.learning_rate * gb2;
    }
    if (config.patience > 0 && val_y.size() > 0) {
      const double vl = mean_loss(net, val_X, val_y);
      if (!std::isfinite(vl))
        throw numeric_error("train: divergence (validation loss not finite)");
      if (vl < best_val - 1e-12) {
        best_val = vl;
        best = net;
        stale = 0;
      } else if (++stale >= config.patience) {
        return best;
      }
    }
  }
  return config.patience > 0 && val_y.size() > 0 ? best : net;
}

// Fraction of samples where thresholding sigmoid(preactivation) at 0.5
// matches the label; by sigmoid monotonicity this is the sign test on the
// preactivation.
inline double accuracy(const TwoLayerNet& net, const Dataset& data) {
  data.validate();
  const Eigen::VectorXd f = preactivations(net, data.features);
  int hits = 0;
  for (int i = 0; i < f.size(); ++i) {
    const int pred = sigmoid(f[i]) >= 0.5 ? 1 : 0;
    if (pred == data.labels[i]) ++hits;
  }
  return static_cast<double>(hits) / data.size();
}

}  // namespace tropdiv
