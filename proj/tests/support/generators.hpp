#pragma once

// Random instance generators shared by the test suites.

#include <vector>

#include "tropdiv/common.hpp"
#include "tropdiv/lattice.hpp"
#include "tropdiv/network.hpp"
#include "tropdiv/tropical.hpp"

namespace testsupport {

inline Eigen::VectorXd random_point(tropdiv::Rng& rng, int dim,
                                    double box = 5.0) {
  Eigen::VectorXd x(dim);
  for (int k = 0; k < dim; ++k) x[k] = rng.uniform(-box, box);
  return x;
}

// Integer-degree polynomial with degrees in [0, max_deg]^dim and
// coefficients in [-coeff_box, coeff_box].
inline tropdiv::TropicalPolynomial random_lattice_poly(tropdiv::Rng& rng,
                                                       int dim, int max_deg,
                                                       int n_terms,
                                                       double coeff_box = 5.0) {
  std::vector<tropdiv::Term> terms;
  for (int t = 0; t < n_terms; ++t) {
    Eigen::VectorXd a(dim);
    for (int k = 0; k < dim; ++k) a[k] = rng.uniform_int(max_deg + 1);
    terms.push_back({a, rng.uniform(-coeff_box, coeff_box)});
  }
  return tropdiv::TropicalPolynomial(dim, std::move(terms));
}

// Real-degree polynomial for function-level identities.
inline tropdiv::TropicalPolynomial random_real_poly(tropdiv::Rng& rng, int dim,
                                                    int n_terms) {
  std::vector<tropdiv::Term> terms;
  for (int t = 0; t < n_terms; ++t) {
    Eigen::VectorXd a(dim);
    for (int k = 0; k < dim; ++k) a[k] = rng.uniform(-3.0, 3.0);
    terms.push_back({a, rng.uniform(-5.0, 5.0)});
  }
  return tropdiv::TropicalPolynomial(dim, std::move(terms));
}

inline tropdiv::TwoLayerNet random_net(tropdiv::Rng& rng, int dim, int hidden,
                                       double scale = 1.0) {
  tropdiv::TwoLayerNet net;
  net.W1.resize(hidden, dim);
  net.b1.resize(hidden);
  net.w2.resize(hidden);
  for (int i = 0; i < hidden; ++i) {
    for (int k = 0; k < dim; ++k) net.W1(i, k) = rng.uniform(-scale, scale);
    net.b1[i] = rng.uniform(-scale, scale);
    net.w2[i] = rng.uniform(-scale, scale);
  }
  net.b2 = rng.uniform(-scale, scale);
  return net;
}

// 1-D polynomial helper: terms (degree, coeff).
inline tropdiv::TropicalPolynomial poly1d(
    const std::vector<std::pair<double, double>>& terms) {
  std::vector<tropdiv::Term> ts;
  for (const auto& [a, b] : terms) {
    Eigen::VectorXd deg(1);
    deg[0] = a;
    ts.push_back({deg, b});
  }
  return tropdiv::TropicalPolynomial(1, std::move(ts));
}

// 2-D polynomial helper: terms (ax, ay, coeff).
inline tropdiv::TropicalPolynomial poly2d(
    const std::vector<std::tuple<double, double, double>>& terms) {
  std::vector<tropdiv::Term> ts;
  for (const auto& [ax, ay, b] : terms) {
    Eigen::VectorXd deg(2);
    deg << ax, ay;
    ts.push_back({deg, b});
  }
  return tropdiv::TropicalPolynomial(2, std::move(ts));
}

}  // namespace testsupport
