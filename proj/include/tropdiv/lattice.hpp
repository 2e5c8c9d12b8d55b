#pragma once

#include <map>
#include <vector>

#include "tropdiv/common.hpp"
#include "tropdiv/tropical.hpp"

namespace tropdiv {

// Integer degree vector used as a lattice key; std::vector's lexicographic
// ordering gives deterministic map iteration.
using DegreeKey = std::vector<int>;

inline DegreeKey add_keys(const DegreeKey& a, const DegreeKey& b) {
  DegreeKey out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
  return out;
}

inline DegreeKey sub_keys(const DegreeKey& a, const DegreeKey& b) {
  DegreeKey out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

// Rounds a real degree vector to the lattice; components must lie within tol
// of an integer or the operation is a lattice-mode error.
inline DegreeKey to_lattice(const Eigen::VectorXd& a, double tol = kTol) {
  DegreeKey out(a.size());
  for (int k = 0; k < a.size(); ++k) {
    const double r = std::round(a[k]);
    if (std::abs(a[k] - r) > tol)
      throw lattice_error("degree component is not integer-valued");
    out[k] = static_cast<int>(r);
  }
  return out;
}

// A tropical polynomial in canonical integer-degree form: a map from lattice
// degree vectors to coefficients. After canonicalize() the key set is every
// lattice point of the Newton polytope and each value is the upper-hull
// height there. The empty map is the bottom polynomial.
class LatticePolynomial {
 public:
  explicit LatticePolynomial(int dim) : dim_(dim) {
    if (dim <= 0) throw input_error("LatticePolynomial: dim must be positive");
  }

  LatticePolynomial(int dim, std::map<DegreeKey, double> coeffs)
      : dim_(dim), coeffs_(std::move(coeffs)) {
    if (dim <= 0) throw input_error("LatticePolynomial: dim must be positive");
    for (const auto& [j, v] : coeffs_) {
      if (static_cast<int>(j.size()) != dim)
        throw input_error("LatticePolynomial: key length != dim");
      if (!std::isfinite(v))
        throw input_error("LatticePolynomial: coefficient must be finite");
    }
  }

  // 1-D convenience: {degree -> coeff}.
  static LatticePolynomial from_map_1d(const std::map<int, double>& m) {
    std::map<DegreeKey, double> coeffs;
    for (const auto& [j, v] : m) coeffs[{j}] = v;
    return LatticePolynomial(1, std::move(coeffs));
  }

  int dim() const { return dim_; }
  bool empty() const { return coeffs_.empty(); }
  std::size_t size() const { return coeffs_.size(); }
  const std::map<DegreeKey, double>& coeffs() const { return coeffs_; }

  bool contains(const DegreeKey& j) const { return coeffs_.count(j) > 0; }

  double at(const DegreeKey& j) const {
    auto it = coeffs_.find(j);
    if (it == coeffs_.end())
      throw input_error("LatticePolynomial::at: degree not present");
    return it->second;
  }

  double at_or_neg_inf(const DegreeKey& j) const {
    auto it = coeffs_.find(j);
    return it == coeffs_.end() ? kNegInf : it->second;
  }

  void set(const DegreeKey& j, double v) {
    if (static_cast<int>(j.size()) != dim_)
      throw input_error("LatticePolynomial::set: key length != dim");
    coeffs_[j] = v;
  }

  double eval(const Eigen::VectorXd& x) const {
    if (x.size() != dim_) throw input_error("eval: point dimension mismatch");
    if (coeffs_.empty()) throw bottom_error("eval: bottom polynomial");
    double best = kNegInf;
    for (const auto& [j, v] : coeffs_) {
      double s = v;
      for (int k = 0; k < dim_; ++k) s += j[k] * x[k];
      best = std::max(best, s);
    }
    return best;
  }

  double eval_or_neg_inf(const Eigen::VectorXd& x) const {
    if (coeffs_.empty()) return kNegInf;
    return eval(x);
  }

  TropicalPolynomial to_polynomial() const {
    std::vector<Term> terms;
    terms.reserve(coeffs_.size());
    for (const auto& [j, v] : coeffs_) {
      Eigen::VectorXd a(dim_);
      for (int k = 0; k < dim_; ++k) a[k] = j[k];
      terms.push_back({a, v});
    }
    return TropicalPolynomial(dim_, std::move(terms));
  }

 private:
  int dim_;
  std::map<DegreeKey, double> coeffs_;
};

// Max-plus convolution of two coefficient maps:
//   (q (+) d)_j = max over c with j-c in deg(d) of (q_c + d_{j-c}).
// The key set of the result is the Minkowski sum of the two key sets.
inline LatticePolynomial maxplus_convolution(const LatticePolynomial& q,
                                             const LatticePolynomial& d) {
  if (q.dim() != d.dim())
    throw input_error("maxplus_convolution: dimension mismatch");
  LatticePolynomial out(q.dim());
  for (const auto& [c, qc] : q.coeffs()) {
    for (const auto& [i, di] : d.coeffs()) {
      const DegreeKey j = add_keys(c, i);
      const double v = qc + di;
      if (!out.contains(j) || out.at(j) < v) out.set(j, v);
    }
  }
  return out;
}

}  // namespace tropdiv
