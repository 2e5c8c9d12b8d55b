#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <utility>
#include <vector>

#include "tropdiv/common.hpp"

namespace tropdiv {

// One affine term a.x + b of a max-plus polynomial. The degree vector a is
// real-valued in general and integer-valued in lattice mode.
struct Term {
  Eigen::VectorXd degree;
  double coeff = 0.0;
};

// A tropical (max-plus) polynomial: the pointwise maximum of finitely many
// affine terms. The empty term set is the "bottom" polynomial, identically
// -infinity; it is representable but cannot be evaluated.
//
// Terms are kept sorted lexicographically by degree and deduplicated: terms
// whose degrees coincide (within kTol per component) collapse to the larger
// coefficient, which preserves the represented function.
class TropicalPolynomial {
 public:
  TropicalPolynomial(int dim, std::vector<Term> terms) : dim_(dim) {
    if (dim <= 0) throw input_error("TropicalPolynomial: dim must be positive");
    for (const Term& t : terms) {
      if (t.degree.size() != dim)
        throw input_error("TropicalPolynomial: term degree length != dim");
      if (!std::isfinite(t.coeff))
        throw input_error("TropicalPolynomial: coefficient must be finite");
      for (int k = 0; k < dim; ++k)
        if (!std::isfinite(t.degree[k]))
          throw input_error("TropicalPolynomial: degree must be finite");
    }
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
      return std::lexicographical_compare(a.degree.data(),
                                          a.degree.data() + a.degree.size(),
                                          b.degree.data(),
                                          b.degree.data() + b.degree.size());
    });
    for (Term& t : terms) {
      if (!terms_.empty() && degrees_close(terms_.back().degree, t.degree)) {
        terms_.back().coeff = std::max(terms_.back().coeff, t.coeff);
      } else {
        terms_.push_back(std::move(t));
      }
    }
  }

  static TropicalPolynomial bottom(int dim) {
    return TropicalPolynomial(dim, {});
  }

  // 1-D convenience: one coefficient per integer degree 0..k-1.
  static TropicalPolynomial from_coeffs_1d(const std::vector<double>& coeffs) {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      Eigen::VectorXd a(1);
      a[0] = static_cast<double>(i);
      terms.push_back({a, coeffs[i]});
    }
    return TropicalPolynomial(1, std::move(terms));
  }

  int dim() const { return dim_; }
  bool is_bottom() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }

  double eval(const Eigen::VectorXd& x) const {
    if (x.size() != dim_) throw input_error("eval: point dimension mismatch");
    if (terms_.empty()) throw bottom_error("eval: bottom polynomial");
    double best = kNegInf;
    for (const Term& t : terms_)
      best = std::max(best, t.degree.dot(x) + t.coeff);
    return best;
  }

  // As eval but the bottom polynomial yields -infinity instead of throwing.
  double eval_or_neg_inf(const Eigen::VectorXd& x) const {
    if (x.size() != dim_) throw input_error("eval: point dimension mismatch");
    double best = kNegInf;
    for (const Term& t : terms_)
      best = std::max(best, t.degree.dot(x) + t.coeff);
    return best;
  }

 private:
  static bool degrees_close(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (int k = 0; k < a.size(); ++k)
      if (std::abs(a[k] - b[k]) > kTol) return false;
    return true;
  }

  int dim_;
  std::vector<Term> terms_;
};

// max(p, q) pointwise: term-set union with duplicate-degree collapse.
inline TropicalPolynomial tropical_sum(const TropicalPolynomial& p,
                                       const TropicalPolynomial& q) {
  if (p.dim() != q.dim()) throw input_error("tropical_sum: dimension mismatch");
  std::vector<Term> terms = p.terms();
  terms.insert(terms.end(), q.terms().begin(), q.terms().end());
  return TropicalPolynomial(p.dim(), std::move(terms));
}

// p + q pointwise (ordinary addition of the two piecewise-linear functions):
// all pairwise term sums, duplicates collapsed by max.
inline TropicalPolynomial tropical_product(const TropicalPolynomial& p,
                                           const TropicalPolynomial& q) {
  if (p.dim() != q.dim())
    throw input_error("tropical_product: dimension mismatch");
  std::vector<Term> terms;
  terms.reserve(p.terms().size() * q.terms().size());
  for (const Term& s : p.terms())
    for (const Term& t : q.terms())
      terms.push_back({s.degree + t.degree, s.coeff + t.coeff});
  return TropicalPolynomial(p.dim(), std::move(terms));
}

}  // namespace tropdiv
