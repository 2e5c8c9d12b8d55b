#pragma once

#include <map>
#include <set>
#include <vector>

#include "tropdiv/common.hpp"
#include "tropdiv/lattice.hpp"
#include "tropdiv/polytope.hpp"
#include "tropdiv/tropical.hpp"

namespace tropdiv {

// Output of tropical polynomial division p / d. The quotient holds one
// coefficient per valid shift c; the remainder collects the hull-vertex
// terms of p not covered by any shifted copy of Newt(d). `exact` records
// whether q + d reproduces p's canonical coefficients at every upper-hull
// vertex (non-vertex coefficients do not affect the function).
// tight_witnesses maps each shift c to a lattice degree j where
// q_c + d_{j-c} = n_p(j), certifying that q_c cannot be raised.
struct DivisionResult {
  LatticePolynomial quotient;
  TropicalPolynomial remainder;
  bool exact = false;
  std::map<DegreeKey, DegreeKey> tight_witnesses;
};

// Tropical polynomial division. For every valid shift c the quotient
// coefficient is the erosion
//   q_c = min over i in deg(d) of (n_p(c+i) - d_i),
// the largest value keeping the shifted divisor hull below the dividend's.
inline DivisionResult divide(const TropicalPolynomial& p,
                             const TropicalPolynomial& d, double tol = kTol) {
  if (p.dim() != d.dim()) throw input_error("divide: dimension mismatch");
  if (p.is_bottom() || d.is_bottom())
    throw input_error("divide: polynomials must be nonempty");
  const LatticePolynomial np = canonicalize(p, tol);
  const LatticePolynomial nd = canonicalize(d, tol);
  const NewtonPolytope newt_p = NewtonPolytope::from_polynomial(p);
  const NewtonPolytope newt_d = NewtonPolytope::from_polynomial(d);
  const std::vector<DegreeKey> shifts = valid_shifts(newt_d, newt_p);

  DivisionResult res{LatticePolynomial(p.dim()),
                     TropicalPolynomial::bottom(p.dim()), false, {}};
  std::set<DegreeKey> covered;
  for (const DegreeKey& c : shifts) {
    double qc = std::numeric_limits<double>::infinity();
    DegreeKey witness;
    bool ok = true;
    for (const auto& [i, di] : nd.coeffs()) {
      const DegreeKey j = add_keys(c, i);
      const double h = np.at_or_neg_inf(j);
      if (h == kNegInf) {
        ok = false;
        break;
      }
      if (h - di < qc) {
        qc = h - di;
        witness = j;
      }
    }
    if (!ok) continue;
    res.quotient.set(c, qc);
    res.tight_witnesses[c] = witness;
    for (const auto& [i, di] : nd.coeffs()) covered.insert(add_keys(c, i));
  }

  // Remainder: hull-vertex terms of canonical p whose degree no shifted
  // divisor polytope reaches.
  const std::vector<ExtendedPoint> pts = extended_points(np);
  const std::vector<int> verts = upper_hull_vertices(pts);
  std::vector<Term> rem_terms;
  std::vector<DegreeKey> vert_keys;
  for (int vi : verts) {
    const DegreeKey j = to_lattice(pts[vi].degree);
    vert_keys.push_back(j);
    if (!covered.count(j)) rem_terms.push_back({pts[vi].degree, pts[vi].height});
  }
  res.remainder = TropicalPolynomial(p.dim(), std::move(rem_terms));

  if (!res.quotient.empty()) {
    const LatticePolynomial conv = maxplus_convolution(res.quotient, nd);
    res.exact = true;
    for (const DegreeKey& j : vert_keys) {
      if (!conv.contains(j) || std::abs(conv.at(j) - np.at(j)) > tol) {
        res.exact = false;
        break;
      }
    }
  }
  return res;
}

// Division by several divisors: one single-divisor run each; the remainder
// keeps the terms appearing in every per-divisor remainder. Each remainder
// term is a term of p, so coefficients agree across divisors by construction
// and the result does not depend on divisor order.
struct MultiDivisionResult {
  std::vector<LatticePolynomial> quotients;
  TropicalPolynomial remainder;
};

inline MultiDivisionResult divide_multi(
    const TropicalPolynomial& p, const std::vector<TropicalPolynomial>& divisors,
    double tol = kTol) {
  if (divisors.empty())
    throw input_error("divide_multi: at least one divisor required");
  MultiDivisionResult out{{}, TropicalPolynomial::bottom(p.dim())};
  std::vector<TropicalPolynomial> remainders;
  for (const auto& d : divisors) {
    DivisionResult r = divide(p, d, tol);
    out.quotients.push_back(std::move(r.quotient));
    remainders.push_back(std::move(r.remainder));
  }
  std::vector<Term> common;
  for (const Term& t : remainders.front().terms()) {
    const DegreeKey j = to_lattice(t.degree);
    bool in_all = true;
    for (std::size_t i = 1; i < remainders.size() && in_all; ++i) {
      in_all = false;
      for (const Term& s : remainders[i].terms())
        if (to_lattice(s.degree) == j) {
          in_all = true;
          break;
        }
    }
    if (in_all) common.push_back(t);
  }
  out.remainder = TropicalPolynomial(p.dim(), std::move(common));
  return out;
}

// Grayscale erosion of the hull-height map n_p by n_d over all lattice
// shifts: eps(x) = inf_c { n_p(x+c) - n_d(c) }. Points any shift fails to
// match get -infinity and are excluded from the result.
inline LatticePolynomial morphological_erosion(const LatticePolynomial& p,
                                               const LatticePolynomial& d) {
  if (p.dim() != d.dim())
    throw input_error("morphological_erosion: dimension mismatch");
  LatticePolynomial out(p.dim());
  if (p.empty() || d.empty()) return out;
  std::vector<Eigen::VectorXd> p_degs, d_degs;
  for (const auto& [j, v] : p.coeffs()) p_degs.push_back(detail::key_to_vec(j));
  for (const auto& [j, v] : d.coeffs()) d_degs.push_back(detail::key_to_vec(j));
  DegreeKey p_lo, p_hi, d_lo, d_hi;
  detail::lattice_bounds(p_degs, p_lo, p_hi);
  detail::lattice_bounds(d_degs, d_lo, d_hi);
  detail::for_each_lattice_point(
      sub_keys(p_lo, d_hi), sub_keys(p_hi, d_lo), [&](const DegreeKey& x) {
        double val = std::numeric_limits<double>::infinity();
        for (const auto& [c, dc] : d.coeffs()) {
          const double h = p.at_or_neg_inf(add_keys(x, c));
          if (h == kNegInf) return;  // erased
          val = std::min(val, h - dc);
        }
        out.set(x, val);
      });
  return out;
}

// Morphological opening: dilation of the erosion by n_d,
// (delta eps)(y) = sup_c { eps(y-c) + n_d(c) }.
inline LatticePolynomial opening_oracle(const LatticePolynomial& p,
                                        const LatticePolynomial& d) {
  const LatticePolynomial eps = morphological_erosion(p, d);
  LatticePolynomial out(p.dim());
  if (eps.empty()) return out;
  for (const auto& [x, ex] : eps.coeffs()) {
    for (const auto& [c, dc] : d.coeffs()) {
      const DegreeKey y = add_keys(x, c);
      const double v = ex + dc;
      if (!out.contains(y) || out.at(y) < v) out.set(y, v);
    }
  }
  return out;
}

// Samples random points and checks p(x) >= max(q(x) + d(x), r(x)) up to
// tolerance. Empty quotient or remainder evaluates to -infinity.
inline bool verify_inequality(const TropicalPolynomial& p,
                              const LatticePolynomial& q,
                              const TropicalPolynomial& d,
                              const TropicalPolynomial& r, int samples,
                              std::uint64_t seed = 0, double box = 5.0) {
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd x(p.dim());
    for (int k = 0; k < p.dim(); ++k) x[k] = rng.uniform(-box, box);
    const double lhs = p.eval(x);
    const double qd = q.eval_or_neg_inf(x) + d.eval(x);
    const double rhs = std::max(qd, r.eval_or_neg_inf(x));
    if (lhs < rhs - kTol) return false;
  }
  return true;
}

}  // namespace tropdiv
