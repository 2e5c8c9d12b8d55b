#pragma once

#include <Eigen/Dense>
#include <optional>
#include <set>
#include <vector>

#include "tropdiv/common.hpp"
#include "tropdiv/lattice.hpp"
#include "tropdiv/simplex.hpp"
#include "tropdiv/tropical.hpp"

namespace tropdiv {

// A point (a_i, b_i) of the extended Newton polytope: degree plus height.
struct ExtendedPoint {
  Eigen::VectorXd degree;
  double height = 0.0;
};

// Newton polytope given by its generating points (convex hull implied).
class NewtonPolytope {
 public:
  NewtonPolytope(int dim, std::vector<Eigen::VectorXd> points)
      : dim_(dim), points_(std::move(points)) {
    if (dim <= 0) throw input_error("NewtonPolytope: dim must be positive");
    if (points_.empty())
      throw input_error("NewtonPolytope: point set must be nonempty");
    for (const auto& p : points_)
      if (p.size() != dim)
        throw input_error("NewtonPolytope: point dimension mismatch");
  }

  static NewtonPolytope from_polynomial(const TropicalPolynomial& p) {
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(p.terms().size());
    for (const Term& t : p.terms()) pts.push_back(t.degree);
    return NewtonPolytope(p.dim(), std::move(pts));
  }

  int dim() const { return dim_; }
  const std::vector<Eigen::VectorXd>& points() const { return points_; }

 private:
  int dim_;
  std::vector<Eigen::VectorXd> points_;
};

inline std::vector<ExtendedPoint> extended_points(const TropicalPolynomial& p) {
  std::vector<ExtendedPoint> pts;
  pts.reserve(p.terms().size());
  for (const Term& t : p.terms()) pts.push_back({t.degree, t.coeff});
  return pts;
}

inline std::vector<ExtendedPoint> extended_points(const LatticePolynomial& p) {
  std::vector<ExtendedPoint> pts;
  pts.reserve(p.size());
  for (const auto& [j, v] : p.coeffs()) {
    Eigen::VectorXd a(p.dim());
    for (int k = 0; k < p.dim(); ++k) a[k] = j[k];
    pts.push_back({a, v});
  }
  return pts;
}

// Height n_p(j) of the upper hull of the extended point set above degree j:
//   max  sum_k lambda_k b_k
//   s.t. sum_k lambda_k a_k = j,  sum_k lambda_k = 1,  lambda >= 0.
// Returns nullopt when j lies outside the convex hull of the degrees.
inline std::optional<double> upper_hull_height(
    const std::vector<ExtendedPoint>& points, const Eigen::VectorXd& j) {
  if (points.empty())
    throw input_error("upper_hull_height: empty point set");
  const int dim = static_cast<int>(j.size());
  const int k = static_cast<int>(points.size());
  LPProblem lp;
  lp.maximize = true;
  lp.objective.resize(k);
  lp.eq_lhs.resize(dim + 1, k);
  lp.eq_rhs.resize(dim + 1);
  for (int t = 0; t < k; ++t) {
    if (points[t].degree.size() != dim)
      throw input_error("upper_hull_height: point dimension mismatch");
    lp.objective[t] = points[t].height;
    lp.eq_lhs.block(0, t, dim, 1) = points[t].degree;
    lp.eq_lhs(dim, t) = 1.0;
  }
  lp.eq_rhs.head(dim) = j;
  lp.eq_rhs[dim] = 1.0;
  const LPSolution sol = lp_solve(lp);
  if (sol.status == LPStatus::Infeasible) return std::nullopt;
  if (sol.status != LPStatus::Optimal)
    throw numeric_error("upper_hull_height: LP did not reach optimality");
  return sol.value;
}

// Closed-hull membership: true iff j lies in conv(points). Boundary counts
// as inside.
inline bool contains(const NewtonPolytope& poly, const Eigen::VectorXd& j) {
  if (j.size() != poly.dim())
    throw input_error("contains: dimension mismatch");
  std::vector<ExtendedPoint> pts;
  pts.reserve(poly.points().size());
  for (const auto& a : poly.points()) pts.push_back({a, 0.0});
  return upper_hull_height(pts, j).has_value();
}

namespace detail {

inline void lattice_bounds(const std::vector<Eigen::VectorXd>& pts,
                           DegreeKey& lo, DegreeKey& hi) {
  const int dim = static_cast<int>(pts.front().size());
  lo.assign(dim, 0);
  hi.assign(dim, 0);
  for (int k = 0; k < dim; ++k) {
    double mn = pts.front()[k], mx = pts.front()[k];
    for (const auto& p : pts) {
      mn = std::min(mn, p[k]);
      mx = std::max(mx, p[k]);
    }
    lo[k] = static_cast<int>(std::ceil(mn - kTol));
    hi[k] = static_cast<int>(std::floor(mx + kTol));
  }
}

// Visits every integer vector in the box [lo, hi] in lexicographic order.
template <typename Fn>
void for_each_lattice_point(const DegreeKey& lo, const DegreeKey& hi, Fn&& fn) {
  const int dim = static_cast<int>(lo.size());
  for (int k = 0; k < dim; ++k)
    if (lo[k] > hi[k]) return;
  DegreeKey j = lo;
  for (;;) {
    fn(j);
    int k = dim - 1;
    while (k >= 0 && j[k] == hi[k]) {
      j[k] = lo[k];
      --k;
    }
    if (k < 0) break;
    ++j[k];
  }
}

inline Eigen::VectorXd key_to_vec(const DegreeKey& j) {
  Eigen::VectorXd v(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) v[k] = j[k];
  return v;
}

}  // namespace detail

// All integer shifts c such that c + Newt(d) fits inside Newt(p). The search
// box is the coordinate-wise range difference of the two polytopes, which
// contains every feasible shift; each candidate is verified by testing all
// generator points of d.
inline std::vector<DegreeKey> valid_shifts(const NewtonPolytope& d_poly,
                                           const NewtonPolytope& p_poly) {
  if (d_poly.dim() != p_poly.dim())
    throw input_error("valid_shifts: dimension mismatch");
  DegreeKey p_lo, p_hi, d_lo, d_hi;
  detail::lattice_bounds(p_poly.points(), p_lo, p_hi);
  detail::lattice_bounds(d_poly.points(), d_lo, d_hi);
  const DegreeKey lo = sub_keys(p_lo, d_lo);
  const DegreeKey hi = sub_keys(p_hi, d_hi);
  std::vector<DegreeKey> shifts;
  detail::for_each_lattice_point(lo, hi, [&](const DegreeKey& c) {
    const Eigen::VectorXd cv = detail::key_to_vec(c);
    for (const auto& v : d_poly.points())
      if (!contains(p_poly, cv + v)) return;
    shifts.push_back(c);
  });
  return shifts;
}

// Zonotope generators of one signed part of a two-layer network: generator k
// is the extended segment from the origin to scales_k * (weights_k, biases_k).
// Zero-scale generators degenerate to a point and are dropped.
inline std::vector<ExtendedPoint> zonotope_generators(
    const Eigen::MatrixXd& weights, const Eigen::VectorXd& biases,
    const Eigen::VectorXd& scales) {
  if (weights.rows() != biases.size() || weights.rows() != scales.size())
    throw input_error("zonotope_generators: inconsistent shapes");
  std::vector<ExtendedPoint> gens;
  for (int i = 0; i < scales.size(); ++i) {
    if (scales[i] < 0.0)
      throw input_error("zonotope_generators: scales must be nonnegative");
    if (scales[i] == 0.0) continue;
    gens.push_back({scales[i] * weights.row(i).transpose(),
                    scales[i] * biases[i]});
  }
  return gens;
}

// Indices of points that are vertices of the upper hull: excluding the point
// must lower (or remove) the hull height at its degree.
inline std::vector<int> upper_hull_vertices(
    const std::vector<ExtendedPoint>& points) {
  std::vector<int> verts;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<ExtendedPoint> rest;
    rest.reserve(points.size() - 1);
    for (std::size_t k = 0; k < points.size(); ++k)
      if (k != i) rest.push_back(points[k]);
    if (rest.empty()) {
      verts.push_back(static_cast<int>(i));
      continue;
    }
    const auto h = upper_hull_height(rest, points[i].degree);
    if (!h.has_value() || *h < points[i].height - kTol)
      verts.push_back(static_cast<int>(i));
  }
  return verts;
}

// Canonical lattice form of an integer-degree tropical polynomial: the key
// set becomes every lattice point of the (closed) Newton polytope and each
// coefficient the upper-hull height there. Evaluation is unchanged.
inline LatticePolynomial canonicalize(const TropicalPolynomial& p,
                                      double tol = kTol) {
  if (p.is_bottom()) return LatticePolynomial(p.dim());
  std::vector<Eigen::VectorXd> degs;
  for (const Term& t : p.terms()) {
    const DegreeKey j = to_lattice(t.degree, tol);  // validates integrality
    degs.push_back(detail::key_to_vec(j));
  }
  std::vector<ExtendedPoint> pts;
  pts.reserve(degs.size());
  for (std::size_t i = 0; i < degs.size(); ++i)
    pts.push_back({degs[i], p.terms()[i].coeff});
  DegreeKey lo, hi;
  detail::lattice_bounds(degs, lo, hi);
  LatticePolynomial out(p.dim());
  detail::for_each_lattice_point(lo, hi, [&](const DegreeKey& j) {
    const auto h = upper_hull_height(pts, detail::key_to_vec(j));
    if (h.has_value()) out.set(j, *h);
  });
  return out;
}

}  // namespace tropdiv
