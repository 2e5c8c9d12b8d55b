#include <catch2/catch_amalgamated.hpp>

#include "support/generators.hpp"
#include "tropdiv/lattice.hpp"
#include "tropdiv/polytope.hpp"
#include "tropdiv/tropical.hpp"

using namespace tropdiv;
using testsupport::poly1d;
using testsupport::poly2d;

namespace {

Eigen::VectorXd pt1(double x) {
  Eigen::VectorXd v(1);
  v[0] = x;
  return v;
}

Eigen::VectorXd pt2(double x, double y) {
  Eigen::VectorXd v(2);
  v << x, y;
  return v;
}

bool same_coeffs(const LatticePolynomial& a, const std::map<int, double>& want) {
  if (a.size() != want.size()) return false;
  for (const auto& [j, v] : want) {
    if (!a.contains({j})) return false;
    if (std::abs(a.at({j}) - v) > 1e-9) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("eval takes the max over affine terms") {
  const auto p = poly1d({{3, 0}, {2, 1.5}, {1, 1}, {0, 0}});
  CHECK(p.eval(pt1(1.0)) == Catch::Approx(3.5));

  const auto constant = poly1d({{0, 0}});
  CHECK(constant.eval(pt1(17.0)) == 0.0);
  CHECK(constant.eval(pt1(-3.0)) == 0.0);

  const auto q = poly2d({{2, 0, 0}, {1, 1, 1}, {1, 0, 1}, {0, 1, 1}, {0, 0, 1}});
  CHECK(q.eval(pt2(0.0, 0.0)) == Catch::Approx(1.0));
}

TEST_CASE("eval rejects bad inputs") {
  const auto p = poly1d({{1, 0}});
  CHECK_THROWS_AS(p.eval(pt2(0, 0)), input_error);
  CHECK_THROWS_AS(TropicalPolynomial::bottom(1).eval(pt1(0)), bottom_error);
}

TEST_CASE("tropical_sum unions terms and collapses duplicates") {
  const auto p = poly1d({{1, 0}, {0, 0}});
  const auto sum = tropical_sum(p, p);
  CHECK(sum.terms().size() == 2);  // idempotent

  const auto disjoint = tropical_sum(poly1d({{1, 1}}), poly1d({{0, 0}}));
  REQUIRE(disjoint.terms().size() == 2);
  CHECK(disjoint.terms()[0].coeff == 0.0);
  CHECK(disjoint.terms()[1].coeff == 1.0);

  // Duplicate degree keeps the larger coefficient.
  const auto collapsed = tropical_sum(poly1d({{1, 1}, {0, 0}}), poly1d({{1, 0}}));
  REQUIRE(collapsed.terms().size() == 2);
  CHECK(collapsed.terms()[1].coeff == 1.0);
}

TEST_CASE("tropical_product is pointwise addition") {
  const auto p = poly1d({{1, 0}, {0, 0}});
  const auto id = tropical_product(p, poly1d({{0, 0}}));
  REQUIRE(id.terms().size() == 2);
  CHECK(id.eval(pt1(2.0)) == Catch::Approx(p.eval(pt1(2.0))));

  // q * d reconstructs the worked dividend max(3x, 2x+1.5, x+1, 0).
  const auto q = poly1d({{2, -1}, {1, 0.5}, {0, 0}});
  const auto d = poly1d({{1, 1}, {0, 0}});
  const auto prod = tropical_product(q, d);
  REQUIRE(prod.terms().size() == 4);
  CHECK(prod.terms()[0].coeff == Catch::Approx(0.0));
  CHECK(prod.terms()[1].coeff == Catch::Approx(1.0));
  CHECK(prod.terms()[2].coeff == Catch::Approx(1.5));
  CHECK(prod.terms()[3].coeff == Catch::Approx(0.0));

  const auto sq = tropical_product(p, p);
  REQUIRE(sq.terms().size() == 3);  // {2x, x, 0}
}

TEST_CASE("sum/product evaluation identities at random points") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 1 + rng.uniform_int(3);
    const auto p = testsupport::random_real_poly(rng, dim, 2 + rng.uniform_int(5));
    const auto q = testsupport::random_real_poly(rng, dim, 2 + rng.uniform_int(5));
    const auto s = tropical_sum(p, q);
    const auto m = tropical_product(p, q);
    for (int i = 0; i < 50; ++i) {
      const Eigen::VectorXd x = testsupport::random_point(rng, dim);
      CHECK(s.eval(x) == Catch::Approx(std::max(p.eval(x), q.eval(x))).margin(1e-9));
      CHECK(m.eval(x) == Catch::Approx(p.eval(x) + q.eval(x)).margin(1e-9));
    }
  }
}

TEST_CASE("maxplus_convolution matches the defining formula") {
  const auto q = LatticePolynomial::from_map_1d({{0, 0}, {1, 0.5}, {2, -1}});
  const auto d = LatticePolynomial::from_map_1d({{0, 0}, {1, 1}});
  CHECK(same_coeffs(maxplus_convolution(q, d),
                    {{0, 0}, {1, 1}, {2, 1.5}, {3, 0}}));

  // Convolving with the tropical unit is the identity.
  const auto unit = LatticePolynomial::from_map_1d({{0, 0}});
  CHECK(same_coeffs(maxplus_convolution(unit, d), {{0, 0}, {1, 1}}));

  const auto q2 = LatticePolynomial::from_map_1d({{0, 0}, {1, 1}, {2, 0}});
  const auto d2 = LatticePolynomial::from_map_1d({{0, 0}, {1, 0}});
  CHECK(same_coeffs(maxplus_convolution(q2, d2),
                    {{0, 0}, {1, 1}, {2, 1}, {3, 0}}));
}

TEST_CASE("maxplus_convolution is commutative and associative") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = 1 + rng.uniform_int(2);
    auto random_lattice = [&](int terms) {
      LatticePolynomial out(dim);
      for (int t = 0; t < terms; ++t) {
        DegreeKey j(dim);
        for (int k = 0; k < dim; ++k) j[k] = rng.uniform_int(4);
        out.set(j, rng.uniform(-5.0, 5.0));
      }
      return out;
    };
    const auto a = random_lattice(1 + rng.uniform_int(4));
    const auto b = random_lattice(1 + rng.uniform_int(4));
    const auto c = random_lattice(1 + rng.uniform_int(4));
    const auto ab = maxplus_convolution(a, b);
    const auto ba = maxplus_convolution(b, a);
    REQUIRE(ab.size() == ba.size());
    for (const auto& [j, v] : ab.coeffs())
      CHECK(ba.at(j) == Catch::Approx(v).margin(1e-9));
    const auto ab_c = maxplus_convolution(ab, c);
    const auto a_bc = maxplus_convolution(a, maxplus_convolution(b, c));
    REQUIRE(ab_c.size() == a_bc.size());
    for (const auto& [j, v] : ab_c.coeffs())
      CHECK(a_bc.at(j) == Catch::Approx(v).margin(1e-9));
  }
}

TEST_CASE("maxplus_convolution agrees with tropical_product on shared keys") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 1 + rng.uniform_int(2);
    const auto p = testsupport::random_lattice_poly(rng, dim, 3, 3);
    const auto q = testsupport::random_lattice_poly(rng, dim, 3, 3);
    const auto conv = maxplus_convolution(canonicalize(p), canonicalize(q));
    const auto prod_canon = canonicalize(tropical_product(p, q));
    for (const auto& [j, v] : prod_canon.coeffs()) {
      REQUIRE(conv.contains(j));
      CHECK(conv.at(j) <= v + 1e-9);  // canonical value is the hull height
    }
    // Hull vertices of the product must be realized by the convolution.
    const auto pts = extended_points(prod_canon);
    for (int vi : upper_hull_vertices(pts)) {
      const DegreeKey j = to_lattice(pts[vi].degree);
      CHECK(conv.at(j) == Catch::Approx(pts[vi].height).margin(1e-9));
    }
  }
}

TEST_CASE("canonicalize fills the Newton polytope with hull heights") {
  const auto canon = canonicalize(poly1d({{3, 0}, {2, 1.5}, {1, 1}, {0, 0}}));
  CHECK(same_coeffs(canon, {{0, 0}, {1, 1}, {2, 1.5}, {3, 0}}));

  // Interior lattice point gets the interpolated hull height.
  CHECK(same_coeffs(canonicalize(poly1d({{2, 0}, {0, 0}})),
                    {{0, 0}, {1, 0}, {2, 0}}));

  const auto single = canonicalize(poly1d({{4, 2.5}}));
  CHECK(same_coeffs(single, {{4, 2.5}}));
}

TEST_CASE("canonicalize drops dominated terms onto the hull") {
  // The x+0 term lies strictly below the hull of {2x+1, 0}.
  const auto canon = canonicalize(poly1d({{2, 1}, {1, 0}, {0, 0}}));
  CHECK(same_coeffs(canon, {{0, 0}, {1, 0.5}, {2, 1}}));
}

TEST_CASE("canonicalize rejects non-integer degrees") {
  CHECK_THROWS_AS(canonicalize(poly1d({{0.5, 1}})), lattice_error);
}

TEST_CASE("canonicalize is idempotent and preserves evaluation") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 1 + rng.uniform_int(2);
    const auto p = testsupport::random_lattice_poly(rng, dim, 4, 2 + rng.uniform_int(4));
    const auto canon = canonicalize(p);
    const auto canon2 = canonicalize(canon.to_polynomial());
    REQUIRE(canon.size() == canon2.size());
    for (const auto& [j, v] : canon.coeffs())
      CHECK(canon2.at(j) == Catch::Approx(v).margin(1e-9));
    const auto dense = canon.to_polynomial();
    for (int i = 0; i < 100; ++i) {
      const Eigen::VectorXd x = testsupport::random_point(rng, dim);
      CHECK(dense.eval(x) == Catch::Approx(p.eval(x)).margin(1e-9));
    }
  }
}
