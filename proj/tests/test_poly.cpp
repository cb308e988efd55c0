#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "doctest.h"
#include "mppose/poly.hpp"

using namespace mppose;

namespace {

// Reference root finder used to check the closed-form solver: eigenvalues of
// the top-row companion matrix, no balancing, no polishing.
std::vector<double> companion_real_roots(const std::vector<double>& c) {
  int n = static_cast<int>(c.size()) - 1;
  REQUIRE(n >= 1);
  REQUIRE(c[static_cast<size_t>(n)] != 0.0);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) M(0, j) = -c[static_cast<size_t>(n - 1 - j)] / c[static_cast<size_t>(n)];
  for (int i = 1; i < n; ++i) M(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  REQUIRE(es.info() == Eigen::Success);
  std::vector<double> out;
  double max_mag = 1.0;
  for (int i = 0; i < n; ++i)
    max_mag = std::max(max_mag, std::abs(es.eigenvalues()(i)));
  for (int i = 0; i < n; ++i) {
    if (std::abs(es.eigenvalues()(i).imag()) <= 1e-7 * max_mag)
      out.push_back(es.eigenvalues()(i).real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> expand_roots(const std::vector<double>& roots,
                                 double lead = 1.0) {
  std::vector<double> c{lead};
  for (double r : roots) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = next;
  }
  return c;
}

bool contains_close(const std::vector<double>& xs, double v, double tol) {
  for (double x : xs)
    if (std::abs(x - v) <= tol) return true;
  return false;
}

// Circle (x-a)^2 + (y-b)^2 = r^2 as a conic grid.
Poly2 circle_conic(double a, double b, double r) {
  Poly2 q(2, 2);
  q.coeff(0, 0) = a * a + b * b - r * r;
  q.coeff(1, 0) = -2.0 * a;
  q.coeff(0, 1) = -2.0 * b;
  q.coeff(2, 0) = 1.0;
  q.coeff(0, 2) = 1.0;
  return q;
}

// Closed-form circle-circle intersection, radical-line construction.
std::optional<std::array<std::pair<double, double>, 2>> circle_circle(
    double ax, double ay, double r1, double bx, double by, double r2) {
  double dx = bx - ax, dy = by - ay;
  double d = std::hypot(dx, dy);
  if (d < 1e-12) return std::nullopt;
  double along = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
  double h2 = r1 * r1 - along * along;
  if (h2 < 0.0) return std::nullopt;
  double h = std::sqrt(h2);
  double ux = dx / d, uy = dy / d;
  double px = ax + along * ux, py = ay + along * uy;
  return std::array<std::pair<double, double>, 2>{
      std::pair<double, double>{px - h * uy, py + h * ux},
      std::pair<double, double>{px + h * uy, py - h * ux}};
}

}  // namespace

TEST_CASE("poly1 arithmetic agrees with pointwise evaluation") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int it = 0; it < 200; ++it) {
    Poly1 a({u(rng), u(rng), u(rng), u(rng)});
    Poly1 b({u(rng), u(rng), u(rng)});
    double x = u(rng);
    CHECK((a + b).eval(x) == doctest::Approx(a.eval(x) + b.eval(x)).epsilon(1e-12));
    CHECK((a - b).eval(x) == doctest::Approx(a.eval(x) - b.eval(x)).epsilon(1e-12));
    CHECK((a * b).eval(x) == doctest::Approx(a.eval(x) * b.eval(x)).epsilon(1e-12));
    CHECK((3.5 * a).eval(x) == doctest::Approx(3.5 * a.eval(x)).epsilon(1e-12));
  }
  // Product rule holds coefficientwise.
  Poly1 a({1.0, -2.0, 3.0});
  Poly1 b({0.5, 4.0});
  Poly1 lhs = (a * b).derivative();
  Poly1 rhs = a.derivative() * b + a * b.derivative();
  for (int i = 0; i <= std::max(lhs.degree(), rhs.degree()); ++i)
    CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-14));
}

TEST_CASE("poly1 trim and degree bookkeeping") {
  Poly1 p({1.0, 2.0, 0.0, 0.0});
  CHECK(p.degree() == 3);
  p.trim(0.0);
  CHECK(p.degree() == 1);
  Poly1 noisy({1.0, 1e-16, 0.0, 1e-15});
  noisy.trim(1e-13);
  CHECK(noisy.degree() == 0);
  CHECK_THROWS_AS(Poly1(std::vector<double>(18, 1.0)), ShapeError);
}

TEST_CASE("poly2 slices are consistent with evaluation") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Poly2 q(3, 2);
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; j <= 2; ++j) q.coeff(i, j) = u(rng);
  for (int it = 0; it < 50; ++it) {
    double x = u(rng), y = u(rng);
    double via_x = 0.0;
    for (int i = 0; i <= q.deg_x(); ++i)
      via_x += q.coeff_of_x(i).eval(y) * std::pow(x, i);
    double via_y = 0.0;
    for (int j = 0; j <= q.deg_y(); ++j)
      via_y += q.coeff_of_y(j).eval(x) * std::pow(y, j);
    CHECK(q.eval(x, y) == doctest::Approx(via_x).epsilon(1e-12));
    CHECK(q.eval(x, y) == doctest::Approx(via_y).epsilon(1e-12));

    Poly2 p = Poly2::affine(1.0, 2.0, -3.0);
    CHECK(p.eval(x, y) == doctest::Approx(1.0 + 2.0 * x - 3.0 * y));
    double h = 1e-6;
    CHECK(q.derivative_x().eval(x, y) ==
          doctest::Approx((q.eval(x + h, y) - q.eval(x - h, y)) / (2 * h))
              .epsilon(1e-5));
    CHECK(q.derivative_y().eval(x, y) ==
          doctest::Approx((q.eval(x, y + h) - q.eval(x, y - h)) / (2 * h))
              .epsilon(1e-5));
  }
}

TEST_CASE("solve_quartic hand cases") {
  auto r1 = solve_quartic(Poly1({-1.0, 0.0, 0.0, 0.0, 1.0}));  // x^4 - 1
  REQUIRE(r1.size() == 2);
  CHECK(r1[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(r1[1] == doctest::Approx(1.0).epsilon(1e-12));

  // (x-1)(x-2)(x-3)(x-4)
  auto r2 = solve_quartic(Poly1({24.0, -50.0, 35.0, -10.0, 1.0}));
  REQUIRE(r2.size() == 4);
  for (int k = 0; k < 4; ++k)
    CHECK(r2[static_cast<size_t>(k)] == doctest::Approx(k + 1.0).epsilon(1e-10));

  // Biquadratic x^4 - 5x^2 + 4 = (x^2-1)(x^2-4)
  auto r3 = solve_quartic(Poly1({4.0, 0.0, -5.0, 0.0, 1.0}));
  REQUIRE(r3.size() == 4);
  CHECK(r3[0] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(r3[1] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(r3[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r3[3] == doctest::Approx(2.0).epsilon(1e-12));

  // (x-1)^2 (x^2+1): double real root, complex pair dropped.
  auto r4 = solve_quartic(Poly1({1.0, -2.0, 2.0, -2.0, 1.0}));
  REQUIRE(!r4.empty());
  for (double r : r4) CHECK(r == doctest::Approx(1.0).epsilon(1e-5));

  // Scaling the polynomial does not move the roots.
  auto r5 = solve_quartic(Poly1({24.0 * 7, -50.0 * 7, 35.0 * 7, -70.0, 7.0}));
  REQUIRE(r5.size() == 4);
  for (int k = 0; k < 4; ++k)
    CHECK(r5[static_cast<size_t>(k)] == doctest::Approx(k + 1.0).epsilon(1e-10));
}

TEST_CASE("solve_quartic low-degree dispatch and rejects") {
  auto lin = solve_quartic(Poly1({1.0, 2.0}));
  REQUIRE(lin.size() == 1);
  CHECK(lin[0] == doctest::Approx(-0.5));

  auto quad = solve_quartic(Poly1({-6.0, 1.0, 1.0}));  // (x+3)(x-2)
  REQUIRE(quad.size() == 2);
  CHECK(quad[0] == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(quad[1] == doctest::Approx(2.0).epsilon(1e-12));

  auto cub3 = solve_quartic(Poly1({0.0, -1.0, 0.0, 1.0}));  // x^3 - x
  REQUIRE(cub3.size() == 3);
  CHECK(cub3[0] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(std::abs(cub3[1]) < 1e-10);
  CHECK(cub3[2] == doctest::Approx(1.0).epsilon(1e-10));

  auto cub1 = solve_quartic(Poly1({-2.0, 0.0, 0.0, 1.0}));  // x^3 - 2
  REQUIRE(cub1.size() == 1);
  CHECK(cub1[0] == doctest::Approx(std::cbrt(2.0)).epsilon(1e-12));

  CHECK(solve_quartic(Poly1({5.0})).empty());
  CHECK_THROWS_AS(solve_quartic(Poly1({0.0, 0.0})), InvalidPolynomial);
  CHECK_THROWS_AS(solve_quartic(Poly1({0, 0, 0, 0, 0, 1.0})), InvalidPolynomial);
}

TEST_CASE("solve_quartic recovers constructed roots") {
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> lead(0.2, 3.0);
  int tested = 0;
  for (int it = 0; it < 5000; ++it) {
    std::vector<double> roots{u(rng), u(rng), u(rng), u(rng)};
    std::sort(roots.begin(), roots.end());
    double gap = 1e9;
    for (int i = 0; i < 3; ++i)
      gap = std::min(gap, roots[static_cast<size_t>(i + 1)] - roots[static_cast<size_t>(i)]);
    if (gap < 1e-2) continue;
    ++tested;
    double sign = (it % 2 == 0) ? 1.0 : -1.0;
    auto coeffs = expand_roots(roots, sign * lead(rng));
    auto got = solve_quartic(Poly1(coeffs));
    REQUIRE(got.size() == 4);
    for (int i = 0; i < 4; ++i)
      CHECK(got[static_cast<size_t>(i)] ==
            doctest::Approx(roots[static_cast<size_t>(i)]).epsilon(1e-8));
  }
  CHECK(tested > 4000);
}

TEST_CASE("solve_quartic agrees with the companion reference on random coefficients") {
  std::mt19937 rng(44);
  std::normal_distribution<double> g(0.0, 1.0);
  int compared = 0;
  for (int it = 0; it < 3000; ++it) {
    std::vector<double> c{g(rng), g(rng), g(rng), g(rng), g(rng)};
    if (std::abs(c[4]) < 0.05) continue;
    Poly1 p(c);
    auto mine = solve_quartic(p);
    auto ref = companion_real_roots(c);
    double max_c = 0.0;
    for (double v : c) max_c = std::max(max_c, std::abs(v));
    Poly1 dp = p.derivative();

    // Compare only well-conditioned reference roots; every such root must be
    // matched by the closed-form solver.
    for (double r : ref) {
      double box = std::max(1.0, std::abs(r));
      if (std::abs(dp.eval(r)) < 1e-3 * max_c * box * box * box) continue;
      ++compared;
      CHECK(contains_close(mine, r, 1e-7 * box));
    }
    // And every root the solver returns must actually be a root.
    for (double r : mine) {
      double box = std::max(1.0, std::abs(r));
      CHECK(std::abs(p.eval(r)) <= 1e-8 * max_c * box * box * box * box);
    }
  }
  CHECK(compared > 2000);
}

TEST_CASE("solve_octic hand cases") {
  std::vector<double> c(9, 0.0);
  c[0] = -256.0;
  c[8] = 1.0;
  auto r = solve_octic(Poly1(c));  // x^8 = 256
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(r[1] == doctest::Approx(2.0).epsilon(1e-10));

  std::vector<double> roots{1, 2, 3, 4, 5, 6, 7, 8};
  auto got = solve_octic(Poly1(expand_roots(roots)));
  REQUIRE(got.size() == 8);
  for (int i = 0; i < 8; ++i)
    CHECK(got[static_cast<size_t>(i)] ==
          doctest::Approx(roots[static_cast<size_t>(i)]).epsilon(1e-6));

  // x^5 - 4x^3 = x^3 (x-2)(x+2): zeros at the origin come back as roots.
  auto z = solve_octic(Poly1({0, 0, 0, -4.0, 0, 1.0}));
  REQUIRE(z.size() == 5);
  CHECK(z[0] == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(z[1] == 0.0);
  CHECK(z[2] == 0.0);
  CHECK(z[3] == 0.0);
  CHECK(z[4] == doctest::Approx(2.0).epsilon(1e-10));

  CHECK(solve_octic(Poly1({3.0})).empty());
  CHECK_THROWS_AS(solve_octic(Poly1({0.0})), InvalidPolynomial);
}

TEST_CASE("solve_octic matches solve_quartic on shared inputs") {
  std::mt19937 rng(45);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int it = 0; it < 500; ++it) {
    std::vector<double> roots{u(rng), u(rng), u(rng), u(rng)};
    std::sort(roots.begin(), roots.end());
    double gap = 1e9;
    for (int i = 0; i < 3; ++i)
      gap = std::min(gap, roots[static_cast<size_t>(i + 1)] - roots[static_cast<size_t>(i)]);
    if (gap < 1e-2) continue;
    Poly1 p(expand_roots(roots));
    auto a = solve_quartic(p);
    auto b = solve_octic(p);
    REQUIRE(a.size() == 4);
    REQUIRE(b.size() == 4);
    for (int i = 0; i < 4; ++i)
      CHECK(a[static_cast<size_t>(i)] ==
            doctest::Approx(b[static_cast<size_t>(i)]).epsilon(1e-8));
  }
}

TEST_CASE("intersect_quadrics on two unit circles") {
  auto pts = intersect_quadrics(circle_conic(0, 0, 1), circle_conic(1, 0, 1));
  REQUIRE(pts.size() == 2);
  double s3 = std::sqrt(3.0) / 2.0;
  CHECK(pts[0].first == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(pts[0].second == doctest::Approx(-s3).epsilon(1e-9));
  CHECK(pts[1].first == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(pts[1].second == doctest::Approx(s3).epsilon(1e-9));
}

TEST_CASE("intersect_quadrics on tangent and disjoint circles") {
  auto touch = intersect_quadrics(circle_conic(0, 0, 1), circle_conic(2, 0, 1));
  REQUIRE(touch.size() == 1);
  CHECK(touch[0].first == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(touch[0].second) < 1e-6);

  auto none = intersect_quadrics(circle_conic(0, 0, 1), circle_conic(0, 0, 2));
  CHECK(none.empty());
}

TEST_CASE("intersect_quadrics degenerate branches") {
  // q1 linear in y: parabola y = x^2 against the unit circle.
  Poly2 parab(2, 1);
  parab.coeff(0, 1) = 1.0;
  parab.coeff(2, 0) = -1.0;
  auto pts = intersect_quadrics(parab, circle_conic(0, 0, 1));
  REQUIRE(pts.size() == 2);
  double xg = std::sqrt((std::sqrt(5.0) - 1.0) / 2.0);
  CHECK(pts[0].first == doctest::Approx(-xg).epsilon(1e-9));
  CHECK(pts[1].first == doctest::Approx(xg).epsilon(1e-9));
  CHECK(pts[0].second == doctest::Approx(xg * xg).epsilon(1e-9));
  CHECK(pts[1].second == doctest::Approx(xg * xg).epsilon(1e-9));

  // q1 free of y: vertical line pair x^2 = 1 against the unit circle.
  Poly2 lines(2, 0);
  lines.coeff(0, 0) = -1.0;
  lines.coeff(2, 0) = 1.0;
  auto tang = intersect_quadrics(lines, circle_conic(0, 0, 1));
  REQUIRE(tang.size() == 2);
  CHECK(tang[0].first == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(std::abs(tang[0].second) < 1e-6);
  CHECK(tang[1].first == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(tang[1].second) < 1e-6);
}

TEST_CASE("intersect_quadrics rejects bad shapes") {
  Poly2 zero(2, 2);
  CHECK_THROWS_AS(intersect_quadrics(zero, circle_conic(0, 0, 1)),
                  DegenerateSystem);

  Poly2 cubic(2, 2);
  cubic.coeff(2, 1) = 1.0;
  cubic.coeff(0, 0) = -1.0;
  CHECK_THROWS_AS(intersect_quadrics(cubic, circle_conic(0, 0, 1)), ShapeError);

  Poly2 c = circle_conic(0, 0, 1);
  CHECK_THROWS_AS(intersect_quadrics(c, 2.0 * c), DegenerateSystem);
}

TEST_CASE("intersect_quadrics matches the circle-pair closed form") {
  std::mt19937 rng(46);
  std::uniform_real_distribution<double> pos(-2.0, 2.0);
  std::uniform_real_distribution<double> rad(0.5, 2.5);
  int checked = 0;
  for (int it = 0; it < 1000; ++it) {
    double ax = pos(rng), ay = pos(rng), bx = pos(rng), by = pos(rng);
    double r1 = rad(rng), r2 = rad(rng);
    double d = std::hypot(bx - ax, by - ay);
    // Keep only clearly transversal pairs.
    if (d < 0.05) continue;
    if (r1 + r2 - d < 0.05) continue;
    if (d - std::abs(r1 - r2) < 0.05) continue;
    auto ref = circle_circle(ax, ay, r1, bx, by, r2);
    REQUIRE(ref.has_value());
    auto got =
        intersect_quadrics(circle_conic(ax, ay, r1), circle_conic(bx, by, r2));
    REQUIRE(got.size() == 2);
    for (const auto& rp : *ref) {
      bool found = false;
      for (const auto& gp : got)
        found = found || (std::hypot(gp.first - rp.first,
                                     gp.second - rp.second) < 1e-7);
      CHECK(found);
    }
    ++checked;
  }
  CHECK(checked > 600);
}

TEST_CASE("eliminate_to_octic substitution semantics") {
  // Even in s: s^2 * t with s^2 = t^2 reduces to t^3, left unsquared.
  Poly2 even(2, 1);
  even.coeff(2, 1) = 1.0;
  Poly1 oct = eliminate_to_octic(even, Poly1({0.0, 0.0, 1.0}));
  CHECK(oct.degree() == 3);
  CHECK(oct[3] == doctest::Approx(1.0));
  CHECK(std::abs(oct[0]) + std::abs(oct[1]) + std::abs(oct[2]) == 0.0);

  // Mixed parity: s - t with s^2 = t squares to t^2 - t, roots {0, 1}.
  Poly2 mixed(1, 1);
  mixed.coeff(1, 0) = 1.0;
  mixed.coeff(0, 1) = -1.0;
  Poly1 sq = eliminate_to_octic(mixed, Poly1({0.0, 1.0}));
  auto roots = solve_quartic(sq);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(roots[1] == doctest::Approx(1.0).epsilon(1e-12));

  // s^2 - kappa(t) with the matching kappa collapses identically.
  Poly2 collapse(2, 1);
  collapse.coeff(2, 0) = 1.0;
  collapse.coeff(0, 1) = -1.0;  // s^2 - t
  CHECK_THROWS_AS(eliminate_to_octic(collapse, Poly1({0.0, 1.0})),
                  DegenerateSystem);

  Poly2 zero(1, 1);
  CHECK_THROWS_AS(eliminate_to_octic(zero, Poly1({0.0, 1.0})),
                  DegenerateSystem);

  Poly2 deep(5, 0);
  deep.coeff(5, 0) = 1.0;
  CHECK_THROWS_AS(eliminate_to_octic(deep, Poly1({0.0, 1.0})), ShapeError);
}

TEST_CASE("eliminate_to_octic roots are consistent with the surface") {
  // Random affine-in-(s, t) pairs squared through a quadratic s^2 law: every
  // real root of the octic with s^2 >= 0 must solve the original constraint
  // for one sign of s.
  std::mt19937 rng(47);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int it = 0; it < 300; ++it) {
    Poly2 constraint(2, 2);
    for (int i = 0; i <= 2; ++i)
      for (int j = 0; j <= 2; ++j)
        if (i + j <= 2) constraint.coeff(i, j) = u(rng);
    Poly1 s2({std::abs(u(rng)) + 0.5, u(rng) * 0.1, u(rng) * 0.1});
    Poly1 oct;
    try {
      oct = eliminate_to_octic(constraint, s2);
    } catch (const DegenerateSystem&) {
      continue;
    }
    std::vector<double> roots;
    try {
      roots = solve_octic(oct);
    } catch (const InvalidPolynomial&) {
      continue;
    }
    double cscale = constraint.max_abs_coeff();
    for (double t : roots) {
      double k = s2.eval(t);
      if (k < 1e-8) continue;
      if (std::abs(t) > 50.0) continue;
      double s = std::sqrt(k);
      double v1 = constraint.eval(s, t);
      double v2 = constraint.eval(-s, t);
      double box = std::max({1.0, s, std::abs(t)});
      double tol = 1e-6 * cscale * box * box * box * box;
      CHECK(std::min(std::abs(v1), std::abs(v2)) <= tol);
    }
  }
}
