#pragma once

#include <utility>
#include <vector>

#include "mppose/errors.hpp"

namespace mppose {

// Dense univariate polynomial, coefficients ascending by degree.  Degree is
// capped at 16 (the largest object the elimination pipeline produces).
class Poly1 {
 public:
  static constexpr int kMaxDegree = 16;

  Poly1() : c_(1, 0.0) {}
  explicit Poly1(std::vector<double> coeffs);
  static Poly1 monomial(int degree, double value = 1.0);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  // Coefficient of x^i; zero beyond the stored degree.
  double operator[](int i) const;
  double& at(int i) { return c_.at(static_cast<size_t>(i)); }
  const std::vector<double>& coeffs() const { return c_; }

  double eval(double x) const;  // Horner
  Poly1 derivative() const;
  double max_abs_coeff() const;
  bool is_zero(double rel_eps = 0.0) const;
  // Drops leading coefficients with |c| <= rel_eps * max|c_i|.
  Poly1& trim(double rel_eps = 1e-13);

  Poly1 operator-() const;
  friend Poly1 operator+(const Poly1& a, const Poly1& b);
  friend Poly1 operator-(const Poly1& a, const Poly1& b);
  friend Poly1 operator*(const Poly1& a, const Poly1& b);
  friend Poly1 operator*(double s, const Poly1& a);
  friend Poly1 operator*(const Poly1& a, double s) { return s * a; }
  Poly1& operator+=(const Poly1& b) { return *this = *this + b; }

 private:
  std::vector<double> c_;
};

Poly1 pow(const Poly1& p, int k);

// Dense bivariate polynomial with a coefficient grid; coeff(i, j) multiplies
// x^i y^j.  Degree capped at 8 per variable.
class Poly2 {
 public:
  static constexpr int kMaxDegree = 8;

  Poly2() : Poly2(0, 0) {}
  Poly2(int deg_x, int deg_y);
  static Poly2 constant(double v);
  // c0 + cx * x + cy * y
  static Poly2 affine(double c0, double cx, double cy);

  int deg_x() const { return static_cast<int>(c_.size()) - 1; }
  int deg_y() const { return static_cast<int>(c_.front().size()) - 1; }
  double coeff(int i, int j) const;
  double& coeff(int i, int j);

  double eval(double x, double y) const;
  Poly2 derivative_x() const;
  Poly2 derivative_y() const;
  // Coefficient of x^i as a polynomial in y, and vice versa.
  Poly1 coeff_of_x(int i) const;
  Poly1 coeff_of_y(int j) const;
  double max_abs_coeff() const;
  bool is_zero(double rel_eps = 0.0) const;
  // Shrinks the grid, dropping rows/columns whose entries are all
  // <= rel_eps * max|c|.
  Poly2& trim(double rel_eps = 1e-13);

  Poly2 operator-() const;
  friend Poly2 operator+(const Poly2& a, const Poly2& b);
  friend Poly2 operator-(const Poly2& a, const Poly2& b);
  friend Poly2 operator*(const Poly2& a, const Poly2& b);
  friend Poly2 operator*(double s, const Poly2& a);
  friend Poly2 operator*(const Poly2& a, double s) { return s * a; }
  Poly2& operator+=(const Poly2& b) { return *this = *this + b; }

 private:
  // c_[i][j] multiplies x^i y^j
  std::vector<std::vector<double>> c_;
};

// All real roots of a degree <= 4 polynomial, closed form (Ferrari for the
// quartic, trigonometric/Cardano resolvent for the cubic), each polished by
// at most 3 Newton steps, ascending.
std::vector<double> solve_quartic(const Poly1& p);

// All real roots via eigenvalues of the balanced companion matrix, polished
// and ascending.  Handles any degree the Poly1 cap admits.
std::vector<double> solve_octic(const Poly1& p);

// Real intersections of two conics in (x, y): solve q1 for y by the quadratic
// formula, substitute into q2, multiply the conjugate radical branches to get
// a quartic in x.  For each root the branch with the smaller |q2| wins.
// Every returned pair satisfies |q1|, |q2| <= 1e-7 relative to the
// coefficient scale.
std::vector<std::pair<double, double>> intersect_quadrics(const Poly2& q1,
                                                          const Poly2& q2);

// Eliminates s from constraint(s, x) = 0 given s^2 = s_squared(x): split into
// even/odd parts in s, substitute s^2 termwise, and clear the remaining
// radical by squaring odd against even.  Returns a polynomial in x of degree
// <= 8 for pipeline inputs.
Poly1 eliminate_to_octic(const Poly2& constraint, const Poly1& s_squared);

}  // namespace mppose
