#include "mppose/poly.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mppose {

namespace {

int effective_degree(const std::vector<double>& c) {
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
    if (c[static_cast<std::size_t>(i)] != 0.0) return i;
  return 0;
}

// Real roots of x^2 + b x + c appended to out.  Discriminants within rounding
// of zero are clamped so double roots survive.
void quadratic_roots(double b, double c, std::vector<double>* out) {
  double disc = b * b - 4.0 * c;
  double tol = 1e-12 * std::max({1.0, b * b, std::abs(c)});
  if (disc < -tol) return;
  if (disc < 0.0) disc = 0.0;
  double sq = std::sqrt(disc);
  double s = (b >= 0.0) ? -0.5 * (b + sq) : -0.5 * (b - sq);
  if (s == 0.0) {
    out->push_back(0.0);
    out->push_back(-b);
    return;
  }
  out->push_back(s);
  out->push_back(c / s);
}

// Real roots of x^3 + a x^2 + b x + c.  Trigonometric form when all three
// roots are real, Cardano otherwise.
std::vector<double> cubic_roots(double a, double b, double c) {
  double Q = (a * a - 3.0 * b) / 9.0;
  double R = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 54.0;
  double Q3 = Q * Q * Q;
  std::vector<double> roots;
  if (Q > 0.0 && R * R <= Q3 * (1.0 + 1e-12)) {
    double theta = std::acos(std::clamp(R / std::sqrt(Q3), -1.0, 1.0));
    double m = -2.0 * std::sqrt(Q);
    roots.push_back(m * std::cos(theta / 3.0) - a / 3.0);
    roots.push_back(m * std::cos((theta + 2.0 * std::numbers::pi) / 3.0) - a / 3.0);
    roots.push_back(m * std::cos((theta - 2.0 * std::numbers::pi) / 3.0) - a / 3.0);
  } else {
    double A = -std::copysign(
        std::cbrt(std::abs(R) + std::sqrt(std::max(R * R - Q3, 0.0))), R);
    double B = (A == 0.0) ? 0.0 : Q / A;
    roots.push_back(A + B - a / 3.0);
  }
  return roots;
}

double newton_polish(const Poly1& f, const Poly1& df, double x, int max_steps) {
  double fx = std::abs(f.eval(x));
  for (int i = 0; i < max_steps; ++i) {
    double d = df.eval(x);
    if (d == 0.0) break;
    double xn = x - f.eval(x) / d;
    double fn = std::abs(f.eval(xn));
    if (!(fn < fx)) break;
    x = xn;
    fx = fn;
  }
  return x;
}

// Parlett-Reinsch balancing with powers of two; similarity, so eigenvalues
// are exact while off-diagonal norms equalize.
void balance_in_place(Eigen::MatrixXd& A) {
  const double radix = 2.0;
  const double radix2 = radix * radix;
  const int n = static_cast<int>(A.rows());
  bool done = false;
  while (!done) {
    done = true;
    for (int i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(A(j, i));
        r += std::abs(A(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix2;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix2;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        double ginv = 1.0 / f;
        A.row(i) *= ginv;
        A.col(i) *= f;
      }
    }
  }
}

}  // namespace

Poly1::Poly1(std::vector<double> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) c_.assign(1, 0.0);
  if (degree() > kMaxDegree) throw ShapeError("Poly1: degree above cap");
}

Poly1 Poly1::monomial(int degree, double value) {
  if (degree < 0 || degree > kMaxDegree)
    throw ShapeError("Poly1::monomial: degree out of range");
  std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
  c.back() = value;
  return Poly1(std::move(c));
}

double Poly1::operator[](int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return 0.0;
  return c_[static_cast<std::size_t>(i)];
}

double Poly1::eval(double x) const {
  double v = 0.0;
  for (int i = degree(); i >= 0; --i) v = v * x + c_[static_cast<std::size_t>(i)];
  return v;
}

Poly1 Poly1::derivative() const {
  if (degree() == 0) return Poly1();
  std::vector<double> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i)
    d[i - 1] = static_cast<double>(i) * c_[i];
  return Poly1(std::move(d));
}

double Poly1::max_abs_coeff() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

bool Poly1::is_zero(double rel_eps) const { return max_abs_coeff() <= rel_eps; }

Poly1& Poly1::trim(double rel_eps) {
  double m = max_abs_coeff();
  std::size_t keep = 1;
  for (std::size_t i = c_.size(); i > 1; --i) {
    if (std::abs(c_[i - 1]) > rel_eps * m) {
      keep = i;
      break;
    }
  }
  c_.resize(keep);
  return *this;
}

Poly1 Poly1::operator-() const {
  std::vector<double> c = c_;
  for (double& v : c) v = -v;
  return Poly1(std::move(c));
}

Poly1 operator+(const Poly1& a, const Poly1& b) {
  std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] = a[static_cast<int>(i)] + b[static_cast<int>(i)];
  return Poly1(std::move(c));
}

Poly1 operator-(const Poly1& a, const Poly1& b) { return a + (-b); }

Poly1 operator*(const Poly1& a, const Poly1& b) {
  int da = effective_degree(a.c_);
  int db = effective_degree(b.c_);
  if (da + db > Poly1::kMaxDegree)
    throw ShapeError("Poly1: product degree above cap");
  std::vector<double> c(static_cast<std::size_t>(da + db) + 1, 0.0);
  for (int i = 0; i <= da; ++i) {
    double ai = a[i];
    if (ai == 0.0) continue;
    for (int j = 0; j <= db; ++j) c[static_cast<std::size_t>(i + j)] += ai * b[j];
  }
  return Poly1(std::move(c));
}

Poly1 operator*(double s, const Poly1& a) {
  std::vector<double> c = a.c_;
  for (double& v : c) v *= s;
  return Poly1(std::move(c));
}

Poly1 pow(const Poly1& p, int k) {
  if (k < 0) throw ShapeError("pow(Poly1): negative exponent");
  Poly1 out({1.0});
  for (int i = 0; i < k; ++i) out = out * p;
  return out;
}

Poly2::Poly2(int deg_x, int deg_y) {
  if (deg_x < 0 || deg_y < 0 || deg_x > kMaxDegree || deg_y > kMaxDegree)
    throw ShapeError("Poly2: degree out of range");
  c_.assign(static_cast<std::size_t>(deg_x) + 1,
            std::vector<double>(static_cast<std::size_t>(deg_y) + 1, 0.0));
}

Poly2 Poly2::constant(double v) {
  Poly2 p(0, 0);
  p.c_[0][0] = v;
  return p;
}

Poly2 Poly2::affine(double c0, double cx, double cy) {
  Poly2 p(1, 1);
  p.c_[0][0] = c0;
  p.c_[1][0] = cx;
  p.c_[0][1] = cy;
  return p;
}

double Poly2::coeff(int i, int j) const {
  if (i < 0 || j < 0 || i > deg_x() || j > deg_y()) return 0.0;
  return c_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
}

double& Poly2::coeff(int i, int j) {
  return c_.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j));
}

double Poly2::eval(double x, double y) const {
  double v = 0.0;
  for (int i = deg_x(); i >= 0; --i) {
    const auto& row = c_[static_cast<std::size_t>(i)];
    double rv = 0.0;
    for (int j = deg_y(); j >= 0; --j) rv = rv * y + row[static_cast<std::size_t>(j)];
    v = v * x + rv;
  }
  return v;
}

Poly2 Poly2::derivative_x() const {
  if (deg_x() == 0) return Poly2(0, deg_y());
  Poly2 d(deg_x() - 1, deg_y());
  for (int i = 1; i <= deg_x(); ++i)
    for (int j = 0; j <= deg_y(); ++j) d.coeff(i - 1, j) = i * coeff(i, j);
  return d;
}

Poly2 Poly2::derivative_y() const {
  if (deg_y() == 0) return Poly2(deg_x(), 0);
  Poly2 d(deg_x(), deg_y() - 1);
  for (int i = 0; i <= deg_x(); ++i)
    for (int j = 1; j <= deg_y(); ++j) d.coeff(i, j - 1) = j * coeff(i, j);
  return d;
}

Poly1 Poly2::coeff_of_x(int i) const {
  if (i < 0 || i > deg_x()) return Poly1();
  return Poly1(c_[static_cast<std::size_t>(i)]);
}

Poly1 Poly2::coeff_of_y(int j) const {
  if (j < 0 || j > deg_y()) return Poly1();
  std::vector<double> col(static_cast<std::size_t>(deg_x()) + 1);
  for (int i = 0; i <= deg_x(); ++i) col[static_cast<std::size_t>(i)] = coeff(i, j);
  return Poly1(std::move(col));
}

double Poly2::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& row : c_)
    for (double v : row) m = std::max(m, std::abs(v));
  return m;
}

bool Poly2::is_zero(double rel_eps) const { return max_abs_coeff() <= rel_eps; }

Poly2& Poly2::trim(double rel_eps) {
  double m = max_abs_coeff();
  int dx = 0;
  int dy = 0;
  for (int i = 0; i <= deg_x(); ++i)
    for (int j = 0; j <= deg_y(); ++j)
      if (std::abs(coeff(i, j)) > rel_eps * m) {
        dx = std::max(dx, i);
        dy = std::max(dy, j);
      }
  Poly2 out(dx, dy);
  for (int i = 0; i <= dx; ++i)
    for (int j = 0; j <= dy; ++j) out.coeff(i, j) = coeff(i, j);
  *this = out;
  return *this;
}

Poly2 Poly2::operator-() const {
  Poly2 p = *this;
  for (auto& row : p.c_)
    for (double& v : row) v = -v;
  return p;
}

Poly2 operator+(const Poly2& a, const Poly2& b) {
  Poly2 out(std::max(a.deg_x(), b.deg_x()), std::max(a.deg_y(), b.deg_y()));
  for (int i = 0; i <= out.deg_x(); ++i)
    for (int j = 0; j <= out.deg_y(); ++j)
      out.coeff(i, j) = a.coeff(i, j) + b.coeff(i, j);
  return out;
}

Poly2 operator-(const Poly2& a, const Poly2& b) { return a + (-b); }

Poly2 operator*(const Poly2& a, const Poly2& b) {
  int dax = 0, day = 0, dbx = 0, dby = 0;
  for (int i = 0; i <= a.deg_x(); ++i)
    for (int j = 0; j <= a.deg_y(); ++j)
      if (a.coeff(i, j) != 0.0) {
        dax = std::max(dax, i);
        day = std::max(day, j);
      }
  for (int i = 0; i <= b.deg_x(); ++i)
    for (int j = 0; j <= b.deg_y(); ++j)
      if (b.coeff(i, j) != 0.0) {
        dbx = std::max(dbx, i);
        dby = std::max(dby, j);
      }
  if (dax + dbx > Poly2::kMaxDegree || day + dby > Poly2::kMaxDegree)
    throw ShapeError("Poly2: product degree above cap");
  Poly2 out(dax + dbx, day + dby);
  for (int i = 0; i <= dax; ++i)
    for (int j = 0; j <= day; ++j) {
      double aij = a.coeff(i, j);
      if (aij == 0.0) continue;
      for (int k = 0; k <= dbx; ++k)
        for (int l = 0; l <= dby; ++l)
          out.coeff(i + k, j + l) += aij * b.coeff(k, l);
    }
  return out;
}

Poly2 operator*(double s, const Poly2& a) {
  Poly2 out = a;
  for (int i = 0; i <= out.deg_x(); ++i)
    for (int j = 0; j <= out.deg_y(); ++j) out.coeff(i, j) *= s;
  return out;
}

std::vector<double> solve_quartic(const Poly1& p) {
  Poly1 q = p;
  q.trim(0.0);
  if (q.is_zero()) throw InvalidPolynomial("solve_quartic: zero polynomial");
  int n = q.degree();
  if (n > 4) throw InvalidPolynomial("solve_quartic: degree above 4");
  if (n == 0) return {};

  double lead = q[n];
  std::vector<double> m(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)] = q[i] / lead;

  std::vector<double> roots;
  if (n == 1) {
    roots.push_back(-m[0]);
  } else if (n == 2) {
    quadratic_roots(m[1], m[0], &roots);
  } else if (n == 3) {
    roots = cubic_roots(m[2], m[1], m[0]);
  } else {
    double a = m[3];
    double b = m[2];
    double c = m[1];
    double d = m[0];
    // Depressed form y^4 + P y^2 + Qc y + Rc with x = y - a/4.
    double P = b - 3.0 * a * a / 8.0;
    double Qc = c - a * b / 2.0 + a * a * a / 8.0;
    double Rc = d - a * c / 4.0 + a * a * b / 16.0 - 3.0 * a * a * a * a / 256.0;
    double X = std::max({1.0, std::sqrt(std::abs(P)), std::cbrt(std::abs(Qc)),
                         std::pow(std::abs(Rc), 0.25)});
    std::vector<double> ys;
    if (std::abs(Qc) <= 1e-13 * X * X * X) {
      std::vector<double> zs;
      quadratic_roots(P, Rc, &zs);
      for (double z : zs) {
        if (z < -1e-12 * X * X) continue;
        double y = std::sqrt(std::max(z, 0.0));
        ys.push_back(y);
        ys.push_back(-y);
      }
    } else {
      // Resolvent 8 t^3 + 8 P t^2 + (2 P^2 - 8 Rc) t - Qc^2 = 0; its largest
      // root is positive because the value at 0 is -Qc^2 < 0.
      std::vector<double> ts =
          cubic_roots(P, (2.0 * P * P - 8.0 * Rc) / 8.0, -Qc * Qc / 8.0);
      double t = ts.front();
      for (double v : ts) t = std::max(t, v);
      if (t > 0.0) {
        double s = std::sqrt(2.0 * t);
        quadratic_roots(-s, P / 2.0 + t + Qc / (2.0 * s), &ys);
        quadratic_roots(s, P / 2.0 + t - Qc / (2.0 * s), &ys);
      }
    }
    for (double y : ys) roots.push_back(y - a / 4.0);
  }

  std::vector<double> fc(static_cast<std::size_t>(n) + 1, 1.0);
  for (int i = 0; i < n; ++i) fc[static_cast<std::size_t>(i)] = m[static_cast<std::size_t>(i)];
  Poly1 f(std::move(fc));
  Poly1 df = f.derivative();
  for (double& r : roots) r = newton_polish(f, df, r, 3);
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<double> solve_octic(const Poly1& p) {
  Poly1 q = p;
  q.trim(0.0);
  if (q.is_zero()) throw InvalidPolynomial("solve_octic: zero polynomial");
  int n = q.degree();
  std::vector<double> roots;
  if (n == 0) return roots;

  // Exact zeros at the bottom factor out as roots at the origin.
  int zeros = 0;
  while (zeros < n && q[zeros] == 0.0) ++zeros;
  for (int i = 0; i < zeros; ++i) roots.push_back(0.0);
  int deg = n - zeros;
  if (deg == 0) return roots;

  double scale = q.max_abs_coeff();
  std::vector<double> c(static_cast<std::size_t>(deg) + 1);
  for (int i = 0; i <= deg; ++i) c[static_cast<std::size_t>(i)] = q[zeros + i] / scale;
  Poly1 f(c);
  Poly1 df = f.derivative();

  double lead = c[static_cast<std::size_t>(deg)];
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) C(i, deg - 1) = -c[static_cast<std::size_t>(i)] / lead;
  balance_in_place(C);

  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  if (es.info() != Eigen::Success)
    throw InvalidPolynomial("solve_octic: eigenvalue iteration failed");
  const auto& vals = es.eigenvalues();
  double max_mag = 0.0;
  for (int i = 0; i < vals.size(); ++i) max_mag = std::max(max_mag, std::abs(vals(i)));
  double imag_tol = 1e-7 * std::max(1.0, max_mag);
  for (int i = 0; i < vals.size(); ++i) {
    if (std::abs(vals(i).imag()) > imag_tol) continue;
    roots.push_back(newton_polish(f, df, vals(i).real(), 3));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

namespace {

// q viewed as A y^2 + B(x) y + C(x); total degree 2 makes A constant.
struct ConicRows {
  double A = 0.0;
  Poly1 B;
  Poly1 C;
};

ConicRows conic_rows(const Poly2& q, const char* name) {
  double m = q.max_abs_coeff();
  if (m == 0.0) throw DegenerateSystem(std::string(name) + ": zero conic");
  for (int i = 0; i <= q.deg_x(); ++i)
    for (int j = 0; j <= q.deg_y(); ++j)
      if (i + j > 2 && std::abs(q.coeff(i, j)) > 1e-12 * m)
        throw ShapeError(std::string(name) + ": total degree above 2");
  ConicRows out;
  out.A = q.coeff(0, 2);
  out.B = Poly1({q.coeff(0, 1), q.coeff(1, 1)});
  out.C = Poly1({q.coeff(0, 0), q.coeff(1, 0), q.coeff(2, 0)});
  return out;
}

void check_not_shared(const Poly1& quartic, double ref) {
  if (quartic.max_abs_coeff() <= 1e-12 * std::max(ref, 1e-300))
    throw DegenerateSystem("intersect_quadrics: conics share a component");
}

}  // namespace

std::vector<std::pair<double, double>> intersect_quadrics(const Poly2& q1,
                                                          const Poly2& q2) {
  ConicRows r1 = conic_rows(q1, "intersect_quadrics: first input");
  ConicRows r2 = conic_rows(q2, "intersect_quadrics: second input");
  double m1 = q1.max_abs_coeff();
  double m2 = q2.max_abs_coeff();

  std::vector<std::pair<double, double>> cand;

  // y candidates from q2 alone, for x where q1 fixes no y.
  auto add_y_from_q2 = [&](double x) {
    double b2 = r2.B.eval(x);
    double c2 = r2.C.eval(x);
    if (std::abs(r2.A) > 1e-12 * m2) {
      std::vector<double> ys;
      quadratic_roots(b2 / r2.A, c2 / r2.A, &ys);
      for (double y : ys) cand.emplace_back(x, y);
    } else if (std::abs(b2) > 1e-12 * m2) {
      cand.emplace_back(x, -c2 / b2);
    }
  };

  if (std::abs(r1.A) > 1e-12 * m1) {
    Poly1 nn = -r1.B;
    double mm = 2.0 * r1.A;
    Poly1 s = r1.B * r1.B - (4.0 * r1.A) * r1.C;
    // Substituting y = (nn +- sqrt(s)) / mm into mm^2 q2 splits it into a
    // rational part k40 and a radical part sqrt(s) k41; the branch product
    // k40^2 - s k41^2 is the quartic both branches satisfy.
    Poly1 k40 = r2.A * (nn * nn + s) + mm * (r2.B * nn) + (mm * mm) * r2.C;
    Poly1 k41 = 2.0 * r2.A * nn + mm * r2.B;
    Poly1 quartic = k40 * k40 - s * (k41 * k41);
    double ref = k40.max_abs_coeff() * k40.max_abs_coeff() +
                 s.max_abs_coeff() * k41.max_abs_coeff() * k41.max_abs_coeff();
    check_not_shared(quartic, ref);
    for (double x : solve_quartic(quartic)) {
      double sv = s.eval(x);
      double sref = std::max(1.0, r1.B.eval(x) * r1.B.eval(x) +
                                      std::abs(4.0 * r1.A * r1.C.eval(x)));
      if (sv < -1e-10 * sref) continue;
      double root = std::sqrt(std::max(sv, 0.0));
      double nv = nn.eval(x);
      double y_plus = (nv + root) / mm;
      double y_minus = (nv - root) / mm;
      double v_plus = std::abs(q2.eval(x, y_plus));
      double v_minus = std::abs(q2.eval(x, y_minus));
      double sc = std::max({1.0, std::abs(x), std::abs(y_plus), std::abs(y_minus)});
      cand.emplace_back(x, v_plus <= v_minus ? y_plus : y_minus);
      // A double root of the quartic can mean two intersections at one x.
      if (std::max(v_plus, v_minus) <= 1e-6 * m2 * sc * sc)
        cand.emplace_back(x, v_plus <= v_minus ? y_minus : y_plus);
    }
  } else if (!r1.B.is_zero(1e-12 * m1)) {
    // q1 is linear in y: y = -C1 / B1.
    Poly1 quartic = r2.A * (r1.C * r1.C) - r2.B * (r1.C * r1.B) + r2.C * (r1.B * r1.B);
    double ref = std::abs(r2.A) * r1.C.max_abs_coeff() * r1.C.max_abs_coeff() +
                 r2.B.max_abs_coeff() * r1.C.max_abs_coeff() * r1.B.max_abs_coeff() +
                 r2.C.max_abs_coeff() * r1.B.max_abs_coeff() * r1.B.max_abs_coeff();
    check_not_shared(quartic, ref);
    for (double x : solve_quartic(quartic)) {
      double b1 = r1.B.eval(x);
      if (std::abs(b1) > 1e-12 * std::max(1.0, m1)) {
        cand.emplace_back(x, -r1.C.eval(x) / b1);
      } else {
        add_y_from_q2(x);
      }
    }
  } else {
    // q1 constrains x only.
    for (double x : solve_quartic(r1.C)) add_y_from_q2(x);
  }

  // Joint Newton polish; steps are kept only while the scaled residual drops.
  Poly2 d1x = q1.derivative_x();
  Poly2 d1y = q1.derivative_y();
  Poly2 d2x = q2.derivative_x();
  Poly2 d2y = q2.derivative_y();
  for (auto& [x, y] : cand) {
    for (int it = 0; it < 5; ++it) {
      double f1 = q1.eval(x, y);
      double f2 = q2.eval(x, y);
      double j11 = d1x.eval(x, y);
      double j12 = d1y.eval(x, y);
      double j21 = d2x.eval(x, y);
      double j22 = d2y.eval(x, y);
      double det = j11 * j22 - j12 * j21;
      double dscale = std::abs(j11 * j22) + std::abs(j12 * j21);
      if (std::abs(det) <= 1e-14 * std::max(dscale, 1e-300)) break;
      double xn = x - (f1 * j22 - f2 * j12) / det;
      double yn = y - (f2 * j11 - f1 * j21) / det;
      double before = std::hypot(f1 / m1, f2 / m2);
      double after = std::hypot(q1.eval(xn, yn) / m1, q2.eval(xn, yn) / m2);
      if (!(after < before)) break;
      x = xn;
      y = yn;
    }
  }

  std::vector<std::pair<double, double>> out;
  for (const auto& [x, y] : cand) {
    double sc = std::max({1.0, std::abs(x), std::abs(y)});
    double sc2 = sc * sc;
    if (std::abs(q1.eval(x, y)) > 1e-7 * m1 * sc2) continue;
    if (std::abs(q2.eval(x, y)) > 1e-7 * m2 * sc2) continue;
    // Near a tangency the branch duplicates land ~sqrt(eps) apart, the best
    // a squared resultant can resolve, so the merge radius must cover that.
    bool dup = false;
    for (const auto& [ox, oy] : out) {
      if (std::abs(ox - x) <= 1e-6 * sc && std::abs(oy - y) <= 1e-6 * sc) {
        dup = true;
        break;
      }
    }
    if (!dup) out.emplace_back(x, y);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Poly1 eliminate_to_octic(const Poly2& constraint, const Poly1& s_squared) {
  if (constraint.is_zero())
    throw DegenerateSystem("eliminate_to_octic: zero constraint");
  int sdeg = 0;
  for (int i = 0; i <= constraint.deg_x(); ++i)
    if (!constraint.coeff_of_x(i).is_zero()) sdeg = i;
  if (sdeg > 4)
    throw ShapeError("eliminate_to_octic: degree above 4 in the eliminated variable");

  // constraint = E(s^2, x) + s O(s^2, x); substitute s^2 termwise.
  Poly1 even;
  Poly1 odd;
  for (int i = 0; i <= sdeg; ++i) {
    Poly1 a = constraint.coeff_of_x(i);
    if (a.is_zero()) continue;
    Poly1 term = a * pow(s_squared, i / 2);
    if (i % 2 == 0)
      even += term;
    else
      odd += term;
  }

  Poly1 result;
  double ref;
  if (odd.is_zero()) {
    if (even.is_zero())
      throw DegenerateSystem("eliminate_to_octic: constraint vanishes identically");
    result = even;
    ref = even.max_abs_coeff();
  } else {
    // Clear the radical: (E + s O)(E - s O) = E^2 - s_squared O^2.
    result = even * even - s_squared * (odd * odd);
    ref = even.max_abs_coeff() * even.max_abs_coeff() +
          s_squared.max_abs_coeff() * odd.max_abs_coeff() * odd.max_abs_coeff();
  }
  if (result.max_abs_coeff() <= 1e-12 * std::max(ref, 1e-300))
    throw DegenerateSystem("eliminate_to_octic: elimination collapsed to zero");
  result.trim(0.0);
  return result;
}

}  // namespace mppose
