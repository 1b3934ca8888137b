#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace lawson {

using Vec = std::vector<double>;

// Value with first and second derivative, propagated through arithmetic.
struct Jet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  static Jet constant(double c) { return {c, 0.0, 0.0}; }
  static Jet variable(double x) { return {x, 1.0, 0.0}; }
};

inline Jet operator+(Jet a, Jet b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
inline Jet operator-(Jet a, Jet b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
inline Jet operator-(Jet a) { return {-a.v, -a.d1, -a.d2}; }
inline Jet operator*(Jet a, Jet b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}
inline Jet operator*(double c, Jet a) { return {c * a.v, c * a.d1, c * a.d2}; }
inline Jet operator*(Jet a, double c) { return c * a; }
inline Jet operator+(Jet a, double c) { return {a.v + c, a.d1, a.d2}; }
inline Jet operator-(double c, Jet a) { return {c - a.v, -a.d1, -a.d2}; }
inline Jet reciprocal(Jet a) {
  const double r = 1.0 / a.v;
  return {r, -a.d1 * r * r, (2.0 * a.d1 * a.d1 * r - a.d2) * r * r};
}
inline Jet operator/(Jet a, Jet b) { return a * reciprocal(b); }
// Chain rule for f(a) given f, f', f'' at a.v.
inline Jet compose(Jet a, double f, double df, double d2f) {
  return {f, df * a.d1, d2f * a.d1 * a.d1 + df * a.d2};
}
inline Jet exp(Jet a) {
  const double e = std::exp(a.v);
  return compose(a, e, e, e);
}
inline Jet pow(Jet a, double p) {
  const double f = std::pow(a.v, p);
  return compose(a, f, p * f / a.v, p * (p - 1.0) * f / (a.v * a.v));
}
inline Jet sqrt(Jet a) { return pow(a, 0.5); }

// Thomas algorithm; sub[0] and sup[n-1] are ignored. Throws SolveFailure on a zero pivot.
Vec solve_tridiagonal(const Vec& sub, const Vec& diag, const Vec& sup, const Vec& rhs);

// Three-point weights on a nonuniform mesh; exact for quadratics.
struct Stencil3 {
  double m = 0.0, c = 0.0, p = 0.0;
};
Stencil3 d1_weights(double h_left, double h_right);
Stencil3 d2_weights(double h_left, double h_right);

// Second-order first and second derivatives at every node; one-sided at the ends.
Vec derivative1(const Vec& x, const Vec& f);
Vec derivative2(const Vec& x, const Vec& f);

Vec geometric_mesh(double x0, double x1, std::size_t n);
Vec uniform_mesh(double x0, double x1, std::size_t n);
// Fine spacing near x0, roughly geometric further out (sinh map).
Vec sinh_mesh(double x0, double x1, std::size_t n, double stretch);

std::size_t locate_cell(const Vec& mesh, double x);

// Cubic Lagrange through the four nodes around x.
double interp_cubic(const Vec& mesh, const Vec& f, double x);
// Quintic Hermite on the cell containing x using value, first and second derivatives.
Jet interp_quintic(const Vec& mesh, const Vec& f, const Vec& d1, const Vec& d2, double x);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t count = 0;
};
LineFit fit_line(const Vec& x, const Vec& y);

struct QuadratureRule {
  Vec nodes;
  Vec weights;
};
// Composite 20-point Gauss-Legendre on the given breakpoints.
QuadratureRule gauss_panels(const Vec& breakpoints);

// Dense linear solve with partial pivoting; throws SolveFailure when singular.
Vec solve_dense(std::vector<Vec> A, Vec b);

double norm2(const Vec& v);

}  // namespace lawson
