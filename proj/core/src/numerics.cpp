#include "lawsonflow/numerics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <numeric>

#include "lawsonflow/error.hpp"

namespace lawson {

Vec solve_tridiagonal(const Vec& sub, const Vec& diag, const Vec& sup, const Vec& rhs) {
  const std::size_t n = diag.size();
  Vec c(n), d(n), x(n);
  double pivot = diag[0];
  if (pivot == 0.0 || !std::isfinite(pivot)) fail(ErrorCode::SolveFailure, "tridiagonal pivot 0");
  c[0] = n > 1 ? sup[0] / pivot : 0.0;
  d[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag[i] - sub[i] * c[i - 1];
    if (pivot == 0.0 || !std::isfinite(pivot))
      fail(ErrorCode::SolveFailure, "tridiagonal pivot vanished at row " + std::to_string(i));
    c[i] = i + 1 < n ? sup[i] / pivot : 0.0;
    d[i] = (rhs[i] - sub[i] * d[i - 1]) / pivot;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

Stencil3 d1_weights(double h1, double h2) {
  return {-h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2), h1 / (h2 * (h1 + h2))};
}

Stencil3 d2_weights(double h1, double h2) {
  return {2.0 / (h1 * (h1 + h2)), -2.0 / (h1 * h2), 2.0 / (h2 * (h1 + h2))};
}

namespace {

// Derivatives of the quadratic through (x0,f0),(x1,f1),(x2,f2) evaluated at xe.
std::pair<double, double> quadratic_derivs(double x0, double x1, double x2, double f0, double f1, double f2,
                                           double xe) {
  const double d01 = (f1 - f0) / (x1 - x0);
  const double d12 = (f2 - f1) / (x2 - x1);
  const double d012 = (d12 - d01) / (x2 - x0);
  const double first = d01 + d012 * ((xe - x0) + (xe - x1));
  return {first, 2.0 * d012};
}

void require_mesh(const Vec& x, const Vec& f) {
  if (x.size() != f.size()) fail(ErrorCode::MeshTooCoarse, "mesh and values differ in length");
  if (x.size() < 3) fail(ErrorCode::MeshTooCoarse, "need at least three nodes");
}

}  // namespace

Vec derivative1(const Vec& x, const Vec& f) {
  require_mesh(x, f);
  const std::size_t n = x.size();
  Vec d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const auto w = d1_weights(x[i] - x[i - 1], x[i + 1] - x[i]);
    d[i] = w.m * f[i - 1] + w.c * f[i] + w.p * f[i + 1];
  }
  d[0] = quadratic_derivs(x[0], x[1], x[2], f[0], f[1], f[2], x[0]).first;
  d[n - 1] = quadratic_derivs(x[n - 3], x[n - 2], x[n - 1], f[n - 3], f[n - 2], f[n - 1], x[n - 1]).first;
  return d;
}

Vec derivative2(const Vec& x, const Vec& f) {
  require_mesh(x, f);
  const std::size_t n = x.size();
  Vec d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const auto w = d2_weights(x[i] - x[i - 1], x[i + 1] - x[i]);
    d[i] = w.m * f[i - 1] + w.c * f[i] + w.p * f[i + 1];
  }
  d[0] = d[1];
  d[n - 1] = d[n - 2];
  return d;
}

Vec geometric_mesh(double x0, double x1, std::size_t n) {
  if (n < 2 || !(x0 > 0.0) || !(x1 > x0)) fail(ErrorCode::MeshTooCoarse, "bad geometric mesh request");
  Vec m(n);
  const double l0 = std::log(x0), l1 = std::log(x1);
  for (std::size_t i = 0; i < n; ++i) m[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / (n - 1));
  m.front() = x0;
  m.back() = x1;
  return m;
}

Vec uniform_mesh(double x0, double x1, std::size_t n) {
  if (n < 2 || !(x1 > x0)) fail(ErrorCode::MeshTooCoarse, "bad uniform mesh request");
  Vec m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = x0 + (x1 - x0) * static_cast<double>(i) / (n - 1);
  m.back() = x1;
  return m;
}

Vec sinh_mesh(double x0, double x1, std::size_t n, double stretch) {
  if (n < 2 || !(x1 > x0) || !(stretch > 0.0)) fail(ErrorCode::MeshTooCoarse, "bad sinh mesh request");
  Vec m(n);
  const double s = std::sinh(stretch);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / (n - 1);
    m[i] = x0 + (x1 - x0) * std::sinh(stretch * u) / s;
  }
  m.back() = x1;
  return m;
}

std::size_t locate_cell(const Vec& mesh, double x) {
  auto it = std::upper_bound(mesh.begin(), mesh.end(), x);
  std::size_t i = it == mesh.begin() ? 0 : static_cast<std::size_t>(it - mesh.begin()) - 1;
  return std::min(i, mesh.size() - 2);
}

double interp_cubic(const Vec& mesh, const Vec& f, double x) {
  const std::size_t n = mesh.size();
  if (n < 4) fail(ErrorCode::MeshTooCoarse, "cubic interpolation needs four nodes");
  std::size_t i = locate_cell(mesh, x);
  std::size_t s = i == 0 ? 0 : i - 1;
  s = std::min(s, n - 4);
  double out = 0.0;
  for (std::size_t a = s; a < s + 4; ++a) {
    double w = 1.0;
    for (std::size_t b = s; b < s + 4; ++b)
      if (b != a) w *= (x - mesh[b]) / (mesh[a] - mesh[b]);
    out += w * f[a];
  }
  return out;
}

Jet interp_quintic(const Vec& mesh, const Vec& f, const Vec& d1, const Vec& d2, double x) {
  const std::size_t i = locate_cell(mesh, x);
  const double h = mesh[i + 1] - mesh[i];
  const double t = (x - mesh[i]) / h;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  // Quintic Hermite basis and derivatives in t.
  const double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5, H0d = -30 * t2 + 60 * t3 - 30 * t4,
               H0dd = -60 * t + 180 * t2 - 120 * t3;
  const double H1 = t - 6 * t3 + 8 * t4 - 3 * t5, H1d = 1 - 18 * t2 + 32 * t3 - 15 * t4,
               H1dd = -36 * t + 96 * t2 - 60 * t3;
  const double H2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5), H2d = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4),
               H2dd = 0.5 * (2 - 18 * t + 36 * t2 - 20 * t3);
  const double G0 = 10 * t3 - 15 * t4 + 6 * t5, G0d = -H0d, G0dd = -H0dd;
  const double G1 = -4 * t3 + 7 * t4 - 3 * t5, G1d = -12 * t2 + 28 * t3 - 15 * t4,
               G1dd = -24 * t + 84 * t2 - 60 * t3;
  const double G2 = 0.5 * (t3 - 2 * t4 + t5), G2d = 0.5 * (3 * t2 - 8 * t3 + 5 * t4),
               G2dd = 0.5 * (6 * t - 24 * t2 + 20 * t3);
  const double a0 = f[i], a1 = h * d1[i], a2 = h * h * d2[i];
  const double b0 = f[i + 1], b1 = h * d1[i + 1], b2 = h * h * d2[i + 1];
  Jet out;
  out.v = a0 * H0 + a1 * H1 + a2 * H2 + b0 * G0 + b1 * G1 + b2 * G2;
  out.d1 = (a0 * H0d + a1 * H1d + a2 * H2d + b0 * G0d + b1 * G1d + b2 * G2d) / h;
  out.d2 = (a0 * H0dd + a1 * H1dd + a2 * H2dd + b0 * G0dd + b1 * G1dd + b2 * G2dd) / (h * h);
  return out;
}

LineFit fit_line(const Vec& x, const Vec& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) fail(ErrorCode::FitDegenerate, "line fit needs at least two points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) fail(ErrorCode::FitDegenerate, "abscissae coincide");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.count = n;
  if (n > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_stderr = std::sqrt(rss / (n - 2) / sxx);
  }
  return fit;
}

QuadratureRule gauss_panels(const Vec& breakpoints) {
  using rule = boost::math::quadrature::gauss<double, 20>;
  const auto& abscissa = rule::abscissa();
  const auto& weights = rule::weights();
  QuadratureRule q;
  for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
    const double a = breakpoints[p], b = breakpoints[p + 1];
    if (!(b > a)) continue;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    // Boost stores the non-negative half of the symmetric rule.
    for (std::size_t k = 0; k < abscissa.size(); ++k) {
      const double xk = abscissa[k], wk = weights[k];
      if (xk == 0.0) {
        q.nodes.push_back(mid);
        q.weights.push_back(half * wk);
      } else {
        q.nodes.push_back(mid - half * xk);
        q.weights.push_back(half * wk);
        q.nodes.push_back(mid + half * xk);
        q.weights.push_back(half * wk);
      }
    }
  }
  return q;
}

Vec solve_dense(std::vector<Vec> A, Vec b) {
  const std::size_t n = b.size();
  double scale = 0.0;
  for (const auto& row : A)
    for (double v : row) scale = std::max(scale, std::abs(v));
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(A[i][k]) > std::abs(A[piv][k])) piv = i;
    if (std::abs(A[piv][k]) <= 1e-14 * scale) fail(ErrorCode::SolveFailure, "dense system is singular");
    std::swap(A[k], A[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = A[i][k] / A[k][k];
      for (std::size_t j = k; j < n; ++j) A[i][j] -= f * A[k][j];
      b[i] -= f * b[k];
    }
  }
  Vec x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
    x[i] = s / A[i][i];
  }
  return x;
}

double norm2(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace lawson
