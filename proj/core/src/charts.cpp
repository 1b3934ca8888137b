#include "lawsonflow/charts.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "lawsonflow/error.hpp"

namespace lawson {

namespace {

// Newton form through m points, evaluated with two derivatives.
Jet newton_jet(const double* xs, const double* fs, int m, double x) {
  double c[8];
  for (int i = 0; i < m; ++i) c[i] = fs[i];
  for (int k = 1; k < m; ++k)
    for (int i = m - 1; i >= k; --i) c[i] = (c[i] - c[i - 1]) / (xs[i] - xs[i - k]);
  double p = c[m - 1], dp = 0.0, d2p = 0.0;
  for (int k = m - 2; k >= 0; --k) {
    const double w = x - xs[k];
    d2p = d2p * w + 2.0 * dp;
    dp = dp * w + p;
    p = p * w + c[k];
  }
  return {p, dp, d2p};
}

enum class LeftEnd { dirichlet, symmetric };
using TermsFn = std::function<PointTerms(double x, double u, double u1, double u2, double time)>;

struct Tridiagonal {
  Vec sub, diag, sup;
};

// G on every node plus its Jacobian; Dirichlet rows are left zero.
Vec assemble(const Vec& x, const Vec& u, LeftEnd left, const TermsFn& terms, double time, Tridiagonal* jac) {
  const std::size_t n = x.size();
  Vec g(n, 0.0);
  if (jac) {
    jac->sub.assign(n, 0.0);
    jac->diag.assign(n, 0.0);
    jac->sup.assign(n, 0.0);
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = x[i] - x[i - 1], h2 = x[i + 1] - x[i];
    const Stencil3 s1 = d1_weights(h1, h2), s2 = d2_weights(h1, h2);
    const double u1 = s1.m * u[i - 1] + s1.c * u[i] + s1.p * u[i + 1];
    const double u2 = s2.m * u[i - 1] + s2.c * u[i] + s2.p * u[i + 1];
    const PointTerms T = terms(x[i], u[i], u1, u2, time);
    g[i] = T.g;
    if (jac) {
      jac->sub[i] = T.g_u1 * s1.m + T.g_u2 * s2.m;
      jac->diag[i] = T.g_u + T.g_u1 * s1.c + T.g_u2 * s2.c;
      jac->sup[i] = T.g_u1 * s1.p + T.g_u2 * s2.p;
    }
  }
  if (left == LeftEnd::symmetric) {
    const double h = x[1] - x[0];
    const double u2 = 2.0 * (u[1] - u[0]) / (h * h);
    const PointTerms T = terms(x[0], u[0], 0.0, u2, time);
    g[0] = T.g;
    if (jac) {
      jac->diag[0] = T.g_u - 2.0 * T.g_u2 / (h * h);
      jac->sup[0] = 2.0 * T.g_u2 / (h * h);
    }
  }
  return g;
}

// Verwer's ROS2 with gamma = 1 + 1/sqrt(2). Dirichlet ends move linearly
// from their current values to left/right, inside the stages: jumping them
// first gives an O(dt/h^2) kick to the neighbours.
Vec ros2_step(const Vec& x, Vec u, double dt, double time, LeftEnd left, double left_new, double right_new,
              const TermsFn& terms) {
  const double gamma = 1.0 + 1.0 / std::sqrt(2.0);
  const std::size_t n = x.size();
  const double right_rate = (right_new - u[n - 1]) / dt;
  const double left_rate = left == LeftEnd::dirichlet ? (left_new - u[0]) / dt : 0.0;
  auto with_rates = [&](Vec g) {
    g[n - 1] = right_rate;
    if (left == LeftEnd::dirichlet) g[0] = left_rate;
    return g;
  };
  Tridiagonal J;
  const Vec g1 = with_rates(assemble(x, u, left, terms, time, &J));
  Vec sub(n), diag(n), sup(n);
  for (std::size_t i = 0; i < n; ++i) {
    sub[i] = -gamma * dt * J.sub[i];
    diag[i] = 1.0 - gamma * dt * J.diag[i];
    sup[i] = -gamma * dt * J.sup[i];
  }
  const Vec k1 = solve_tridiagonal(sub, diag, sup, g1);
  Vec stage(n);
  for (std::size_t i = 0; i < n; ++i) stage[i] = u[i] + dt * k1[i];
  Vec g2 = with_rates(assemble(x, stage, left, terms, time + dt, nullptr));
  for (std::size_t i = 0; i < n; ++i) g2[i] -= 2.0 * k1[i];
  const Vec k2 = solve_tridiagonal(sub, diag, sup, g2);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] += dt * (1.5 * k1[i] + 0.5 * k2[i]);
    if (!std::isfinite(u[i])) fail(ErrorCode::SolveFailure, "non-finite value after implicit step");
  }
  u[n - 1] = right_new;
  if (left == LeftEnd::dirichlet) u[0] = left_new;
  return u;
}

}  // namespace

Vec ChartFunction::d1() const {
  Vec d = derivative1(mesh, value);
  if (kind == ChartKind::tip_radial) d[0] = 0.0;
  return d;
}

Vec ChartFunction::d2() const {
  Vec d = derivative2(mesh, value);
  if (kind == ChartKind::tip_radial) {
    const double h = mesh[1] - mesh[0];
    d[0] = 2.0 * (value[1] - value[0]) / (h * h);
  }
  return d;
}

Jet ChartFunction::eval(double x) const {
  const std::size_t n = mesh.size();
  if (n < 4) fail(ErrorCode::MeshTooCoarse, "chart needs at least four nodes");
  const std::size_t cell = locate_cell(mesh, x);
  double xs[4], fs[4];
  if (kind == ChartKind::tip_radial && cell == 0) {
    // Mirror node so the local cubic is even about z = 0 to leading order.
    xs[0] = -mesh[1];
    fs[0] = value[1];
    for (int k = 0; k < 3; ++k) {
      xs[k + 1] = mesh[static_cast<std::size_t>(k)];
      fs[k + 1] = value[static_cast<std::size_t>(k)];
    }
    return newton_jet(xs, fs, 4, x);
  }
  const std::size_t i0 = std::min(cell > 0 ? cell - 1 : 0, n - 4);
  for (int k = 0; k < 4; ++k) {
    xs[k] = mesh[i0 + static_cast<std::size_t>(k)];
    fs[k] = value[i0 + static_cast<std::size_t>(k)];
  }
  return newton_jet(xs, fs, 4, x);
}

PointTerms ray_terms(const ConeParams& params, double x, double u, double u1, double u2) {
  const double mu = params.mu, pm = params.p - 1.0, qm = params.q - 1.0;
  const double A = 1.0 + u1 * u1, D1 = x - mu * u, D2 = mu * x + u;
  PointTerms T;
  T.g = u2 / A + pm * (mu + u1) / D1 - qm * (1.0 - mu * u1) / D2;
  T.g_u2 = 1.0 / A;
  T.g_u1 = -2.0 * u1 * u2 / (A * A) + pm / D1 + qm * mu / D2;
  T.g_u = pm * (mu + u1) * mu / (D1 * D1) + qm * (1.0 - mu * u1) / (D2 * D2);
  return T;
}

PointTerms type1_terms(const ConeParams& params, double y, double v, double v1, double v2) {
  PointTerms T = ray_terms(params, y, v, v1, v2);
  T.g += 0.5 * (-y * v1 + v);
  T.g_u1 -= 0.5 * y;
  T.g_u += 0.5;
  return T;
}

PointTerms type2_terms(const ConeParams& params, double drift, double z, double w, double w1, double w2) {
  const double pm = params.p - 1.0, qm = params.q - 1.0;
  PointTerms T;
  if (z == 0.0) {
    T.g = params.p * w2 - qm / w + drift * w;
    T.g_u2 = params.p;
    T.g_u = qm / (w * w) + drift;
    return T;
  }
  const double A = 1.0 + w1 * w1;
  T.g = w2 / A + pm * w1 / z - qm / w + drift * (-z * w1 + w);
  T.g_u2 = 1.0 / A;
  T.g_u1 = -2.0 * w1 * w2 / (A * A) + pm / z - drift * z;
  T.g_u = qm / (w * w) + drift;
  return T;
}

double type2_drift(const SpectralExponents& exps, double tau) {
  return (0.5 + exps.sigma_l) / (2.0 * exps.sigma_l * tau);
}

Vec rhs_unrescaled(const Vec& x, const Vec& u, const ConeParams& params) {
  return assemble(
      x, u, LeftEnd::dirichlet,
      [&](double xx, double uu, double u1, double u2, double) { return ray_terms(params, xx, uu, u1, u2); }, 0.0,
      nullptr);
}

Vec rhs_type1(const Vec& y, const Vec& v, const ConeParams& params) {
  return assemble(
      y, v, LeftEnd::dirichlet,
      [&](double yy, double vv, double v1, double v2, double) { return type1_terms(params, yy, vv, v1, v2); }, 0.0,
      nullptr);
}

Vec rhs_type2(const Vec& z, const Vec& w, double tau, const ConeParams& params, const SpectralExponents& exps) {
  return assemble(
      z, w, LeftEnd::symmetric,
      [&](double zz, double ww, double w1, double w2, double tt) {
        return type2_terms(params, type2_drift(exps, tt), zz, ww, w1, w2);
      },
      tau, nullptr);
}

void check_ray_chart(const ChartFunction& chart, const ConeParams& params) {
  const double bound = std::min(params.mu, 1.0 / params.mu);
  for (std::size_t i = 0; i < chart.mesh.size(); ++i) {
    const double x = chart.mesh[i], u = chart.value[i];
    if (!(std::abs(u / x) < bound) || !(x - params.mu * u > 0.0) || !(params.mu * x + u > 0.0))
      fail(ErrorCode::ConeBreach, "ray chart left the cone neighbourhood at x = " + std::to_string(x));
  }
}

ChartFunction step_unrescaled(const ChartFunction& chart, double dt, const ConeParams& params, double left,
                              double right) {
  ChartFunction out = chart;
  out.value = ros2_step(chart.mesh, out.value, dt, 0.0, LeftEnd::dirichlet, left, right,
                        [&](double x, double u, double u1, double u2, double) {
                          return ray_terms(params, x, u, u1, u2);
                        });
  check_ray_chart(out, params);
  return out;
}

ChartFunction step_type1(const ChartFunction& chart, double ds, const ConeParams& params, double left, double right) {
  ChartFunction out = chart;
  out.value = ros2_step(chart.mesh, out.value, ds, 0.0, LeftEnd::dirichlet, left, right,
                        [&](double y, double v, double v1, double v2, double) {
                          return type1_terms(params, y, v, v1, v2);
                        });
  check_ray_chart(out, params);
  return out;
}

ChartFunction step_type2(const ChartFunction& chart, double tau, double dtau, const ConeParams& params,
                         const SpectralExponents& exps, double right) {
  if (chart.mesh.front() != 0.0) fail(ErrorCode::DomainError, "tip chart must start at z = 0");
  ChartFunction out = chart;
  out.value = ros2_step(chart.mesh, out.value, dtau, tau, LeftEnd::symmetric, 0.0, right,
                        [&](double z, double w, double w1, double w2, double tt) {
                          return type2_terms(params, type2_drift(exps, tt), z, w, w1, w2);
                        });
  for (double w : out.value)
    if (!(w > 0.0)) fail(ErrorCode::TipCollapse, "tip chart reached zero height");
  if (out.value.front() < 1e-3 * chart.value.front()) fail(ErrorCode::TipCollapse, "tip height collapsing");
  return out;
}

double time_s(double t) { return -std::log(-t); }
double time_tau(const SpectralExponents& exps, double t) {
  return std::pow(-t, -2.0 * exps.sigma_l) / (2.0 * exps.sigma_l);
}
double t_from_s(double s) { return -std::exp(-s); }
double t_from_tau(const SpectralExponents& exps, double tau) {
  return -std::pow(2.0 * exps.sigma_l * tau, -1.0 / (2.0 * exps.sigma_l));
}

ChartFunction to_type1(const ChartFunction& c, double t) {
  ChartFunction out = c;
  out.frame = TimeFrame::s;
  const double r = std::sqrt(-t);
  for (double& x : out.mesh) x /= r;
  for (double& u : out.value) u /= r;
  return out;
}

ChartFunction from_type1(const ChartFunction& c, double s) {
  ChartFunction out = c;
  out.frame = TimeFrame::t;
  const double r = std::exp(-0.5 * s);
  for (double& y : out.mesh) y *= r;
  for (double& v : out.value) v *= r;
  return out;
}

ChartFunction to_type2(const ChartFunction& c, const SpectralExponents& exps, double t) {
  ChartFunction out = c;
  out.frame = TimeFrame::tau;
  const double L = std::pow(-t, 0.5 + exps.sigma_l);
  for (double& x : out.mesh) x /= L;
  for (double& u : out.value) u /= L;
  return out;
}

ChartFunction from_type2(const ChartFunction& c, const SpectralExponents& exps, double tau) {
  ChartFunction out = c;
  out.frame = TimeFrame::t;
  const double L = std::pow(-t_from_tau(exps, tau), 0.5 + exps.sigma_l);
  for (double& z : out.mesh) z *= L;
  for (double& w : out.value) w *= L;
  return out;
}

double tip_to_ray(const ChartFunction& tip, double L, double x, const ConeParams& params) {
  const double mu = params.mu, S = std::sqrt(1.0 + mu * mu);
  const double target = x * S / L;  // z + mu w(z)
  double z = target / (1.0 + mu * mu);
  for (int it = 0; it < 60; ++it) {
    const Jet w = tip.eval(z);
    const double step = (z + mu * w.v - target) / (1.0 + mu * w.d1);
    z -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
  }
  if (z < 0.0 || z > tip.mesh.back()) fail(ErrorCode::ChartCoverage, "ray point outside the tip chart");
  return L * (tip.eval(z).v - mu * z) / S;
}

}  // namespace lawson
