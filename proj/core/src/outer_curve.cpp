#include "lawsonflow/outer_curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lawsonflow/error.hpp"

namespace lawson {

namespace {

double cross(const Point2& a, const Point2& b) { return a[0] * b[1] - a[1] * b[0]; }
Point2 minus(const Point2& a, const Point2& b) { return {a[0] - b[0], a[1] - b[1]}; }
double norm(const Point2& a) { return std::hypot(a[0], a[1]); }

// Signed Menger curvature, positive for a right turn.
double menger(const Point2& a, const Point2& b, const Point2& c) {
  const Point2 u = minus(b, a), v = minus(c, b), w = minus(c, a);
  return -2.0 * cross(u, v) / (norm(u) * norm(v) * norm(w));
}

Point2 tangent(const Point2& a, const Point2& b, const Point2& c) {
  const Stencil3 s = d1_weights(norm(minus(b, a)), norm(minus(c, b)));
  Point2 t{s.m * a[0] + s.c * b[0] + s.p * c[0], s.m * a[1] + s.c * b[1] + s.p * c[1]};
  const double len = norm(t);
  return {t[0] / len, t[1] / len};
}

}  // namespace

std::vector<Point2> outer_normals(const OuterCurve& c) {
  const auto& P = c.nodes;
  const std::size_t n = P.size();
  if (n < 3) fail(ErrorCode::CurveDegenerate, "outer curve needs at least three nodes");
  std::vector<Point2> N(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Point2 t = tangent(P[i - 1], P[i], P[i + 1]);
    N[i] = {-t[1], t[0]};
  }
  auto end_normal = [&](std::size_t i, std::size_t j, std::size_t k, CurveEnd e) -> Point2 {
    if (e == CurveEnd::xi_axis) return {1.0, 0.0};
    if (e == CurveEnd::eta_axis) return {0.0, 1.0};
    // One-sided second-order tangent through three nodes.
    const double h1 = norm(minus(P[j], P[i])), h2 = norm(minus(P[k], P[j]));
    const double a = -(2.0 * h1 + h2) / (h1 * (h1 + h2)), b = (h1 + h2) / (h1 * h2), cc = -h1 / (h2 * (h1 + h2));
    Point2 t{a * P[i][0] + b * P[j][0] + cc * P[k][0], a * P[i][1] + b * P[j][1] + cc * P[k][1]};
    if (i > j) t = {-t[0], -t[1]};
    const double len = norm(t);
    return {-t[1] / len, t[0] / len};
  };
  N[0] = end_normal(0, 1, 2, c.first);
  N[n - 1] = end_normal(n - 1, n - 2, n - 3, c.last);
  return N;
}

std::vector<PrincipalCurvatures> principal_curvatures(const OuterCurve& c) {
  const auto& P = c.nodes;
  const std::size_t n = P.size();
  const std::vector<Point2> N = outer_normals(c);
  std::vector<PrincipalCurvatures> K(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    K[i].kappa = menger(P[i - 1], P[i], P[i + 1]);
    K[i].k_xi = N[i][0] / P[i][0];
    K[i].k_eta = N[i][1] / P[i][1];
  }
  // Axis ends: mirror the neighbour; the collapsing factor's curvature equals kappa there.
  auto end = [&](std::size_t i, std::size_t j, CurveEnd e, bool is_first) {
    PrincipalCurvatures pc;
    if (e == CurveEnd::xi_axis) {
      const Point2 m{P[j][0], -P[j][1]};
      pc.kappa = is_first ? menger(m, P[i], P[j]) : menger(P[j], P[i], m);
      pc.k_xi = 1.0 / P[i][0];
      pc.k_eta = pc.kappa;
    } else if (e == CurveEnd::eta_axis) {
      const Point2 m{-P[j][0], P[j][1]};
      pc.kappa = is_first ? menger(m, P[i], P[j]) : menger(P[j], P[i], m);
      pc.k_xi = pc.kappa;
      pc.k_eta = 1.0 / P[i][1];
    } else {
      pc = K[j];
      pc.k_xi = N[i][0] / P[i][0];
      pc.k_eta = N[i][1] / P[i][1];
    }
    return pc;
  };
  K[0] = end(0, 1, c.first, true);
  K[n - 1] = end(n - 1, n - 2, c.last, false);
  return K;
}

Vec parametric_mean_curvature(const OuterCurve& c, const ConeParams& params) {
  const auto K = principal_curvatures(c);
  Vec H(K.size());
  for (std::size_t i = 0; i < K.size(); ++i)
    H[i] = -(K[i].kappa + (params.p - 1.0) * K[i].k_xi + (params.q - 1.0) * K[i].k_eta);
  return H;
}

Vec parametric_A_norm(const OuterCurve& c, const ConeParams& params) {
  const auto K = principal_curvatures(c);
  Vec A(K.size());
  for (std::size_t i = 0; i < K.size(); ++i)
    A[i] = std::sqrt(K[i].kappa * K[i].kappa + (params.p - 1.0) * K[i].k_xi * K[i].k_xi +
                     (params.q - 1.0) * K[i].k_eta * K[i].k_eta);
  return A;
}

double outer_stable_dt(const OuterCurve& c, const ConeParams& params) {
  double hmin = 1e300;
  for (std::size_t i = 1; i < c.nodes.size(); ++i) hmin = std::min(hmin, norm(minus(c.nodes[i], c.nodes[i - 1])));
  return 0.2 * hmin * hmin / std::max(params.p, params.q);
}

void step_outer(OuterCurve& c, double dt, const ConeParams& params) {
  const Vec H = parametric_mean_curvature(c, params);
  const std::vector<Point2> N = outer_normals(c);
  const std::size_t n = c.nodes.size();
  // Moving with velocity H n is motion by -V n with V the inward speed.
  for (std::size_t i = 0; i < n; ++i) {
    const bool is_end = i == 0 || i == n - 1;
    const CurveEnd e = i == 0 ? c.first : c.last;
    if (is_end && e == CurveEnd::pinned) continue;
    c.nodes[i][0] += dt * H[i] * N[i][0];
    c.nodes[i][1] += dt * H[i] * N[i][1];
    if (is_end && e == CurveEnd::xi_axis) c.nodes[i][1] = 0.0;
    if (is_end && e == CurveEnd::eta_axis) c.nodes[i][0] = 0.0;
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(norm(minus(c.nodes[i], c.nodes[i - 1])) > 1e-12))
      fail(ErrorCode::CurveDegenerate, "outer nodes collided at index " + std::to_string(i));
  }
}

Vec arclength(const std::vector<Point2>& pts) {
  Vec s(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) s[i] = s[i - 1] + norm(minus(pts[i], pts[i - 1]));
  return s;
}

Vec spacing_targets(double total, const OuterSpacing& sp) {
  Vec sigma{0.0};
  while (sigma.back() < total) sigma.push_back(sigma.back() + std::min(sp.h_max, sp.h_min + sp.growth * sigma.back()));
  // Drop a nearly empty last cell, then stretch to land on the end.
  if (sigma.size() > 2 && (total - sigma[sigma.size() - 2]) < 0.5 * (sigma.back() - sigma[sigma.size() - 2]))
    sigma.pop_back();
  const double stretch = total / sigma.back();
  for (double& s : sigma) s *= stretch;
  return sigma;
}

bool needs_redistribution(const OuterCurve& c, double tolerance) {
  const Vec s = arclength(c.nodes);
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double h = s[i] - s[i - 1];
    const double target = std::min(c.spacing.h_max, c.spacing.h_min + c.spacing.growth * s[i - 1]);
    if (h < (1.0 - tolerance) * target || h > (1.0 + tolerance) * target) return true;
  }
  return false;
}

void redistribute(OuterCurve& c) {
  const Vec s = arclength(c.nodes);
  Vec xs(c.nodes.size()), ys(c.nodes.size());
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    xs[i] = c.nodes[i][0];
    ys[i] = c.nodes[i][1];
  }
  const Vec sigma = spacing_targets(s.back(), c.spacing);
  std::vector<Point2> out;
  out.reserve(sigma.size());
  for (double t : sigma) out.push_back({interp_cubic(s, xs, t), interp_cubic(s, ys, t)});
  out.front() = c.nodes.front();
  out.back() = c.nodes.back();
  c.nodes = std::move(out);
}

double outer_ray_value(const OuterCurve& c, const ConeParams& params, double x) {
  Vec rx, ru;
  for (const Point2& p : c.nodes) {
    const Point2 r = rotate_chart(p, params, RotationDirection::forward);
    if (!rx.empty() && r[0] <= rx.back()) break;
    rx.push_back(r[0]);
    ru.push_back(r[1]);
  }
  if (rx.size() < 4 || x < rx.front() || x > rx.back())
    fail(ErrorCode::ChartCoverage, "outer curve does not cover ray coordinate " + std::to_string(x));
  return interp_cubic(rx, ru, x);
}

}  // namespace lawson
