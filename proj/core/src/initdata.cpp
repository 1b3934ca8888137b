#include "lawsonflow/initdata.hpp"

#include <algorithm>
#include <cmath>

#include "lawsonflow/error.hpp"

namespace lawson {

namespace {

double g_step(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

Jet g_step(Jet x) {
  if (x.v <= 0.0) return Jet::constant(0.0);
  const double g = std::exp(-1.0 / x.v);
  const double x2 = x.v * x.v;
  return compose(x, g, g / x2, g * (1.0 - 2.0 * x.v) / (x2 * x2));
}

// M(-l, b; z) + sum_j a_j M(-j, b; z) as one polynomial.
KummerPolynomial packet_polynomial(const ConeParams& params, const SpectralExponents& exps, const Vec& a) {
  const double b = eigen_b(params);
  KummerPolynomial total = kummer_polynomial(exps.l, b);
  for (std::size_t j = 0; j < a.size(); ++j) {
    const KummerPolynomial pj = kummer_polynomial(static_cast<int>(j), b);
    for (std::size_t i = 0; i < pj.coefficients.size(); ++i) total.coefficients[i] += a[j] * pj.coefficients[i];
  }
  return total;
}

}  // namespace

double cutoff_eta(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = g_step(x), b = g_step(1.0 - x);
  return a / (a + b);
}

Jet cutoff_eta(Jet x) {
  if (x.v <= 0.0) return Jet::constant(0.0);
  if (x.v >= 1.0) return Jet::constant(1.0);
  const Jet a = g_step(x), b = g_step(1.0 - x);
  return a / (a + b);
}

double tip_scale(const SpectralExponents& exps, double t) { return std::pow(-t, 0.5 + exps.sigma_l); }

Jet low_mode_packet(const ConeParams& params, const SpectralExponents& exps, const Vec& a, double t0, double x) {
  if (static_cast<int>(a.size()) != exps.l) fail(ErrorCode::ParameterError, "parameter vector must have length l");
  if (!(x > 0.0)) fail(ErrorCode::DomainError, "packet needs x > 0");
  const KummerPolynomial P = packet_polynomial(params, exps, a);
  const double rt = std::sqrt(-t0);
  const Jet y = (1.0 / rt) * Jet::variable(x);
  const double zv = 0.25 * y.v * y.v;
  const Jet m = compose(0.25 * y * y, P(zv), P.derivative(zv), P.second_derivative(zv));
  return std::pow(-t0, 0.5 + exps.lambda_l) * pow(y, params.alpha) * m;
}

double low_mode_packet_expanded(const ConeParams& params, const SpectralExponents& exps, const Vec& a, double t0,
                                double x) {
  const int l = exps.l;
  std::vector<EigenCoefficients> K;
  for (int j = 0; j <= l; ++j) K.push_back(eigenfunction_coeffs(params, j));
  double total = 0.0, sign = 1.0;
  for (int i = 0; i <= l; ++i, sign = -sign) {
    double coeff = 0.0;
    for (int j = i; j <= l; ++j) {
      const double aj = j == l ? 1.0 : a[static_cast<std::size_t>(j)];
      coeff += aj * (i == 0 ? 1.0 : K[static_cast<std::size_t>(j)].K[static_cast<std::size_t>(i - 1)]);
    }
    total += sign * coeff * std::pow(x, params.alpha + 2.0 * i) * std::pow(-t0, l - i);
  }
  return total;
}

Jet OuterCap::eval(double x) const {
  if (x <= x_left) return Jet{mu * x, mu, 0.0};
  if (x >= x_right) {
    if (x >= 2.0) fail(ErrorCode::DomainError, "cap graph is vertical at x = 2");
    const double f = std::sqrt(4.0 - x * x);
    return {f, -x / f, -4.0 / (f * f * f)};
  }
  return interp_quintic(knots, f, d1, d2, x);
}

OuterCap build_outer_cap(const ConeParams& params, double delta) {
  const double mu = params.mu, S = std::sqrt(1.0 + mu * mu);
  OuterCap cap;
  cap.mu = mu;
  cap.x_left = 2.0 / S - delta;
  cap.x_right = 2.0 / S + delta;
  if (!(delta > 0.0) || cap.x_right >= 2.0 || cap.x_left <= 0.0)
    fail(ErrorCode::BlendFailure, "blend half-width out of range");
  const double xr = cap.x_right, fr = std::sqrt(4.0 - xr * xr);
  cap.knots = {cap.x_left, xr};
  cap.f = {mu * cap.x_left, fr};
  cap.d1 = {mu, -xr / fr};
  cap.d2 = {0.0, -4.0 / (fr * fr * fr)};
  // Concavity is not guaranteed by the construction; check it.
  for (int i = 0; i <= 400; ++i) {
    const double x = cap.x_left + (xr - cap.x_left) * i / 400.0;
    if (interp_quintic(cap.knots, cap.f, cap.d1, cap.d2, x).d2 > 1e-12)
      fail(ErrorCode::BlendFailure, "quintic blend is not concave for delta = " + std::to_string(delta));
  }
  return cap;
}

Jet InitialData::u(double x) const {
  const double L = tip_scale(exps, t0);
  const double beta = geometry.beta, rho = geometry.rho;
  const Jet xj = Jet::variable(x);
  const Jet inner = cutoff_eta((1.0 / (0.5 * beta)) * ((1.0 / L) * xj + (-0.5 * beta)));
  Jet out = Jet::constant(0.0);
  if (inner.v < 1.0 || inner.d1 != 0.0) {
    const Jet psi = scaled_ray(*unit_ray, k0, x / L);
    const Jet scaled{L * psi.v, psi.d1, psi.d2 / L};
    out = scaled * (1.0 - inner);
  }
  if (include_packet && x < 2.0 * rho && inner.v > 0.0) {
    const Jet outer = cutoff_eta((1.0 / rho) * (2.0 * rho - xj));
    out = out + low_mode_packet(params, exps, a, t0, x) * inner * outer;
  }
  return out;
}

double InitialData::ray_start() const {
  const double L = tip_scale(exps, t0);
  const double lam = std::pow(k0 / unit_ray->k, 1.0 / (1.0 - params.alpha));
  return L * lam * unit_ray->x_start();
}

InitialData assemble_initial_curve(const ConeParams& params, const SpectralExponents& exps, const Vec& a, double t0,
                                   const GeometryConfig& geo, std::shared_ptr<const ProfileSolution> unit_profile,
                                   const MeshConfig& mesh, bool include_packet) {
  if (!(t0 < 0.0)) fail(ErrorCode::ParameterError, "t0 must be negative");
  if (static_cast<int>(a.size()) != exps.l) fail(ErrorCode::ParameterError, "parameter vector must have length l");
  const double radius = std::pow(geo.beta, params.alpha_tilde - params.alpha);
  if (norm2(a) >= radius) fail(ErrorCode::ParameterClash, "|a| must stay below beta^(alpha_tilde - alpha)");
  const double L = tip_scale(exps, t0);
  if (!(geo.beta * L < geo.rho)) fail(ErrorCode::ParameterClash, "beta (-t0)^(1/2+sigma) must be below rho");
  if (!(geo.rho < 0.5)) fail(ErrorCode::ParameterClash, "rho must stay below 1/2");

  InitialData d;
  d.params = params;
  d.exps = exps;
  d.a = a;
  d.t0 = t0;
  d.geometry = geo;
  d.include_packet = include_packet;
  d.k0 = 1.0;
  for (double v : a) d.k0 += v;
  d.unit_hat = unit_profile;
  d.unit_ray = std::make_shared<const RotatedProfile>(rotated_profile(*unit_profile));
  d.cap = build_outer_cap(params, geo.delta);

  const double mu = params.mu, S = std::sqrt(1.0 + mu * mu);
  auto graph = [&](double x) { return d.u(x); };

  // Rotated chart from beta L / 2 to rho.
  d.ray.mesh = geometric_mesh(0.5 * geo.beta * L, geo.rho, mesh.ray_nodes);
  for (double x : d.ray.mesh) {
    const Jet j = d.u(x);
    d.ray.value.push_back(j.v);
    d.ray.d1.push_back(j.d1);
    d.ray.d2.push_back(j.d2);
    if (std::abs(j.v / x) > 0.5 * std::min(mu, 1.0 / mu) || std::abs(j.d1) > 0.5 * std::min(mu, 1.0 / mu))
      fail(ErrorCode::ConeBreach, "initial graph leaves the cone neighbourhood at x = " + std::to_string(x));
  }

  // Tip chart in type-II units. Up to the hat coordinate of ray-x = beta L/2 the curve is exactly psi_hat_k0.
  const double z_pure = (0.5 * geo.beta - mu * scaled_ray(*d.unit_ray, d.k0, 0.5 * geo.beta).v) / S;
  d.tip.mesh = sinh_mesh(0.0, 2.0 * geo.beta, mesh.tip_nodes, mesh.tip_stretch);
  double x_guess = S * L;
  for (double z : d.tip.mesh) {
    const Jet direct = scaled_hat(*unit_profile, d.k0, z);
    if (z <= z_pure) {
      d.tip.value.push_back(direct.v);
      d.tip.d1.push_back(direct.d1);
      d.tip.d2.push_back(direct.d2);
      if (z >= 1.0) {
        const HatPoint hp = ray_to_hat(params, graph, z * L, std::max(x_guess, d.ray_start() * 1.01));
        d.max_overlap_mismatch = std::max(d.max_overlap_mismatch, std::abs(hp.value / L - direct.v) / direct.v);
        x_guess = hp.x_ray;
      }
    } else {
      const HatPoint hp = ray_to_hat(params, graph, z * L, std::max(x_guess, S * z * L));
      x_guess = hp.x_ray;
      d.tip.value.push_back(hp.value / L);
      d.tip.d1.push_back(hp.d1);
      d.tip.d2.push_back(0.0);
    }
  }
  {
    const Vec fd2 = derivative2(d.tip.mesh, d.tip.value);
    for (std::size_t i = 0; i < d.tip.mesh.size(); ++i)
      if (d.tip.mesh[i] > z_pure) d.tip.d2[i] = fd2[i];
  }
  if (d.max_overlap_mismatch > 1e-6)
    fail(ErrorCode::OverlapMismatch, "tip and ray charts disagree by " + std::to_string(d.max_overlap_mismatch));

  // Outer curve: ray piece, then the cap graph, then the arc, sampled densely and resampled by arclength.
  std::vector<Point2> dense;
  const double x_a = 0.5 * geo.rho, x_b = 2.0 * geo.rho;
  for (int i = 0; i <= 4000; ++i) {
    const double x = x_a + (x_b - x_a) * i / 4000.0;
    dense.push_back(rotate_chart({x, d.u(x).v}, params, RotationDirection::inverse));
  }
  const double h_lo = x_b / S, h_mid = d.cap.x_left;
  for (int i = 1; i <= 4000; ++i) {
    const double x = h_lo + (h_mid - h_lo) * i / 4000.0;
    dense.push_back({x, d.cap.eval(x).v});
  }
  for (int i = 1; i <= 20000; ++i) {
    const double x = h_mid + (d.cap.x_right - h_mid) * i / 20000.0;
    dense.push_back({x, d.cap.eval(x).v});
  }
  const double theta_r = std::atan2(d.cap.eval(d.cap.x_right).v, d.cap.x_right);
  for (int i = 1; i <= 8000; ++i) {
    const double th = theta_r * (1.0 - i / 8000.0);
    dense.push_back({2.0 * std::cos(th), 2.0 * std::sin(th)});
  }
  Vec arc(dense.size(), 0.0);
  for (std::size_t i = 1; i < dense.size(); ++i)
    arc[i] = arc[i - 1] + std::hypot(dense[i][0] - dense[i - 1][0], dense[i][1] - dense[i - 1][1]);
  const double total = arc.back();
  const double h_min = mesh.outer_spacing_min_fraction * geo.rho;
  Vec sigma{0.0};
  while (sigma.back() < total) sigma.push_back(sigma.back() + std::min(mesh.outer_spacing, h_min + 0.1 * sigma.back()));
  // Stretch so the last node lands on the axis.
  const double stretch = total / sigma.back();
  for (double& s : sigma) s *= stretch;
  for (double s : sigma) {
    const std::size_t i = std::min(locate_cell(arc, s), arc.size() - 2);
    const double w = (s - arc[i]) / (arc[i + 1] - arc[i]);
    d.outer.push_back({dense[i][0] + w * (dense[i + 1][0] - dense[i][0]), dense[i][1] + w * (dense[i + 1][1] - dense[i][1])});
  }
  d.outer.back() = {2.0, 0.0};

  // Whole curve for the embeddedness check.
  std::vector<Point2> curve;
  const double first_ray_x = d.ray.mesh.front();
  for (std::size_t i = 0; i < d.tip.mesh.size(); ++i) {
    const Point2 p{d.tip.mesh[i] * L, d.tip.value[i] * L};
    if (rotate_chart(p, params, RotationDirection::forward)[0] >= first_ray_x) break;
    curve.push_back(p);
  }
  for (std::size_t i = 0; i < d.ray.mesh.size() && d.ray.mesh[i] < x_a; ++i)
    curve.push_back(rotate_chart({d.ray.mesh[i], d.ray.value[i]}, params, RotationDirection::inverse));
  curve.insert(curve.end(), d.outer.begin(), d.outer.end());
  if (polyline_self_intersects(curve)) fail(ErrorCode::OverlapMismatch, "initial curve is not embedded");
  return d;
}

AdmissibilityReport admissibility_check(const Vec& x, const Vec& u, const Vec& d1, const Vec& d2, double t,
                                        const ConeParams& params, const SpectralExponents& exps,
                                        const GeometryConfig& geo) {
  AdmissibilityReport rep;
  const double lo = geo.beta * tip_scale(exps, t), hi = geo.rho;
  const std::array<const Vec*, 3> derivs{&u, &d1, &d2};
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double xx = x[k];
    if (xx < lo || xx > hi) continue;
    ++rep.checked;
    const double bound =
        geo.Lambda * (std::pow(-t, exps.l) * std::pow(xx, params.alpha) + std::pow(xx, 2.0 * exps.lambda_l + 1.0));
    for (int i = 0; i < 3; ++i) {
      const double r = std::pow(xx, i) * std::abs((*derivs[i])[k]) / bound;
      if (r > rep.worst_ratio[i]) {
        rep.worst_ratio[i] = r;
        rep.worst_x[i] = xx;
      }
      if (!(r < 1.0)) rep.pass[i] = false;
    }
  }
  return rep;
}

AdmissibilityReport admissibility_check(const InitialData& data) {
  return admissibility_check(data.ray.mesh, data.ray.value, data.ray.d1, data.ray.d2, data.t0, data.params, data.exps,
                             data.geometry);
}

bool polyline_self_intersects(const std::vector<Point2>& pts) {
  auto orient = [](const Point2& a, const Point2& b, const Point2& c) {
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
  };
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double xmin = std::min(pts[i][0], pts[i + 1][0]), xmax = std::max(pts[i][0], pts[i + 1][0]);
    const double ymin = std::min(pts[i][1], pts[i + 1][1]), ymax = std::max(pts[i][1], pts[i + 1][1]);
    for (std::size_t j = i + 2; j + 1 < n; ++j) {
      if (std::max(pts[j][0], pts[j + 1][0]) < xmin || std::min(pts[j][0], pts[j + 1][0]) > xmax) continue;
      if (std::max(pts[j][1], pts[j + 1][1]) < ymin || std::min(pts[j][1], pts[j + 1][1]) > ymax) continue;
      const double o1 = orient(pts[i], pts[i + 1], pts[j]), o2 = orient(pts[i], pts[i + 1], pts[j + 1]);
      const double o3 = orient(pts[j], pts[j + 1], pts[i]), o4 = orient(pts[j], pts[j + 1], pts[i + 1]);
      if (o1 * o2 < 0.0 && o3 * o4 < 0.0) return true;
    }
  }
  return false;
}

}  // namespace lawson
