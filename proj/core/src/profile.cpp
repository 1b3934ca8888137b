#include "lawsonflow/profile.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "lawsonflow/error.hpp"

namespace lawson {

namespace ode = boost::numeric::odeint;

namespace {

using State = std::array<double, 2>;

template <class System, class Observer>
void integrate_capped(System sys, State& x, double t0, double t1, double dt0, double max_dt, double rel_tol,
                      Observer obs) {
  auto stepper = ode::make_controlled(1e-300, rel_tol, ode::runge_kutta_fehlberg78<State>());
  double t = t0;
  double dt = std::min(dt0, max_dt);
  while (t < t1) {
    double h = std::min({dt, max_dt, t1 - t});
    const bool last = h >= t1 - t;
    double tt = t;
    const auto res = stepper.try_step(sys, x, tt, h);
    if (res == ode::success) {
      t = last ? t1 : tt;
      obs(x, t);
    } else if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      fail(ErrorCode::IntegrationBlowup, "step size underflow at t = " + std::to_string(t));
    }
    dt = h;
  }
}

double asymptotic_dev_coeff(const ConeParams& c) { return std::pow(1.0 + c.mu * c.mu, 0.5 * (c.alpha + 1.0)); }

}  // namespace

double ray_P(const ConeParams& c, double w) {
  const double mu = c.mu;
  return (c.n - 2.0) * (1.0 + (1.0 / mu - mu) * w) / ((1.0 - mu * w) * (1.0 + w / mu));
}

double ray_Q(const ConeParams& c, double w) {
  const double mu = c.mu;
  return (c.n - 2.0) / ((1.0 - mu * w) * (1.0 + w / mu));
}

Jet ProfileSolution::eval_hat(double r) const {
  if (r < 0.0) fail(ErrorCode::DomainError, "eval_hat needs r >= 0");
  if (r <= mesh.back()) return interp_quintic(mesh, psi_hat, psi_hat_d1, psi_hat_d2, r);
  const Jet x = Jet::variable(r);
  const double a = params.alpha;
  return Jet::constant(0.0) + params.mu * x + k * asymptotic_dev_coeff(params) * pow(x, a);
}

Jet ProfileSolution::eval_dev(double r) const {
  if (r < 0.0) fail(ErrorCode::DomainError, "eval_dev needs r >= 0");
  if (r <= mesh.back()) return interp_quintic(mesh, psi_hat_dev, psi_hat_dev_d1, psi_hat_d2, r);
  return k * asymptotic_dev_coeff(params) * pow(Jet::variable(r), params.alpha);
}

double ProfileSolution::hat_residual(std::size_t i) const {
  const double p = params.p, q = params.q;
  if (mesh[i] == 0.0) return p * psi_hat_d2[i] - (q - 1.0) / psi_hat[i];
  const double d1 = psi_hat_d1[i];
  return psi_hat_d2[i] / (1.0 + d1 * d1) + (p - 1.0) * d1 / mesh[i] - (q - 1.0) / psi_hat[i];
}

Jet RotatedProfile::eval(double x) const {
  if (x < mesh.front()) fail(ErrorCode::DomainError, "rotated profile evaluated before its start point");
  if (x <= mesh.back()) return interp_quintic(mesh, psi, psi_d1, psi_d2, x);
  return k * pow(Jet::variable(x), params.alpha);
}

double RotatedProfile::residual(std::size_t i) const {
  const double x = mesh[i], w = psi[i] / x, d1 = psi_d1[i];
  return psi_d2[i] / (1.0 + d1 * d1) + ray_P(params, w) * d1 / x + ray_Q(params, w) * w / x;
}

HatSolve solve_hat_profile(const ConeParams& c, double c0, double r_max, const ProfileOptions& opt) {
  if (!(c0 > 0.0)) fail(ErrorCode::ParameterError, "c0 must be positive");
  const double mu = c.mu, S = std::sqrt(1.0 + mu * mu);
  const double p = c.p, q = c.q;
  const double r_switch = 2.0 * c0;
  if (!(r_max > 4.0 * r_switch)) fail(ErrorCode::ParameterError, "r_max too small for the requested c0");

  ProfileSolution sol;
  sol.params = c;
  sol.tip_height = c0;

  auto push_hat = [&](double r, double f, double d1, double d2) {
    sol.mesh.push_back(r);
    sol.psi_hat.push_back(f);
    sol.psi_hat_d1.push_back(d1);
    sol.psi_hat_d2.push_back(d2);
    sol.psi_hat_dev.push_back(f - mu * r);
    sol.psi_hat_dev_d1.push_back(d1 - mu);
    const double pd1 = (d1 - mu) / (1.0 + mu * d1);
    sol.ray_x.push_back((r + mu * f) / S);
    sol.psi.push_back((f - mu * r) / S);
    sol.psi_d1.push_back(pd1);
    sol.psi_d2.push_back(d2 * std::pow((1.0 + pd1 * pd1) / (1.0 + d1 * d1), 1.5));
  };

  // Tip chart: psi_hat'' = (1 + psi_hat'^2) ((q-1)/psi_hat - (p-1) psi_hat'/r).
  auto hat_rhs = [&](const State& y, State& dy, double r) {
    dy[0] = y[1];
    dy[1] = (1.0 + y[1] * y[1]) * ((q - 1.0) / y[0] - (p - 1.0) * y[1] / r);
  };
  const double d2_origin = (q - 1.0) / (p * c0);
  push_hat(0.0, c0, 0.0, d2_origin);
  const double r0 = opt.start_radius * c0;
  State y{c0 + 0.5 * d2_origin * r0 * r0, d2_origin * r0};
  {
    State dy;
    hat_rhs(y, dy, r0);
    push_hat(r0, y[0], y[1], dy[1]);
  }
  integrate_capped(hat_rhs, y, r0, r_switch, 1e-3 * c0, opt.max_step_hat * c0, opt.rel_tol,
                   [&](const State& s, double r) {
                     if (!std::isfinite(s[0]) || s[0] <= mu * r)
                       fail(ErrorCode::IntegrationBlowup, "profile crossed the cone at r = " + std::to_string(r));
                     State dy;
                     hat_rhs(s, dy, r);
                     push_hat(r, s[0], s[1], dy[1]);
                   });

  // Ray chart in s = ln x with W = psi/x, Z = dW/ds.
  auto ray_rhs = [&](const State& y, State& dy, double) {
    const double W = y[0], Z = y[1], d1 = W + Z;
    dy[0] = Z;
    dy[1] = -Z - (1.0 + d1 * d1) * (ray_P(c, W) * d1 + ray_Q(c, W) * W);
  };
  const double rs = sol.mesh.back();
  const double fs = sol.psi_hat.back(), fs1 = sol.psi_hat_d1.back();
  const double xs = (rs + mu * fs) / S;
  const double psi_s = (fs - mu * rs) / S;
  const double psi1_s = (fs1 - mu) / (1.0 + mu * fs1);
  State w{psi_s / xs, psi1_s - psi_s / xs};
  const double s_end = std::log(S * r_max) + 1e-3;
  integrate_capped(ray_rhs, w, std::log(xs), s_end, 1e-3, opt.max_step_log, opt.rel_tol,
                   [&](const State& st, double s) {
                     State dy;
                     ray_rhs(st, dy, s);
                     const double x = std::exp(s);
                     const double W = st[0], Z = st[1];
                     if (!std::isfinite(W) || std::abs(W) * std::max(mu, 1.0 / mu) >= 1.0)
                       fail(ErrorCode::IntegrationBlowup, "ray profile left the cone neighbourhood");
                     const double f = x * W, d1 = W + Z, d2 = (Z + dy[1]) / x;
                     const double hd1 = (mu + d1) / (1.0 - mu * d1);
                     sol.ray_x.push_back(x);
                     sol.psi.push_back(f);
                     sol.psi_d1.push_back(d1);
                     sol.psi_d2.push_back(d2);
                     sol.mesh.push_back((x - mu * f) / S);
                     sol.psi_hat.push_back((mu * x + f) / S);
                     sol.psi_hat_dev.push_back(S * f);
                     sol.psi_hat_d1.push_back(hd1);
                     sol.psi_hat_dev_d1.push_back(d1 * (1.0 + mu * mu) / (1.0 - mu * d1));
                     sol.psi_hat_d2.push_back(d2 * std::pow((1.0 + hd1 * hd1) / (1.0 + d1 * d1), 1.5));
                   });
  for (std::size_t i = 1; i < sol.mesh.size(); ++i)
    if (!(sol.mesh[i] > sol.mesh[i - 1]) || !(sol.ray_x[i] > sol.ray_x[i - 1]))
      fail(ErrorCode::ChartFold, "profile samples are not monotone");
  sol.r_max = sol.mesh.back();
  sol.k = 1.0;
  HatSolve out;
  out.k_estimate = estimate_amplitude(sol);
  sol.k = out.k_estimate;
  out.raw = std::move(sol);
  return out;
}

double estimate_amplitude(const ProfileSolution& sol) {
  const ConeParams& c = sol.params;
  const double a = c.alpha;
  const double e1 = c.alpha_tilde - a;
  const double e2 = (c.n == 8) ? (a - 1.0) : (c.alpha_hat - a);
  const double x_last = sol.ray_x.back();
  std::vector<Vec> N(3, Vec(3, 0.0));
  Vec rhs(3, 0.0);
  std::size_t used = 0;
  for (std::size_t i = 0; i < sol.ray_x.size(); ++i) {
    const double x = sol.ray_x[i];
    if (x < 0.1 * x_last) continue;
    const double u = x / x_last;  // keeps the basis well scaled
    const double b[3] = {1.0, std::pow(u, e1), std::pow(u, e2)};
    const double f = sol.psi[i] / std::pow(x, a);
    for (int r = 0; r < 3; ++r) {
      rhs[r] += b[r] * f;
      for (int s = 0; s < 3; ++s) N[r][s] += b[r] * b[s];
    }
    ++used;
  }
  if (used < 10) fail(ErrorCode::FitDegenerate, "too few samples in the amplitude window");
  return solve_dense(N, rhs)[0];
}

ProfileSolution normalize_profile(const ProfileSolution& raw, double k_estimate, double k_target) {
  if (!(k_estimate > 0.0) || !(k_target > 0.0)) fail(ErrorCode::ParameterError, "amplitudes must be positive");
  const double lam = std::pow(k_target / k_estimate, 1.0 / (1.0 - raw.params.alpha));
  ProfileSolution out = raw;
  if (lam == 1.0) {
    out.k = k_target;
    return out;
  }
  auto scale = [](Vec& v, double f) {
    for (double& x : v) x *= f;
  };
  scale(out.mesh, lam);
  scale(out.psi_hat, lam);
  scale(out.psi_hat_dev, lam);
  scale(out.psi_hat_d2, 1.0 / lam);
  scale(out.ray_x, lam);
  scale(out.psi, lam);
  scale(out.psi_d2, 1.0 / lam);
  out.tip_height *= lam;
  out.r_max *= lam;
  out.k = k_target;
  return out;
}

ProfileSolution minimal_profile(const ConeParams& c, double k, double r_max, const ProfileOptions& opt) {
  const double inv = 1.0 / (1.0 - c.alpha);
  const HatSolve probe = solve_hat_profile(c, 1.0, std::min(r_max, 1e3), opt);
  const double c0 = std::pow(k / probe.k_estimate, inv);
  HatSolve sol = solve_hat_profile(c, c0, r_max, opt);
  return normalize_profile(sol.raw, sol.k_estimate, k);
}

RotatedProfile rotated_profile(const ProfileSolution& hat) {
  RotatedProfile rot;
  rot.params = hat.params;
  rot.k = hat.k;
  rot.mesh = hat.ray_x;
  rot.psi = hat.psi;
  rot.psi_d1 = hat.psi_d1;
  rot.psi_d2 = hat.psi_d2;
  for (std::size_t i = 1; i < rot.mesh.size(); ++i)
    if (!(rot.mesh[i] > rot.mesh[i - 1])) fail(ErrorCode::ChartFold, "rotated profile folds over the ray");
  return rot;
}

double decay_rate_fit(const RotatedProfile& rot) {
  if (std::abs(rot.k - 1.0) > 1e-9) fail(ErrorCode::ParameterError, "decay_rate_fit expects k = 1");
  const double a = rot.params.alpha;
  const double x_last = rot.mesh.back();
  Vec lx, lr;
  for (std::size_t i = 0; i < rot.mesh.size(); ++i) {
    const double x = rot.mesh[i];
    if (x < 0.1 * x_last) continue;
    const double base = std::pow(x, a);
    const double res = std::abs(rot.psi[i] - base);
    if (!(res > 1e-13 * std::abs(base)))
      fail(ErrorCode::FitDegenerate, "residual below double precision at x = " + std::to_string(x));
    lx.push_back(std::log(x));
    lr.push_back(std::log(res));
  }
  return fit_line(lx, lr).slope;
}

AutonomousReduction autonomous_reduction(const RotatedProfile& rot) {
  AutonomousReduction out;
  for (std::size_t i = 0; i < rot.mesh.size(); ++i) {
    const double x = rot.mesh[i];
    const double W = rot.psi[i] / x;
    out.s.push_back(std::log(x));
    out.W.push_back(W);
    out.Z.push_back(rot.psi_d1[i] - W);
  }
  return out;
}

std::array<std::array<double, 2>, 2> linearized_matrix(const ConeParams& c) {
  return {{{0.0, 1.0}, {-2.0 * (c.n - 2.0), -(c.n - 1.0)}}};
}

std::array<double, 2> linearized_eigenvalues(const ConeParams& c) {
  const auto A = linearized_matrix(c);
  const double tr = A[0][0] + A[1][1];
  const double det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
  const double disc = std::sqrt(tr * tr - 4.0 * det);
  const double big = 0.5 * (tr - disc);  // larger magnitude root, computed without cancellation
  return {big, det / big};
}

Jet scaled_hat(const ProfileSolution& unit, double k, double r) {
  const double lam = std::pow(k / unit.k, 1.0 / (1.0 - unit.params.alpha));
  const Jet j = unit.eval_hat(r / lam);
  return {lam * j.v, j.d1, j.d2 / lam};
}

Jet scaled_ray(const RotatedProfile& unit, double k, double x) {
  const double lam = std::pow(k / unit.k, 1.0 / (1.0 - unit.params.alpha));
  const Jet j = unit.eval(x / lam);
  return {lam * j.v, j.d1, j.d2 / lam};
}

}  // namespace lawson
