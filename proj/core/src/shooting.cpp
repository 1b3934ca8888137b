#include "lawsonflow/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "lawsonflow/spectral.hpp"

namespace lawson {

Vec project_modes(const std::function<double(double)>& v, double s, int count, const ConeParams& params,
                  const SpectralExponents& exps, const GeometryConfig& geo) {
  const double e_sig = std::exp(exps.sigma_l * s);
  const double lo = geo.beta / e_sig, lo1 = (geo.beta + 1.0) / e_sig;
  const double hi = geo.rho * std::exp(0.5 * s);
  Vec extra;
  for (double b : {lo, lo1, hi - 1.0, hi})
    if (b > 0.0 && b < default_y_cut) extra.push_back(b);
  const WeightedQuadrature quad = make_weighted_quadrature(params, default_y_cut, extra);
  Vec vt(quad.nodes.size(), 0.0);
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    const double y = quad.nodes[i];
    const double cut = cutoff_eta(e_sig * y - geo.beta) * cutoff_eta(hi - y);
    if (cut != 0.0) vt[i] = cut * v(y);
  }
  Vec out(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    const EigenPair e = eigen_pair(params, j);
    Vec pj(quad.nodes.size());
    for (std::size_t i = 0; i < quad.nodes.size(); ++i) pj[i] = e(quad.nodes[i]);
    out[static_cast<std::size_t>(j)] = e.c * inner_product_H(vt, pj, quad);
  }
  return out;
}

Vec compute_phi(const std::function<double(double)>& v, double s, double s0, const ConeParams& params,
                const SpectralExponents& exps, const GeometryConfig& geo) {
  Vec phi = project_modes(v, s, exps.l, params, exps, geo);
  const double scale = std::exp(exps.lambda_l * s0);
  for (double& x : phi) x *= scale;
  return phi;
}

namespace {

std::function<double(double)> type1_reader(const FlowState& st) {
  const double s = st.s();
  const double r = std::exp(-0.5 * s);
  const double x_lo = st.geometry.beta * std::exp(-st.exps.sigma_l * s) * r;
  if (x_lo < st.ray.mesh.front())
    fail(ErrorCode::ChartCoverage, "inner cutoff of the projection lies inside the tip region of the chart");
  const double x_max = st.ray.mesh.back();
  return [&st, r, x_max](double y) {
    const double x = y * r;
    if (x > x_max) fail(ErrorCode::ChartCoverage, "projection needs the chart beyond rho");
    return st.ray.eval(x).v / r;
  };
}

}  // namespace

Vec compute_phi(const FlowState& st, double s0) {
  return compute_phi(type1_reader(st), st.s(), s0, st.params, st.exps, st.geometry);
}

Vec mode_amplitudes(const FlowState& st, int count) {
  return project_modes(type1_reader(st), st.s(), count, st.params, st.exps, st.geometry);
}

namespace {

bool finite(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

Vec try_eval(const std::function<Vec(const Vec&)>& F, const Vec& x) {
  try {
    Vec f = F(x);
    if (finite(f)) return f;
  } catch (const Error&) {
  }
  return {};
}

Vec clamp_ball(Vec x, double radius) {
  const double n = norm2(x);
  if (n >= radius) {
    const double s = 0.999 * radius / n;
    for (double& v : x) v *= s;
  }
  return x;
}

std::vector<Vec> fd_jacobian(const std::function<Vec(const Vec&)>& F, const Vec& x, const Vec& f, double h,
                             int& evaluations) {
  const std::size_t n = x.size();
  std::vector<std::future<Vec>> cols;
  for (std::size_t j = 0; j < n; ++j) {
    Vec xp = x;
    xp[j] += h;
    cols.push_back(std::async(std::launch::async, [&F, xp] { return try_eval(F, xp); }));
  }
  std::vector<Vec> J(f.size(), Vec(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    const Vec fp = cols[j].get();
    ++evaluations;
    if (fp.size() != f.size()) fail(ErrorCode::RootFindStall, "Jacobian column evaluation failed");
    for (std::size_t i = 0; i < f.size(); ++i) J[i][j] = (fp[i] - f[i]) / h;
  }
  return J;
}

}  // namespace

RootResult broyden_solve(const std::function<Vec(const Vec&)>& F, Vec x0, const RootOptions& opt) {
  RootResult res;
  res.x = clamp_ball(std::move(x0), opt.max_norm);
  res.f = try_eval(F, res.x);
  ++res.evaluations;
  if (res.f.empty()) fail(ErrorCode::RootFindStall, "map is not finite at the starting point");
  res.norm = norm2(res.f);
  if (res.norm < opt.tol) {
    res.converged = true;
    return res;
  }
  std::vector<Vec> J = fd_jacobian(F, res.x, res.f, opt.fd_step, res.evaluations);
  bool refreshed = true;
  while (res.iterations < opt.max_iter) {
    ++res.iterations;
    Vec minus_f = res.f;
    for (double& v : minus_f) v = -v;
    Vec dx;
    try {
      dx = solve_dense(J, minus_f);
    } catch (const Error&) {
      res.message = "Jacobian is singular";
      return res;
    }
    double lambda = 1.0;
    bool accepted = false;
    Vec x_new, f_new;
    for (int ls = 0; ls < 8; ++ls, lambda *= 0.5) {
      x_new = res.x;
      for (std::size_t i = 0; i < dx.size(); ++i) x_new[i] += lambda * dx[i];
      x_new = clamp_ball(x_new, opt.max_norm);
      f_new = try_eval(F, x_new);
      ++res.evaluations;
      if (!f_new.empty() && norm2(f_new) < (1.0 - 1e-4 * lambda) * res.norm) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (refreshed) {
        res.message = "line search failed with a fresh Jacobian";
        return res;
      }
      J = fd_jacobian(F, res.x, res.f, opt.fd_step, res.evaluations);
      refreshed = true;
      continue;
    }
    // Good Broyden update with the step actually taken.
    Vec sx(dx.size()), y(f_new.size());
    for (std::size_t i = 0; i < dx.size(); ++i) sx[i] = x_new[i] - res.x[i];
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = f_new[i] - res.f[i];
    double ss = 0.0;
    for (double v : sx) ss += v * v;
    if (ss > 0.0) {
      for (std::size_t i = 0; i < y.size(); ++i) {
        double Js = 0.0;
        for (std::size_t j = 0; j < sx.size(); ++j) Js += J[i][j] * sx[j];
        const double r = (y[i] - Js) / ss;
        for (std::size_t j = 0; j < sx.size(); ++j) J[i][j] += r * sx[j];
      }
    }
    refreshed = false;
    res.x = x_new;
    res.f = f_new;
    res.norm = norm2(f_new);
    if (res.norm < opt.tol) {
      res.converged = true;
      return res;
    }
  }
  res.message = "iteration limit reached";
  return res;
}

Vec evaluate_phi(const ShootConfig& cfg, const std::shared_ptr<const ProfileSolution>& unit, const Vec& a,
                 double t_hat) {
  const InitialData data = assemble_initial_curve(cfg.params, cfg.exps, a, cfg.t0, cfg.geometry, unit, cfg.mesh);
  const FlowState init = initial_flow_state(data, cfg.mesh);
  const double s0 = time_s(cfg.t0);
  if (t_hat <= cfg.t0) return compute_phi(init, s0);
  FlowConfig fc = cfg.flow;
  fc.t_end = t_hat;
  fc.snapshots = 2;
  // A trial whose tip runs away is useless for the root and slow to finish.
  if (fc.tip_band <= 1.0) fc.tip_band = 3.0;
  const FlowRun run = run_flow(init, fc);
  if (!run.completed) fail(run.error, run.message);
  return compute_phi(run.snapshots.back(), s0);
}

bool ShootResult::all_converged() const {
  return !horizons.empty() && std::all_of(horizons.begin(), horizons.end(), [](const HorizonSolve& h) {
    return h.converged;
  });
}

ShootResult shoot_parameters(const ShootConfig& cfg, const std::shared_ptr<const ProfileSolution>& unit) {
  if (cfg.horizons.empty()) fail(ErrorCode::ParameterError, "empty horizon schedule");
  for (std::size_t i = 0; i < cfg.horizons.size(); ++i) {
    if (cfg.horizons[i] < cfg.t0 || !(cfg.horizons[i] < 0.0) || (i > 0 && cfg.horizons[i] <= cfg.horizons[i - 1]))
      fail(ErrorCode::ParameterError, "horizons must increase within [t0, 0)");
  }
  ShootResult out;
  Vec a = cfg.a_start.empty() ? Vec(static_cast<std::size_t>(cfg.exps.l), 0.0) : cfg.a_start;
  RootOptions opt = cfg.root;
  opt.max_norm = std::min(opt.max_norm, std::pow(cfg.geometry.beta, cfg.params.alpha_tilde - cfg.params.alpha));
  for (double t_hat : cfg.horizons) {
    const RootResult r = broyden_solve([&](const Vec& x) { return evaluate_phi(cfg, unit, x, t_hat); }, a, opt);
    HorizonSolve h;
    h.t_hat = t_hat;
    h.a = r.x;
    h.phi = r.f;
    h.phi_norm = r.norm;
    h.tol = opt.tol;
    h.iterations = r.iterations;
    h.evaluations = r.evaluations;
    h.converged = r.converged;
    h.message = r.message;
    out.horizons.push_back(h);
    a = r.x;
  }
  return out;
}

}  // namespace lawson
