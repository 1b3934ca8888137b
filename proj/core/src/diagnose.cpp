#include "lawsonflow/diagnose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

namespace lawson {

namespace {

void check_denominators(double u, double x, const ConeParams& P) {
  if (!(x - P.mu * u > 0.0) || !(P.mu * x + u > 0.0))
    fail(ErrorCode::DenominatorBreach, "graph point leaves the cone neighbourhood at x = " + std::to_string(x));
}

struct Sample {
  Point2 at;
  double A = 0.0;
  double H = 0.0;
};

// Nodes and cell midpoints of a chart.
Vec with_midpoints(const Vec& mesh) {
  Vec out;
  out.reserve(2 * mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    out.push_back(mesh[i]);
    if (i + 1 < mesh.size()) out.push_back(0.5 * (mesh[i] + mesh[i + 1]));
  }
  return out;
}

std::vector<Sample> curvature_samples(const FlowState& st) {
  const ConeParams& P = st.params;
  const double L = st.scale();
  std::vector<Sample> out;
  for (double z : with_midpoints(st.tip.mesh)) {
    const Jet w = st.tip.eval(z);
    out.push_back({{z * L, w.v * L},
                   second_fundamental_norm_hat(z, w.v, w.d1, w.d2, P) / L,
                   mean_curvature_hat(z, w.v, w.d1, w.d2, P) / L});
  }
  for (double x : with_midpoints(st.ray.mesh)) {
    const Jet u = st.ray.eval(x);
    out.push_back({rotate_chart({x, u.v}, P, RotationDirection::inverse),
                   second_fundamental_norm(u.v, u.d1, u.d2, x, P), mean_curvature_graph(u.v, u.d1, u.d2, x, P)});
  }
  const Vec H = parametric_mean_curvature(st.outer, P);
  const Vec A = parametric_A_norm(st.outer, P);
  for (std::size_t i = 0; i < st.outer.nodes.size(); ++i) out.push_back({st.outer.nodes[i], A[i], H[i]});
  return out;
}

}  // namespace

double mean_curvature_graph(double u, double u1, double u2, double x, const ConeParams& P) {
  check_denominators(u, x, P);
  const double A = 1.0 + u1 * u1;
  const double g = u2 / A + (P.p - 1.0) * (P.mu + u1) / (x - P.mu * u) - (P.q - 1.0) * (1.0 - P.mu * u1) / (P.mu * x + u);
  return g / std::sqrt(A);
}

double second_fundamental_norm(double u, double u1, double u2, double x, const ConeParams& P) {
  check_denominators(u, x, P);
  const double A = 1.0 + u1 * u1;
  const double k0 = u2 / A;
  const double k1 = (P.mu + u1) / (x - P.mu * u);
  const double k2 = (1.0 - P.mu * u1) / (P.mu * x + u);
  return std::sqrt((k0 * k0 + (P.p - 1.0) * k1 * k1 + (P.q - 1.0) * k2 * k2) / A);
}

double mean_curvature_hat(double r, double w, double w1, double w2, const ConeParams& P) {
  if (!(w > 0.0) || r < 0.0) fail(ErrorCode::DenominatorBreach, "hat graph must stay off the axes");
  const double A = 1.0 + w1 * w1;
  const double slope = r == 0.0 ? w2 : w1 / r;
  return (w2 / A + (P.p - 1.0) * slope - (P.q - 1.0) / w) / std::sqrt(A);
}

double second_fundamental_norm_hat(double r, double w, double w1, double w2, const ConeParams& P) {
  if (!(w > 0.0) || r < 0.0) fail(ErrorCode::DenominatorBreach, "hat graph must stay off the axes");
  const double A = 1.0 + w1 * w1;
  const double k0 = w2 / A;
  const double k1 = r == 0.0 ? w2 : w1 / r;
  const double k2 = 1.0 / w;
  return std::sqrt((k0 * k0 + (P.p - 1.0) * k1 * k1 + (P.q - 1.0) * k2 * k2) / A);
}

double jacobi_potential_cone(const ConeParams& params, double r) {
  if (!(r > 0.0)) fail(ErrorCode::DomainError, "radius must be positive");
  return (params.n - 2.0) / (r * r);
}

double jacobi_potential_profile(const ProfileSolution& unit, double k, double r) {
  const ConeParams& P = unit.params;
  const double lam = std::pow(k / unit.k, 1.0 / (1.0 - P.alpha));
  const double tip = lam * unit.tip_height;
  if (r < tip) fail(ErrorCode::DomainError, "radius below the tip of M_k");
  auto radius_gap = [&](double z) {
    const double w = scaled_hat(unit, k, z).v;
    return std::hypot(z, w) - r;
  };
  double z = 0.0;
  if (r > tip) {
    boost::uintmax_t iters = 200;
    const auto br = boost::math::tools::toms748_solve(radius_gap, 0.0, r, boost::math::tools::eps_tolerance<double>(50),
                                                      iters);
    z = 0.5 * (br.first + br.second);
  }
  if (z / lam > unit.mesh.back()) fail(ErrorCode::DomainError, "radius past the profile mesh");
  const Jet w = scaled_hat(unit, k, z);
  const double A = second_fundamental_norm_hat(z, w.v, w.d1, w.d2, P);
  return A * A;
}

RescaledState rescale_state(const FlowState& st, RescaleMode mode) {
  RescaledState out;
  out.mode = mode;
  if (mode == RescaleMode::type1) {
    out.time = st.s();
    out.ray = to_type1(st.ray, st.t);
    // w_hat(z) = e^{sigma s} v_hat(e^{-sigma s} z)
    const double f = std::exp(-st.exps.sigma_l * out.time);
    out.tip = st.tip;
    out.tip.frame = TimeFrame::s;
    for (double& z : out.tip.mesh) z *= f;
    for (double& w : out.tip.value) w *= f;
  } else {
    out.time = st.tau();
    out.ray = to_type2(st.ray, st.exps, st.t);
    out.tip = st.tip;
  }
  return out;
}

std::pair<ChartFunction, ChartFunction> unrescale_state(const RescaledState& r, const SpectralExponents& exps) {
  if (r.mode == RescaleMode::type2) return {from_type2(r.ray, exps, r.time), r.tip};
  ChartFunction tip = r.tip;
  tip.frame = TimeFrame::tau;
  const double f = std::exp(exps.sigma_l * r.time);
  for (double& z : tip.mesh) z *= f;
  for (double& w : tip.value) w *= f;
  return {from_type1(r.ray, r.time), tip};
}

double weight_exponent_max(const ConeParams& params, const SpectralExponents& exps) {
  return (1.0 - params.alpha) * (1.0 - 1.0 / (2.0 * exps.lambda_l));
}

bool weight_exponent_feasible(const ConeParams& params, const SpectralExponents& exps, double a) {
  return exps.lambda_l > 0.0 && a <= weight_exponent_max(params, exps) * (1.0 + 1e-12);
}

bool bounded_H_criterion(const ConeParams& params, int l) {
  const SpectralExponents e = spectral_exponents(params, l);
  return e.lambda_l > 0.0 && weight_exponent_max(params, e) > -params.alpha;
}

WeightedH weighted_H_sup(const FlowState& st, double a) {
  const ConeParams& P = st.params;
  if (!(a > -P.alpha) || !(a < 1.0 - P.alpha)) fail(ErrorCode::DomainError, "weight exponent outside (-alpha, 1-alpha)");
  WeightedH out;
  out.feasible = weight_exponent_feasible(P, st.exps, a);
  const double R = std::sqrt(-st.t);
  const double inv_L = 1.0 / st.scale();
  for (const Sample& s : curvature_samples(st)) {
    const double r = std::hypot(s.at[0], s.at[1]);
    if (r > R) continue;
    const double v = std::pow(1.0 + inv_L * r, a) * std::abs(s.H);
    if (v > out.value) {
      out.value = v;
      out.where = s.at;
    }
  }
  return out;
}

CurvatureReport curvature_report(const FlowState& st, std::optional<double> weight_exponent, double remark_eps) {
  const ConeParams& P = st.params;
  CurvatureReport rep;
  rep.t = st.t;
  for (const Sample& s : curvature_samples(st)) {
    if (!std::isfinite(s.A) || !std::isfinite(s.H)) fail(ErrorCode::SolveFailure, "non-finite curvature");
    if (s.A > rep.sup_A) {
      rep.sup_A = s.A;
      rep.where_A = s.at;
    }
    if (std::abs(s.H) > rep.sup_H) {
      rep.sup_H = std::abs(s.H);
      rep.where_H = s.at;
    }
  }
  rep.typeII_A = st.scale() * rep.sup_A;
  rep.remark_H = std::pow(-st.t, 0.5 - st.exps.sigma_l + remark_eps) * rep.sup_H;
  double a = 0.0;
  if (weight_exponent) {
    a = *weight_exponent;
  } else if (bounded_H_criterion(P, st.exps.l)) {
    a = weight_exponent_max(P, st.exps);
  } else {
    a = 0.5 - P.alpha;
  }
  const WeightedH w = weighted_H_sup(st, a);
  rep.weight_exponent = a;
  rep.weighted_H = w.value;
  rep.weight_feasible = w.feasible;
  return rep;
}

RateFit blowup_rate_fit(const std::vector<CurvatureReport>& series, const SpectralExponents& exps) {
  if (series.size() < 10) fail(ErrorCode::SpanTooShort, "rate fit needs at least ten reports");
  std::vector<CurvatureReport> s = series;
  std::sort(s.begin(), s.end(), [](const CurvatureReport& a, const CurvatureReport& b) { return a.t < b.t; });
  const double first = -s.front().t, last = -s.back().t;
  if (!(last > 0.0) || std::log10(first / last) < 1.0 - 1e-9)
    fail(ErrorCode::SpanTooShort, "rate fit needs one decade in -t");
  Vec x, y;
  for (const CurvatureReport& r : s) {
    if (-r.t > 10.0 * last * (1.0 + 1e-12)) continue;
    x.push_back(std::log(-r.t));
    y.push_back(std::log(r.sup_A));
  }
  if (x.size() < 3) fail(ErrorCode::SpanTooShort, "too few reports in the last decade");
  const LineFit f = fit_line(x, y);
  RateFit out;
  out.slope = f.slope;
  out.band = 2.0 * f.slope_stderr;
  out.expected = -(0.5 + exps.sigma_l);
  out.deviation = f.slope - out.expected;
  out.type = std::abs(f.slope + 0.5) < std::abs(out.deviation) ? BlowupType::type_I : BlowupType::type_II;
  out.used = x.size();
  return out;
}

Distance convergence_metric(const ChartFunction& c, const std::function<Jet(double)>& target, double lo, double hi) {
  if (!(lo < hi) || lo < c.mesh.front() || hi > c.mesh.back())
    fail(ErrorCode::WindowUncovered, "window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                         "] is not inside the chart");
  Vec pts{lo, hi};
  for (double x : with_midpoints(c.mesh))
    if (x > lo && x < hi) pts.push_back(x);
  Distance d;
  for (double x : pts) {
    const Jet f = c.eval(x), g = target(x);
    d.c0 = std::max(d.c0, std::abs(f.v - g.v));
    d.c1 = std::max(d.c1, std::abs(f.d1 - g.d1));
  }
  return d;
}

Distance distance_to_profile(const FlowState& st, const ProfileSolution& unit, double k, double lo, double hi) {
  return convergence_metric(st.tip, [&](double z) { return scaled_hat(unit, k, z); }, lo, hi);
}

Distance distance_to_cone(const FlowState& st, double lo, double hi) {
  const ChartFunction v = to_type1(st.ray, st.t);
  return convergence_metric(v, [](double) { return Jet{}; }, lo, hi);
}

double SubSuperSolution::u(double x, double t) const {
  return C0 * (std::pow(x, 2.0 * lambda + 1.0) - C * (-t) * std::pow(x, 2.0 * lambda - 1.0));
}

double SubSuperSolution::u_t(double x, double) const { return C0 * C * std::pow(x, 2.0 * lambda - 1.0); }

Jet SubSuperSolution::jet(double x, double t) const {
  const double m1 = 2.0 * lambda + 1.0, m2 = 2.0 * lambda - 1.0;
  const double c = C * (-t);
  return {C0 * (std::pow(x, m1) - c * std::pow(x, m2)),
          C0 * (m1 * std::pow(x, m1 - 1.0) - c * m2 * std::pow(x, m2 - 1.0)),
          C0 * (m1 * (m1 - 1.0) * std::pow(x, m1 - 2.0) - c * m2 * (m2 - 1.0) * std::pow(x, m2 - 2.0))};
}

SubSuperSolution make_subsuper(const ConeParams& params, const SpectralExponents& exps, int sign, double C0) {
  if (sign != 1 && sign != -1) fail(ErrorCode::ParameterError, "sign must be +1 or -1");
  if (!(C0 > 0.0)) fail(ErrorCode::ParameterError, "C0 must be positive");
  SubSuperSolution s;
  s.sign = sign;
  s.C0 = C0;
  s.lambda = exps.lambda_l;
  const double l2 = 2.0 * exps.lambda_l, n2 = params.n - 2.0;
  s.M1 = (l2 + 1.0) * l2 + n2 * (l2 + 2.0);
  s.M2 = (l2 - 1.0) * (l2 - 2.0) + n2 * l2;
  s.C = sign > 0 ? 2.0 * s.M1 : 0.0;
  return s;
}

ResidualReport subsuper_residual(const SubSuperSolution& sol, const ConeParams& P, double t0, double t_hat, double R,
                                 double rho, std::size_t nt, std::size_t nx) {
  if (!(t0 < t_hat) || !(t_hat < 0.0)) fail(ErrorCode::ParameterError, "need t0 < t_hat < 0");
  if (!(2.0 * R * std::sqrt(-t0) < rho)) fail(ErrorCode::ParameterError, "region 2R sqrt(-t) < x < rho is empty");
  ResidualReport rep;
  rep.min_residual = std::numeric_limits<double>::infinity();
  rep.max_residual = -rep.min_residual;
  rep.min_margin = rep.min_residual;
  for (std::size_t i = 0; i < nt; ++i) {
    const double t = t0 + (t_hat - t0) * (i + 0.5) / static_cast<double>(nt);
    const double lo = std::log(2.0 * R * std::sqrt(-t)), hi = std::log(rho);
    for (std::size_t j = 0; j < nx; ++j) {
      const double x = std::exp(lo + (hi - lo) * (j + 0.5) / static_cast<double>(nx));
      const Jet u = sol.jet(x, t);
      const double res = sol.u_t(x, t) - ray_terms(P, x, u.v, u.d1, u.d2).g;
      const double margin = sol.sign * res / (sol.C0 * sol.M1 * std::pow(x, 2.0 * sol.lambda - 1.0));
      ++rep.nodes;
      if (sol.sign * res < 0.0) ++rep.violations;
      rep.min_residual = std::min(rep.min_residual, res);
      rep.max_residual = std::max(rep.max_residual, res);
      rep.min_margin = std::min(rep.min_margin, margin);
    }
  }
  return rep;
}

Sandwich profile_sandwich(const FlowState& st, const ProfileSolution& unit, double k_lo, double k_hi) {
  const double e = 1.0 / (1.0 - st.params.alpha);
  const double lo = std::pow(k_lo / unit.k, e), hi = std::pow(k_hi / unit.k, e);
  Sandwich out{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  const double z_max = 2.0 * st.geometry.beta / std::sqrt(1.0 + st.params.mu * st.params.mu);
  for (std::size_t i = 0; i < st.tip.mesh.size() && st.tip.mesh[i] <= z_max; ++i) {
    const double z = st.tip.mesh[i], w = st.tip.value[i];
    out.lower_margin = std::min(out.lower_margin, w - lo * unit.eval_hat(z / lo).v);
    out.upper_margin = std::min(out.upper_margin, hi * unit.eval_hat(z / hi).v - w);
  }
  return out;
}

}  // namespace lawson
