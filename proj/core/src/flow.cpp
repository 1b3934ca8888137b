#include "lawsonflow/flow.hpp"

#include <algorithm>
#include <cmath>

namespace lawson {

double FlowStepReport::max() const { return std::max({tip_change, ray_change, outer_change}); }

FlowState initial_flow_state(const InitialData& data, const MeshConfig& mesh) {
  FlowState st;
  st.t = data.t0;
  st.params = data.params;
  st.exps = data.exps;
  st.geometry = data.geometry;
  st.tip = ChartFunction{ChartKind::tip_radial, TimeFrame::tau, data.tip.mesh, data.tip.value};
  st.ray = ChartFunction{ChartKind::rotated_ray, TimeFrame::t, data.ray.mesh, data.ray.value};
  st.outer.nodes = data.outer;
  st.outer.first = CurveEnd::pinned;
  st.outer.last = CurveEnd::xi_axis;
  st.outer.spacing = {mesh.outer_spacing_min_fraction * data.geometry.rho, mesh.outer_spacing, 0.1};
  return st;
}

FlowState coupled_step(const FlowState& st, double dt, FlowStepReport* report) {
  const double t1 = st.t + dt;
  if (!(dt > 0.0) || !(t1 < 0.0)) fail(ErrorCode::DomainError, "step must stay before t = 0");
  const ConeParams& P = st.params;
  const double S = std::sqrt(1.0 + P.mu * P.mu);
  const double L1 = tip_scale(st.exps, t1);
  FlowState next = st;
  next.t = t1;
  ++next.steps;

  // Tip: right Dirichlet value from the rotated chart at hat radius z_R L.
  const double zR = st.tip.mesh.back();
  const double guess = std::clamp(S * zR * L1, st.ray.mesh.front(), st.ray.mesh.back());
  const HatPoint hp = ray_to_hat(P, [&](double x) { return st.ray.eval(x); }, zR * L1, guess);
  if (hp.x_ray < st.ray.mesh.front() || hp.x_ray > st.ray.mesh.back())
    fail(ErrorCode::ChartCoverage, "tip boundary falls outside the rotated chart");
  const double tau0 = st.tau(), tau1 = time_tau(st.exps, t1);
  next.tip = step_type2(st.tip, tau0, tau1 - tau0, P, st.exps, hp.value / L1);

  // Rotated chart: inner value from the new tip, outer value from the parametric curve.
  const double uL = tip_to_ray(next.tip, L1, st.ray.mesh.front(), P);
  const double uR = outer_ray_value(st.outer, P, st.ray.mesh.back());
  next.ray = step_unrescaled(st.ray, dt, P, uL, uR);

  // Outer curve: pinned node follows the rotated chart, then explicit substeps.
  const double x_pin = rotate_chart(st.outer.nodes.front(), P, RotationDirection::forward)[0];
  next.outer.nodes.front() = rotate_chart({x_pin, next.ray.eval(x_pin).v}, P, RotationDirection::inverse);
  const double h = outer_stable_dt(next.outer, P);
  const auto sub = static_cast<std::size_t>(std::ceil(dt / h));
  for (std::size_t k = 0; k < sub; ++k) step_outer(next.outer, dt / static_cast<double>(sub), P);

  if (report) {
    *report = {};
    for (std::size_t i = 0; i < st.tip.value.size(); ++i)
      report->tip_change = std::max(report->tip_change, std::abs(next.tip.value[i] - st.tip.value[i]));
    for (std::size_t i = 0; i < st.ray.value.size(); ++i)
      report->ray_change =
          std::max(report->ray_change, std::abs(next.ray.value[i] - st.ray.value[i]) / st.ray.mesh[i]);
    for (std::size_t i = 0; i < st.outer.nodes.size(); ++i) {
      const Point2& a = st.outer.nodes[i];
      const Point2& b = next.outer.nodes[i];
      report->outer_change =
          std::max(report->outer_change, std::hypot(b[0] - a[0], b[1] - a[1]) / std::hypot(a[0], a[1]));
    }
  }
  if (needs_redistribution(next.outer)) redistribute(next.outer);
  return next;
}

bool maybe_regrid(FlowState& st, const FlowConfig& config) {
  const double zeta = config.inner_edge > 0.0 ? config.inner_edge : 0.5 * st.geometry.beta;
  const double target = zeta * st.scale();
  const double x_in = st.ray.mesh.front();
  if (target * (1.0 + config.regrid_hysteresis) > x_in) return false;
  ChartFunction fresh = st.ray;
  fresh.mesh = geometric_mesh(target, st.ray.mesh.back(), st.ray.mesh.size());
  for (std::size_t i = 0; i < fresh.mesh.size(); ++i) {
    const double x = fresh.mesh[i];
    fresh.value[i] = x >= x_in ? st.ray.eval(x).v : tip_to_ray(st.tip, st.scale(), x, st.params);
  }
  fresh.value.back() = st.ray.value.back();
  st.ray = std::move(fresh);
  return true;
}

FlowRun run_flow(const FlowState& initial, const FlowConfig& config,
                 const std::function<void(const FlowState&)>& on_snapshot) {
  if (!(config.t_end > initial.t) || !(config.t_end < 0.0))
    fail(ErrorCode::ParameterError, "flow end time must lie in (t0, 0)");
  FlowRun run;
  FlowState state = initial;
  const std::size_t ns = std::max<std::size_t>(config.snapshots, 2);
  Vec targets;
  const double l0 = std::log(-initial.t), l1 = std::log(-config.t_end);
  for (std::size_t k = 1; k < ns; ++k) targets.push_back(-std::exp(l0 + (l1 - l0) * k / (ns - 1.0)));
  targets.back() = config.t_end;

  auto record = [&](const FlowState& s) {
    run.snapshots.push_back(s);
    if (on_snapshot) on_snapshot(s);
  };
  record(state);

  double dt = 0.1 * config.max_dtau * std::pow(state.scale(), 2);
  std::size_t next_target = 0;
  int failures = 0;
  while (next_target < targets.size()) {
    const double target = targets[next_target];
    const double cap = config.max_dtau * std::pow(state.scale(), 2);
    const double dt_try = std::min({dt, cap, target - state.t});
    const bool hits_target = dt_try == target - state.t;
    FlowStepReport rep;
    FlowState next;
    try {
      if (run.steps + 1 > config.max_steps) fail(ErrorCode::NonConvergence, "step budget exhausted");
      if (config.inject_failure_at_step >= 0 &&
          run.steps == static_cast<std::size_t>(config.inject_failure_at_step))
        fail(ErrorCode::SolveFailure, "injected failure at step " + std::to_string(run.steps));
      next = coupled_step(state, dt_try, &rep);
    } catch (const Error& e) {
      const bool injected = config.inject_failure_at_step >= 0 &&
                            run.steps == static_cast<std::size_t>(config.inject_failure_at_step);
      const bool retryable = !injected && e.code() != ErrorCode::NonConvergence && ++failures < 40;
      if (retryable) {
        dt = 0.5 * dt_try;
        ++run.rejected;
        continue;
      }
      run.completed = false;
      run.error = e.code();
      run.message = e.what();
      record(state);
      return run;
    }
    if (rep.max() > config.max_change) {
      dt = 0.5 * dt_try;
      ++run.rejected;
      if (++failures >= 40) {
        run.completed = false;
        run.error = ErrorCode::NonConvergence;
        run.message = "step size collapsed under the change limit";
        record(state);
        return run;
      }
      continue;
    }
    failures = 0;
    ++run.steps;
    state = std::move(next);
    if (config.tip_band > 1.0) {
      const double r = state.tip.value.front() / initial.tip.value.front();
      if (r < 1.0 / config.tip_band || r > config.tip_band) {
        run.completed = false;
        run.error = ErrorCode::TipCollapse;
        run.message = "tip height left the band at t = " + std::to_string(state.t);
        record(state);
        return run;
      }
    }
    if (hits_target) state.t = target;
    if (maybe_regrid(state, config)) ++run.regrids;
    if (!hits_target || dt_try >= dt) dt = rep.max() < 0.25 * config.max_change ? 1.5 * dt_try : dt_try;
    if (hits_target) {
      record(state);
      ++next_target;
    }
  }
  return run;
}

}  // namespace lawson
