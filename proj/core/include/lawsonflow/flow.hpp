#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lawsonflow/charts.hpp"
#include "lawsonflow/error.hpp"
#include "lawsonflow/initdata.hpp"
#include "lawsonflow/outer_curve.hpp"

namespace lawson {

struct FlowConfig {
  double t_end = -1e-3;
  std::size_t snapshots = 11;        // equally spaced in log(-t), both ends included
  double max_dtau = 2.0;             // cap on the type-II step, i.e. dt <= max_dtau L(t)^2
  double max_change = 1e-3;          // per-step change limit, see FlowStepReport
  double regrid_hysteresis = 0.2;
  double inner_edge = 0.0;           // ray chart starts at inner_edge * L(t) after a regrid; 0 means beta/2
  std::size_t max_steps = 5'000'000;
  std::int64_t inject_failure_at_step = -1;
  double tip_band = 0.0;  // stop with TipCollapse once w_hat(0) leaves [w0/band, band w0]; 0 disables
};

// Tip chart (type-II), rotated chart (unrescaled) and the outer curve, all at time t.
struct FlowState {
  double t = 0.0;
  ConeParams params;
  SpectralExponents exps;
  GeometryConfig geometry;
  ChartFunction tip;
  ChartFunction ray;
  OuterCurve outer;
  std::size_t steps = 0;

  double s() const { return time_s(t); }
  double tau() const { return time_tau(exps, t); }
  double scale() const { return tip_scale(exps, t); }
};

FlowState initial_flow_state(const InitialData& data, const MeshConfig& mesh = {});

struct FlowStepReport {
  double tip_change = 0.0;    // max |delta w_hat|
  double ray_change = 0.0;    // max |delta u| / x
  double outer_change = 0.0;  // max |delta gamma| / |gamma|
  double max() const;
};

// One coupled step tip -> ray -> outer; state is untouched when an exception escapes.
FlowState coupled_step(const FlowState& state, double dt, FlowStepReport* report = nullptr);
// Rebuild the rotated chart on [inner_edge L, rho] when L has shrunk past the hysteresis band.
bool maybe_regrid(FlowState& state, const FlowConfig& config);

struct FlowRun {
  std::vector<FlowState> snapshots;
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::size_t regrids = 0;
  bool completed = true;
  ErrorCode error = ErrorCode::NonConvergence;
  std::string message;
};

// Advances to config.t_end. On a step error the run stops and the last good state is appended.
FlowRun run_flow(const FlowState& initial, const FlowConfig& config,
                 const std::function<void(const FlowState&)>& on_snapshot = {});

}  // namespace lawson
