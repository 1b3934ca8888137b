#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lawsonflow/flow.hpp"
#include "lawsonflow/profile.hpp"

namespace lawson {

// (c_j <v~, phi_j>)_{j<count}, where v~ is the type-I function v(y, s) cut off by
// eta(e^{sigma_l s} y - beta) eta(rho e^{s/2} - y).
Vec project_modes(const std::function<double(double)>& v, double s, int count, const ConeParams& params,
                  const SpectralExponents& exps, const GeometryConfig& geometry);
// e^{lambda_l s0} (c_j <v~, phi_j>)_{j<l}, where v~ is the type-I function v(y, s) cut off by
// eta(e^{sigma_l s} y - beta) eta(rho e^{s/2} - y).
Vec compute_phi(const std::function<double(double)>& v, double s, double s0, const ConeParams& params,
                const SpectralExponents& exps, const GeometryConfig& geometry);
// Same, reading v off the rotated chart of a flow state. Throws ChartCoverage when the cutoff
// support is not inside the chart.
Vec compute_phi(const FlowState& state, double s0);
Vec mode_amplitudes(const FlowState& state, int count);

struct RootOptions {
  double tol = 1e-6;        // on |F|
  int max_iter = 30;
  double fd_step = 1e-5;    // forward-difference step for the Jacobian seed
  double max_norm = 1e300;  // iterates are pulled back inside this ball
};

struct RootResult {
  Vec x, f;
  double norm = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::string message;
};

// Damped Broyden with a forward-difference seed; Jacobian columns are evaluated concurrently.
// Evaluations that throw count as failed trial points. Throws RootFindStall only when no finite
// starting value exists; otherwise stalls are reported through converged = false.
RootResult broyden_solve(const std::function<Vec(const Vec&)>& F, Vec x0, const RootOptions& options = {});

struct ShootConfig {
  ConeParams params;
  SpectralExponents exps;
  GeometryConfig geometry;
  MeshConfig mesh;
  FlowConfig flow;  // t_end is replaced by each horizon
  double t0 = -1e-2;
  Vec horizons;     // t_hat values, increasing, each in [t0, 0)
  Vec a_start;      // empty means zero
  RootOptions root; // tol applies to |Phi|, which already carries e^{lambda_l s0}; max_norm is
                    // capped at beta^(alpha_tilde - alpha)
};

// Phi_{t_hat}(a): build the initial curve, run the flow to t_hat and project.
Vec evaluate_phi(const ShootConfig& config, const std::shared_ptr<const ProfileSolution>& unit, const Vec& a,
                 double t_hat);

struct HorizonSolve {
  double t_hat = 0.0;
  Vec a;
  Vec phi;
  double phi_norm = 0.0;
  double tol = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::string message;
};

struct ShootResult {
  std::vector<HorizonSolve> horizons;
  bool all_converged() const;
};

// Continuation over the horizon schedule, warm-started from the previous root.
ShootResult shoot_parameters(const ShootConfig& config, const std::shared_ptr<const ProfileSolution>& unit);

}  // namespace lawson
