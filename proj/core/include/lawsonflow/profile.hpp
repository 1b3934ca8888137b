#pragma once

#include <memory>

#include "lawsonflow/cone_params.hpp"
#include "lawsonflow/numerics.hpp"

namespace lawson {

struct ProfileOptions {
  double rel_tol = 1e-13;
  double start_radius = 1e-6;
  double max_step_hat = 0.005;  // in units of c0
  double max_step_log = 0.01;  // in s = ln x on the ray part
};

// Curvature-weighted P(w), Q(w) of the graph-over-ray equation, w = u/x.
double ray_P(const ConeParams& params, double w);
double ray_Q(const ConeParams& params, double w);

// Sampled minimal profile. Both chart representations are kept on the same sample points:
// the tip chart (r, psi_hat) and the graph over the cone ray (x, psi).
struct ProfileSolution {
  ConeParams params;
  double k = 0.0;
  double r_max = 0.0;
  double tip_height = 0.0;
  Vec mesh;  // r, starting at 0
  Vec psi_hat, psi_hat_d1, psi_hat_d2;
  Vec psi_hat_dev;     // psi_hat - mu r, carried separately to avoid cancellation
  Vec psi_hat_dev_d1;  // psi_hat' - mu
  // Same samples in the ray chart.
  Vec ray_x, psi, psi_d1, psi_d2;

  // Beyond the mesh the leading asymptotic term is used.
  Jet eval_hat(double r) const;
  Jet eval_dev(double r) const;
  double hat_residual(std::size_t i) const;
};

struct RotatedProfile {
  ConeParams params;
  double k = 0.0;
  Vec mesh;
  Vec psi, psi_d1, psi_d2;
  Jet eval(double x) const;
  double x_start() const { return mesh.front(); }
  double residual(std::size_t i) const;
};

struct HatSolve {
  ProfileSolution raw;
  double k_estimate = 0.0;
};

HatSolve solve_hat_profile(const ConeParams& params, double c0, double r_max, const ProfileOptions& options = {});

// Least-squares fit of the asymptotic amplitude over the last decade of the ray samples.
double estimate_amplitude(const ProfileSolution& sol);

ProfileSolution normalize_profile(const ProfileSolution& raw, double k_estimate, double k_target);

// Solves with c0 chosen so that the amplitude is k and the tip chart reaches r_max.
ProfileSolution minimal_profile(const ConeParams& params, double k, double r_max = 1e3,
                                const ProfileOptions& options = {});

RotatedProfile rotated_profile(const ProfileSolution& hat);

// Slope of log|psi - x^alpha| against log x over the last decade.
double decay_rate_fit(const RotatedProfile& rot);

struct AutonomousReduction {
  Vec s, W, Z;
};
AutonomousReduction autonomous_reduction(const RotatedProfile& rot);

// Linearisation of the (W, Z) system at the origin and its eigenvalues (ascending).
std::array<std::array<double, 2>, 2> linearized_matrix(const ConeParams& params);
std::array<double, 2> linearized_eigenvalues(const ConeParams& params);

// Value and derivatives of the scaled family psi_k(r) = k^{1/(1-a)} psi_1(k^{-1/(1-a)} r),
// evaluated from a k = 1 solution.
Jet scaled_hat(const ProfileSolution& unit, double k, double r);
Jet scaled_ray(const RotatedProfile& unit, double k, double x);

}  // namespace lawson
