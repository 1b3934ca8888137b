#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lawsonflow/charts.hpp"
#include "lawsonflow/flow.hpp"
#include "lawsonflow/profile.hpp"

namespace lawson {

// Rotated-chart graph u over the ray. Both throw DenominatorBreach unless x - mu u > 0 and mu x + u > 0.
double mean_curvature_graph(double u, double u1, double u2, double x, const ConeParams& params);
double second_fundamental_norm(double u, double u1, double u2, double x, const ConeParams& params);

// Graph w(r) over the first axis (hat chart); at r = 0 the symmetric limit w'/r -> w'' is used.
double mean_curvature_hat(double r, double w, double w1, double w2, const ConeParams& params);
double second_fundamental_norm_hat(double r, double w, double w1, double w2, const ConeParams& params);

// |A|^2 of the cone at |x| = r.
double jacobi_potential_cone(const ConeParams& params, double r);
// |A|^2 of M_k at the point with |x| = r. Throws DomainError below the tip radius or past the profile end.
double jacobi_potential_profile(const ProfileSolution& unit, double k, double r);

enum class RescaleMode { type1, type2 };

// Both charts of a state in one rescaled frame: type1 uses sqrt(-t), type2 uses L(t).
struct RescaledState {
  RescaleMode mode = RescaleMode::type1;
  double time = 0.0;  // s or tau
  ChartFunction ray;
  ChartFunction tip;
};
RescaledState rescale_state(const FlowState& state, RescaleMode mode);
// Inverse of rescale_state; returns (ray, tip) in the frames FlowState keeps (unrescaled, type-II).
std::pair<ChartFunction, ChartFunction> unrescale_state(const RescaledState& rescaled, const SpectralExponents& exps);

struct CurvatureReport {
  double t = 0.0;
  double sup_A = 0.0;
  double sup_H = 0.0;
  double typeII_A = 0.0;     // (-t)^{1/2+sigma_l} sup|A|
  double weight_exponent = 0.0;
  double weighted_H = 0.0;   // see weighted_H_sup
  bool weight_feasible = false;
  double remark_H = 0.0;     // (-t)^{1/2-sigma_l+eps} sup|H|, tracked for l = 2
  Point2 where_A{};          // planar point of each sup
  Point2 where_H{};
};

// Sups over tip chart, rotated chart and outer curve, on nodes and cell midpoints.
// weight_exponent defaults to the largest feasible value (or the middle of (-alpha, 1-alpha) when none is).
CurvatureReport curvature_report(const FlowState& state, std::optional<double> weight_exponent = std::nullopt,
                                 double remark_eps = 0.01);

// Largest a with lambda_l (1 - a/(1-alpha)) - 1/2 >= 0.
double weight_exponent_max(const ConeParams& params, const SpectralExponents& exps);
bool weight_exponent_feasible(const ConeParams& params, const SpectralExponents& exps, double a);
// Some a in (-alpha, 1-alpha) is feasible.
bool bounded_H_criterion(const ConeParams& params, int l);

struct WeightedH {
  double value = 0.0;
  bool feasible = false;  // false is a warning: the weight does not control H in the limit
  Point2 where{};
};
// sup of (1 + (-t)^{-(1/2+sigma_l)} |x|)^a |H| over |x| <= sqrt(-t). Throws DomainError outside (-alpha, 1-alpha).
WeightedH weighted_H_sup(const FlowState& state, double a);

enum class BlowupType { type_I, type_II };
struct RateFit {
  double slope = 0.0;
  double band = 0.0;        // two standard errors
  double expected = 0.0;    // -(1/2 + sigma_l)
  double deviation = 0.0;   // slope - expected
  BlowupType type = BlowupType::type_II;
  std::size_t used = 0;
};
// Least squares of log sup|A| against log(-t) over the last decade. Throws SpanTooShort below ten
// reports or one decade.
RateFit blowup_rate_fit(const std::vector<CurvatureReport>& series, const SpectralExponents& exps);

struct Distance {
  double c0 = 0.0;
  double c1 = 0.0;
};
// sup |f - g| and sup |f' - g'| of a chart against a target on [lo, hi], nodes plus midpoints.
// Throws WindowUncovered when the chart does not cover the window.
Distance convergence_metric(const ChartFunction& chart, const std::function<Jet(double)>& target, double lo,
                            double hi);
// Type-II tip chart against psi_hat_k on [lo, hi].
Distance distance_to_profile(const FlowState& state, const ProfileSolution& unit, double k, double lo, double hi);
// Type-I rotated chart against the cone (v = 0) on [lo, hi].
Distance distance_to_cone(const FlowState& state, double lo, double hi);

// psi_hat_{k_lo} <= w_hat <= psi_hat_{k_hi} on the tip-chart nodes with z <= 2 beta / sqrt(1 + mu^2).
struct Sandwich {
  double lower_margin = 0.0;  // min of w_hat - psi_hat_{k_lo}
  double upper_margin = 0.0;  // min of psi_hat_{k_hi} - w_hat
  bool ok() const { return lower_margin >= 0.0 && upper_margin >= 0.0; }
};
Sandwich profile_sandwich(const FlowState& state, const ProfileSolution& unit, double k_lo = 0.5, double k_hi = 2.0);

// u^{+-}(x, t) = C0 (x^{2 lambda_l + 1} - C (-t) x^{2 lambda_l - 1}).
struct SubSuperSolution {
  int sign = 1;  // +1 super, -1 sub
  double C0 = 1.0;
  double C = 0.0;
  double lambda = 0.0;
  double M1 = 0.0;
  double M2 = 0.0;
  double u(double x, double t) const;
  double u_t(double x, double t) const;
  Jet jet(double x, double t) const;
};
// C = 2 M1 for the supersolution, 0 for the subsolution.
SubSuperSolution make_subsuper(const ConeParams& params, const SpectralExponents& exps, int sign, double C0 = 1.0);

struct ResidualReport {
  std::size_t nodes = 0;
  std::size_t violations = 0;   // nodes with the wrong sign
  double min_residual = 0.0;
  double max_residual = 0.0;
  double min_margin = 0.0;      // min of sign * residual / (C0 M1 x^{2 lambda - 1})
  bool ok() const { return nodes > 0 && violations == 0; }
};
// (d_t - L~) u - Q u on an nt x nx grid over {t0 < t < t_hat, 2 R sqrt(-t) < x < rho}, with L~ the
// cone's Jacobi operator u'' + (n-2)u'/x + (n-2)u/x^2 and Q the rest of the rotated-chart equation.
ResidualReport subsuper_residual(const SubSuperSolution& sol, const ConeParams& params, double t0, double t_hat,
                                 double R, double rho, std::size_t nt = 100, std::size_t nx = 100);

}  // namespace lawson
