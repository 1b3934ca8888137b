#pragma once

#include "lawsonflow/cone_params.hpp"
#include "lawsonflow/numerics.hpp"

namespace lawson {

enum class ChartKind { tip_radial, rotated_ray, outer_parametric };
enum class TimeFrame { t, s, tau };

// A graph chart sampled on a strictly increasing mesh. The tip chart starts at z = 0 and is
// extended evenly across it.
struct ChartFunction {
  ChartKind kind = ChartKind::rotated_ray;
  TimeFrame frame = TimeFrame::t;
  Vec mesh;
  Vec value;

  Vec d1() const;
  Vec d2() const;
  // Local cubic through the four nearest nodes.
  Jet eval(double x) const;
};

// Value and partial derivatives of the pointwise right-hand side G(x, u, u', u'').
struct PointTerms {
  double g = 0.0, g_u = 0.0, g_u1 = 0.0, g_u2 = 0.0;
};

PointTerms ray_terms(const ConeParams& params, double x, double u, double u1, double u2);
PointTerms type1_terms(const ConeParams& params, double y, double v, double v1, double v2);
// drift = (1/2 + sigma_l) / (2 sigma_l tau); z = 0 uses the radial form p w''.
PointTerms type2_terms(const ConeParams& params, double drift, double z, double w, double w1, double w2);

double type2_drift(const SpectralExponents& exps, double tau);

// Semi-discrete right-hand sides; Dirichlet ends are 0.
Vec rhs_unrescaled(const Vec& x, const Vec& u, const ConeParams& params);
Vec rhs_type1(const Vec& y, const Vec& v, const ConeParams& params);
Vec rhs_type2(const Vec& z, const Vec& w, double tau, const ConeParams& params, const SpectralExponents& exps);

// One two-stage linearly implicit Rosenbrock step (L-stable, second order), Dirichlet data at the new time.
ChartFunction step_unrescaled(const ChartFunction& chart, double dt, const ConeParams& params, double left,
                              double right);
ChartFunction step_type1(const ChartFunction& chart, double ds, const ConeParams& params, double left, double right);
// Even symmetry at z = 0, Dirichlet at the right end.
ChartFunction step_type2(const ChartFunction& chart, double tau, double dtau, const ConeParams& params,
                         const SpectralExponents& exps, double right);

// |u/x| < min(mu, 1/mu) and positive denominators; throws ConeBreach otherwise.
void check_ray_chart(const ChartFunction& chart, const ConeParams& params);

double time_s(double t);
double time_tau(const SpectralExponents& exps, double t);
double t_from_s(double s);
double t_from_tau(const SpectralExponents& exps, double tau);

// v(y, s) = (-t)^{-1/2} u((-t)^{1/2} y, t) and back.
ChartFunction to_type1(const ChartFunction& unrescaled, double t);
ChartFunction from_type1(const ChartFunction& type1, double s);
// w_hat(z, tau) = (-t)^{-(1/2+sigma)} u_hat((-t)^{1/2+sigma} z, t) and back.
ChartFunction to_type2(const ChartFunction& hat, const SpectralExponents& exps, double t);
ChartFunction from_type2(const ChartFunction& type2, const SpectralExponents& exps, double tau);

// Ray-chart value at ray coordinate x read off a type-II tip chart with length scale L.
double tip_to_ray(const ChartFunction& tip, double L, double x, const ConeParams& params);

}  // namespace lawson
