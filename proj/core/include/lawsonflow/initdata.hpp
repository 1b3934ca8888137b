#pragma once

#include <array>
#include <memory>
#include <vector>

#include "lawsonflow/cone_params.hpp"
#include "lawsonflow/numerics.hpp"
#include "lawsonflow/profile.hpp"
#include "lawsonflow/specfn.hpp"

namespace lawson {

// Smooth step: 0 for x <= 0, 1 for x >= 1, eta(x) + eta(1 - x) = 1.
double cutoff_eta(double x);
Jet cutoff_eta(Jet x);

struct GeometryConfig {
  double rho = 0.2;
  double beta = 20.0;
  double Lambda = 1e4;
  double R = 10.0;
  double delta = 0.05;
};

struct MeshConfig {
  std::size_t tip_nodes = 400;
  std::size_t ray_nodes = 400;
  double tip_stretch = 4.0;
  double outer_spacing = 0.005;  // arclength spacing on the cap
  double outer_spacing_min_fraction = 1.0 / 40.0;  // of rho, at the pinned end
};

// (-t)^{1/2 + sigma_l}, the tip length scale.
double tip_scale(const SpectralExponents& exps, double t);

// The eigenfunction packet (-t0)^{1/2+lambda_l} (phi_l/c_l + sum_j a_j phi_j/c_j)(x / sqrt(-t0)).
Jet low_mode_packet(const ConeParams& params, const SpectralExponents& exps, const Vec& a, double t0, double x);
// Same packet, expanded in powers x^{alpha + 2i} (-t0)^{l - i}.
double low_mode_packet_expanded(const ConeParams& params, const SpectralExponents& exps, const Vec& a, double t0,
                                double x);

// Graph over the first axis: straight piece of slope mu, quintic blend of width 2 delta, arc of radius 2.
struct OuterCap {
  double mu = 0.0;
  double x_left = 0.0;
  double x_right = 0.0;
  Vec knots, f, d1, d2;  // blend end data
  Jet eval(double x) const;
};

OuterCap build_outer_cap(const ConeParams& params, double delta);

struct ChartSamples {
  Vec mesh, value, d1, d2;
};

struct InitialData {
  ConeParams params;
  SpectralExponents exps;
  Vec a;
  double t0 = 0.0;
  double k0 = 1.0;
  GeometryConfig geometry;
  std::shared_ptr<const ProfileSolution> unit_hat;
  std::shared_ptr<const RotatedProfile> unit_ray;
  OuterCap cap;

  ChartSamples tip;            // type-II coordinates z, w_hat
  ChartSamples ray;            // unrescaled x, u
  std::vector<Point2> outer;   // planar nodes from ray-x = rho/2 to the first axis
  double max_overlap_mismatch = 0.0;
  bool include_packet = true;  // false leaves only the scaled profile glued to the cone

  // Rotated-chart initial graph with exact derivatives.
  Jet u(double x) const;
  // Ray coordinate where the rotated chart starts (tip chart start point).
  double ray_start() const;
};

InitialData assemble_initial_curve(const ConeParams& params, const SpectralExponents& exps, const Vec& a, double t0,
                                   const GeometryConfig& geometry, std::shared_ptr<const ProfileSolution> unit_profile,
                                   const MeshConfig& mesh = {}, bool include_packet = true);

// Hat-chart height of a rotated graph at first-axis coordinate r, by Newton on the ray coordinate.
struct HatPoint {
  double x_ray = 0.0;
  double value = 0.0;
  double d1 = 0.0;
};
template <class GraphFn>
HatPoint ray_to_hat(const ConeParams& params, GraphFn&& graph, double r, double x_guess);

struct AdmissibilityReport {
  std::array<bool, 3> pass{true, true, true};
  std::array<double, 3> worst_ratio{0.0, 0.0, 0.0};
  std::array<double, 3> worst_x{0.0, 0.0, 0.0};
  std::size_t checked = 0;
  bool all() const { return pass[0] && pass[1] && pass[2]; }
};

// x^i |d^i u| against Lambda ((-t)^l x^alpha + x^{2 lambda_l + 1}) on [beta L(t), rho].
AdmissibilityReport admissibility_check(const Vec& x, const Vec& u, const Vec& d1, const Vec& d2, double t,
                                        const ConeParams& params, const SpectralExponents& exps,
                                        const GeometryConfig& geometry);
AdmissibilityReport admissibility_check(const InitialData& data);

bool polyline_self_intersects(const std::vector<Point2>& pts);

template <class GraphFn>
HatPoint ray_to_hat(const ConeParams& params, GraphFn&& graph, double r, double x_guess) {
  const double mu = params.mu, S = std::sqrt(1.0 + mu * mu);
  double x = x_guess;
  for (int it = 0; it < 60; ++it) {
    const Jet u = graph(x);
    const double g = (x - mu * u.v) / S - r;
    const double dg = (1.0 - mu * u.d1) / S;
    const double step = g / dg;
    x -= step;
    if (std::abs(step) <= 1e-15 * std::abs(x)) break;
  }
  const Jet u = graph(x);
  return {x, (mu * x + u.v) / S, (mu + u.d1) / (1.0 - mu * u.d1)};
}

}  // namespace lawson
