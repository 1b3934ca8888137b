#pragma once

#include <vector>

#include "lawsonflow/cone_params.hpp"
#include "lawsonflow/numerics.hpp"

namespace lawson {

// How an end node of the planar profile curve is constrained.
enum class CurveEnd {
  pinned,    // moved only from outside (coupled to a graph chart)
  xi_axis,   // slides along eta = 0, meeting it at a right angle
  eta_axis,  // slides along xi = 0
};

// Target spacing h(s) = min(h_max, h_min + growth * s) from the first node.
struct OuterSpacing {
  double h_min = 0.005;
  double h_max = 0.005;
  double growth = 0.1;
};

// Planar profile curve in the (xi, eta) quarter plane, ordered so the outward normal is the
// tangent turned by +90 degrees (clockwise for a round sphere).
struct OuterCurve {
  std::vector<Point2> nodes;
  CurveEnd first = CurveEnd::pinned;
  CurveEnd last = CurveEnd::xi_axis;
  OuterSpacing spacing;
};

// Curve curvature kappa (positive when convex) and the two rotational curvatures n_xi/xi, n_eta/eta.
struct PrincipalCurvatures {
  double kappa = 0.0, k_xi = 0.0, k_eta = 0.0;
};

std::vector<PrincipalCurvatures> principal_curvatures(const OuterCurve& curve);
std::vector<Point2> outer_normals(const OuterCurve& curve);
// Mean curvature with the sign of the graph formula: minus the inward normal speed.
Vec parametric_mean_curvature(const OuterCurve& curve, const ConeParams& params);
Vec parametric_A_norm(const OuterCurve& curve, const ConeParams& params);

double outer_stable_dt(const OuterCurve& curve, const ConeParams& params);
// Explicit step with normal velocity; a pinned end stays put. Throws CurveDegenerate on node collision.
void step_outer(OuterCurve& curve, double dt, const ConeParams& params);

Vec arclength(const std::vector<Point2>& pts);
Vec spacing_targets(double total, const OuterSpacing& spacing);
bool needs_redistribution(const OuterCurve& curve, double tolerance = 0.35);
// Resample at the target spacing (cubic in arclength); end nodes are kept.
void redistribute(OuterCurve& curve);

// Ray-chart value at ray coordinate x read off the pinned end of the curve.
double outer_ray_value(const OuterCurve& curve, const ConeParams& params, double x);

}  // namespace lawson
