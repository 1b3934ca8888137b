#pragma once

#include <functional>

#include "lawsonflow/cone_params.hpp"
#include "lawsonflow/numerics.hpp"
#include "lawsonflow/specfn.hpp"

namespace lawson {

// Gauss-Legendre panels on (0, y_cut]; weights already include y^{n-2} e^{-y^2/4}.
struct WeightedQuadrature {
  Vec nodes;
  Vec weights;
  int n = 0;
  double y_cut = 0.0;
};

inline constexpr double default_y_cut = 20.0;

WeightedQuadrature make_weighted_quadrature(const ConeParams& params, double y_cut = default_y_cut,
                                            const Vec& extra_breakpoints = {});

// f and g sampled on quad.nodes.
double inner_product_H(const Vec& f, const Vec& g, const WeightedQuadrature& quad);
double inner_product_H(const std::function<double(double)>& f, const std::function<double(double)>& g,
                       const WeightedQuadrature& quad);
Vec sample(const std::function<double(double)>& f, const Vec& nodes);

struct EigenPair {
  int index = 0;
  double lambda = 0.0;
  double c = 0.0;
  double alpha = 0.0;
  KummerPolynomial poly;
  double operator()(double y) const;
  Jet jet(double y) const;
};

EigenPair eigen_pair(const ConeParams& params, int i);
double eigenfunction_eval(const ConeParams& params, int i, double y);

// Second-order discrete images on a (possibly nonuniform) mesh; the two end values are NaN.
Vec apply_L(const Vec& y, const Vec& f, const ConeParams& params);
Vec apply_Q(const Vec& y, const Vec& f, const ConeParams& params);
// Full right side of the self-similarly rescaled equation, written in quotient form.
Vec type1_rhs(const Vec& y, const Vec& f, const ConeParams& params);

// Pointwise versions taking exact derivatives.
double L_point(double y, double f, double d1, double d2, const ConeParams& params);
double Q_point(double y, double f, double d1, double d2, const ConeParams& params);

double heat_kernel_order(const ConeParams& params);
double log_heat_kernel(double y, double z, double s, const ConeParams& params);
// Returns 0 when the Gaussian factor underflows.
double heat_kernel(double y, double z, double s, const ConeParams& params);
// int_0^inf K(y, z, s) f(z) dz with panels concentrated near z = e^{-s/2} y.
double heat_propagate(const std::function<double(double)>& f, double y, double s, const ConeParams& params);

// <f, phi_j> for j = 0..j_max, f sampled on quad.nodes.
Vec fourier_coeffs(const Vec& f, int j_max, const WeightedQuadrature& quad, const ConeParams& params);

}  // namespace lawson
