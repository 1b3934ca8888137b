#pragma once

#include <vector>

#include "lawsonflow/cone_params.hpp"

namespace lawson {

// M(-l, b; z) as an explicit polynomial in z.
struct KummerPolynomial {
  int l = 0;
  double b = 0.0;
  std::vector<double> coefficients;  // coefficient of z^j
  double operator()(double z) const;
  double derivative(double z) const;
  double second_derivative(double z) const;
};

struct EigenCoefficients {
  int l = 0;
  std::vector<double> K;  // K[j-1] = K_{l,j}, j = 1..l
  std::vector<double> c;  // c_0..c_l
};

struct LogScaled {
  double log_abs = 0.0;
  int sign = 1;
};

struct KummerOptions {
  double rel_tol = 1e-13;
  int max_terms = 10000;
};

// Confluent hypergeometric M(a, b; x). Non-positive integer a takes the finite sum.
double kummer_m(double a, double b, double x, const KummerOptions& options = {});

KummerPolynomial kummer_polynomial(int l, double b);

// Modified Bessel function of the first kind, nu >= 0, x > 0.
double bessel_i(double nu, double x);
LogScaled log_bessel_i(double nu, double x);

inline constexpr double bessel_switch_x = 25.0;
// Separate branches, exposed so the crossover can be validated.
LogScaled log_bessel_i_series(double nu, double x);
LogScaled log_bessel_i_asymptotic(double nu, double x);

double log_gamma(double x);

double eigen_b(const ConeParams& params);

// Normalising constant of phi_j in the weighted space.
double normalization_c(const ConeParams& params, int j);

EigenCoefficients eigenfunction_coeffs(const ConeParams& params, int l);

// phi_j(y) = c_j y^alpha M(-j, b; y^2/4).
double eigenfunction(const ConeParams& params, int j, double y);

}  // namespace lawson
