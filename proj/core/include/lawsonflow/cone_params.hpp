#pragma once

#include <array>
#include <optional>

namespace lawson {

// Cone data for the pair (p, q). n = p + q.
struct ConeParams {
  int p = 0;
  int q = 0;
  int n = 0;
  double mu = 0.0;
  double alpha = 0.0;
  double alpha_hat = 0.0;
  double alpha_tilde = 0.0;
};

struct SpectralExponents {
  int l = 0;
  double lambda_l = 0.0;
  double sigma_l = 0.0;
  double b = 0.0;
  double varsigma = 0.0;
  double kappa = 0.0;
  double varrho = 0.0;
};

enum class RotationDirection { forward, inverse };

using Point2 = std::array<double, 2>;

// Throws DimensionError outside n >= 8 (with p, q >= 3 at n = 8).
ConeParams derive_cone_params(int p, int q);

inline constexpr double default_varsigma_n8 = 1.0 / 7.0;

// varsigma_n8 only matters when n == 8; it must sit strictly below (n-3+2a)/(2(1-a)).
SpectralExponents spectral_exponents(const ConeParams& params, int l,
                                     double varsigma_n8 = default_varsigma_n8);

double lambda_j(const ConeParams& params, int j);

// forward: (x, y) -> ((x + mu y), (-mu x + y)) / sqrt(1 + mu^2); the ray y = mu x lands on the axis.
Point2 rotate_chart(Point2 point, const ConeParams& params, RotationDirection direction);

}  // namespace lawson
