#include "lawsonflow/cone_params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lawsonflow/error.hpp"

namespace lawson {

ConeParams derive_cone_params(int p, int q) {
  if (p < 2 || q < 2)
    fail(ErrorCode::DimensionError, "p and q must be at least 2");
  const int n = p + q;
  if (n < 8)
    fail(ErrorCode::DimensionError, "n = p + q must be at least 8, got " + std::to_string(n));
  if (n == 8 && (p < 3 || q < 3))
    fail(ErrorCode::DimensionError, "n = 8 needs p, q >= 3");

  ConeParams c;
  c.p = p;
  c.q = q;
  c.n = n;
  c.mu = std::sqrt(static_cast<double>(q - 1) / static_cast<double>(p - 1));
  // x^2 + (n-3) x + (n-2) = 0. Take the large root first, then the other from the product.
  const double B = n - 3.0;
  const double disc = static_cast<double>(n) * n - 10.0 * n + 17.0;
  c.alpha_hat = -0.5 * (B + std::sqrt(disc));
  c.alpha = (n - 2.0) / c.alpha_hat;
  c.alpha_tilde = (n == 8) ? c.alpha_hat : std::max(2.0 * c.alpha - 1.0, c.alpha_hat);
  return c;
}

double lambda_j(const ConeParams& params, int j) { return -0.5 * (1.0 - params.alpha) + j; }

SpectralExponents spectral_exponents(const ConeParams& params, int l, double varsigma_n8) {
  if (l < 2) fail(ErrorCode::ParameterError, "l must be at least 2");
  const double a = params.alpha;
  const double n = params.n;
  SpectralExponents e;
  e.l = l;
  e.lambda_l = lambda_j(params, l);
  e.sigma_l = e.lambda_l / (1.0 - a);
  e.b = a + 0.5 * (n - 1.0);
  const double vs_bound = (n - 3.0 + 2.0 * a) / (2.0 * (1.0 - a));
  if (params.n == 8) {
    if (!(varsigma_n8 > 0.0 && varsigma_n8 < vs_bound))
      fail(ErrorCode::ParameterError, "varsigma for n = 8 must lie in (0, " + std::to_string(vs_bound) + ")");
    e.varsigma = varsigma_n8;
  } else {
    e.varsigma = std::min(1.0, vs_bound);
  }
  e.kappa = std::min({0.5, (n - 1.0 + 2.0 * a) / (6.0 * (1.0 - a)), e.varsigma, 1.0 / (e.lambda_l + 1.0)});
  e.varrho = std::min(e.kappa * (1.0 - a) / 2.0, 0.2);
  return e;
}

Point2 rotate_chart(Point2 point, const ConeParams& params, RotationDirection direction) {
  const double mu = params.mu;
  const double s = 1.0 / std::sqrt(1.0 + mu * mu);
  const double x = point[0], y = point[1];
  if (direction == RotationDirection::forward)
    return {(x + mu * y) * s, (-mu * x + y) * s};
  return {(x - mu * y) * s, (mu * x + y) * s};
}

}  // namespace lawson
