#include "lawsonflow/specfn.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lawsonflow/error.hpp"

namespace lawson {

namespace {

bool is_nonpositive_integer(double v) { return v <= 0.0 && v == std::floor(v); }

}  // namespace

double KummerPolynomial::operator()(double z) const {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double KummerPolynomial::derivative(double z) const {
  double acc = 0.0;
  for (std::size_t j = coefficients.size(); j-- > 1;) acc = acc * z + static_cast<double>(j) * coefficients[j];
  return acc;
}

double KummerPolynomial::second_derivative(double z) const {
  double acc = 0.0;
  for (std::size_t j = coefficients.size(); j-- > 2;)
    acc = acc * z + static_cast<double>(j * (j - 1)) * coefficients[j];
  return acc;
}

KummerPolynomial kummer_polynomial(int l, double b) {
  if (l < 0) fail(ErrorCode::DomainError, "kummer_polynomial needs l >= 0");
  if (is_nonpositive_integer(b)) fail(ErrorCode::DomainError, "b is a non-positive integer");
  KummerPolynomial poly;
  poly.l = l;
  poly.b = b;
  poly.coefficients.resize(static_cast<std::size_t>(l) + 1);
  double term = 1.0;
  poly.coefficients[0] = 1.0;
  for (int j = 0; j < l; ++j) {
    term *= (-l + j) / ((b + j) * (j + 1.0));
    poly.coefficients[static_cast<std::size_t>(j) + 1] = term;
  }
  return poly;
}

double kummer_m(double a, double b, double x, const KummerOptions& options) {
  if (is_nonpositive_integer(b)) fail(ErrorCode::DomainError, "kummer_m: b is a non-positive integer");
  if (is_nonpositive_integer(a)) return kummer_polynomial(static_cast<int>(-a), b)(x);
  // Kummer transformation keeps every term positive for x < 0.
  if (x < 0.0) return std::exp(x) * kummer_m(b - a, b, -x, options);
  double term = 1.0;
  double sum = 1.0;
  for (int j = 0; j < options.max_terms; ++j) {
    term *= (a + j) / (b + j) * x / (j + 1.0);
    sum += term;
    // Only stop once terms are shrinking.
    if (j + 1 > std::abs(a) + x && std::abs(term) <= options.rel_tol * std::abs(sum)) return sum;
  }
  fail(ErrorCode::NonConvergence, "kummer_m series did not converge within the term budget");
}

double log_gamma(double x) {
  if (!(x > 0.0)) fail(ErrorCode::DomainError, "log_gamma needs x > 0");
  return std::lgamma(x);
}

LogScaled log_bessel_i_series(double nu, double x) {
  if (nu < 0.0 || !(x > 0.0)) fail(ErrorCode::DomainError, "bessel_i needs nu >= 0 and x > 0");
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 2000; ++k) {
    term *= q / ((k + 1.0) * (k + 1.0 + nu));
    sum += term;
    if (k > q && term < 1e-17 * sum) break;
  }
  return {nu * std::log(0.5 * x) - log_gamma(nu + 1.0) + std::log(sum), 1};
}

LogScaled log_bessel_i_asymptotic(double nu, double x) {
  if (nu < 0.0 || !(x > 0.0)) fail(ErrorCode::DomainError, "bessel_i needs nu >= 0 and x > 0");
  const double m = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  double prev = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(m - odd * odd) / (k * 8.0 * x);
    if (term == 0.0) break;
    if (std::abs(term) > std::abs(prev)) break;  // series started diverging
    sum += term;
    prev = term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return {x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(sum), 1};
}

LogScaled log_bessel_i(double nu, double x) {
  return x <= bessel_switch_x ? log_bessel_i_series(nu, x) : log_bessel_i_asymptotic(nu, x);
}

double bessel_i(double nu, double x) {
  const LogScaled v = log_bessel_i(nu, x);
  return v.sign * std::exp(v.log_abs);
}

double eigen_b(const ConeParams& params) { return params.alpha + 0.5 * (params.n - 1.0); }

double normalization_c(const ConeParams& params, int j) {
  if (j < 0) fail(ErrorCode::DomainError, "normalization_c needs j >= 0");
  const double b = eigen_b(params);
  if (!(b > 0.0)) fail(ErrorCode::DomainError, "normalization_c needs b > 0");
  const double m = params.n - 2.0 + 2.0 * params.alpha;
  const double log_c = -0.5 * m * std::log(2.0) - log_gamma(b) +
                       0.5 * (log_gamma(b + j) - log_gamma(j + 1.0));
  return std::exp(log_c);
}

EigenCoefficients eigenfunction_coeffs(const ConeParams& params, int l) {
  if (l < 0) fail(ErrorCode::ParameterError, "eigenfunction_coeffs needs l >= 0");
  const double b = eigen_b(params);
  EigenCoefficients out;
  out.l = l;
  double binom = 1.0, rising = 1.0, four = 1.0;
  for (int j = 1; j <= l; ++j) {
    binom *= static_cast<double>(l - j + 1) / j;
    rising *= b + j - 1;
    four *= 4.0;
    out.K.push_back(binom / (rising * four));
  }
  for (int j = 0; j <= l; ++j) out.c.push_back(normalization_c(params, j));
  return out;
}

double eigenfunction(const ConeParams& params, int j, double y) {
  const double b = eigen_b(params);
  return normalization_c(params, j) * std::pow(y, params.alpha) * kummer_polynomial(j, b)(0.25 * y * y);
}

}  // namespace lawson
