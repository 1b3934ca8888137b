#include "lawsonflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lawsonflow/error.hpp"

namespace lawson {

WeightedQuadrature make_weighted_quadrature(const ConeParams& params, double y_cut, const Vec& extra) {
  Vec bp{0.0};
  for (double y = 1e-6; y < 1.0; y *= 2.0) bp.push_back(y);
  for (double y = 1.0; y < y_cut; y += 0.5) bp.push_back(y);
  bp.push_back(y_cut);
  for (double e : extra)
    if (e > 0.0 && e < y_cut) bp.push_back(e);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end(), [](double a, double b) { return std::abs(a - b) <= 1e-14 * b; }),
           bp.end());
  const QuadratureRule rule = gauss_panels(bp);
  WeightedQuadrature q;
  q.n = params.n;
  q.y_cut = y_cut;
  q.nodes = rule.nodes;
  q.weights.resize(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double y = rule.nodes[i];
    q.weights[i] = rule.weights[i] * std::pow(y, params.n - 2.0) * std::exp(-0.25 * y * y);
  }
  return q;
}

double inner_product_H(const Vec& f, const Vec& g, const WeightedQuadrature& quad) {
  double s = 0.0;
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) s += quad.weights[i] * f[i] * g[i];
  return s;
}

Vec sample(const std::function<double(double)>& f, const Vec& nodes) {
  Vec out(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) out[i] = f(nodes[i]);
  return out;
}

double inner_product_H(const std::function<double(double)>& f, const std::function<double(double)>& g,
                       const WeightedQuadrature& quad) {
  return inner_product_H(sample(f, quad.nodes), sample(g, quad.nodes), quad);
}

double EigenPair::operator()(double y) const { return c * std::pow(y, alpha) * poly(0.25 * y * y); }

Jet EigenPair::jet(double y) const {
  const Jet yy = Jet::variable(y);
  const double z = 0.25 * y * y;
  const Jet m = compose(0.25 * yy * yy, poly(z), poly.derivative(z), poly.second_derivative(z));
  return c * pow(yy, alpha) * m;
}

EigenPair eigen_pair(const ConeParams& params, int i) {
  EigenPair e;
  e.index = i;
  e.lambda = lambda_j(params, i);
  e.c = normalization_c(params, i);
  e.alpha = params.alpha;
  e.poly = kummer_polynomial(i, eigen_b(params));
  return e;
}

double eigenfunction_eval(const ConeParams& params, int i, double y) {
  if (!(y > 0.0)) fail(ErrorCode::DomainError, "eigenfunction_eval needs y > 0");
  return eigen_pair(params, i)(y);
}

double L_point(double y, double f, double d1, double d2, const ConeParams& params) {
  const double n2 = params.n - 2.0;
  return d2 + (n2 / y - 0.5 * y) * d1 + (n2 / (y * y) + 0.5) * f;
}

double Q_point(double y, double f, double d1, double d2, const ConeParams& params) {
  const double mu = params.mu, w = f / y;
  if (std::abs(w) >= std::min(mu, 1.0 / mu))
    fail(ErrorCode::ConeBreach, "|v/y| reached the cone bound at y = " + std::to_string(y));
  const double denom = (1.0 - mu * w) * (1.0 + w / mu);
  const double bracket = w * w * (w / y + d1 / y) + (mu - 1.0 / mu) * w * (w / y);
  return -d1 * d1 / (1.0 + d1 * d1) * d2 + (params.n - 2.0) * bracket / denom;
}

namespace {

void require_interior(const Vec& y, const Vec& f) {
  if (y.size() != f.size() || y.size() < 6) fail(ErrorCode::MeshTooCoarse, "need at least four interior points");
}

template <class Fn>
Vec apply_pointwise(const Vec& y, const Vec& f, Fn fn) {
  require_interior(y, f);
  const std::size_t n = y.size();
  Vec out(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = y[i] - y[i - 1], h2 = y[i + 1] - y[i];
    const auto a = d1_weights(h1, h2), b = d2_weights(h1, h2);
    const double d1 = a.m * f[i - 1] + a.c * f[i] + a.p * f[i + 1];
    const double d2 = b.m * f[i - 1] + b.c * f[i] + b.p * f[i + 1];
    out[i] = fn(y[i], f[i], d1, d2);
  }
  return out;
}

}  // namespace

Vec apply_L(const Vec& y, const Vec& f, const ConeParams& params) {
  return apply_pointwise(y, f, [&](double yy, double v, double d1, double d2) { return L_point(yy, v, d1, d2, params); });
}

Vec apply_Q(const Vec& y, const Vec& f, const ConeParams& params) {
  return apply_pointwise(y, f, [&](double yy, double v, double d1, double d2) { return Q_point(yy, v, d1, d2, params); });
}

Vec type1_rhs(const Vec& y, const Vec& f, const ConeParams& params) {
  const double p = params.p, q = params.q, mu = params.mu;
  return apply_pointwise(y, f, [&](double yy, double v, double d1, double d2) {
    return d2 / (1.0 + d1 * d1) + (p - 1.0) * (mu + d1) / (yy - mu * v) - (q - 1.0) * (1.0 - mu * d1) / (mu * yy + v) +
           0.5 * (-yy * d1 + v);
  });
}

double heat_kernel_order(const ConeParams& params) { return 0.5 * (params.n - 3.0) + params.alpha; }

double log_heat_kernel(double y, double z, double s, const ConeParams& params) {
  if (!(y > 0.0 && z > 0.0 && s > 0.0)) fail(ErrorCode::DomainError, "heat kernel needs y, z, s > 0");
  const double n = params.n;
  const double D = -std::expm1(-s);
  const double es = std::exp(-s);
  const double X = std::exp(-0.5 * s) * y * z / (2.0 * D);
  const LogScaled li = log_bessel_i(heat_kernel_order(params), X);
  return (0.5 * n - 1.0) * std::log(z / y) + 0.5 * std::log(y * z) + 0.25 * (n - 1.0) * s - std::log(2.0 * D) +
         li.log_abs - (es * y * y + z * z) / (4.0 * D);
}

double heat_kernel(double y, double z, double s, const ConeParams& params) {
  const double lk = log_heat_kernel(y, z, s, params);
  return lk < -745.0 ? 0.0 : std::exp(lk);
}

double heat_propagate(const std::function<double(double)>& f, double y, double s, const ConeParams& params) {
  const double D = -std::expm1(-s);
  const double centre = std::exp(-0.5 * s) * y;
  const double half_width = 30.0 * std::sqrt(D);
  const double lo = std::max(0.0, centre - half_width), hi = centre + half_width;
  const double panel = std::min(0.25, 0.5 * std::sqrt(D));
  const std::size_t count = static_cast<std::size_t>(std::ceil((hi - lo) / panel));
  Vec bp = uniform_mesh(lo, hi, count + 1);
  // Grade toward the origin when the window reaches it.
  if (lo == 0.0) {
    Vec fine{0.0};
    for (double z = 1e-6; z < bp[1]; z *= 2.0) fine.push_back(z);
    bp.erase(bp.begin());
    bp.insert(bp.begin(), fine.begin(), fine.end());
  }
  const QuadratureRule rule = gauss_panels(bp);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double z = rule.nodes[i];
    const double k = heat_kernel(y, z, s, params);
    if (k != 0.0) acc += rule.weights[i] * k * f(z);
  }
  return acc;
}

Vec fourier_coeffs(const Vec& f, int j_max, const WeightedQuadrature& quad, const ConeParams& params) {
  Vec out;
  for (int j = 0; j <= j_max; ++j) {
    const EigenPair e = eigen_pair(params, j);
    double s = 0.0;
    for (std::size_t i = 0; i < quad.nodes.size(); ++i) s += quad.weights[i] * f[i] * e(quad.nodes[i]);
    out.push_back(s);
  }
  return out;
}

}  // namespace lawson
