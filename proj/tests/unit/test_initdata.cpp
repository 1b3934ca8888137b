#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <memory>

#include "lawsonflow/error.hpp"
#include "lawsonflow/initdata.hpp"

using namespace lawson;

namespace {

struct Setup {
  ConeParams params = derive_cone_params(4, 4);
  SpectralExponents exps = spectral_exponents(params, 2);
  std::shared_ptr<const ProfileSolution> unit = std::make_shared<const ProfileSolution>(minimal_profile(params, 1.0));
  GeometryConfig geo;
  double t0 = -1e-4;
};

const Setup& setup() {
  static const Setup s;
  return s;
}

// Direct formula for the packet: y^alpha (M(-l) + sum a_j M(-j)) at z = y^2/4, by boost 1F1.
double packet_oracle(const Setup& s, const Vec& a, double t0, double x) {
  const double b = s.params.alpha + 3.5;
  const double y = x / std::sqrt(-t0), z = y * y / 4.0;
  // 1F1(-j; b; z) as a terminating sum.
  auto M = [&](int j) {
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < j; ++k) {
      term *= (-j + k) * z / ((b + k) * (k + 1));
      sum += term;
    }
    return sum;
  };
  double poly = M(s.exps.l);
  for (std::size_t j = 0; j < a.size(); ++j) poly += a[j] * M(static_cast<int>(j));
  return std::pow(-t0, 0.5 + s.exps.lambda_l) * std::pow(y, s.params.alpha) * poly;
}

}  // namespace

TEST_CASE("cutoff saturates and is symmetric") {
  CHECK(cutoff_eta(-1.0) == 0.0);
  CHECK(cutoff_eta(2.0) == 1.0);
  CHECK(cutoff_eta(0.5) > 0.0);
  CHECK(cutoff_eta(0.5) < 1.0);
  CHECK(cutoff_eta(0.5) == doctest::Approx(0.5));
  double prev = 0.0;
  for (int i = 1; i < 100; ++i) {
    const double x = i / 100.0;
    CHECK(cutoff_eta(x) + cutoff_eta(1.0 - x) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cutoff_eta(x) >= prev);
    prev = cutoff_eta(x);
  }
  // Flat ends: difference quotients at 0 and 1 vanish.
  const double h = 1e-3;
  CHECK(std::abs(cutoff_eta(h) - cutoff_eta(0.0)) / h < 1e-8);
  CHECK(std::abs(cutoff_eta(1.0) - cutoff_eta(1.0 - h)) / h < 1e-8);
  CHECK(std::abs(cutoff_eta(Jet::variable(h)).d2) < 1e-8);
}

TEST_CASE("cutoff jet derivatives match finite differences") {
  for (double x : {0.2, 0.5, 0.73}) {
    const double h = 1e-5;
    const Jet j = cutoff_eta(Jet::variable(x));
    CHECK(j.d1 == doctest::Approx((cutoff_eta(x + h) - cutoff_eta(x - h)) / (2 * h)).epsilon(1e-7));
    CHECK(j.d2 ==
          doctest::Approx((cutoff_eta(x + h) - 2 * cutoff_eta(x) + cutoff_eta(x - h)) / (h * h)).epsilon(1e-4));
  }
}

TEST_CASE("packet agrees with its expansion and the direct formula") {
  const Setup& s = setup();
  const Vec a{0.01, -0.02};
  for (double t0 : {-1e-2, -1e-4}) {
    for (double x : {1e-3, 3e-3, 0.01, 0.05, 0.2}) {
      const double direct = packet_oracle(s, a, t0, x);
      CHECK(low_mode_packet(s.params, s.exps, a, t0, x).v == doctest::Approx(direct).epsilon(1e-10));
      CHECK(low_mode_packet_expanded(s.params, s.exps, a, t0, x) == doctest::Approx(direct).epsilon(1e-10));
    }
  }
}

TEST_CASE("packet leading term, substitution and scaling bound") {
  const Setup& s = setup();
  const Vec zero{0.0, 0.0};
  const double t0 = -1e-6;
  // y^4 coefficient of M(-2, b; y^2/4) is 1/(16 b (b+1)).
  const double b = s.params.alpha + 3.5;
  const double Kll = 1.0 / (16.0 * b * (b + 1.0));
  const double x = 0.2;
  CHECK(low_mode_packet(s.params, s.exps, zero, t0, x).v / std::pow(x, 2 * s.exps.lambda_l + 1) ==
        doctest::Approx(Kll).epsilon(1e-3));
  CHECK(2 * s.exps.lambda_l + 1 == doctest::Approx(s.params.alpha + 4).epsilon(1e-14));

  const Vec a{0.3, -0.1};
  const double rt = std::sqrt(-t0);
  const double at_one = std::pow(-t0, 0.5 + s.exps.lambda_l) *
                        (eigenfunction(s.params, 2, 1.0) / normalization_c(s.params, 2) +
                         0.3 * eigenfunction(s.params, 0, 1.0) / normalization_c(s.params, 0) -
                         0.1 * eigenfunction(s.params, 1, 1.0) / normalization_c(s.params, 1));
  CHECK(low_mode_packet(s.params, s.exps, a, t0, rt).v == doctest::Approx(at_one).epsilon(1e-12));

  double worst = 0.0;
  for (int k = 0; k <= 60; ++k) {
    const double xx = 1e-5 * std::pow(10.0, 4.3 * k / 60.0);
    const Jet j = low_mode_packet(s.params, s.exps, a, t0, xx);
    const double bound = std::pow(-t0, 2) * std::pow(xx, s.params.alpha) + std::pow(xx, 2 * s.exps.lambda_l + 1);
    worst = std::max({worst, std::abs(j.v) / bound, xx * std::abs(j.d1) / bound, xx * xx * std::abs(j.d2) / bound});
  }
  CHECK(worst < 10.0);
}

TEST_CASE("packet rejects non-positive x") {
  const Setup& s = setup();
  CHECK_THROWS_AS(low_mode_packet(s.params, s.exps, {0.0, 0.0}, -1e-4, 0.0), Error);
}

TEST_CASE("outer cap pieces") {
  const ConeParams params = derive_cone_params(4, 4);
  const OuterCap cap = build_outer_cap(params, 0.05);
  CHECK(cap.eval(0.5).v == doctest::Approx(params.mu * 0.5));
  CHECK(cap.eval(0.5).d1 == doctest::Approx(params.mu));
  for (double x : {cap.x_right + 1e-3, 1.8, 1.99}) {
    const double f = cap.eval(x).v;
    CHECK(f * f + x * x == doctest::Approx(4.0).epsilon(1e-14));
  }
  for (int i = 0; i <= 100; ++i) {
    const double x = cap.x_left + (cap.x_right - cap.x_left) * i / 100.0;
    CHECK(cap.eval(x).d2 <= 1e-12);
  }
  for (double xj : {cap.x_left, cap.x_right}) {
    const double e = 1e-12;
    const Jet lo = cap.eval(xj - e), hi = cap.eval(xj + e);
    CHECK(std::abs(lo.v - hi.v) < 1e-8);
    CHECK(std::abs(lo.d1 - hi.d1) < 1e-8);
    CHECK(std::abs(lo.d2 - hi.d2) < 1e-6);
  }
  CHECK_THROWS_AS(build_outer_cap(params, 0.9), Error);
  try {
    build_outer_cap(params, 0.9);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BlendFailure);
  }
}

TEST_CASE("assembled initial curve") {
  const Setup& s = setup();
  const Vec a{0.02, -0.01};
  const InitialData d = assemble_initial_curve(s.params, s.exps, a, s.t0, s.geo, s.unit);
  const double L = tip_scale(s.exps, s.t0);
  CHECK(d.k0 == doctest::Approx(1.01));

  SUBCASE("cutoff regions") {
    CHECK(d.u(2 * s.geo.rho).v == 0.0);
    CHECK(d.u(2.5 * s.geo.rho).v == 0.0);
    const double x_in = 0.4 * s.geo.beta * L;
    CHECK(d.u(x_in).v == doctest::Approx(L * scaled_ray(*d.unit_ray, d.k0, x_in / L).v).epsilon(1e-14));
    const double x_mid = 0.3 * s.geo.rho;
    CHECK(d.u(x_mid).v == doctest::Approx(low_mode_packet(s.params, s.exps, a, s.t0, x_mid).v).epsilon(1e-14));
  }

  SUBCASE("jet matches finite differences across blends") {
    for (double x : {0.75 * s.geo.beta * L, 1.5 * s.geo.rho}) {
      const double h = 1e-6 * x;
      const Jet j = d.u(x);
      CHECK(j.d1 == doctest::Approx((d.u(x + h).v - d.u(x - h).v) / (2 * h)).epsilon(1e-5));
      CHECK(j.d2 == doctest::Approx((d.u(x + h).v - 2 * j.v + d.u(x - h).v) / (h * h)).epsilon(1e-3));
    }
  }

  SUBCASE("tip endpoint") {
    CHECK(d.tip.mesh.front() == 0.0);
    CHECK(d.tip.value.front() * L == doctest::Approx(L * scaled_hat(*s.unit, d.k0, 0.0).v));
    CHECK(std::abs(d.tip.d1.front()) < 1e-10);
    CHECK(d.max_overlap_mismatch < 1e-6);
  }

  SUBCASE("cone neighbourhood and compactness") {
    for (std::size_t i = 0; i < d.ray.mesh.size(); ++i) {
      CHECK(std::abs(d.ray.value[i] / d.ray.mesh[i]) <= 0.5 * std::min(s.params.mu, 1 / s.params.mu));
    }
    double rmax = 0.0;
    for (const Point2& p : d.outer) rmax = std::max(rmax, std::hypot(p[0], p[1]));
    CHECK(rmax == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(d.outer.back()[0] == 2.0);
    CHECK(d.outer.back()[1] == 0.0);
    for (const Point2& p : d.outer) CHECK(p[1] >= 0.0);
  }

  SUBCASE("admissibility") {
    const AdmissibilityReport rep = admissibility_check(d);
    CHECK(rep.checked > 50);
    CHECK(rep.all());
    for (int i = 0; i < 3; ++i) CHECK(rep.worst_ratio[i] <= 0.5);

    // The ratio is linear in u: scaling past the worst margin must fail.
    const double worst = std::max({rep.worst_ratio[0], rep.worst_ratio[1], rep.worst_ratio[2]});
    auto scaled_check = [&](const InitialData& data, double factor) {
      Vec u = data.ray.value, d1 = data.ray.d1, d2 = data.ray.d2;
      for (auto* v : {&u, &d1, &d2})
        for (double& e : *v) e *= factor;
      return admissibility_check(data.ray.mesh, u, d1, d2, data.t0, s.params, s.exps, s.geo);
    };
    CHECK(scaled_check(d, 0.9 / worst).all());
    CHECK_FALSE(scaled_check(d, 1.1 / worst).all());
    // Factor 10 Lambda at a later time, where the curve uses more of its budget.
    const InitialData late = assemble_initial_curve(s.params, s.exps, a, -1e-6, s.geo, s.unit);
    CHECK(admissibility_check(late).all());
    CHECK_FALSE(scaled_check(late, 10 * s.geo.Lambda).all());

    // Points outside the window are ignored even if huge.
    Vec xs{0.5 * s.geo.beta * L, 2 * s.geo.rho}, big{1e9, 1e9};
    const AdmissibilityReport outside = admissibility_check(xs, big, big, big, d.t0, s.params, s.exps, s.geo);
    CHECK(outside.checked == 0);
    CHECK(outside.all());
  }
}

TEST_CASE("dependence on the parameter vector") {
  const Setup& s = setup();
  const double L = tip_scale(s.exps, s.t0), h = 1e-5;
  const Vec zero{0.0, 0.0};
  const InitialData base = assemble_initial_curve(s.params, s.exps, zero, s.t0, s.geo, s.unit);
  const RotatedProfile& rot = *base.unit_ray;
  for (int j = 0; j < 2; ++j) {
    Vec ap = zero, am = zero;
    ap[j] = h;
    am[j] = -h;
    const InitialData dp = assemble_initial_curve(s.params, s.exps, ap, s.t0, s.geo, s.unit);
    const InitialData dm = assemble_initial_curve(s.params, s.exps, am, s.t0, s.geo, s.unit);
    for (double x : {0.3 * s.geo.beta * L, 0.75 * s.geo.beta * L, 0.3 * s.geo.rho}) {
      const double fd = (dp.u(x).v - dm.u(x).v) / (2 * h);
      // k-derivative of psi_k at k = 1 is (psi - x psi') / (1 - alpha).
      const Jet psi = rot.eval(x / L);
      const double dpsi = L * (psi.v - x / L * psi.d1) / (1 - s.params.alpha);
      const double arg = (x / L - 0.5 * s.geo.beta) / (0.5 * s.geo.beta);
      const double eta_in = cutoff_eta(arg), eta_out = cutoff_eta((2 * s.geo.rho - x) / s.geo.rho);
      const double y = x / std::sqrt(-s.t0);
      const double mode = std::pow(-s.t0, 0.5 + s.exps.lambda_l) * eigenfunction(s.params, j, y) /
                          normalization_c(s.params, j);
      const double expected = dpsi * (1 - eta_in) + mode * eta_in * eta_out;
      CHECK(fd == doctest::Approx(expected).epsilon(1e-6));
    }
  }
}

TEST_CASE("construction guards") {
  const Setup& s = setup();
  auto code_of = [&](const Vec& a, double t0, GeometryConfig g) {
    try {
      assemble_initial_curve(s.params, s.exps, a, t0, g, s.unit);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  const double radius = std::pow(s.geo.beta, s.params.alpha_tilde - s.params.alpha);
  CHECK(code_of({radius, 0.0}, s.t0, s.geo) == ErrorCode::ParameterClash);
  CHECK(code_of({0.0, 0.0}, -0.5, s.geo) == ErrorCode::ParameterClash);
  CHECK(code_of({0.0}, s.t0, s.geo) == ErrorCode::ParameterError);
  CHECK(code_of({0.0, 0.0}, 1.0, s.geo) == ErrorCode::ParameterError);
}

TEST_CASE("self intersection detector") {
  CHECK_FALSE(polyline_self_intersects({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  CHECK(polyline_self_intersects({{0, 0}, {1, 1}, {1, 0}, {0, 1}}));
}
