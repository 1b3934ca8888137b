#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>

#include "lawsonflow/diagnose.hpp"

using namespace lawson;

namespace {

const ConeParams& cone44() {
  static const ConeParams p = derive_cone_params(4, 4);
  return p;
}

const std::shared_ptr<const ProfileSolution>& unit_hat() {
  static const auto h = std::make_shared<const ProfileSolution>(minimal_profile(cone44(), 1.0));
  return h;
}

const FlowState& initial_state() {
  static const FlowState st = [] {
    const SpectralExponents e = spectral_exponents(cone44(), 4);
    return initial_flow_state(assemble_initial_curve(cone44(), e, {0.0, 0.0, 0.0, 0.0}, -1e-2, {}, unit_hat()));
  }();
  return st;
}

std::vector<CurvatureReport> power_series(double exponent) {
  std::vector<CurvatureReport> s;
  for (int i = 0; i <= 12; ++i) {
    CurvatureReport r;
    r.t = -1e-2 * std::pow(10.0, -i / 8.0);
    r.sup_A = 3.0 * std::pow(-r.t, exponent);
    s.push_back(r);
  }
  return s;
}

}  // namespace

TEST_CASE("graph curvature of the cone vanishes") {
  for (auto [p, q] : {std::pair{4, 4}, {4, 5}, {3, 5}, {6, 6}}) {
    const ConeParams P = derive_cone_params(p, q);
    for (double x : {0.01, 1.0, 7.0}) {
      CHECK(std::abs(mean_curvature_graph(0.0, 0.0, 0.0, x, P)) < 1e-13 / x);
      const double A = second_fundamental_norm(0.0, 0.0, 0.0, x, P);
      CHECK(A * A == doctest::Approx((P.n - 2.0) / (x * x)).epsilon(1e-13));
    }
  }
}

TEST_CASE("graph curvature agrees with the P, Q form") {
  const ConeParams& P = cone44();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> X(0.1, 5.0), W(-0.4, 0.4), D(-2.0, 2.0);
  for (int k = 0; k < 200; ++k) {
    const double x = X(rng), u = W(rng) * x, u1 = D(rng), u2 = D(rng);
    const double w = u / x;
    const double pq = (u2 / (1 + u1 * u1) + ray_P(P, w) * u1 / x + ray_Q(P, w) * u / (x * x)) / std::sqrt(1 + u1 * u1);
    const double H = mean_curvature_graph(u, u1, u2, x, P);
    CHECK(std::abs(H - pq) <= 1e-12 * (1 + std::abs(pq)));
    // Cauchy-Schwarz over the n - 1 principal curvatures.
    CHECK(std::abs(H) <= std::sqrt(P.n - 1.0) * second_fundamental_norm(u, u1, u2, x, P) * (1 + 1e-14));
    // Dilation by 3.
    CHECK(second_fundamental_norm(3 * u, u1, u2 / 3, 3 * x, P) ==
          doctest::Approx(second_fundamental_norm(u, u1, u2, x, P) / 3).epsilon(1e-13));
  }
  CHECK_THROWS_AS(mean_curvature_graph(1.0, 0.0, 0.0, 1.0, P), Error);
  CHECK_THROWS_AS(second_fundamental_norm(-2.0, 0.0, 0.0, 1.0, P), Error);
}

TEST_CASE("minimal profile has vanishing mean curvature") {
  const RotatedProfile rot = rotated_profile(*unit_hat());
  double worst = 0.0;
  // The first node is the tip itself, on the axis.
  for (std::size_t i = 3; i < rot.mesh.size(); i += 7) {
    const double x = rot.mesh[i];
    worst = std::max(worst, std::abs(mean_curvature_graph(rot.psi[i], rot.psi_d1[i], rot.psi_d2[i], x, cone44())) * x);
  }
  CHECK(worst < 1e-7);
  // Same in the hat chart, including the tip.
  const ProfileSolution& h = *unit_hat();
  for (std::size_t i = 0; i < h.mesh.size(); i += 11)
    CHECK(std::abs(mean_curvature_hat(h.mesh[i], h.psi_hat[i], h.psi_hat_d1[i], h.psi_hat_d2[i], cone44())) < 1e-6);
}

TEST_CASE("Jacobi potential of the cone and of M_k") {
  const ConeParams& P = cone44();
  CHECK(jacobi_potential_cone(P, 2.0) == doctest::Approx((P.n - 2.0) / 4.0));
  const ProfileSolution& h = *unit_hat();
  // Tip: w' = 0 and p w'' w = q - 1, so |A|^2 = (q-1)^2/(p w^2) + (q-1)/w^2.
  const double w0 = h.tip_height;
  CHECK(jacobi_potential_profile(h, 1.0, w0) ==
        doctest::Approx((P.q - 1.0) * (P.q - 1.0) / (P.p * w0 * w0) + (P.q - 1.0) / (w0 * w0)).epsilon(1e-6));
  const double r_end = 0.9 * h.mesh.back();
  CHECK(jacobi_potential_profile(h, 1.0, r_end) / jacobi_potential_cone(P, r_end) == doctest::Approx(1.0).epsilon(0.05));
  // Dilation: M_k = k^{1/(1-alpha)} M_1.
  const double k = 2.0, lam = std::pow(k, 1.0 / (1.0 - P.alpha));
  for (double r : {1.5, 3.0, 20.0})
    CHECK(jacobi_potential_profile(h, k, r) ==
          doctest::Approx(jacobi_potential_profile(h, 1.0, r / lam) / (lam * lam)).epsilon(1e-8));
  CHECK_THROWS_AS(jacobi_potential_profile(h, 1.0, 0.5 * w0), Error);
}

TEST_CASE("rescale_state round trips and matches the chart relations") {
  const FlowState& st = initial_state();
  for (RescaleMode m : {RescaleMode::type1, RescaleMode::type2}) {
    const RescaledState r = rescale_state(st, m);
    const auto [ray, tip] = unrescale_state(r, st.exps);
    for (std::size_t i = 0; i < ray.mesh.size(); i += 13) {
      CHECK(ray.mesh[i] == doctest::Approx(st.ray.mesh[i]).epsilon(1e-14));
      CHECK(ray.value[i] == doctest::Approx(st.ray.value[i]).epsilon(1e-14));
    }
    for (std::size_t i = 0; i < tip.mesh.size(); i += 13) {
      CHECK(tip.mesh[i] == doctest::Approx(st.tip.mesh[i]).epsilon(1e-14));
      CHECK(tip.value[i] == doctest::Approx(st.tip.value[i]).epsilon(1e-14));
    }
  }
  // w_hat(z) = e^{sigma s} v_hat(e^{-sigma s} z)
  const RescaledState r1 = rescale_state(st, RescaleMode::type1);
  const double e = std::exp(st.exps.sigma_l * st.s());
  for (double z : {0.0, 1.0, 5.0, 17.0})
    CHECK(e * r1.tip.eval(z / e).v == doctest::Approx(st.tip.eval(z).v).epsilon(1e-10));
  // The type-I ray chart reads u / sqrt(-t) at x / sqrt(-t).
  const double x = st.ray.mesh[40], sq = std::sqrt(-st.t);
  CHECK(r1.ray.eval(x / sq).v == doctest::Approx(st.ray.eval(x).v / sq).epsilon(1e-12));
  // Cone: zero stays zero.
  FlowState flat = st;
  std::fill(flat.ray.value.begin(), flat.ray.value.end(), 0.0);
  for (double v : rescale_state(flat, RescaleMode::type1).ray.value) CHECK(v == 0.0);
}

TEST_CASE("curvature report on the initial curve") {
  const FlowState& st = initial_state();
  const CurvatureReport r = curvature_report(st);
  CHECK(r.sup_A > 0.0);
  CHECK(r.sup_H >= 0.0);
  CHECK(std::isfinite(r.weighted_H));
  CHECK(r.typeII_A == doctest::Approx(st.scale() * r.sup_A));
  CHECK(r.weight_feasible);
  CHECK(r.weight_exponent == doctest::Approx(2.4));
  // |A| peaks at the tip, where it is of order 1/L.
  CHECK(std::hypot(r.where_A[0], r.where_A[1]) < 3 * st.scale());
  CHECK(std::hypot(r.where_H[0], r.where_H[1]) <= 2.0 + 1e-12);
  CHECK(r.remark_H == doctest::Approx(std::pow(1e-2, 0.5 - st.exps.sigma_l + 0.01) * r.sup_H));
}

TEST_CASE("weighted H: feasibility and monotone weight") {
  const ConeParams& P = cone44();
  CHECK(weight_exponent_max(P, spectral_exponents(P, 4)) == doctest::Approx(2.4).epsilon(1e-14));
  CHECK(weight_exponent_max(P, spectral_exponents(P, 3)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_FALSE(bounded_H_criterion(P, 3));
  CHECK(bounded_H_criterion(P, 4));
  const FlowState& st = initial_state();
  const WeightedH lo = weighted_H_sup(st, -P.alpha + 1e-9), hi = weighted_H_sup(st, 2.9);
  CHECK(lo.feasible);
  CHECK_FALSE(hi.feasible);
  CHECK(hi.value >= lo.value);
  // Weight >= 1: at least the plain sup of |H| over tip-chart nodes inside the region.
  double plain = 0.0;
  const double L = st.scale();
  for (std::size_t i = 0; i < st.tip.mesh.size(); ++i) {
    const double z = st.tip.mesh[i];
    const Jet w = st.tip.eval(z);
    if (std::hypot(z * L, w.v * L) <= std::sqrt(-st.t))
      plain = std::max(plain, std::abs(mean_curvature_hat(z, w.v, w.d1, w.d2, P)) / L);
  }
  CHECK(lo.value >= plain);
  CHECK_THROWS_AS(weighted_H_sup(st, 1.0), Error);
  CHECK_THROWS_AS(weighted_H_sup(st, 3.0), Error);
}

TEST_CASE("bounded-H table") {
  const std::pair<int, int> pq[] = {{4, 4}, {4, 5}, {5, 5}, {5, 6}, {6, 6}};
  for (auto [p, q] : pq) {
    const ConeParams P = derive_cone_params(p, q);
    for (int l = 2; l <= 6; ++l) {
      const bool expected = (P.n >= 9 && l >= 3) || (P.n == 8 && l >= 4);
      CHECK_MESSAGE(bounded_H_criterion(P, l) == expected, "n = " << P.n << ", l = " << l);
    }
  }
}

TEST_CASE("blow-up rate fit") {
  const SpectralExponents e = spectral_exponents(cone44(), 4);
  const RateFit f2 = blowup_rate_fit(power_series(-(0.5 + e.sigma_l)), e);
  CHECK(f2.slope == doctest::Approx(-(0.5 + e.sigma_l)).epsilon(1e-12));
  CHECK(std::abs(f2.deviation) < 1e-12);
  CHECK(f2.type == BlowupType::type_II);
  CHECK(f2.used == 9);
  const RateFit f1 = blowup_rate_fit(power_series(-0.5), e);
  CHECK(f1.slope == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(f1.type == BlowupType::type_I);
  auto few = power_series(-0.5);
  few.resize(9);
  CHECK_THROWS_AS(blowup_rate_fit(few, e), Error);
  auto narrow = power_series(-0.5);
  for (std::size_t i = 0; i < narrow.size(); ++i) narrow[i].t = -1e-2 * std::pow(10.0, -0.05 * i);
  CHECK_THROWS_AS(blowup_rate_fit(narrow, e), Error);
}

TEST_CASE("convergence metric") {
  ChartFunction c{ChartKind::rotated_ray, TimeFrame::t, geometric_mesh(0.5, 4.0, 60), {}};
  auto cubic = [](double x) { return Jet{0.1 * x * x * x - x + 2, 0.3 * x * x - 1, 0.6 * x}; };
  for (double x : c.mesh) c.value.push_back(cubic(x).v);
  const Distance d = convergence_metric(c, cubic, 1.0, 3.0);
  CHECK(d.c0 < 1e-12);
  CHECK(d.c1 < 1e-10);
  const Distance off = convergence_metric(c, [&](double x) { return cubic(x) + 0.01; }, 1.0, 3.0);
  CHECK(off.c0 == doctest::Approx(0.01));
  CHECK_THROWS_AS(convergence_metric(c, cubic, 0.1, 3.0), Error);

  FlowState flat = initial_state();
  std::fill(flat.ray.value.begin(), flat.ray.value.end(), 0.0);
  const double y0 = flat.ray.mesh.front() / std::sqrt(-flat.t);
  CHECK(distance_to_cone(flat, y0, 1.5).c0 == 0.0);
  // The initial tip chart is psi_hat_{k0} up to the pure-profile edge.
  const Distance tip = distance_to_profile(initial_state(), *unit_hat(), 1.0, 0.0, 5.0);
  CHECK(tip.c0 < 1e-6);
}

TEST_CASE("sub- and supersolution residuals") {
  const ConeParams& P = cone44();
  const SpectralExponents e = spectral_exponents(P, 4);
  const SubSuperSolution up = make_subsuper(P, e, +1), down = make_subsuper(P, e, -1);
  CHECK(up.M1 == doctest::Approx(72.0));
  CHECK(up.M2 == doctest::Approx(42.0));
  CHECK(up.C == doctest::Approx(144.0));
  CHECK(down.C == 0.0);
  // Linear part alone, with an independent Jacobi operator.
  auto linear = [&](const SubSuperSolution& s, double x, double t) {
    const Jet u = s.jet(x, t);
    return s.u_t(x, t) - (u.d2 + (P.n - 2.0) * u.d1 / x + (P.n - 2.0) * u.v / (x * x));
  };
  for (double x : {0.01, 0.05, 0.2}) {
    const double t = -1e-6;
    CHECK(linear(down, x, t) == doctest::Approx(-down.M1 * std::pow(x, 2 * e.lambda_l - 1)).epsilon(1e-10));
    CHECK(linear(up, x, t) == doctest::Approx(up.M1 * std::pow(x, 2 * e.lambda_l - 1) +
                                              2 * up.M1 * up.M2 * (-t) * std::pow(x, 2 * e.lambda_l - 3))
                                  .epsilon(1e-10));
  }
  const double R = 10.0, rho = 0.2, t0 = -0.25 * std::pow(rho / (2 * R), 2);
  const ResidualReport ru = subsuper_residual(up, P, t0, t0 / 10, R, rho);
  const ResidualReport rd = subsuper_residual(down, P, t0, t0 / 10, R, rho);
  CHECK(ru.nodes == 10000);
  CHECK(ru.ok());
  CHECK(rd.ok());
  CHECK(ru.min_margin > 0.5);
  CHECK(rd.max_residual < 0.0);
  CHECK_THROWS_AS(subsuper_residual(up, P, -1.0, -0.5, R, rho), Error);
}
