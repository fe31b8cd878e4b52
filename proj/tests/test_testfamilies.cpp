#include <cmath>

#include "doctest.h"
#include "hardy/constants.hpp"
#include "hardy/errors.hpp"
#include "hardy/testfamilies.hpp"

using namespace hardy;
using namespace hardy::families;

TEST_CASE("smooth step") {
  CHECK(smooth_step(-0.1) == 0.0);
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
  for (double u = 0.01; u < 1.0; u += 0.01) CHECK(smooth_step(u) <= smooth_step(u + 0.01));
  CHECK(smooth_step_max_slope() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(smooth_step_derivative(0.5) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("bump profile") {
  for (double m : {0.5, 1.0, 2.0}) {
    const auto b = make_bump(0.4, 1.6, m);
    CHECK(b(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(b(0.4) == 0.0);
    CHECK(b(1.6) == 0.0);
    CHECK(b(0.39) == 0.0);
    CHECK(b(1.61) == 0.0);
    const double h = 1e-5;
    CHECK(std::abs(b(0.4 + h) - b(0.4)) / h < 1e-8);
    CHECK(std::abs(b(1.6) - b(1.6 - h)) / h < 1e-8);
  }
  CHECK_THROWS_AS(make_bump(0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(make_bump(1.0, 0.5), ParameterError);
}

TEST_CASE("mollified power") {
  const double g = 0.25;
  for (RampScale sc : {RampScale::linear, RampScale::logarithmic}) {
    const auto e = make_mollified_power(g, 0.2, 3.0, 0.3, sc);
    CHECK(e(1.0) == std::pow(1.0, g));
    CHECK(e(1.7) == doctest::Approx(std::pow(1.7, g)).epsilon(1e-15));
    CHECK(e(0.2) == 0.0);
    CHECK(e(3.0) == 0.0);
  }
  const auto flat = make_mollified_power(0.0, 0.2, 3.0, 0.3);
  CHECK(flat(1.3) == 1.0);
  CHECK_THROWS_AS(make_mollified_power(g, 0.2, 0.8, 0.3), ParameterError);

  // tighter ramps and a wider window raise the critical Hardy mass
  const double q = 1.5;
  const double m1 = profile_hardy_1d(make_mollified_power(g, 0.2, 3.0, 0.3), q, 2).value;
  const double m2 = profile_hardy_1d(make_mollified_power(g, 0.1, 6.0, 0.05), q, 2).value;
  const double m3 = profile_hardy_1d(make_mollified_power(g, 0.01, 20.0, 0.005), q, 2).value;
  CHECK(m1 < m2);
  CHECK(m2 < m3);
}

TEST_CASE("cutoff Psi") {
  for (int n : {1, 2}) {
    for (double R0 : {1.0, 3.0}) {
      const auto psi = make_psi_cutoff(R0, n, 2.0);
      CHECK(std::abs(psi_slice_norm_p(psi) - 1.0) < 1e-6);
      HPoint a(n), b(n);
      a.y(0) = b.y(0) = 0.3 * R0;
      a.t() = b.t() = 0.2 * R0 * R0;
      for (double x = 0.0; x <= R0; x += R0 / 8) {
        a.x(0) = x;
        CHECK(psi(a) == psi(b));
      }
      double prev = psi(a);
      for (double x = R0; x <= 2 * R0; x += R0 / 16) {
        a.x(0) = x;
        CHECK(psi(a) <= prev);
        prev = psi(a);
      }
      a.x(0) = 2 * R0;
      CHECK(psi(a) == 0.0);
      a.x(0) = -R0;
      CHECK(psi(a) == 0.0);
      a.x(0) = 0.5;
      a.y(0) = R0;
      CHECK(psi(a) == 0.0);
    }
  }
  const auto t = make_psi_cutoff(1.0, 1, 2.0);
  CHECK(t.template_x1(0.5) == 1.0);
  CHECK(t.template_x1(-1.0) == 0.0);
  CHECK(t.template_x1(2.0) == 0.0);
  CHECK(t.template_other(0.4) == 1.0);
  CHECK(t.template_other(1.0) == 0.0);
}

TEST_CASE("u_beta with cutoff") {
  for (double beta : {-0.3, 0.4}) {
    const double R0 = 3.0;
    const auto u = make_u_beta_R0(beta, R0, 1);
    HPoint in({1.7}, {-2.9}, 8.9);
    CHECK(u(in) == std::pow(1.7, beta));
    // D_{R0+1,t} allows |t| <= (R0+1)^2 + R0 + 1; the t ramp already ends at R0^2 + R0 + 1
    HPoint out_t({1.7}, {0.0}, R0 * R0 + R0 + 1.0 + 1e-9);
    CHECK(u(out_t) == 0.0);
    HPoint far_t({1.7}, {0.0}, -((R0 + 1) * (R0 + 1) + R0 + 1.0));
    CHECK(u(far_t) == 0.0);
    HPoint out_y({1.7}, {R0 + 1.0}, 0.0);
    CHECK(u(out_y) == 0.0);
    HPoint neg({-0.5}, {0.0}, 0.0);
    CHECK(u(neg) == 0.0);
    const auto g = gradient_bound_check(u, 0.5, 2.5, 20000, 3);
    CHECK(g.max_ratio_x1 <= 1.0);
    CHECK(g.max_ratio_other <= 1.0);
    CHECK(g.max_ratio_x1 > 0.0);
  }
}

TEST_CASE("beta scan") {
  const auto grid = default_beta_grid(0.75, 2, 0);
  CHECK(grid.size() == 41);
  const auto sc = beta_scan(0.75, 2, 0, grid);
  CHECK(std::abs(sc.argmax_beta - 0.25) <= sc.grid_step);
  CHECK(sc.table.front().lambda < sc.max_lambda);
  CHECK(sc.table.back().lambda < sc.max_lambda);
  const auto fine = beta_scan(0.75, 2, 0, default_beta_grid(0.75, 2, 0, 81));
  CHECK(std::abs(fine.argmax_beta - sc.argmax_beta) <= sc.grid_step + 1e-12);
  CHECK_THROWS_AS(beta_scan(0.75, 2, 0, {}), ParameterError);
  CHECK_THROWS_AS(beta_scan(0.75, 2, 0, {5.0}), ParameterError);
}

TEST_CASE("bump corpus and near-optimizer") {
  const auto corpus = bump_corpus(1, 10, 4);
  CHECK(corpus.size() == 10);
  for (const auto& f : corpus) {
    CHECK(f.box.x1_lo >= 0.2);
    CHECK(f.box.x1_hi <= 3.0);
    HPoint outside({f.box.x1_hi + 0.01}, {0.0}, 0.0);
    CHECK(f(outside) == 0.0);
  }
  const auto again = bump_corpus(1, 10, 4);
  HPoint q({1.0}, {0.1}, 0.2);
  CHECK(again[3](q) == corpus[3](q));

  const HardyParams p{1, 0.75, 2, 0};
  const auto g = near_optimizer(p, 4.0, {1e-6, 3.5, 0.4});
  REQUIRE(g.factorization);
  HPoint a({1.0}, {0.3}, 0.5);
  CHECK(g(a) == doctest::Approx(g.factorization->eta(1.0) * make_psi_cutoff(4.0, 1, 2)(a)).epsilon(1e-14));
  CHECK_THROWS_AS(near_optimizer(p, 2.0, {1e-6, 3.5, 0.4}), ParameterError);

  // reduced 1-D quotient tends to Lambda as the profile tightens
  const double q_ = p.sp();
  const double lam = constants::lambda_capital(0.75, 2, 0).value;
  const auto loose = near_optimizer_profile(p, {1e-2, 1.9, 0.42});
  const auto tight = near_optimizer_profile(p, {1e-10, 1.9, 0.42});
  const double r_loose = profile_seminorm_1d(loose, q_, 2).value / profile_hardy_1d(loose, q_, 2).value;
  const double r_tight = profile_seminorm_1d(tight, q_, 2).value / profile_hardy_1d(tight, q_, 2).value;
  CHECK(r_tight < r_loose);
  CHECK(r_tight >= lam);
  CHECK(r_tight < 1.15 * lam);
}
