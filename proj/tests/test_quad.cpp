#include <cmath>

#include "doctest.h"
#include "hardy/errors.hpp"
#include "hardy/hgroup.hpp"
#include "hardy/mc.hpp"
#include "hardy/quad.hpp"

using namespace hardy;
using quad::Rule;
using quad::SingularitySpec;

namespace {
double beta_oracle(double a, double b) { return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b); }
}  // namespace

TEST_CASE("integrate_1d elementary") {
  for (Rule r : {Rule::gauss_kronrod, Rule::tanh_sinh}) {
    auto one = quad::integrate_1d([](double) { return 1.0; }, 0.0, 1.0, {}, 1e-12, r);
    CHECK(one.converged);
    CHECK(one.value == doctest::Approx(1.0).epsilon(1e-13));
    auto sq = quad::integrate_1d([](double x) { return std::pow(1.0 - x, -0.5); }, 0.0, 1.0,
                                 SingularitySpec::at_upper(-0.5), 1e-12, r);
    CHECK(std::abs(sq.value - 2.0) < 1e-12);
  }
}

TEST_CASE("integrate_1d Beta oracle with both endpoints singular") {
  const double ref = beta_oracle(0.7, 0.6);
  for (Rule r : {Rule::gauss_kronrod, Rule::tanh_sinh}) {
    auto res = quad::integrate_1d([](double x) { return std::pow(x, -0.3) * std::pow(1.0 - x, -0.4); }, 0.0, 1.0,
                                  SingularitySpec::both(-0.3, -0.4), 1e-12, r);
    CHECK(std::abs(res.value - ref) / ref < 1e-12);
  }
}

TEST_CASE("strong endpoint singularity away from the origin") {
  for (Rule r : {Rule::gauss_kronrod, Rule::tanh_sinh}) {
    auto res = quad::integrate_1d([](double x) { return std::pow(3.0 - x, -0.9); }, 2.0, 3.0,
                                  SingularitySpec::at_upper(-0.9), 1e-12, r);
    CHECK(res.converged);
    CHECK(std::abs(res.value - 10.0) < 1e-10);
  }
}

TEST_CASE("integrate_1d linearity") {
  auto f = [](double x) { return std::sin(3 * x); };
  auto g = [](double x) { return std::exp(-x * x); };
  auto rf = quad::integrate_1d(f, 0.0, 2.0);
  auto rg = quad::integrate_1d(g, 0.0, 2.0);
  auto rfg = quad::integrate_1d([&](double x) { return 2 * f(x) - 3 * g(x); }, 0.0, 2.0);
  CHECK(std::abs(rfg.value - (2 * rf.value - 3 * rg.value)) < 1e-12);
}

TEST_CASE("integrate_semi_infinite") {
  auto e = quad::integrate_semi_infinite([](double x) { return std::exp(-x); }, 0.0);
  CHECK(std::abs(e.value - 1.0) < 1e-9);
  auto at = quad::integrate_semi_infinite([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1e-10, 2.0);
  CHECK(std::abs(at.value - M_PI / 2) < 1e-9);
  auto c = quad::integrate_semi_infinite([](double x) { return std::pow(1.0 + x * x, -1.5); }, 0.0, 1e-10, 3.0);
  CHECK(std::abs(c.value - 1.0) < 1e-9);
}

TEST_CASE("bad interval and non-convergence") {
  CHECK_THROWS_AS(quad::integrate_1d([](double x) { return x; }, 1.0, 0.0), ParameterError);
  quad::IntegralResult bad{1.0, INFINITY, 10, false};
  CHECK_THROWS_AS(quad::require_converged(bad, "x"), NumericalError);
}

TEST_CASE("mc_integrate self-normalization and determinism") {
  mc::Sampler unif{1, [](mc::RngStream& r, std::span<double> x) { x[0] = r.uniform(); },
                   [](std::span<const double>) { return 1.0; }};
  auto f = [](std::span<const double>) { return 1.0; };
  auto r = mc::mc_integrate(f, unif, 10000, 7);
  CHECK(r.value == doctest::Approx(1.0));
  auto x2a = mc::mc_integrate([](std::span<const double> x) { return x[0] * x[0]; }, unif, 20000, 3);
  auto x2b = mc::mc_integrate([](std::span<const double> x) { return x[0] * x[0]; }, unif, 20000, 3, 4);
  CHECK(x2a.value == x2b.value);
  CHECK(x2a.error_estimate == x2b.error_estimate);
  CHECK(std::abs(x2a.value - 1.0 / 3) < 4 * x2a.error_estimate);
}

TEST_CASE("mc stderr scales as 1/sqrt(N)") {
  mc::Sampler unif{1, [](mc::RngStream& r, std::span<double> x) { x[0] = r.uniform(); },
                   [](std::span<const double>) { return 1.0; }};
  auto f = [](std::span<const double> x) { return std::exp(x[0]); };
  auto a = mc::mc_integrate(f, unif, 20000, 11);
  auto b = mc::mc_integrate(f, unif, 80000, 11);
  const double ratio = a.error_estimate / b.error_estimate;
  CHECK(ratio > 2.0 / 1.5);
  CHECK(ratio < 2.0 * 1.5);
}

TEST_CASE("mc_integrate rejects zero density where f is nonzero") {
  mc::Sampler unif{1, [](mc::RngStream& r, std::span<double> x) { x[0] = r.uniform(); },
                   [](std::span<const double>) { return 0.0; }};
  CHECK_THROWS_AS(mc::mc_integrate([](std::span<const double>) { return 1.0; }, unif, 1000, 1), NumericalError);
}

TEST_CASE("Koranyi ball volume by box sampling against polar formula") {
  // same draws, two readings: Q |B| from the indicator and |S| = (Q+2) int_B d^2
  mc::Sampler box{3, [](mc::RngStream& r, std::span<double> x) {
                    for (auto& c : x) c = r.uniform(-1.0, 1.0);
                  },
                  [](std::span<const double>) { return 1.0 / 8.0; }};
  auto d4 = [](std::span<const double> x) {
    const double z2 = x[0] * x[0] + x[1] * x[1];
    return z2 * z2 + x[2] * x[2];
  };
  auto vol = mc::mc_integrate([&](std::span<const double> x) { return d4(x) <= 1.0 ? 1.0 : 0.0; }, box, 400000, 5);
  auto m2 = mc::mc_integrate([&](std::span<const double> x) { return d4(x) <= 1.0 ? std::sqrt(d4(x)) : 0.0; }, box,
                             400000, 5);
  CHECK(std::abs(vol.value - unit_ball_volume(1)) < 4 * vol.error_estimate);
  CHECK(std::abs(4 * vol.value - 6 * m2.value) < 4 * (4 * vol.error_estimate + 6 * m2.error_estimate));
  CHECK(unit_ball_volume(1) == doctest::Approx(M_PI * M_PI / 2).epsilon(1e-14));
  CHECK(sphere_measure(1) == doctest::Approx(4 * unit_ball_volume(1)).epsilon(1e-14));
}
