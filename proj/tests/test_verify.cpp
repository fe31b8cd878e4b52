#include <cmath>

#include "doctest.h"
#include "hardy/constants.hpp"
#include "hardy/errors.hpp"
#include "hardy/testfamilies.hpp"
#include "hardy/verify.hpp"

using namespace hardy;

TEST_CASE("x1-gap reduction, n = 1") {
  const auto r = verify::verify_lemma51(1, 1.0, 0.0, 1.0);
  CHECK(r.pass);
  CHECK(r.rel_err < 1e-6);
  CHECK(r.details["I_quadrature"].get<double>() ==
        doctest::Approx(r.details["I_beta_closed_form"].get<double>()).epsilon(1e-8));
  const auto sc = verify::verify_lemma51_scaling(1, 0.5, 1.0, 1.0);
  CHECK(sc.pass);
  CHECK(std::abs(sc.lhs + 2.5) < 1e-6);
  // pointwise decreasing in alpha once m^2 + |x~|^2 >= 1
  double prev = INFINITY;
  for (double a : {0.0, 0.5, 1.0}) {
    const double v = verify::reduction_lhs(1, 1.0, a, 1.2).value;
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_AS(verify::reduction_lhs(1, 0.0, 0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(verify::reduction_lhs(4, 1.0, 0.0, 1.0), ParameterError);
}

TEST_CASE("x1-gap reduction by Monte-Carlo, n = 2, 3") {
  verify::McScheme mc{400000, 3, 1};
  for (int n : {2, 3}) {
    const auto r = verify::verify_lemma51(n, 1.0, 0.5, 1.0, mc, 1e-6);
    CHECK(r.pass);
    CHECK(r.stderr_combined.has_value());
    CHECK(*r.stderr_combined < 0.05 * r.lhs);
  }
}

TEST_CASE("F_eps identity") {
  const std::vector<double> taus = {0.5, 1.0, 2.0};
  const auto zero = verify::verify_Feps(0.0, 0.6, 2.0, 0.1, taus, 1e-8);
  CHECK(zero.pass);
  // beta = 0: only the tail below zero survives, 2 tau^{-sp} / sp
  CHECK(verify::F_eps(0.0, 0.6, 2.0, 0.1, 2.0) == doctest::Approx(2 * std::pow(2.0, -1.2) / 1.2).epsilon(1e-12));
  CHECK(verify::verify_Feps(0.2, 0.6, 2.0, 0.1, taus).pass);
  CHECK(verify::verify_Feps(-0.2, 0.75, 2.0, 0.1, taus).pass);
  CHECK(verify::verify_Feps(0.3, 0.75, 3.0, 0.05, taus).pass);
  // tau' -> 2 tau' substitution
  for (auto [b, s, p] : {std::tuple{0.2, 0.6, 2.0}, std::tuple{-0.2, 0.75, 2.0}, std::tuple{0.3, 0.75, 3.0}}) {
    const double expo = b * (p - 1) - s * p;
    for (double t : {0.3, 1.0, 1.7}) {
      const double ratio = verify::F_eps(b, s, p, 0.1, 2 * t) / verify::F_eps(b, s, p, 0.1, t);
      CHECK(ratio == doctest::Approx(std::pow(2.0, expo)).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(verify::verify_Feps(0.2, 0.6, 2.0, 0.1, {}), ParameterError);
  CHECK_THROWS_AS(verify::F_eps(0.2, 0.6, 2.0, 0.1, -1.0), ParameterError);
}

TEST_CASE("lambda_eps limit") {
  const std::vector<double> seq = {0.1, 0.01, 0.001, 0.0001};
  const auto zero = verify::verify_lambda_limit(0.0, 0.6, 2.0, seq);
  CHECK(zero.pass);
  CHECK(zero.lhs == 0.0);
  CHECK(verify::verify_lambda_limit(0.3, 0.75, 3.0, seq).pass);
  // beta < 0 converges like eps^{p - sp}: monotone, but the gap at 1e-4 is 1.6e-2
  const auto neg = verify::verify_lambda_limit(-0.2, 0.75, 2.0, seq);
  CHECK(neg.details["monotone"].get<bool>());
  const auto& rows = neg.details["rows"];
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double rate = std::log10(rows[i - 1]["rel_gap"].get<double>() / rows[i]["rel_gap"].get<double>());
    CHECK(rate == doctest::Approx(0.5).epsilon(0.1));
  }
  CHECK_FALSE(neg.pass);
  CHECK(neg.lhs == doctest::Approx(0.0159).epsilon(0.01));
}

TEST_CASE("inequality on a small corpus") {
  const HardyParams p{1, 0.75, 2.0, 0.0};
  SeminormScheme sc;
  sc.samples = 200000;
  sc.seed = 2;
  for (const auto& f : families::bump_corpus(1, 3, 7)) {
    const auto r = verify::verify_inequality(f, p, sc);
    CHECK(r.pass);
    CHECK(r.active_criterion == "relation");
    const auto r2 = verify::verify_inequality(scaled(f, 0.3), p, sc);
    CHECK(r2.lhs == doctest::Approx(r.lhs).epsilon(1e-10));
  }
  // outside the sharp range only positivity is asserted
  const HardyParams weak{1, 0.4, 2.0, 0.0};
  const auto r = verify::verify_inequality(families::bump_corpus(1, 1, 3)[0], weak, sc);
  CHECK(r.pass);
  CHECK(r.rhs == 0.0);
  CHECK(r.details["bound"] == "positivity");
}

TEST_CASE("stderr cap blocks a noisy pass") {
  const HardyParams p{1, 0.75, 2.0, 0.0};
  SeminormScheme sc;
  sc.samples = 640;
  const auto r = verify::verify_inequality(families::bump_corpus(1, 1, 3)[0], p, sc, 1e-4);
  CHECK_FALSE(r.pass);
  CHECK(r.active_criterion == "stderr_cap_exceeded");
}

TEST_CASE("convergence study") {
  const HardyParams p{1, 0.75, 2.0, 0.0};
  SeminormScheme sc;
  sc.samples = 200000;
  const auto st = verify::convergence_study(p, {2.0, 4.0}, std::nullopt, sc);
  CHECK(st.rows.size() == 2);
  CHECK(st.monotone.pass);
  CHECK(st.lower_bound.pass);
  CHECK(st.final_within.pass);
  CHECK(st.predicted_exponent == doctest::Approx(-0.25));
  CHECK(st.reduced_1d > st.sharp);
  CHECK_THROWS_AS(verify::convergence_study({1, 0.4, 2.0, 0.0}, {2.0}, std::nullopt, sc), ParameterError);
  CHECK_THROWS_AS(verify::convergence_study(p, {}, std::nullopt, sc), ParameterError);
}

TEST_CASE("g_eps limits") {
  const auto st = verify::verify_geps_limits(0.5, 2.0, 1, {400000, 1, 1});
  CHECK(st.reports.size() == 4);
  CHECK(st.pass);
}
