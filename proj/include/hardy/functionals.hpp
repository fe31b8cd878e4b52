#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "hardy/hgroup.hpp"
#include "hardy/quad.hpp"
#include "hardy/report.hpp"

namespace hardy {

/// Support box {x1 in [x1_lo, x1_hi], |x~_i| <= other_half_width, |t| <= t_half_width},
/// where x~ = (x_2..x_n, y_1..y_n) and the bound on x~ is coordinatewise.
struct SupportBox {
  double x1_lo = 0.0;
  double x1_hi = 1.0;
  double other_half_width = 1.0;
  double t_half_width = 1.0;
  /// Set for functions such as (x1)_+^s that have no compact support.
  bool unbounded = false;

  bool half_space() const { return x1_lo > 0.0; }
  bool contains(const HPoint& p) const;
  /// Smallest half-width in gauge units (t contributes its square root).
  double min_half_width() const;
};

/// f(xi) = eta(x1) * Psi(xi) where Psi does not depend on x1 on supp(eta).
struct Factorization {
  std::function<double(double)> eta;
  double eta_lo = 0.0;
  double eta_hi = 0.0;
  /// integral over (x~, t) of |Psi(0, x~, t)|^p
  double psi_norm_p = 1.0;
};

struct TestFunction {
  int n = 1;
  std::string name;
  std::function<double(const HPoint&)> evaluate;
  SupportBox box;
  std::optional<double> lipschitz_horizontal;
  std::optional<Factorization> factorization;

  double operator()(const HPoint& p) const { return evaluate(p); }
};

/// c * f
TestFunction scaled(const TestFunction& f, double c);
/// g(xi) = f(delta_lambda xi)
TestFunction dilated(const TestFunction& f, double lambda);

struct SeminormScheme {
  /// Near/far split radius; 0 selects min(0.1 * min half-width, 0.5 * x1)
  /// per outer point (the x1 term only for half-space supports).
  double near_radius = 0.0;
  std::int64_t samples = 400000;
  /// Far radial law r^{-1-kappa}; 0 selects kappa = sp + alpha.
  double far_tail_exponent = 0.0;
  double near_fraction = 0.5;
  std::uint64_t seed = 1;
  int threads = 1;
  /// Use -omega instead of omega for the inner direction (symmetry check).
  bool mirror = false;
  /// When > 0, a result with stderr above this fraction of |value| is
  /// flagged converged = false.
  double max_rel_stderr = 0.0;
};

/// Integral of |f|^p x1^{-sp-alpha} over H^n_+ by Monte-Carlo on the support box.
quad::IntegralResult hardy_integral(const TestFunction& f, const HardyParams& params,
                                    std::int64_t samples = 400000, std::uint64_t seed = 1,
                                    int threads = 1);

/// Same quantity from the factorization: 1-D quadrature times psi_norm_p.
quad::IntegralResult hardy_integral_factorized(const TestFunction& f, const HardyParams& params);

/// [f]^p over H^n x H^n (ordered pairs).
quad::IntegralResult seminorm_pow(const TestFunction& f, const HardyParams& params,
                                  const SeminormScheme& scheme);

/// [f] = (seminorm_pow)^{1/p} with delta-method error.
quad::IntegralResult seminorm(const TestFunction& f, const HardyParams& params,
                              const SeminormScheme& scheme);

struct RayleighResult {
  double quotient = 0.0;
  double stderr_q = 0.0;
  quad::IntegralResult numerator;
  quad::IntegralResult denominator;
  bool denominator_by_quadrature = false;
};

/// [f]^p / hardy_integral(f). The denominator uses the factorization when one
/// is declared and `use_factorization` is set, otherwise an independent
/// Monte-Carlo stream.
RayleighResult rayleigh(const TestFunction& f, const HardyParams& params,
                        const SeminormScheme& scheme, bool use_factorization = true);

struct PvScheme {
  std::int64_t samples = 400000;
  /// Radial law r^{-1-kappa} on (eps, inf); 0 selects (sp + alpha) / 2.
  double kappa = 0.0;
  std::uint64_t seed = 1;
  int threads = 1;
};

/// Integral of J_p(f(xi) - f(xi')) / (d^{Q+sp} |z-z'|^alpha) over left_dist > eps.
quad::IntegralResult pv_apply(const TestFunction& f, const HPoint& xi, const HardyParams& params,
                              double eps, const PvScheme& scheme = {});

/// g1_eps(x) = integral over |y-x| > eps of J_p(x^s - y_+^s) / |x-y|^{1+sp}.
double g1_eps(double x, double s, double p, double eps);

/// Hemisphere average of omega_x1^{sp} g1_{eps omega_x1}(x1) against dS.
quad::IntegralResult g_eps_hn(double x1, double s, double p, double eps, int n,
                              std::int64_t sphere_samples = 4000, std::uint64_t seed = 1,
                              int threads = 1);

/// Hemisphere weight: integral of omega_x1^{sp} over {omega_x1 > 0}.
quad::IntegralResult hemisphere_weight(double sp, int n, std::int64_t samples, std::uint64_t seed);

/// Random search for violations of |a^s-b^s|/(a^s+b^s) >= (s/2)(a-b)/a, a >= b > 0.
VerificationReport lemma42_check(std::int64_t samples, std::uint64_t seed);

/// (x1)_+^beta on all of H^n (no compact support).
TestFunction power_of_distance(int n, double beta);

}  // namespace hardy
