#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hardy/functionals.hpp"
#include "hardy/hgroup.hpp"
#include "hardy/quad.hpp"

namespace hardy::families {

/// C-infinity step: 0 for u <= 0, 1 for u >= 1.
double smooth_step(double u);
double smooth_step_derivative(double u);
/// max |smooth_step'| (the constant C0 of every ramp built from it).
double smooth_step_max_slope();

enum class ProfileKind { bump, mollified_power };
enum class RampScale { linear, logarithmic };

struct Profile1D {
  std::function<double(double)> evaluate;
  double a = 0.0;
  double b = 0.0;
  ProfileKind kind = ProfileKind::bump;
  /// Interior power for mollified-power profiles.
  double exponent = 0.0;
  double ramp = 0.0;
  RampScale ramp_scale = RampScale::linear;

  double operator()(double x) const { return evaluate(x); }
};

/// exp(m (1 - 1/(1-u^2))) on u in (-1, 1), u the affine image of (a, b);
/// m = smoothness_order > 0 sets the sharpness of the shoulders.
Profile1D make_bump(double a, double b, double smoothness_order = 1.0);

/// x^exponent on [a+ramp, b-ramp] (linear scale) or [a e^ramp, b e^-ramp]
/// (logarithmic scale), smoothly ramped to zero at a and b.
Profile1D make_mollified_power(double exponent, double a, double b, double ramp,
                               RampScale scale = RampScale::linear);

struct CutoffPsi {
  double R0 = 1.0;
  int n = 1;
  double p = 2.0;
  /// R0^{-(2n+1)/p} / ||Psi(0,.)||_p
  double normalization = 1.0;
  std::function<double(const HPoint&)> evaluate;
  /// Template factor along x1 (before dilation): rising on (-1,0), 1 on [0,1],
  /// falling on (1,2).
  std::function<double(double)> template_x1;
  /// Template factor along each remaining coordinate: 1 on |u| <= 1/2, 0 for |u| >= 1.
  std::function<double(double)> template_other;

  double operator()(const HPoint& p) const { return evaluate(p); }
};

CutoffPsi make_psi_cutoff(double R0, int n, double p);

/// ||Psi_{R0}(0, .)||_p^p by tensor quadrature of the transverse factors.
double psi_slice_norm_p(const CutoffPsi& psi);

struct BetaCutoffFn {
  double beta = 0.0;
  double R0 = 1.0;
  int n = 1;
  double C0 = 2.0;
  std::function<double(const HPoint&)> evaluate;
  /// The cutoff psi_{R0} alone.
  std::function<double(const HPoint&)> cutoff;

  double operator()(const HPoint& p) const { return evaluate(p); }
};

/// u_beta psi_{R0}, psi_{R0} = 1 on D_{R0} and supported in D_{R0+1,t}.
BetaCutoffFn make_u_beta_R0(double beta, double R0, int n);

struct GradientCheck {
  /// max over samples of |X_1 u| / (|beta| max(r^{beta-1},R^{beta-1}) + 3 C0 max(r^beta,R^beta))
  double max_ratio_x1 = 0.0;
  /// max over samples and the other 2n-1 fields of |X_i u|, |Y_j u| / (3 C0 max(r^beta,R^beta))
  double max_ratio_other = 0.0;
  std::int64_t samples = 0;
};

/// Finite-difference horizontal gradients on the strip r < x1 < R inside D_{R0+1,t}.
GradientCheck gradient_bound_check(const BetaCutoffFn& u, double r, double R, std::int64_t samples,
                                     std::uint64_t seed);

struct BetaScanRow {
  double beta;
  double lambda;
};

struct BetaScan {
  double argmax_beta = 0.0;
  double max_lambda = 0.0;
  double optimum_closed_form = 0.0;  // (s'p - 1)/p
  double grid_step = 0.0;
  std::vector<BetaScanRow> table;
};

/// `points` equispaced values covering `span` of the admissible interval for
/// s' = s + alpha/p, centred on its midpoint.
std::vector<double> default_beta_grid(double s, double p, double alpha, int points = 41,
                                      double span = 0.9);

/// lambda(beta, s', p) on the grid, s' = s + alpha/p.
BetaScan beta_scan(double s, double p, double alpha, const std::vector<double>& beta_grid);

/// n-dimensional product of bumps with a random x1 window in [0.2, 3],
/// random transverse widths and random shoulder sharpness.
std::vector<TestFunction> bump_corpus(int n, int count, std::uint64_t seed);

/// Product of 1-D bumps as a TestFunction.
TestFunction product_bump(int n, double a, double b, double other_half_width, double t_half_width,
                          double order = 1.0, const std::string& name = "bump");

struct NearOptimizerSpec {
  double a = 1e-10;
  double b = 1.9;
  /// Logarithmic ramp as a fraction of ln(b/a).
  double ramp_fraction = 0.42;
};

/// eta(x1) Psi_{R0}(xi) with eta a log-ramped x^{(sp+alpha-1)/p}; requires b <= R0.
TestFunction near_optimizer(const HardyParams& params, double R0, const NearOptimizerSpec& spec = {});

/// The profile used by near_optimizer.
Profile1D near_optimizer_profile(const HardyParams& params, const NearOptimizerSpec& spec);

/// [eta]^p over R x R with kernel |x-y|^{-1-q}, eta extended by zero.
quad::IntegralResult profile_seminorm_1d(const Profile1D& eta, double q, double p);

/// integral of |eta|^p x^{-q} over (a, b)
quad::IntegralResult profile_hardy_1d(const Profile1D& eta, double q, double p);

}  // namespace hardy::families
