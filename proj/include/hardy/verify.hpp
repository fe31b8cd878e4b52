#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hardy/functionals.hpp"
#include "hardy/report.hpp"
#include "hardy/testfamilies.hpp"

namespace hardy::verify {

struct McScheme {
  std::int64_t samples = 400000;
  std::uint64_t seed = 1;
  int threads = 1;
};

/// Left side of the x1-gap reduction: the integral over (x~, t) in R^{2n}
/// of ((m^2+|x~|^2)^2+t^2)^{-(Q+theta)/4} (m^2+|x~|^2)^{-alpha/2}.
/// n = 1 by nested quadrature, n = 2, 3 by Monte-Carlo.
quad::IntegralResult reduction_lhs(int n, double theta, double alpha, double m, const McScheme& mc = {});

/// Compares reduction_lhs with 2|S_{2n-2}| I(2n, theta, alpha) / m^{1+theta+alpha}.
VerificationReport verify_lemma51(int n, double theta, double alpha, double m, const McScheme& mc = {},
                                  double tolerance = 1e-6);

/// Exponent of m recovered from reduction_lhs(2m)/reduction_lhs(m), compared to -(1+theta+alpha).
VerificationReport verify_lemma51_scaling(int n, double theta, double alpha, double m,
                                          const McScheme& mc = {}, double tolerance = 1e-6);

/// F_eps(tau) by direct quadrature over R minus (tau/(1+eps), (1+eps) tau).
double F_eps(double beta, double s, double p, double eps, double tau);

/// max over tau of |F_eps(tau) - lambda_eps u_beta(tau)^{p-1} / tau^{sp}| relative.
VerificationReport verify_Feps(double beta, double s, double p, double eps,
                               const std::vector<double>& tau_grid, double tolerance = 1e-6);

/// Relative gaps |lambda_eps - lambda| / |lambda| along eps_sequence: pass when
/// they shrink monotonically (to within 1e-9) and the last is below `tolerance`.
VerificationReport verify_lambda_limit(double beta, double s, double p, const std::vector<double>& eps_sequence,
                                       double tolerance = 1e-3);

/// Rayleigh quotient against the sharp constant (one-sided, k = 3).
/// Outside the sharp hypotheses only positivity of the quotient is checked.
VerificationReport verify_inequality(const TestFunction& f, const HardyParams& params,
                                     const SeminormScheme& scheme, double max_rel_stderr = 0.05);

struct ConvergenceRow {
  double R0 = 0.0;
  RayleighResult rayleigh;
  double ratio_to_sharp = 0.0;
  /// quotient - C_{n,s,p,alpha} * (1-D reduced quotient of eta)
  double reduced_gap = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  double sharp = 0.0;
  double reduced_1d = 0.0;  // C * [eta]^p / int eta^p x^{-q}
  /// Log-log slope of reduced_gap against R0 when every gap exceeds 2 sigma.
  std::optional<double> fitted_exponent;
  double predicted_exponent = 0.0;  // (1 - sp - alpha) / p
  VerificationReport monotone;
  VerificationReport final_within;
  VerificationReport lower_bound;
};

/// Quotients of eta Psi_{R0} with one profile eta for every R0 and a common
/// seed across cells. The profile ends at 0.95 min(R0) unless spec.b is set
/// smaller.
ConvergenceStudy convergence_study(const HardyParams& params, const std::vector<double>& R0s,
                                   std::optional<families::NearOptimizerSpec> spec,
                                   const SeminormScheme& scheme, double final_margin = 0.25);

struct GepsStudy {
  std::vector<VerificationReport> reports;
  bool pass = true;
};

/// Refinement runs for g1_eps and g_eps_hn, the x-uniformity probe, and the
/// sphere-reduction versus direct-PV consistency check.
GepsStudy verify_geps_limits(double s, double p, int n, const McScheme& mc);

}  // namespace hardy::verify
