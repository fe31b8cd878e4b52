#pragma once

#include "hardy/hgroup.hpp"
#include "hardy/quad.hpp"

namespace hardy {

/// J_p(x) = |x|^{p-2} x
double Jp(double x, double p);

/// Euler Beta function via log-Gamma.
double beta_fn(double a, double b);

/// Surface area of the unit sphere S^m in R^{m+1}.
double sphere_surface_area(int m);

namespace constants {

inline constexpr double kRelTol = 1e-12;

/// Lambda_{s,p,alpha}. Requires sp + alpha > 0 and alpha < p(1-s).
quad::IntegralResult lambda_capital(double s, double p, double alpha,
                                    quad::Rule rule = quad::Rule::gauss_kronrod);

/// lambda(beta, s, p) for -1/(p-1) < beta < sp/(p-1).
quad::IntegralResult lambda_beta(double beta, double s, double p,
                                 quad::Rule rule = quad::Rule::gauss_kronrod);

/// lambda_eps(beta, s, p): the cut integral on (0, 1/(1+eps)) plus the
/// tail on (1+eps, inf), as written, with 0 < eps < 1.
quad::IntegralResult lambda_beta_eps(double beta, double s, double p, double eps,
                                     quad::Rule rule = quad::Rule::gauss_kronrod);

/// The same quantity after folding the tail onto (0, 1/(1+eps)) by tau -> 1/tau.
/// Used as an independent cross-check of lambda_beta_eps.
quad::IntegralResult lambda_beta_eps_folded(double beta, double s, double p, double eps);

/// I(k, theta, alpha): product of the t- and r-integrals, by quadrature.
quad::IntegralResult calI(int k, double theta, double alpha,
                          quad::Rule rule = quad::Rule::gauss_kronrod);

/// (1/4) B(1/2, (k+theta)/4) B((k-1)/2, (1+theta+alpha)/2)
double calI_closed_form(int k, double theta, double alpha);

/// C_{n,s,p,alpha} = 2 |S_{2n-2}| I(2n, sp, alpha).
quad::IntegralResult C_nspa(int n, double s, double p, double alpha,
                            quad::Rule rule = quad::Rule::gauss_kronrod);

struct SharpConstantBreakdown {
  double lambda_capital = 0.0;
  double C_geom = 0.0;
  double product = 0.0;
  double error_estimate = 0.0;
  HardyParams params;
};

/// C_{n,s,p,alpha} * Lambda_{s,p,alpha}. Throws ParameterError naming the
/// violated hypothesis unless params.sharp_valid().
SharpConstantBreakdown sharp_constant(const HardyParams& params,
                                      quad::Rule rule = quad::Rule::gauss_kronrod);

/// Lambda_{s,p} of the Euclidean half-line problem.
quad::IntegralResult euclidean_lambda(double s, double p,
                                      quad::Rule rule = quad::Rule::gauss_kronrod);

/// Sharp constant of the Euclidean half-space R^n_+; sp != 1.
quad::IntegralResult euclidean_halfspace_constant(int n, double p, double s,
                                                  quad::Rule rule = quad::Rule::gauss_kronrod);

/// Admissible open interval for beta: (-1/(p-1), sp/(p-1)).
std::pair<double, double> beta_interval(double s, double p);

}  // namespace constants
}  // namespace hardy
