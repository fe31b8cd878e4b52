#include "hardy/constants.hpp"

#include <cmath>
#include <string>

#include "hardy/errors.hpp"

namespace hardy {

using quad::IntegralResult;
using quad::Rule;
using quad::SingularitySpec;

double Jp(double x, double p) {
  if (x == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(x), p - 1.0), x);
}

double beta_fn(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double sphere_surface_area(int m) {
  if (m < 0) throw ParameterError("m_nonneg", "sphere dimension must be >= 0");
  const double h = 0.5 * (m + 1);
  return 2.0 * std::pow(M_PI, h) / std::tgamma(h);
}

namespace constants {
namespace {

// 1 - tau^g with tau = 1 - u, accurate for small u.
double one_minus_pow_u(double u, double g) { return -std::expm1(g * std::log1p(-u)); }

// Exponent used for the power substitution at tau = 0 of a factor
// (1 - tau^g): blow-up when g < 0, otherwise a kink of order g.
double lower_exponent(double g, double p) { return g < 0.0 ? g * p : g; }

IntegralResult integrate(const quad::Integrand& f, double a, double b, SingularitySpec spec,
                         Rule rule, const char* what) {
  IntegralResult r = quad::integrate_1d(f, a, b, spec, kRelTol, rule);
  if (!r.converged) r = quad::integrate_1d(f, a, b, spec, 1e-10, rule);
  return quad::require_converged(r, what);
}

// log-variable integral of g over (lo, hi), 0 < lo < hi.
IntegralResult integrate_log(const quad::Integrand& g, double lo, double hi, Rule rule,
                             const char* what) {
  return integrate([&g](double w) {
    const double u = std::exp(w);
    return g(u) * u;
  }, std::log(lo), std::log(hi), {}, rule, what);
}

void check_beta(double beta, double s, double p) {
  const auto [lo, hi] = beta_interval(s, p);
  if (!(beta > lo && beta < hi)) {
    throw ParameterError("beta_admissible", "beta must lie in (-1/(p-1), sp/(p-1)) = (" +
                                                std::to_string(lo) + ", " + std::to_string(hi) + ")");
  }
}

void check_sp(double s, double p) {
  if (!(s > 0.0 && s < 1.0)) throw ParameterError("s_in_0_1", "s must lie in (0,1)");
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("p_gt_1", "p must lie in (1,inf)");
}

}  // namespace

std::pair<double, double> beta_interval(double s, double p) {
  return {-1.0 / (p - 1.0), s * p / (p - 1.0)};
}

IntegralResult lambda_capital(double s, double p, double alpha, Rule rule) {
  check_sp(s, p);
  const double q = s * p + alpha;
  if (!(alpha >= 0.0)) throw ParameterError("alpha_nonneg", "alpha must be >= 0");
  if (!(alpha < p * (1.0 - s))) {
    throw ParameterError("alpha<p(1-s)", "Lambda diverges at tau=1 unless alpha < p(1-s)");
  }
  const double g = (q - 1.0) / p;
  IntegralResult tail{2.0 / q, 0.0, 1, true};
  if (g == 0.0) return tail;
  auto near0 = [g, p, q](double tau) {
    return std::pow(std::abs(1.0 - std::pow(tau, g)), p) / std::pow(1.0 - tau, 1.0 + q);
  };
  auto near1 = [g, p, q](double u) {
    return std::pow(std::abs(one_minus_pow_u(u, g)), p) / std::pow(u, 1.0 + q);
  };
  const IntegralResult a = integrate(near0, 0.0, 0.5, SingularitySpec::at_lower(lower_exponent(g, p)),
                                     rule, "Lambda (0,1/2)");
  const IntegralResult b = integrate(near1, 0.0, 0.5, SingularitySpec::at_lower(p - 1.0 - q), rule,
                                     "Lambda (1/2,1)");
  return 2.0 * (a + b) + tail;
}

IntegralResult euclidean_lambda(double s, double p, Rule rule) { return lambda_capital(s, p, 0.0, rule); }

IntegralResult lambda_beta(double beta, double s, double p, Rule rule) {
  check_sp(s, p);
  check_beta(beta, s, p);
  const double sp = s * p;
  const double c = sp - 1.0 - beta * (p - 1.0);
  IntegralResult tail{2.0 / sp, 0.0, 1, true};
  if (beta == 0.0 || c == 0.0) return tail;
  auto near0 = [=](double tau) {
    return Jp(1.0 - std::pow(tau, beta), p) * (1.0 - std::pow(tau, c)) / std::pow(1.0 - tau, 1.0 + sp);
  };
  auto near1 = [=](double u) {
    return Jp(one_minus_pow_u(u, beta), p) * one_minus_pow_u(u, c) / std::pow(u, 1.0 + sp);
  };
  double e0 = (beta < 0.0 ? beta * (p - 1.0) : 0.0) + (c < 0.0 ? c : 0.0);
  if (e0 == 0.0) e0 = std::min(beta, c);
  const IntegralResult a = integrate(near0, 0.0, 0.5, SingularitySpec::at_lower(e0), rule, "lambda (0,1/2)");
  const IntegralResult b = integrate(near1, 0.0, 0.5, SingularitySpec::at_lower(p - 1.0 - sp), rule,
                                     "lambda (1/2,1)");
  return 2.0 * (a + b) + tail;
}

IntegralResult lambda_beta_eps(double beta, double s, double p, double eps, Rule rule) {
  check_sp(s, p);
  check_beta(beta, s, p);
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps_in_0_1", "eps must lie in (0,1)");
  const double sp = s * p;
  IntegralResult tail{2.0 / sp, 0.0, 1, true};
  if (beta == 0.0) return tail;

  // (0, 1/2) in tau
  auto near0 = [=](double tau) {
    return Jp(1.0 - std::pow(tau, beta), p) / std::pow(1.0 - tau, 1.0 + sp);
  };
  const double e0 = beta < 0.0 ? beta * (p - 1.0) : beta;
  const IntegralResult a = integrate(near0, 0.0, 0.5, SingularitySpec::at_lower(e0), rule,
                                     "lambda_eps (0,1/2)");
  // (1/2, 1/(1+eps)) in u = 1 - tau
  auto below1 = [=](double u) { return Jp(one_minus_pow_u(u, beta), p) / std::pow(u, 1.0 + sp); };
  const IntegralResult b = integrate_log(below1, eps / (1.0 + eps), 0.5, rule, "lambda_eps (1/2,1/(1+eps))");
  // (1+eps, 2) in v = tau - 1
  auto above1 = [=](double v) {
    return Jp(-std::expm1(beta * std::log1p(v)), p) / std::pow(v, 1.0 + sp);
  };
  const IntegralResult c = integrate_log(above1, eps, 1.0, rule, "lambda_eps (1+eps,2)");
  // (2, inf)
  auto far = [=](double tau) { return Jp(1.0 - std::pow(tau, beta), p) / std::pow(tau - 1.0, 1.0 + sp); };
  const double decay = 1.0 + sp - std::max(beta, 0.0) * (p - 1.0);
  IntegralResult d = quad::integrate_semi_infinite(far, 2.0, kRelTol, decay, rule);
  if (!d.converged) d = quad::integrate_semi_infinite(far, 2.0, 1e-10, decay, rule);
  quad::require_converged(d, "lambda_eps (2,inf)");
  return 2.0 * (a + b + c + d) + tail;
}

IntegralResult lambda_beta_eps_folded(double beta, double s, double p, double eps) {
  check_sp(s, p);
  check_beta(beta, s, p);
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps_in_0_1", "eps must lie in (0,1)");
  const double sp = s * p;
  const double c = sp - 1.0 - beta * (p - 1.0);
  IntegralResult tail{2.0 / sp, 0.0, 1, true};
  if (beta == 0.0 || c == 0.0) return tail;
  auto near0 = [=](double tau) {
    return Jp(1.0 - std::pow(tau, beta), p) * (1.0 - std::pow(tau, c)) / std::pow(1.0 - tau, 1.0 + sp);
  };
  auto below1 = [=](double u) {
    return Jp(one_minus_pow_u(u, beta), p) * one_minus_pow_u(u, c) / std::pow(u, 1.0 + sp);
  };
  double e0 = (beta < 0.0 ? beta * (p - 1.0) : 0.0) + (c < 0.0 ? c : 0.0);
  if (e0 == 0.0) e0 = std::min(beta, c);
  const IntegralResult a = integrate(near0, 0.0, 0.5, SingularitySpec::at_lower(e0), Rule::gauss_kronrod,
                                     "folded lambda_eps (0,1/2)");
  const IntegralResult b = integrate_log(below1, eps / (1.0 + eps), 0.5, Rule::gauss_kronrod,
                                         "folded lambda_eps (1/2,1/(1+eps))");
  return 2.0 * (a + b) + tail;
}

IntegralResult calI(int k, double theta, double alpha, Rule rule) {
  if (k < 2) throw ParameterError("k_ge_2", "k must be >= 2");
  if (!(theta > 0.0)) throw ParameterError("theta_positive", "theta must be > 0");
  if (!(alpha >= 0.0)) throw ParameterError("alpha_nonneg", "alpha must be >= 0");
  const double et = (k + 2.0 + theta) / 4.0;
  const double er = (k + theta + alpha) / 2.0;
  auto ft = [et](double t) { return std::pow(1.0 + t * t, -et); };
  auto fr = [k, er](double r) { return std::pow(r, k - 2) * std::pow(1.0 + r * r, -er); };
  IntegralResult t = quad::integrate_semi_infinite(ft, 0.0, kRelTol, 2.0 * et, rule);
  IntegralResult r = quad::integrate_semi_infinite(fr, 0.0, kRelTol, 2.0 * er - (k - 2), rule);
  quad::require_converged(t, "I t-integral");
  quad::require_converged(r, "I r-integral");
  IntegralResult out;
  out.value = t.value * r.value;
  out.error_estimate = std::abs(t.value) * r.error_estimate + std::abs(r.value) * t.error_estimate;
  out.evaluations = t.evaluations + r.evaluations;
  return out;
}

double calI_closed_form(int k, double theta, double alpha) {
  return 0.25 * beta_fn(0.5, (k + theta) / 4.0) * beta_fn((k - 1) / 2.0, (1.0 + theta + alpha) / 2.0);
}

IntegralResult C_nspa(int n, double s, double p, double alpha, Rule rule) {
  if (n < 1) throw ParameterError("n_positive", "n must be >= 1");
  return (2.0 * sphere_surface_area(2 * n - 2)) * calI(2 * n, s * p, alpha, rule);
}

SharpConstantBreakdown sharp_constant(const HardyParams& params, Rule rule) {
  params.validate();
  const std::string why = params.sharp_violation();
  if (!why.empty()) {
    throw ParameterError(why.substr(0, why.find(" violated")), "sharp constant undefined: " + why);
  }
  const IntegralResult L = lambda_capital(params.s, params.p, params.alpha, rule);
  const IntegralResult C = C_nspa(params.n, params.s, params.p, params.alpha, rule);
  SharpConstantBreakdown out;
  out.lambda_capital = L.value;
  out.C_geom = C.value;
  out.product = L.value * C.value;
  out.error_estimate = L.value * C.error_estimate + C.value * L.error_estimate;
  out.params = params;
  return out;
}

IntegralResult euclidean_halfspace_constant(int n, double p, double s, Rule rule) {
  check_sp(s, p);
  if (n < 1) throw ParameterError("n_positive", "n must be >= 1");
  const double sp = s * p;
  if (std::abs(sp - 1.0) < 1e-14) throw ParameterError("sp!=1", "Euclidean half-space constant needs sp != 1");
  const double g = (sp - 1.0) / p;
  auto near0 = [g, p, sp](double r) {
    return std::pow(std::abs(1.0 - std::pow(r, g)), p) / std::pow(1.0 - r, 1.0 + sp);
  };
  auto near1 = [g, p, sp](double u) {
    return std::pow(std::abs(one_minus_pow_u(u, g)), p) / std::pow(u, 1.0 + sp);
  };
  const IntegralResult a = integrate(near0, 0.0, 0.5, SingularitySpec::at_lower(lower_exponent(g, p)), rule,
                                     "half-space (0,1/2)");
  const IntegralResult b = integrate(near1, 0.0, 0.5, SingularitySpec::at_lower(p - 1.0 - sp), rule,
                                     "half-space (1/2,1)");
  const double pref = 2.0 * std::pow(M_PI, 0.5 * (n - 1)) *
                      std::exp(std::lgamma(0.5 * (1.0 + sp)) - std::lgamma(0.5 * (n + sp)));
  return pref * (a + b);
}

}  // namespace constants
}  // namespace hardy
