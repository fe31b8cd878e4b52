#pragma once

#include <cstdint>
#include <functional>
#include <optional>

namespace hardy::quad {

/// Value of a quadrature or Monte-Carlo computation with its error estimate.
///
/// For Monte-Carlo results `error_estimate` is the standard error of the mean.
/// A quadrature that exhausted its subdivision budget reports
/// `converged == false` and an infinite error estimate.
struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::int64_t evaluations = 0;
  bool converged = true;

  double relative_error() const;
};

/// Sum of two deterministic results; error estimates add linearly.
IntegralResult operator+(const IntegralResult& a, const IntegralResult& b);
/// Scales value and error by `c`.
IntegralResult operator*(double c, const IntegralResult& r);

/// Describes integrable endpoint behaviour |x - endpoint|^e with e > -1.
///
/// A negative exponent is an integrable blow-up; a positive non-integer
/// exponent marks a vanishing but non-smooth factor. Either triggers a power
/// substitution that flattens the endpoint. Abscissae that round onto the
/// endpoint grid are corrected with the declared power, and the last 64 ulps
/// are integrated in closed form.
struct SingularitySpec {
  std::optional<double> lower;
  std::optional<double> upper;

  static SingularitySpec none() { return {}; }
  static SingularitySpec at_lower(double exponent) { return {exponent, std::nullopt}; }
  static SingularitySpec at_upper(double exponent) { return {std::nullopt, exponent}; }
  static SingularitySpec both(double lower_exp, double upper_exp) { return {lower_exp, upper_exp}; }
};

enum class Rule {
  /// Globally adaptive Gauss-Kronrod (7/15) with power substitution at
  /// declared singular endpoints.
  gauss_kronrod,
  /// Double-exponential (tanh-sinh) rule with level doubling.
  tanh_sinh,
};

inline constexpr double kDefaultRelTol = 1e-10;
inline constexpr double kDefaultSemiInfiniteRelTol = 1e-8;
inline constexpr double kAbsFloor = 1e-14;

using Integrand = std::function<double(double)>;

/// Integrates f over (a, b). Requires a < b.
IntegralResult integrate_1d(const Integrand& f, double a, double b,
                            const SingularitySpec& spec = {},
                            double rel_tol = kDefaultRelTol,
                            Rule rule = Rule::gauss_kronrod);

/// Integrates f over (a, inf) by the map x = a + h (v^{-k} - 1), v in (0, 1], h = max(|a|, 1).
///
/// `decay_exponent` d describes f ~ x^{-d} (d > 1) and selects k so the mapped
/// integrand stays bounded at v = 0; without it k = 1 (x = a + h u/(1-u)).
IntegralResult integrate_semi_infinite(const Integrand& f, double a,
                                       double rel_tol = kDefaultSemiInfiniteRelTol,
                                       std::optional<double> decay_exponent = std::nullopt,
                                       Rule rule = Rule::gauss_kronrod);

/// Throws NumericalError naming `what` when `r` did not converge.
const IntegralResult& require_converged(const IntegralResult& r, const char* what);

}  // namespace hardy::quad
