#include "hardy/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hardy/constants.hpp"
#include "hardy/errors.hpp"
#include "hardy/mc.hpp"

namespace hardy::verify {

using quad::IntegralResult;

namespace {

IntegralResult split_semi_infinite(const quad::Integrand& f, double scale, double decay, double tol) {
  IntegralResult a = quad::integrate_1d(f, 0.0, scale, {}, tol);
  IntegralResult b = quad::integrate_semi_infinite(f, scale, tol, decay);
  return a + b;
}

}  // namespace

IntegralResult reduction_lhs(int n, double theta, double alpha, double m, const McScheme& mc) {
  if (!(theta > 0.0) || !(alpha >= 0.0) || !(m > 0.0)) {
    throw ParameterError("lemma51_params", "need theta > 0, alpha >= 0, m > 0");
  }
  const double Q = 2.0 * n + 2.0;
  const double e = (Q + theta) / 4.0;
  if (n == 1) {
    bool ok = true;
    std::int64_t evals = 0;
    auto outer = [&](double x) {
      const double A = m * m + x * x;
      auto inner = [&](double t) { return std::pow(A * A + t * t, -e); };
      IntegralResult r = split_semi_infinite(inner, A, 2.0 * e, 1e-13);
      ok = ok && r.converged;
      evals += r.evaluations;
      return r.value * std::pow(A, -0.5 * alpha);
    };
    IntegralResult r = split_semi_infinite(outer, m, Q + theta + alpha - 2.0, 1e-12);
    r.converged = r.converged && ok;
    r.evaluations += evals;
    quad::require_converged(r, "reduction left side");
    return 4.0 * r;  // both signs of x~ and of t
  }
  if (n > 3) throw ParameterError("n<=3", "direct evaluation supports n <= 3");
  // Cauchy proposal per coordinate: scale m for x~, m^2 for t.
  const int dx = 2 * n - 1;
  return mc::run_chunks(mc.samples, mc.seed, mc.threads, [&](int, std::int64_t count, mc::RngStream& rng) {
    mc::Accumulator acc;
    for (std::int64_t i = 0; i < count; ++i) {
      double r2 = 0.0, inv_q = 1.0;
      for (int k = 0; k < dx; ++k) {
        const double c = std::tan(M_PI * (rng.uniform() - 0.5));
        r2 += m * m * c * c;
        inv_q *= M_PI * m * (1.0 + c * c);
      }
      const double c = std::tan(M_PI * (rng.uniform() - 0.5));
      const double t = m * m * c;
      inv_q *= M_PI * m * m * (1.0 + c * c);
      const double A = m * m + r2;
      acc.add(std::pow(A * A + t * t, -e) * std::pow(A, -0.5 * alpha) * inv_q);
    }
    return acc;
  });
}

VerificationReport verify_lemma51(int n, double theta, double alpha, double m, const McScheme& mc,
                                  double tolerance) {
  Stopwatch clock;
  const IntegralResult lhs = reduction_lhs(n, theta, alpha, m, mc);
  const IntegralResult I = constants::calI(2 * n, theta, alpha);
  const double rhs = 2.0 * sphere_surface_area(2 * n - 2) * I.value / std::pow(m, 1.0 + theta + alpha);
  VerificationReport rep;
  rep.identity_name = "lemma51";
  rep.params = {{"n", n}, {"theta", theta}, {"alpha", alpha}, {"m", m}};
  rep.lhs = lhs.value;
  rep.rhs = rhs;
  rep.tolerance = tolerance;
  if (n > 1) {
    rep.stderr_combined = lhs.error_estimate;
    rep.seed = mc.seed;
    rep.max_rel_stderr = 0.05;
  }
  rep.details = {{"method", n == 1 ? "nested_quadrature" : "monte_carlo"},
                 {"I_quadrature", I.value},
                 {"I_beta_closed_form", constants::calI_closed_form(2 * n, theta, alpha)}};
  rep.evaluate();
  rep.runtime_s = clock.seconds();
  return rep;
}

VerificationReport verify_lemma51_scaling(int n, double theta, double alpha, double m, const McScheme& mc,
                                          double tolerance) {
  Stopwatch clock;
  const IntegralResult a = reduction_lhs(n, theta, alpha, m, mc);
  const IntegralResult b = reduction_lhs(n, theta, alpha, 2.0 * m, mc);
  VerificationReport rep;
  rep.identity_name = "lemma51_scaling";
  rep.params = {{"n", n}, {"theta", theta}, {"alpha", alpha}, {"m", m}};
  rep.lhs = std::log2(b.value / a.value);
  rep.rhs = -(1.0 + theta + alpha);
  rep.tolerance = tolerance / std::abs(rep.rhs);  // absolute tolerance on the exponent
  if (n > 1) {
    rep.stderr_combined = std::hypot(a.error_estimate / a.value, b.error_estimate / b.value) / std::log(2.0);
    rep.seed = mc.seed;
  }
  rep.details = {{"lhs_m", a.value}, {"lhs_2m", b.value}};
  rep.evaluate();
  rep.runtime_s = clock.seconds();
  return rep;
}

double F_eps(double beta, double s, double p, double eps, double tau) {
  if (!(tau > 0.0)) throw ParameterError("tau_positive", "tau must be > 0");
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps_in_0_1", "eps must lie in (0,1)");
  const double sp = s * p;
  const double ub = std::pow(tau, beta);
  // u(tau) - u(tau') for tau' = tau (1 + r), r > -1, without cancellation.
  auto diff = [=](double r) { return -ub * std::expm1(beta * std::log1p(r)); };
  const double ts = std::pow(tau, -sp);
  // tau' < 0: u(tau') = 0.
  double total = Jp(ub, p) * ts / sp;
  // tau' in (0, tau/2): r in (-1, -1/2)
  const double e0 = beta < 0.0 ? beta * (p - 1.0) : (beta > 0.0 ? beta : 1.0);
  auto low = [&](double x) {  // x = tau'/tau
    return Jp(ub - std::pow(tau * x, beta), p) * std::pow(1.0 - x, -1.0 - sp);
  };
  IntegralResult a = quad::integrate_1d(low, 0.0, 0.5, quad::SingularitySpec::at_lower(e0), 1e-12);
  // tau' in (tau/2, tau/(1+eps)): gap g = 1 - x in (eps/(1+eps), 1/2), log scale
  auto below = [&](double w) {
    const double g = std::exp(w);
    return Jp(diff(-g), p) * std::pow(g, -sp);
  };
  IntegralResult b = quad::integrate_1d(below, std::log(eps / (1.0 + eps)), std::log(0.5), {}, 1e-12);
  // tau' in ((1+eps) tau, 2 tau)
  auto above = [&](double w) {
    const double g = std::exp(w);
    return Jp(diff(g), p) * std::pow(g, -sp);
  };
  IntegralResult c = quad::integrate_1d(above, std::log(eps), 0.0, {}, 1e-12);
  // tau' > 2 tau
  auto far = [&](double x) { return Jp(ub - std::pow(tau * x, beta), p) * std::pow(x - 1.0, -1.0 - sp); };
  const double decay = 1.0 + sp - std::max(beta, 0.0) * (p - 1.0);
  IntegralResult d = quad::integrate_semi_infinite(far, 2.0, 1e-11, decay);
  const IntegralResult all = a + b + c + d;
  quad::require_converged(all, "F_eps");
  // Each piece above is in units of x = tau'/tau: dtau' / |tau-tau'|^{1+sp} = tau^{-sp} dx / |1-x|^{1+sp}.
  total += ts * all.value;
  return 2.0 * total;
}

VerificationReport verify_Feps(double beta, double s, double p, double eps, const std::vector<double>& tau_grid,
                               double tolerance) {
  Stopwatch clock;
  if (tau_grid.empty()) throw ParameterError("grid_nonempty", "tau grid is empty");
  const double lam = constants::lambda_beta_eps(beta, s, p, eps).value;
  double worst = 0.0, wl = 0.0, wr = 0.0;
  nlohmann::json rows = nlohmann::json::array();
  for (double tau : tau_grid) {
    const double lhs = F_eps(beta, s, p, eps, tau);
    const double rhs = lam * std::pow(tau, beta * (p - 1.0)) / std::pow(tau, s * p);
    const double rel = std::abs(lhs - rhs) / std::abs(rhs);
    rows.push_back({{"tau", tau}, {"F_eps", lhs}, {"rhs", rhs}, {"rel_err", rel}});
    if (rel >= worst) {
      worst = rel;
      wl = lhs;
      wr = rhs;
    }
  }
  VerificationReport rep;
  rep.identity_name = "F_eps";
  rep.params = {{"beta", beta}, {"s", s}, {"p", p}, {"eps", eps}, {"tau_grid", tau_grid}};
  rep.lhs = wl;
  rep.rhs = wr;
  rep.tolerance = tolerance;
  rep.details = {{"lambda_eps", lam}, {"rows", rows}, {"max_rel_err", worst}};
  rep.evaluate();
  rep.runtime_s = clock.seconds();
  return rep;
}

VerificationReport verify_lambda_limit(double beta, double s, double p, const std::vector<double>& eps_sequence,
                                       double tolerance) {
  Stopwatch clock;
  if (eps_sequence.empty()) throw ParameterError("grid_nonempty", "eps sequence is empty");
  const double lam = constants::lambda_beta(beta, s, p).value;
  nlohmann::json rows = nlohmann::json::array();
  bool monotone = true;
  double prev = std::numeric_limits<double>::infinity();
  double gap = 0.0;
  for (double e : eps_sequence) {
    const double le = constants::lambda_beta_eps(beta, s, p, e).value;
    gap = std::abs(le - lam) / std::abs(lam);
    rows.push_back({{"eps", e}, {"lambda_eps", le}, {"rel_gap", gap}});
    if (gap > prev + 1e-9) monotone = false;
    prev = gap;
  }
  VerificationReport rep;
  rep.identity_name = "lambda_limit";
  rep.params = {{"beta", beta}, {"s", s}, {"p", p}, {"eps", eps_sequence}};
  rep.lhs = gap;
  rep.rhs = tolerance;
  rep.relation = Relation::le;
  rep.tolerance = 0.0;
  rep.details = {{"lambda", lam}, {"rows", rows}, {"monotone", monotone}};
  rep.evaluate();
  if (!monotone) {
    rep.pass = false;
    rep.active_criterion = "monotone";
  }
  rep.runtime_s = clock.seconds();
  return rep;
}

VerificationReport verify_inequality(const TestFunction& f, const HardyParams& params,
                                     const SeminormScheme& scheme, double max_rel_stderr) {
  Stopwatch clock;
  const RayleighResult r = rayleigh(f, params, scheme);
  VerificationReport rep;
  rep.identity_name = "hardy_inequality";
  rep.params = {{"n", params.n}, {"s", params.s}, {"p", params.p}, {"alpha", params.alpha}, {"function", f.name}};
  rep.lhs = r.quotient;
  rep.stderr_combined = r.stderr_q;
  rep.max_rel_stderr = max_rel_stderr;
  rep.relation = Relation::ge;
  rep.seed = scheme.seed;
  rep.tolerance = 0.0;
  rep.details = {{"numerator", r.numerator.value},
                 {"numerator_stderr", r.numerator.error_estimate},
                 {"denominator", r.denominator.value},
                 {"denominator_stderr", r.denominator.error_estimate},
                 {"denominator_by_quadrature", r.denominator_by_quadrature},
                 {"samples", scheme.samples}};
  if (params.sharp_valid()) {
    rep.rhs = constants::sharp_constant(params).product;
    rep.details["bound"] = "sharp_constant";
  } else {
    rep.rhs = 0.0;
    rep.details["bound"] = "positivity";
    rep.details["sharp_hypotheses"] = params.sharp_violation();
  }
  rep.evaluate();
  rep.runtime_s = clock.seconds();
  return rep;
}

ConvergenceStudy convergence_study(const HardyParams& params, const std::vector<double>& R0s,
                                   std::optional<families::NearOptimizerSpec> spec,
                                   const SeminormScheme& scheme, double final_margin) {
  if (R0s.empty()) throw ParameterError("grid_nonempty", "R0 sequence is empty");
  if (!params.sharp_valid()) {
    throw ParameterError("sharp_valid", "convergence study needs the sharp hypotheses: " + params.sharp_violation());
  }
  Stopwatch clock;
  ConvergenceStudy out;
  out.sharp = constants::sharp_constant(params).product;
  out.predicted_exponent = (1.0 - params.sp() - params.alpha) / params.p;
  families::NearOptimizerSpec sp = spec.value_or(families::NearOptimizerSpec{});
  const double rmin = *std::min_element(R0s.begin(), R0s.end());
  if (!spec) sp.b = 0.95 * rmin;
  sp.b = std::min(sp.b, 0.95 * rmin);
  const families::Profile1D eta = families::near_optimizer_profile(params, sp);
  const double q = params.sp() + params.alpha;
  const double C = constants::C_nspa(params.n, params.s, params.p, params.alpha).value;
  out.reduced_1d = C * families::profile_seminorm_1d(eta, q, params.p).value /
                   families::profile_hardy_1d(eta, q, params.p).value;

  bool monotone = true, lower = true;
  double worst_increase = -std::numeric_limits<double>::infinity();
  for (double R0 : R0s) {
    ConvergenceRow row;
    row.R0 = R0;
    row.rayleigh = rayleigh(families::near_optimizer(params, R0, sp), params, scheme);
    row.ratio_to_sharp = row.rayleigh.quotient / out.sharp;
    row.reduced_gap = row.rayleigh.quotient - out.reduced_1d;
    if (!out.rows.empty()) {
      const auto& prev = out.rows.back().rayleigh;
      const double sig = std::hypot(prev.stderr_q, row.rayleigh.stderr_q);
      const double inc = row.rayleigh.quotient - prev.quotient;
      worst_increase = std::max(worst_increase, inc / sig);
      if (inc > 3.0 * sig) monotone = false;
    }
    if (row.rayleigh.quotient + 3.0 * row.rayleigh.stderr_q < out.sharp) lower = false;
    out.rows.push_back(row);
  }

  bool resolved = out.rows.size() >= 2;
  for (const auto& r : out.rows) resolved = resolved && r.reduced_gap > 2.0 * r.rayleigh.stderr_q;
  if (resolved) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(out.rows.size());
    for (const auto& r : out.rows) {
      const double x = std::log(r.R0), y = std::log(r.reduced_gap);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    out.fitted_exponent = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  }

  nlohmann::json common = {{"n", params.n}, {"s", params.s}, {"p", params.p}, {"alpha", params.alpha},
                           {"R0", R0s}, {"eta_a", sp.a}, {"eta_b", sp.b}, {"ramp_fraction", sp.ramp_fraction}};
  const auto& last = out.rows.back().rayleigh;

  out.monotone.identity_name = "convergence_monotone";
  out.monotone.params = common;
  out.monotone.lhs = worst_increase;
  out.monotone.rhs = 3.0;
  out.monotone.relation = Relation::le;
  out.monotone.seed = scheme.seed;
  out.monotone.evaluate();
  out.monotone.pass = monotone;
  out.monotone.details = {{"meaning", "largest step-to-step increase in units of combined sigma"}};

  out.final_within.identity_name = "convergence_final_gap";
  out.final_within.params = common;
  out.final_within.lhs = last.quotient;
  out.final_within.rhs = (1.0 + final_margin) * out.sharp;
  out.final_within.relation = Relation::le;
  out.final_within.stderr_combined = last.stderr_q;
  out.final_within.k_sigma = 0.0;
  out.final_within.seed = scheme.seed;
  out.final_within.evaluate();
  out.final_within.details = {{"ratio_to_sharp", last.quotient / out.sharp}, {"margin", final_margin}};

  out.lower_bound.identity_name = "convergence_lower_bound";
  out.lower_bound.params = common;
  double min_q = std::numeric_limits<double>::infinity(), min_s = 0.0;
  for (const auto& r : out.rows) {
    if (r.rayleigh.quotient < min_q) {
      min_q = r.rayleigh.quotient;
      min_s = r.rayleigh.stderr_q;
    }
  }
  out.lower_bound.lhs = min_q;
  out.lower_bound.rhs = out.sharp;
  out.lower_bound.relation = Relation::ge;
  out.lower_bound.stderr_combined = min_s;
  out.lower_bound.seed = scheme.seed;
  out.lower_bound.evaluate();
  out.lower_bound.pass = out.lower_bound.pass && lower;

  const double rt = clock.seconds();
  out.monotone.runtime_s = out.final_within.runtime_s = out.lower_bound.runtime_s = rt;
  return out;
}

GepsStudy verify_geps_limits(double s, double p, int n, const McScheme& mc) {
  GepsStudy out;
  auto push = [&](VerificationReport r) {
    out.pass = out.pass && r.pass;
    out.reports.push_back(std::move(r));
  };

  {  // g1 refinement at x = 1
    Stopwatch clock;
    const std::vector<double> eps = {0.5, 0.1, 0.01, 0.001};
    nlohmann::json rows = nlohmann::json::array();
    bool dec = true;
    double prev = std::numeric_limits<double>::infinity(), last = 0.0;
    for (double e : eps) {
      last = g1_eps(1.0, s, p, e);
      rows.push_back({{"eps", e}, {"g1", last}});
      if (std::abs(last) >= prev) dec = false;
      prev = std::abs(last);
    }
    VerificationReport r;
    r.identity_name = "g1_eps_limit";
    r.params = {{"s", s}, {"p", p}, {"x", 1.0}, {"eps", eps}};
    r.lhs = std::abs(last);
    r.rhs = 1e-3;
    r.relation = Relation::le;
    r.details = {{"rows", rows}, {"decreasing", dec}, {"threshold_note", "engineering threshold; no rate is claimed"}};
    r.evaluate();
    r.pass = r.pass && dec;
    r.runtime_s = clock.seconds();
    push(r);
  }
  {  // uniformity over x in {0.5, 1, 2}
    Stopwatch clock;
    const std::vector<double> eps = {0.4, 0.1, 0.01, 0.001};
    const std::vector<double> xs = {0.5, 1.0, 2.0};
    nlohmann::json rows = nlohmann::json::array();
    bool dec = true;
    double prev = std::numeric_limits<double>::infinity(), last = 0.0;
    for (double e : eps) {
      double mx = 0.0;
      for (double x : xs) mx = std::max(mx, std::abs(g1_eps(x, s, p, e)));
      rows.push_back({{"eps", e}, {"max_abs_g1", mx}});
      if (mx >= prev) dec = false;
      prev = mx;
      last = mx;
    }
    VerificationReport r;
    r.identity_name = "g1_eps_uniform";
    r.params = {{"s", s}, {"p", p}, {"x", xs}, {"eps", eps}};
    r.lhs = last;
    r.rhs = rows.front()["max_abs_g1"].get<double>();
    r.relation = Relation::le;
    r.details = {{"rows", rows}, {"decreasing", dec}};
    r.evaluate();
    r.pass = r.pass && dec;
    r.runtime_s = clock.seconds();
    push(r);
  }
  {  // sphere-reduced g_eps shrinking
    Stopwatch clock;
    const std::vector<double> eps = {0.3, 0.1, 0.03};
    nlohmann::json rows = nlohmann::json::array();
    bool dec = true;
    double prev = std::numeric_limits<double>::infinity();
    IntegralResult last;
    for (double e : eps) {
      last = g_eps_hn(1.0, s, p, e, n, std::max<std::int64_t>(mc.samples / 100, 640), mc.seed, mc.threads);
      rows.push_back({{"eps", e}, {"g_eps", last.value}, {"stderr", last.error_estimate}});
      if (std::abs(last.value) - 3.0 * last.error_estimate >= prev) dec = false;
      prev = std::abs(last.value);
    }
    VerificationReport r;
    r.identity_name = "g_eps_limit";
    r.params = {{"s", s}, {"p", p}, {"n", n}, {"x1", 1.0}, {"eps", eps}};
    r.lhs = std::abs(last.value);
    r.rhs = std::abs(rows.front()["g_eps"].get<double>());
    r.relation = Relation::le;
    r.seed = mc.seed;
    r.details = {{"rows", rows}, {"decreasing", dec}};
    r.evaluate();
    r.pass = r.pass && dec;
    r.runtime_s = clock.seconds();
    push(r);
  }
  {  // two estimators of the same PV integral at eps = 0.1
    Stopwatch clock;
    const double e = 0.1;
    const IntegralResult red = g_eps_hn(1.0, s, p, e, n, std::max<std::int64_t>(mc.samples / 100, 640), mc.seed,
                                        mc.threads);
    HPoint xi(n);
    xi.x(0) = 1.0;
    PvScheme ps;
    ps.samples = mc.samples;
    ps.seed = mc.seed + 1;
    ps.threads = mc.threads;
    const IntegralResult dir = pv_apply(power_of_distance(n, s), xi, HardyParams{n, s, p, 0.0}, e, ps);
    VerificationReport r;
    r.identity_name = "g_eps_vs_pv";
    r.params = {{"s", s}, {"p", p}, {"n", n}, {"x1", 1.0}, {"eps", e}};
    r.lhs = dir.value;
    r.rhs = red.value;
    r.tolerance = 0.0;
    r.stderr_combined = std::hypot(dir.error_estimate, red.error_estimate);
    r.seed = mc.seed;
    r.details = {{"pv_stderr", dir.error_estimate}, {"sphere_stderr", red.error_estimate}};
    r.evaluate();
    r.runtime_s = clock.seconds();
    push(r);
  }
  return out;
}

}  // namespace hardy::verify
