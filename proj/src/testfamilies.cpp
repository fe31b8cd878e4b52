#include "hardy/testfamilies.hpp"

#include <algorithm>
#include <cmath>

#include "hardy/constants.hpp"
#include "hardy/errors.hpp"
#include "hardy/mc.hpp"

namespace hardy::families {

using quad::IntegralResult;

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double phi = 1.0 / u - 1.0 / (1.0 - u);
  if (phi > 700.0) return 0.0;
  return 1.0 / (1.0 + std::exp(phi));
}

double smooth_step_derivative(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double phi = 1.0 / u - 1.0 / (1.0 - u);
  if (std::abs(phi) > 700.0) return 0.0;
  const double e = std::exp(phi);
  const double dphi = -1.0 / (u * u) - 1.0 / ((1.0 - u) * (1.0 - u));
  return -e * dphi / ((1.0 + e) * (1.0 + e));
}

double smooth_step_max_slope() {
  static const double c0 = [] {
    double m = 0.0;
    for (int i = 1; i < 20000; ++i) m = std::max(m, std::abs(smooth_step_derivative(i / 20000.0)));
    return m;
  }();
  return c0;
}

Profile1D make_bump(double a, double b, double smoothness_order) {
  if (!(a > 0.0)) throw ParameterError("a_positive", "bump support must start at a > 0");
  if (!(b > a)) throw ParameterError("a_lt_b", "bump needs a < b");
  if (!(smoothness_order > 0.0)) throw ParameterError("order_positive", "smoothness order must be > 0");
  Profile1D pr;
  pr.a = a;
  pr.b = b;
  pr.kind = ProfileKind::bump;
  const double c = 0.5 * (a + b), h = 0.5 * (b - a), m = smoothness_order;
  pr.evaluate = [c, h, m](double x) {
    const double u = (x - c) / h;
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(m * (1.0 - 1.0 / (1.0 - u * u)));
  };
  return pr;
}

Profile1D make_mollified_power(double exponent, double a, double b, double ramp, RampScale scale) {
  if (!(a > 0.0) || !(ramp > 0.0)) throw ParameterError("geometry", "need a > 0 and ramp > 0");
  const bool ok = scale == RampScale::linear ? (a + ramp < b - ramp) : (2.0 * ramp < std::log(b / a));
  if (!ok) throw ParameterError("geometry", "ramps overlap: need a+ramp < b-ramp");
  Profile1D pr;
  pr.a = a;
  pr.b = b;
  pr.kind = ProfileKind::mollified_power;
  pr.exponent = exponent;
  pr.ramp = ramp;
  pr.ramp_scale = scale;
  if (scale == RampScale::linear) {
    pr.evaluate = [=](double x) {
      if (x <= a || x >= b) return 0.0;
      return std::pow(x, exponent) * smooth_step((x - a) / ramp) * smooth_step((b - x) / ramp);
    };
  } else {
    pr.evaluate = [=](double x) {
      if (x <= a || x >= b) return 0.0;
      return std::pow(x, exponent) * smooth_step(std::log(x / a) / ramp) * smooth_step(std::log(b / x) / ramp);
    };
  }
  return pr;
}

namespace {

double template_x1(double u) {
  if (u <= -1.0 || u >= 2.0) return 0.0;
  if (u < 0.0) return smooth_step(u + 1.0);
  if (u <= 1.0) return 1.0;
  return smooth_step(2.0 - u);
}

double template_other(double u) {
  const double a = std::abs(u);
  if (a <= 0.5) return 1.0;
  return smooth_step(2.0 * (1.0 - a));
}

// integral of template_other^p over (-1, 1)
double template_other_norm_p(double p) {
  const IntegralResult r = quad::integrate_1d(
      [p](double v) { return std::pow(smooth_step(v), p); }, 0.0, 1.0, {}, 1e-12);
  quad::require_converged(r, "cutoff template norm");
  return 1.0 + r.value;
}

}  // namespace

CutoffPsi make_psi_cutoff(double R0, int n, double p) {
  if (!(R0 > 0.0)) throw ParameterError("R0_positive", "R0 must be > 0");
  if (n < 1) throw ParameterError("n_positive", "n must be >= 1");
  CutoffPsi psi;
  psi.R0 = R0;
  psi.n = n;
  psi.p = p;
  const double slice = std::pow(template_other_norm_p(p), 2 * n);
  psi.normalization = std::pow(R0, -(2.0 * n + 1.0) / p) / std::pow(slice, 1.0 / p);
  psi.template_x1 = template_x1;
  psi.template_other = template_other;
  const double c = psi.normalization;
  psi.evaluate = [c, R0, n](const HPoint& xi) {
    double v = template_x1(xi.x(0) / R0);
    for (int i = 1; i < n && v != 0.0; ++i) v *= template_other(xi.x(i) / R0);
    for (int i = 0; i < n && v != 0.0; ++i) v *= template_other(xi.y(i) / R0);
    if (v != 0.0) v *= template_other(xi.t() / (R0 * R0));
    return c * v;
  };
  return psi;
}

double psi_slice_norm_p(const CutoffPsi& psi) {
  // Each transverse coordinate integrates independently; x~ has 2n-1 of them
  // at scale R0 and t one at scale R0^2.
  const double R0 = psi.R0;
  const double p = psi.p;
  const IntegralResult one = quad::integrate_1d(
      [&](double u) { return std::pow(psi.template_other(u / R0), p); }, -R0, R0, {}, 1e-12);
  const IntegralResult tt = quad::integrate_1d(
      [&](double u) { return std::pow(psi.template_other(u / (R0 * R0)), p); }, -R0 * R0, R0 * R0, {}, 1e-12);
  return std::pow(psi.normalization, p) * std::pow(one.value, 2 * psi.n - 1) * tt.value;
}

BetaCutoffFn make_u_beta_R0(double beta, double R0, int n) {
  if (!(R0 > 0.0)) throw ParameterError("R0_positive", "R0 must be > 0");
  BetaCutoffFn u;
  u.beta = beta;
  u.R0 = R0;
  u.n = n;
  u.C0 = smooth_step_max_slope();
  auto ramp = [R0](double v) { return smooth_step(R0 + 1.0 - std::abs(v)); };
  auto ramp_t = [R0](double t) { return smooth_step((R0 * R0 + R0 + 1.0 - std::abs(t)) / (R0 + 1.0)); };
  u.cutoff = [=](const HPoint& xi) {
    double v = ramp_t(xi.t());
    for (int i = 0; i < n && v != 0.0; ++i) v *= ramp(xi.x(i)) * ramp(xi.y(i));
    return v;
  };
  auto cut = u.cutoff;
  u.evaluate = [cut, beta](const HPoint& xi) {
    if (!(xi.x(0) > 0.0)) return 0.0;
    const double c = cut(xi);
    return c == 0.0 ? 0.0 : std::pow(xi.x(0), beta) * c;
  };
  return u;
}

GradientCheck gradient_bound_check(const BetaCutoffFn& u, double r, double R, std::int64_t samples,
                                     std::uint64_t seed) {
  if (!(0.0 < r && r < R)) throw ParameterError("strip", "need 0 < r < R");
  const int n = u.n;
  const double beta = u.beta;
  const double W = u.R0 + 1.0;
  const double Tw = u.R0 * u.R0 + u.R0 + 1.0;
  const double b_pow = std::max(std::pow(r, beta), std::pow(R, beta));
  const double b_x1 = std::abs(beta) * std::max(std::pow(r, beta - 1.0), std::pow(R, beta - 1.0)) +
                      3.0 * u.C0 * b_pow;
  const double b_other = 3.0 * u.C0 * b_pow;
  mc::RngStream rng(seed, 0);
  GradientCheck out;
  out.samples = samples;
  HPoint xi(n);
  const double h = 1e-6 * std::min(r, 1.0);
  // Central difference of u(xi o Exp(h V)) for the field V = e_k.
  auto field = [&](int k) {
    HPoint e(n);
    e.flat()[k] = h;
    const double fp = u(compose(xi, e));
    e.flat()[k] = -h;
    const double fm = u(compose(xi, e));
    return (fp - fm) / (2.0 * h);
  };
  for (std::int64_t i = 0; i < samples; ++i) {
    xi.x(0) = rng.uniform(r + 2.0 * h, R - 2.0 * h);
    for (int k = 1; k < n; ++k) xi.x(k) = rng.uniform(-W, W);
    for (int k = 0; k < n; ++k) xi.y(k) = rng.uniform(-W, W);
    xi.t() = rng.uniform(-Tw, Tw);
    out.max_ratio_x1 = std::max(out.max_ratio_x1, std::abs(field(0)) / b_x1);
    for (int k = 1; k < 2 * n; ++k) out.max_ratio_other = std::max(out.max_ratio_other, std::abs(field(k)) / b_other);
  }
  return out;
}

std::vector<double> default_beta_grid(double s, double p, double alpha, int points, double span) {
  if (points < 2) throw ParameterError("grid_size", "beta grid needs at least 2 points");
  if (!(span > 0.0 && span < 1.0)) throw ParameterError("span", "span must lie in (0,1)");
  const double sprime = s + alpha / p;
  const auto [lo, hi] = constants::beta_interval(sprime, p);
  const double mid = 0.5 * (lo + hi), half = 0.5 * span * (hi - lo);
  std::vector<double> g;
  for (int i = 0; i < points; ++i) g.push_back(mid - half + 2.0 * half * i / (points - 1));
  return g;
}

BetaScan beta_scan(double s, double p, double alpha, const std::vector<double>& beta_grid) {
  if (beta_grid.empty()) throw ParameterError("grid_nonempty", "beta grid is empty");
  const double sprime = s + alpha / p;
  if (!(sprime < 1.0)) throw ParameterError("alpha<p(1-s)", "s' = s + alpha/p must be < 1");
  BetaScan out;
  out.optimum_closed_form = (sprime * p - 1.0) / p;
  out.max_lambda = -std::numeric_limits<double>::infinity();
  for (double b : beta_grid) {
    const double lam = constants::lambda_beta(b, sprime, p).value;
    out.table.push_back({b, lam});
    if (lam > out.max_lambda) {
      out.max_lambda = lam;
      out.argmax_beta = b;
    }
  }
  if (beta_grid.size() > 1) {
    double step = 0.0;
    for (std::size_t i = 1; i < beta_grid.size(); ++i) step = std::max(step, std::abs(beta_grid[i] - beta_grid[i - 1]));
    out.grid_step = step;
  }
  return out;
}

TestFunction product_bump(int n, double a, double b, double other_half_width, double t_half_width,
                          double order, const std::string& name) {
  const Profile1D e = make_bump(a, b, order);
  TestFunction f;
  f.n = n;
  f.name = name;
  f.box = {a, b, other_half_width, t_half_width, false};
  const double w = other_half_width, tw = t_half_width, m = order;
  auto centred = [m](double u) {
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(m * (1.0 - 1.0 / (1.0 - u * u)));
  };
  auto eta = e.evaluate;
  f.evaluate = [=](const HPoint& xi) {
    double v = eta(xi.x(0));
    for (int i = 1; i < n && v != 0.0; ++i) v *= centred(xi.x(i) / w);
    for (int i = 0; i < n && v != 0.0; ++i) v *= centred(xi.y(i) / w);
    if (v != 0.0) v *= centred(xi.t() / tw);
    return v;
  };
  return f;
}

std::vector<TestFunction> bump_corpus(int n, int count, std::uint64_t seed) {
  mc::RngStream rng(seed, 0x6b75);
  std::vector<TestFunction> out;
  for (int i = 0; i < count; ++i) {
    const double a = rng.uniform(0.2, 1.5);
    const double b = a + rng.uniform(0.4, 1.5);
    const double w = rng.uniform(0.5, 2.0);
    const double tw = rng.uniform(0.5, 3.0);
    const double order = rng.uniform(0.5, 2.0);
    out.push_back(product_bump(n, a, b, w, tw, order, "bump" + std::to_string(i)));
  }
  return out;
}

Profile1D near_optimizer_profile(const HardyParams& params, const NearOptimizerSpec& spec) {
  const double gamma = (params.sp() + params.alpha - 1.0) / params.p;
  const double ramp = spec.ramp_fraction * std::log(spec.b / spec.a);
  return make_mollified_power(gamma, spec.a, spec.b, ramp, RampScale::logarithmic);
}

TestFunction near_optimizer(const HardyParams& params, double R0, const NearOptimizerSpec& spec) {
  params.validate();
  if (!(spec.b <= R0)) throw ParameterError("b<=R0", "profile support must end before R0");
  const Profile1D eta = near_optimizer_profile(params, spec);
  const CutoffPsi psi = make_psi_cutoff(R0, params.n, params.p);
  TestFunction f;
  f.n = params.n;
  f.name = "near_optimizer";
  f.box = {spec.a, spec.b, R0, R0 * R0, false};
  auto e = eta.evaluate;
  auto ps = psi.evaluate;
  f.evaluate = [e, ps](const HPoint& xi) {
    const double v = e(xi.x(0));
    return v == 0.0 ? 0.0 : v * ps(xi);
  };
  Factorization fac;
  fac.eta = e;
  fac.eta_lo = spec.a;
  fac.eta_hi = spec.b;
  fac.psi_norm_p = psi_slice_norm_p(psi);
  f.factorization = fac;
  return f;
}

IntegralResult profile_hardy_1d(const Profile1D& eta, double q, double p) {
  auto g = [&](double w) {
    const double x = std::exp(w);
    const double e = eta(x);
    return e == 0.0 ? 0.0 : std::pow(std::abs(e), p) * std::pow(x, 1.0 - q);
  };
  IntegralResult r = quad::integrate_1d(g, std::log(eta.a), std::log(eta.b), {}, 1e-10);
  return quad::require_converged(r, "profile Hardy integral");
}

IntegralResult profile_seminorm_1d(const Profile1D& eta, double q, double p) {
  if (!(q < p)) throw ParameterError("q<p", "1-D kernel not integrable at the diagonal unless q < p");
  const double a = eta.a, b = eta.b;
  constexpr double tol = 1e-8;
  std::int64_t evals = 0;
  bool ok = true;
  // Pairs inside (a, b): 2 * int_x int_{y<x}, with y = x e^{-v}.
  auto inner = [&](double w) {
    const double x = std::exp(w);
    const double ex = eta(x);
    auto g = [&](double v) {
      const double d = ex - eta(x * std::exp(-v));
      if (d == 0.0) return 0.0;
      return std::pow(std::abs(d), p) * std::pow(-std::expm1(-v), -1.0 - q) * std::exp(-v);
    };
    const double vmax = std::log(x / a);
    if (!(vmax > 0.0)) return 0.0;
    IntegralResult r = quad::integrate_1d(g, 0.0, vmax, quad::SingularitySpec::at_lower(p - 1.0 - q), tol);
    evals += r.evaluations;
    ok = ok && r.converged;
    return std::pow(x, 1.0 - q) * r.value;
  };
  IntegralResult in = quad::integrate_1d(inner, std::log(a), std::log(b), {}, tol);
  // One point inside, the other outside (a, b), in closed form along y.
  auto outside = [&](double w) {
    const double x = std::exp(w);
    const double e = eta(x);
    if (e == 0.0) return 0.0;
    return std::pow(std::abs(e), p) * (std::pow(x - a, -q) + std::pow(b - x, -q)) / q * x;
  };
  IntegralResult out = quad::integrate_1d(outside, std::log(a), std::log(b), {}, tol);
  IntegralResult total = 2.0 * in + 2.0 * out;
  total.evaluations += evals;
  total.converged = total.converged && ok;
  return quad::require_converged(total, "1-D profile seminorm");
}

}  // namespace hardy::families
