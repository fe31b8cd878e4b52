#include "hardy/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hardy/constants.hpp"
#include "hardy/errors.hpp"
#include "hardy/mc.hpp"

namespace hardy {

using quad::IntegralResult;

bool SupportBox::contains(const HPoint& p) const {
  if (unbounded) return true;
  const int n = p.n();
  if (p.x(0) < x1_lo || p.x(0) > x1_hi) return false;
  for (int i = 1; i < n; ++i) {
    if (std::abs(p.x(i)) > other_half_width) return false;
  }
  for (int i = 0; i < n; ++i) {
    if (std::abs(p.y(i)) > other_half_width) return false;
  }
  return std::abs(p.t()) <= t_half_width;
}

double SupportBox::min_half_width() const {
  return std::min({0.5 * (x1_hi - x1_lo), other_half_width, std::sqrt(t_half_width)});
}

TestFunction scaled(const TestFunction& f, double c) {
  TestFunction g = f;
  g.name = f.name + "*c";
  auto ev = f.evaluate;
  g.evaluate = [ev, c](const HPoint& p) { return c * ev(p); };
  if (f.lipschitz_horizontal) g.lipschitz_horizontal = std::abs(c) * *f.lipschitz_horizontal;
  if (f.factorization) {
    auto eta = f.factorization->eta;
    g.factorization->eta = [eta, c](double x) { return c * eta(x); };
  }
  return g;
}

TestFunction dilated(const TestFunction& f, double lambda) {
  if (!(lambda > 0.0)) throw ParameterError("lambda_positive", "dilation factor must be positive");
  TestFunction g = f;
  g.name = f.name + "@dilated";
  auto ev = f.evaluate;
  g.evaluate = [ev, lambda](const HPoint& p) { return ev(dilate(lambda, p)); };
  g.box.x1_lo = f.box.x1_lo / lambda;
  g.box.x1_hi = f.box.x1_hi / lambda;
  g.box.other_half_width = f.box.other_half_width / lambda;
  g.box.t_half_width = f.box.t_half_width / (lambda * lambda);
  if (f.lipschitz_horizontal) g.lipschitz_horizontal = lambda * *f.lipschitz_horizontal;
  if (f.factorization) {
    auto eta = f.factorization->eta;
    g.factorization->eta = [eta, lambda](double x) { return eta(lambda * x); };
    g.factorization->eta_lo = f.factorization->eta_lo / lambda;
    g.factorization->eta_hi = f.factorization->eta_hi / lambda;
    g.factorization->psi_norm_p = f.factorization->psi_norm_p * std::pow(lambda, -(2.0 * f.n + 1.0));
  }
  return g;
}

namespace {

// Draws a point of the support box from stratum `chunk` of kChunks along x1
// (logarithmic spacing for half-space boxes) and returns 1/density.
class BoxSampler {
 public:
  BoxSampler(const SupportBox& box, int n) : box_(box), n_(n) {
    if (box.unbounded) throw ParameterError("bounded_support", "test function needs a compact support box");
    if (!(box.x1_hi > box.x1_lo) || !(box.other_half_width > 0.0) || !(box.t_half_width > 0.0)) {
      throw ParameterError("support_box", "support box must have positive extent");
    }
    log_ = box.half_space();
    lo_ = log_ ? std::log(box.x1_lo) : box.x1_lo;
    hi_ = log_ ? std::log(box.x1_hi) : box.x1_hi;
    rest_volume_ = std::pow(2.0 * box.other_half_width, 2 * n - 1) * 2.0 * box.t_half_width;
  }

  double draw(int chunk, mc::RngStream& rng, HPoint& p) const {
    const double w = (hi_ - lo_) / mc::kChunks;
    const double v = lo_ + w * (chunk + rng.uniform());
    const double x1 = log_ ? std::exp(v) : v;
    p.x(0) = x1;
    for (int i = 1; i < n_; ++i) p.x(i) = rng.uniform(-box_.other_half_width, box_.other_half_width);
    for (int i = 0; i < n_; ++i) p.y(i) = rng.uniform(-box_.other_half_width, box_.other_half_width);
    p.t() = rng.uniform(-box_.t_half_width, box_.t_half_width);
    // Per-stratum density; strata are combined with equal weights.
    return (hi_ - lo_) * (log_ ? x1 : 1.0) * rest_volume_;
  }

 private:
  SupportBox box_;
  int n_;
  bool log_ = false;
  double lo_ = 0.0, hi_ = 0.0, rest_volume_ = 0.0;
};

double z_norm(const HPoint& p) { return std::sqrt(p.z_norm2()); }

// omega on the Koranyi sphere; with alpha > 0 the null set z = 0 is rejected.
HPoint draw_direction(mc::RngStream& rng, int n, double alpha) {
  for (;;) {
    HPoint w = sphere_sample(rng, n);
    if (alpha == 0.0 || w.z_norm2() > 0.0) return w;
  }
}

// xi o delta_r omega into out
void step(const HPoint& xi, const HPoint& omega, double r, HPoint& scratch, HPoint& out) {
  const int n = xi.n();
  for (int i = 0; i < 2 * n; ++i) scratch.flat()[i] = r * omega.flat()[i];
  scratch.t() = r * r * omega.t();
  compose_into(xi, scratch, out);
}

}  // namespace

IntegralResult hardy_integral(const TestFunction& f, const HardyParams& params, std::int64_t samples,
                              std::uint64_t seed, int threads) {
  params.validate();
  if (!f.box.half_space()) {
    throw ParameterError("a1_positive", "Hardy integral needs support in x1 >= a1 > 0");
  }
  const BoxSampler sampler(f.box, f.n);
  const double q = params.sp() + params.alpha;
  const double p = params.p;
  return mc::run_chunks(samples, seed, threads, [&](int chunk, std::int64_t count, mc::RngStream& rng) {
    mc::Accumulator acc;
    HPoint xi(f.n);
    for (std::int64_t i = 0; i < count; ++i) {
      const double inv_density = sampler.draw(chunk, rng, xi);
      const double v = f(xi);
      acc.add(v == 0.0 ? 0.0 : std::pow(std::abs(v), p) * std::pow(xi.x(0), -q) * inv_density);
    }
    return acc;
  }, mc::Combine::stratified);
}

IntegralResult hardy_integral_factorized(const TestFunction& f, const HardyParams& params) {
  params.validate();
  if (!f.factorization) throw ParameterError("factorization", "test function declares no factorization");
  const Factorization& fac = *f.factorization;
  if (!(fac.eta_lo > 0.0)) throw ParameterError("a1_positive", "profile support must start at x1 > 0");
  const double q = params.sp() + params.alpha;
  const double p = params.p;
  auto g = [&](double w) {
    const double x = std::exp(w);
    const double e = fac.eta(x);
    return e == 0.0 ? 0.0 : std::pow(std::abs(e), p) * std::pow(x, 1.0 - q);
  };
  IntegralResult r = quad::integrate_1d(g, std::log(fac.eta_lo), std::log(fac.eta_hi), {}, 1e-10);
  quad::require_converged(r, "factorized Hardy integral");
  return fac.psi_norm_p * r;
}

IntegralResult seminorm_pow(const TestFunction& f, const HardyParams& params, const SeminormScheme& scheme) {
  params.validate();
  if (!params.space_nontrivial()) {
    throw ParameterError("alpha<Q-2", "seminorm space is trivial for alpha >= Q-2");
  }
  if (!params.diagonal_integrable()) {
    throw ParameterError("alpha<p(1-s)", "seminorm kernel is not integrable near the diagonal");
  }
  if (!(scheme.near_fraction > 0.0 && scheme.near_fraction < 1.0)) {
    throw ParameterError("near_fraction", "near_fraction must lie in (0,1)");
  }
  const int n = f.n;
  const BoxSampler sampler(f.box, n);
  const double p = params.p;
  const double alpha = params.alpha;
  const double q = params.sp() + alpha;
  const double kn = p - q;  // near radial law r^{kn-1} on (0, rho)
  const double kf = scheme.far_tail_exponent > 0.0 ? scheme.far_tail_exponent : q;
  const double m = scheme.near_fraction;
  const double S = sphere_measure(n);
  const double rho_fixed = scheme.near_radius;
  const double rho_box = 0.1 * f.box.min_half_width();
  const bool hs = f.box.half_space();

  IntegralResult res = mc::run_chunks(scheme.samples, scheme.seed, scheme.threads,
      [&](int chunk, std::int64_t count, mc::RngStream& rng) {
        mc::Accumulator acc;
        HPoint xi(n), xp(n), scratch(n);
        for (std::int64_t i = 0; i < count; ++i) {
          const double inv_outer = sampler.draw(chunk, rng, xi);
          HPoint omega = draw_direction(rng, n, alpha);
          if (scheme.mirror) omega = inverse(omega);
          const double rho = rho_fixed > 0.0 ? rho_fixed : (hs ? std::min(rho_box, 0.5 * xi.x(0)) : rho_box);
          double r, qr;
          if (rng.uniform() < m) {
            r = rho * std::pow(rng.uniform_pos(), 1.0 / kn);
            qr = m * kn * std::pow(r, kn - 1.0) / std::pow(rho, kn);
          } else {
            r = rho * std::pow(rng.uniform_pos(), -1.0 / kf);
            qr = (1.0 - m) * kf * std::pow(rho, kf) * std::pow(r, -1.0 - kf);
          }
          if (!(r > 0.0) || !std::isfinite(r)) {
            acc.add(0.0);
            continue;
          }
          step(xi, omega, r, scratch, xp);
          const double d = f(xi) - f(xp);
          if (d == 0.0) {
            acc.add(0.0);
            continue;
          }
          const double w = f.box.contains(xp) ? 1.0 : 2.0;
          double kern = std::pow(r, -1.0 - q);
          if (alpha > 0.0) kern *= std::pow(z_norm(omega), -alpha);
          acc.add(w * std::pow(std::abs(d), p) * kern * S / qr * inv_outer);
        }
        return acc;
      },
      mc::Combine::stratified);
  if (scheme.max_rel_stderr > 0.0 && res.error_estimate > scheme.max_rel_stderr * std::abs(res.value)) {
    res.converged = false;
  }
  return res;
}

IntegralResult seminorm(const TestFunction& f, const HardyParams& params, const SeminormScheme& scheme) {
  IntegralResult r = seminorm_pow(f, params, scheme);
  const double v = std::max(r.value, 0.0);
  IntegralResult out = r;
  out.value = std::pow(v, 1.0 / params.p);
  out.error_estimate = v > 0.0 ? out.value * r.error_estimate / (params.p * v) : 0.0;
  return out;
}

RayleighResult rayleigh(const TestFunction& f, const HardyParams& params, const SeminormScheme& scheme,
                        bool use_factorization) {
  RayleighResult out;
  out.numerator = seminorm_pow(f, params, scheme);
  if (use_factorization && f.factorization) {
    out.denominator = hardy_integral_factorized(f, params);
    out.denominator_by_quadrature = true;
  } else {
    out.denominator = hardy_integral(f, params, scheme.samples, scheme.seed ^ 0x5bd1e9955bd1e995ULL,
                                     scheme.threads);
  }
  const double D = out.denominator.value;
  if (!(D - 3.0 * out.denominator.error_estimate > 0.0)) {
    throw NumericalError("Hardy integral is consistent with zero at 3 sigma; quotient undefined");
  }
  const double N = out.numerator.value;
  out.quotient = N / D;
  const double rn = N != 0.0 ? out.numerator.error_estimate / N : 0.0;
  const double rd = out.denominator.error_estimate / D;
  out.stderr_q = std::abs(out.quotient) * std::sqrt(rn * rn + rd * rd);
  return out;
}

IntegralResult pv_apply(const TestFunction& f, const HPoint& xi, const HardyParams& params, double eps,
                        const PvScheme& scheme) {
  params.validate();
  if (!(eps > 0.0)) throw ParameterError("eps_positive", "eps must be > 0");
  if (xi.n() != f.n) throw ParameterError("dims_match", "point and function dimensions differ");
  const int n = f.n;
  const double p = params.p;
  const double alpha = params.alpha;
  const double q = params.sp() + alpha;
  const double kappa = scheme.kappa > 0.0 ? scheme.kappa : 0.5 * q;
  const double S = sphere_measure(n);
  const double f0 = f(xi);
  return mc::run_chunks(scheme.samples, scheme.seed, scheme.threads,
      [&](int, std::int64_t count, mc::RngStream& rng) {
        mc::Accumulator acc;
        HPoint a(n), b(n), scratch(n);
        for (std::int64_t i = 0; i < count; ++i) {
          const HPoint omega = draw_direction(rng, n, alpha);
          const double r = eps * std::pow(rng.uniform_pos(), -1.0 / kappa);
          if (!std::isfinite(r)) {
            acc.add(0.0);
            continue;
          }
          const double qr = kappa * std::pow(eps, kappa) * std::pow(r, -1.0 - kappa);
          step(xi, omega, r, scratch, a);
          step(xi, inverse(omega), r, scratch, b);
          const double j = 0.5 * (Jp(f0 - f(a), p) + Jp(f0 - f(b), p));
          if (j == 0.0) {
            acc.add(0.0);
            continue;
          }
          double kern = std::pow(r, -1.0 - q);
          if (alpha > 0.0) kern *= std::pow(z_norm(omega), -alpha);
          acc.add(j * kern * S / qr);
        }
        return acc;
      });
}

double g1_eps(double x, double s, double p, double eps) {
  if (!(x > 0.0)) throw ParameterError("x_positive", "x must be > 0");
  if (!(eps > 0.0) || !(eps < x)) throw ParameterError("eps<x", "g1_eps needs 0 < eps < x");
  const double sp = s * p;
  const double xs = std::pow(x, s);
  // x^s - (x -+ h)^s without cancellation
  auto down = [=](double h) { return -xs * std::expm1(s * std::log1p(-h / x)); };
  auto up = [=](double h) { return -xs * std::expm1(s * std::log1p(h / x)); };
  // Pair y = x - h and y = x + h on (eps, x): first-order terms cancel.
  auto paired = [=](double w) {
    const double h = std::exp(w);
    return (Jp(down(h), p) + Jp(up(h), p)) * std::pow(h, -sp);
  };
  IntegralResult near = quad::integrate_1d(paired, std::log(eps), std::log(x), {}, 1e-11);
  quad::require_converged(near, "g1_eps paired part");
  // y > 2x
  auto far = [=](double h) { return Jp(up(h), p) * std::pow(h, -1.0 - sp); };
  IntegralResult tail = quad::integrate_semi_infinite(far, x, 1e-11, 1.0 + s);
  quad::require_converged(tail, "g1_eps upper tail");
  // y < 0 in closed form
  const double below = Jp(xs, p) * std::pow(x, -sp) / sp;
  return near.value + tail.value + below;
}

IntegralResult g_eps_hn(double x1, double s, double p, double eps, int n, std::int64_t sphere_samples,
                        std::uint64_t seed, int threads) {
  if (!(x1 > 0.0) || !(eps > 0.0) || !(eps < x1)) throw ParameterError("eps<x1", "g_eps needs 0 < eps < x1");
  const double half_S = 0.5 * sphere_measure(n);
  const double sp = s * p;
  return mc::run_chunks(sphere_samples, seed, threads, [&](int, std::int64_t count, mc::RngStream& rng) {
    mc::Accumulator acc;
    for (std::int64_t i = 0; i < count; ++i) {
      const double w1 = std::abs(sphere_sample(rng, n).x(0));
      if (w1 < 1e-12) {
        acc.add(0.0);
        continue;
      }
      acc.add(half_S * std::pow(w1, sp) * g1_eps(x1, s, p, eps * w1));
    }
    return acc;
  });
}

IntegralResult hemisphere_weight(double sp, int n, std::int64_t samples, std::uint64_t seed) {
  const double half_S = 0.5 * sphere_measure(n);
  return mc::run_chunks(samples, seed, 1, [&](int, std::int64_t count, mc::RngStream& rng) {
    mc::Accumulator acc;
    for (std::int64_t i = 0; i < count; ++i) {
      acc.add(half_S * std::pow(std::abs(sphere_sample(rng, n).x(0)), sp));
    }
    return acc;
  });
}

VerificationReport lemma42_check(std::int64_t samples, std::uint64_t seed) {
  Stopwatch clock;
  mc::RngStream rng(seed, 0);
  double min_slack = std::numeric_limits<double>::infinity();
  std::int64_t violations = 0;
  double worst_a = 0.0, worst_b = 0.0, worst_s = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const double s = rng.uniform_pos() * (1.0 - 1e-12);
    const double a = std::pow(10.0, rng.uniform(-3.0, 3.0));
    // half the ratios near 1, half spread over 12 decades
    const double ratio = i % 2 == 0 ? rng.uniform_pos() : std::pow(10.0, -12.0 * rng.uniform());
    const double b = a * ratio;
    const double as = std::pow(a, s), bs = std::pow(b, s);
    const double lhs = std::abs(as - bs) / (as + bs);
    const double rhs = 0.5 * s * (a - b) / std::max(a, b);
    const double slack = lhs - rhs;
    if (slack < -1e-12) ++violations;
    if (slack < min_slack) {
      min_slack = slack;
      worst_a = a;
      worst_b = b;
      worst_s = s;
    }
  }
  VerificationReport rep;
  rep.identity_name = "lemma42";
  rep.params = {{"samples", samples}};
  rep.lhs = min_slack;
  rep.rhs = 0.0;
  rep.tolerance = 1e-12;
  rep.relation = Relation::ge;
  rep.seed = seed;
  rep.details = {{"violations", violations}, {"worst", {{"a", worst_a}, {"b", worst_b}, {"s", worst_s}}}};
  rep.evaluate();
  rep.pass = rep.pass && violations == 0;
  rep.runtime_s = clock.seconds();
  return rep;
}

TestFunction power_of_distance(int n, double beta) {
  TestFunction f;
  f.n = n;
  f.name = "x1_plus_pow";
  f.evaluate = [beta](const HPoint& p) { return p.x(0) > 0.0 ? std::pow(p.x(0), beta) : 0.0; };
  f.box.unbounded = true;
  f.box.x1_lo = 0.0;
  f.box.x1_hi = std::numeric_limits<double>::infinity();
  return f;
}

}  // namespace hardy
