#include "hardy/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "hardy/errors.hpp"

namespace hardy::quad {

double IntegralResult::relative_error() const {
  if (value == 0.0) return error_estimate == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return error_estimate / std::abs(value);
}

IntegralResult operator+(const IntegralResult& a, const IntegralResult& b) {
  return {a.value + b.value, a.error_estimate + b.error_estimate, a.evaluations + b.evaluations,
          a.converged && b.converged};
}

IntegralResult operator*(double c, const IntegralResult& r) {
  return {c * r.value, std::abs(c) * r.error_estimate, r.evaluations, r.converged};
}

const IntegralResult& require_converged(const IntegralResult& r, const char* what) {
  if (!r.converged || !std::isfinite(r.value)) {
    throw NumericalError(std::string("quadrature did not converge: ") + what);
  }
  return r;
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIntervals = 2000;

// Gauss-Kronrod 7/15 nodes and weights (QUADPACK qk15).
constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const Integrand& f, double a, double b, double& resabs_out) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * wgk[7];
  double resg = fc * wg[3];
  double resabs = std::abs(resk);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[j];
    const double v1 = f(c - dx);
    const double v2 = f(c + dx);
    f1[j] = v1;
    f2[j] = v2;
    resk += wgk[j] * (v1 + v2);
    resabs += wgk[j] * (std::abs(v1) + std::abs(v2));
    if (j % 2 == 1) resg += wg[j / 2] * (v1 + v2);
  }
  const double mean = resk * 0.5;
  double resasc = wgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) resasc += wgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  resk *= h;
  resg *= h;
  resabs *= std::abs(h);
  resasc *= std::abs(h);
  double err = std::abs(resk - resg);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
  resabs_out = resabs;
  return {a, b, resk, err};
}

IntegralResult adaptive_gk(const Integrand& f, double a, double b, double rel_tol) {
  std::priority_queue<Segment> heap;
  double resabs = 0.0;
  Segment first = gk15(f, a, b, resabs);
  std::int64_t evals = 15;
  double total = first.value;
  double err = first.error;
  const double abs_total = resabs;
  heap.push(first);
  const double min_width = 16.0 * kEps * std::max(std::abs(a), std::abs(b));
  auto target = [&] {
    return std::max({rel_tol * std::abs(total), kAbsFloor, 50.0 * kEps * abs_total});
  };
  while (err > target() && static_cast<int>(heap.size()) < kMaxIntervals) {
    Segment worst = heap.top();
    if (worst.b - worst.a <= min_width) break;
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    double ra = 0.0;
    Segment l = gk15(f, worst.a, mid, ra);
    Segment r = gk15(f, mid, worst.b, ra);
    evals += 30;
    total += l.value + r.value - worst.value;
    err += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
  }
  // Re-sum to wash out drift from the running updates.
  total = 0.0;
  err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  IntegralResult out{total, err, evals, true};
  if (err > target()) {
    out.converged = false;
    out.error_estimate = std::numeric_limits<double>::infinity();
  }
  if (!std::isfinite(total)) {
    out.converged = false;
    out.error_estimate = std::numeric_limits<double>::infinity();
  }
  return out;
}

// Double-exponential rule on (a, b), refined by halving the step until two
// consecutive levels agree.
IntegralResult tanh_sinh(const Integrand& f, double a, double b, double rel_tol) {
  const double half = 0.5 * (b - a);
  const double pi2 = 0.5 * M_PI;
  constexpr double t_max = 6.0;
  std::int64_t evals = 0;

  auto node_sum = [&](double t) {
    // Abscissa offsets from each endpoint computed without cancellation.
    const double u = pi2 * std::sinh(t);
    const double cu = std::cosh(u);
    const double w = pi2 * std::cosh(t) / (cu * cu);
    if (!(w > 0.0) || !std::isfinite(w)) return 0.0;
    const double dist = (b - a) / (1.0 + std::exp(2.0 * u));  // distance of +t node from b
    double acc = 0.0;
    const double xr = b - dist;
    const double xl = a + dist;
    // Far-out nodes can underflow the integrand to 0/0; their weight is
    // negligible, so they are dropped.
    auto take = [&](double x) {
      ++evals;
      const double v = f(x);
      return std::isfinite(v) ? v : 0.0;
    };
    if (xr < b && xr > a) acc += take(xr);
    if (t != 0.0 && xl > a && xl < b) acc += take(xl);
    return w * acc;
  };

  double h = 1.0;
  double sum = node_sum(0.0);
  for (int k = 1; k * h <= t_max; ++k) sum += node_sum(k * h);
  double prev = half * h * sum;
  double estimate = prev;
  double err = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= 12; ++level) {
    h *= 0.5;
    double add = 0.0;
    for (int k = 1; k * h <= t_max; k += 2) add += node_sum(k * h);
    sum += add;
    estimate = half * h * sum;
    err = std::abs(estimate - prev);
    if (level >= 3 && err <= std::max(rel_tol * std::abs(estimate), kAbsFloor)) {
      return {estimate, err, evals, true};
    }
    prev = estimate;
  }
  return {estimate, std::numeric_limits<double>::infinity(), evals, false};
}

bool needs_substitution(const std::optional<double>& e) {
  if (!e) return false;
  const double v = *e;
  if (!(v > -1.0)) {
    throw ParameterError("integrable_exponent", "singularity exponent must exceed -1");
  }
  return !(v >= 0.0 && v == std::floor(v));
}

int power_for(double e) {
  const int k = static_cast<int>(std::ceil(2.0 / (1.0 + e) - 1e-12));
  return std::clamp(k, 1, 20);
}

IntegralResult dispatch(const Integrand& f, double a, double b, double rel_tol, Rule rule) {
  return rule == Rule::tanh_sinh ? tanh_sinh(f, a, b, rel_tol) : adaptive_gk(f, a, b, rel_tol);
}

}  // namespace

IntegralResult integrate_1d(const Integrand& f, double a, double b, const SingularitySpec& spec,
                            double rel_tol, Rule rule) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ParameterError("a_lt_b", "integrate_1d requires finite a < b");
  }
  const bool lo = needs_substitution(spec.lower);
  const bool hi = needs_substitution(spec.upper);
  if (!lo && !hi) return dispatch(f, a, b, rel_tol, rule);

  if (lo && hi) {
    const double m = 0.5 * (a + b);
    return integrate_1d(f, a, m, SingularitySpec::at_lower(*spec.lower), rel_tol, rule) +
           integrate_1d(f, m, b, SingularitySpec::at_upper(*spec.upper), rel_tol, rule);
  }
  const double e = lo ? *spec.lower : *spec.upper;
  const int k = power_for(e);
  if (k == 1) return dispatch(f, a, b, rel_tol, rule);
  const double len = b - a;
  // Below dmin the abscissae are quantized by the endpoint's ulp; that sliver
  // is taken in closed form from f ~ C |x - end|^e.
  const double end = lo ? a : b;
  const double dmin = 64.0 * (std::nextafter(std::abs(end), INFINITY) - std::abs(end));
  double vmin = 0.0;
  IntegralResult tail{0.0, 0.0, 0, true};
  if (dmin > 0.0 && dmin < 1e-6 * len && std::abs(end) > 0.0) {
    const double x = lo ? a + dmin : b - dmin;
    const double d = lo ? x - a : b - x;
    vmin = std::pow(d / len, 1.0 / k);
    tail.value = f(x) * d / (1.0 + e);
    tail.error_estimate = std::abs(tail.value) * 64.0 * std::numeric_limits<double>::epsilon();
    tail.evaluations = 1;
  }
  Integrand g;
  if (lo) {
    g = [&f, a, len, k, e](double v) {
      const double vk1 = std::pow(v, k - 1);
      if (vk1 == 0.0) return 0.0;
      const double d = len * vk1 * v;
      const double x = a + d;
      const double da = x - a;
      if (da <= 0.0) return 0.0;
      double fx = f(x);
      if (da != d) fx *= std::pow(d / da, e);  // undo the rounding of x
      return fx * k * len * vk1;
    };
  } else {
    const double bb = b;
    g = [&f, bb, len, k, e](double v) {
      const double vk1 = std::pow(v, k - 1);
      if (vk1 == 0.0) return 0.0;
      const double d = len * vk1 * v;
      const double x = bb - d;
      const double da = bb - x;
      if (da <= 0.0) return 0.0;
      double fx = f(x);
      if (da != d) fx *= std::pow(d / da, e);
      return fx * k * len * vk1;
    };
  }
  return dispatch(g, vmin, 1.0, rel_tol, rule) + tail;
}

IntegralResult integrate_semi_infinite(const Integrand& f, double a, double rel_tol,
                                       std::optional<double> decay_exponent, Rule rule) {
  if (!std::isfinite(a)) throw ParameterError("finite_lower", "semi-infinite lower limit must be finite");
  double k = 1.0;
  if (decay_exponent) {
    if (!(*decay_exponent > 1.0)) {
      throw ParameterError("decay_gt_1", "decay exponent must exceed 1 for convergence");
    }
    k = std::clamp(2.0 / (*decay_exponent - 1.0), 0.25, 20.0);
  }
  const double h = std::max(std::abs(a), 1.0);
  Integrand g = [&f, a, k, h](double v) {
    if (v <= 0.0) return 0.0;
    const double vk = std::pow(v, -k);
    const double x = a + h * (vk - 1.0);
    if (!std::isfinite(x)) return 0.0;
    const double val = f(x) * h * k * vk / v;
    return std::isfinite(val) ? val : 0.0;
  };
  // Behaviour at v = 0 is v^{k(d-1)-1}; declare it when it is not smooth.
  SingularitySpec spec;
  if (decay_exponent) {
    const double e = k * (*decay_exponent - 1.0) - 1.0;
    if (e > -1.0 && std::abs(e - std::round(e)) > 1e-12) spec.lower = e;
  }
  return integrate_1d(g, 0.0, 1.0, spec, rel_tol, rule);
}

}  // namespace hardy::quad
