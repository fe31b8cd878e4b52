#include "hardy/hgroup.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hardy/errors.hpp"

namespace hardy {

HPoint::HPoint(int n) : n_(n), c_(static_cast<std::size_t>(2 * n + 1), 0.0) {
  if (n < 1) throw ParameterError("n_positive", "dimension n must be >= 1");
}

HPoint::HPoint(std::vector<double> x, std::vector<double> y, double t) : n_(static_cast<int>(x.size())) {
  if (x.size() != y.size() || x.empty()) {
    throw ParameterError("dims_match", "x and y must be nonempty and of equal length");
  }
  c_ = std::move(x);
  c_.insert(c_.end(), y.begin(), y.end());
  c_.push_back(t);
  for (double v : c_) {
    if (!std::isfinite(v)) throw ParameterError("finite_coords", "coordinates must be finite");
  }
}

HPoint HPoint::from_flat(int n, std::span<const double> coords) {
  if (static_cast<int>(coords.size()) != 2 * n + 1) {
    throw ParameterError("dims_match", "flat coordinate length must be 2n+1");
  }
  HPoint p(n);
  std::copy(coords.begin(), coords.end(), p.c_.begin());
  return p;
}

double HPoint::z_norm2() const {
  double s = 0.0;
  for (int i = 0; i < 2 * n_; ++i) s += c_[i] * c_[i];
  return s;
}

GroupDims::GroupDims(int n_) : n(n_), Q(2 * n_ + 2) {
  if (n_ < 1) throw ParameterError("n_positive", "dimension n must be >= 1");
}

void HardyParams::validate() const {
  if (n < 1) throw ParameterError("n_positive", "n must be >= 1");
  if (!(s > 0.0 && s < 1.0)) throw ParameterError("s_in_0_1", "s must lie in (0,1)");
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("p_gt_1", "p must lie in (1,inf)");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ParameterError("alpha_nonneg", "alpha must be >= 0");
}

bool HardyParams::space_nontrivial() const { return alpha < Q() - 2; }
bool HardyParams::diagonal_integrable() const { return alpha < p * (1.0 - s); }
bool HardyParams::sharp_valid() const { return sharp_violation().empty(); }

std::string HardyParams::sharp_violation() const {
  std::ostringstream os;
  if (sp() + alpha <= 1.0) {
    os << "sp+alpha>1 violated: sp+alpha = " << sp() + alpha << " <= 1";
  } else if (!space_nontrivial()) {
    os << "alpha<Q-2 violated: alpha = " << alpha << " >= " << Q() - 2;
  } else if (!diagonal_integrable()) {
    os << "alpha<p(1-s) violated: alpha = " << alpha << " >= " << p * (1.0 - s);
  }
  return os.str();
}

void require_same_dim(const HPoint& a, const HPoint& b) {
  if (a.n() != b.n() || a.n() < 1) throw ParameterError("dims_match", "points have different dimensions");
}

void compose_into(const HPoint& a, const HPoint& b, HPoint& out) {
  const int n = a.n();
  double cross = 0.0;
  for (int i = 0; i < n; ++i) cross += a.y(i) * b.x(i) - a.x(i) * b.y(i);
  const double t = a.t() + b.t() + 2.0 * cross;
  for (int i = 0; i < n; ++i) {
    out.x(i) = a.x(i) + b.x(i);
    out.y(i) = a.y(i) + b.y(i);
  }
  out.t() = t;
}

HPoint compose(const HPoint& a, const HPoint& b) {
  require_same_dim(a, b);
  HPoint out(a.n());
  compose_into(a, b, out);
  return out;
}

HPoint inverse(const HPoint& a) {
  HPoint out = a;
  for (double& v : out.flat()) v = -v;
  return out;
}

HPoint dilate(double r, const HPoint& a) {
  if (!(r > 0.0)) throw ParameterError("r_positive", "dilation factor must be positive");
  HPoint out = a;
  for (int i = 0; i < 2 * a.n(); ++i) out.flat()[i] *= r;
  out.t() *= r * r;
  return out;
}

double gauge(const HPoint& a) {
  const double z2 = a.z_norm2();
  return std::sqrt(std::sqrt(z2 * z2 + a.t() * a.t()));
}

double left_dist(const HPoint& a, const HPoint& b) {
  require_same_dim(a, b);
  HPoint d(a.n());
  compose_into(inverse(a), b, d);
  return gauge(d);
}

double half_space_dist(const HPoint& a) { return std::max(a.x(0), 0.0); }

HPoint ball_sample(mc::RngStream& rng, int n) {
  HPoint p(n);
  constexpr int kMaxTries = 100000;
  for (int k = 0; k < kMaxTries; ++k) {
    for (double& v : p.flat()) v = 2.0 * rng.uniform() - 1.0;
    const double d = gauge(p);
    if (d <= 1.0 && d > 0.0) return p;
  }
  throw NumericalError("Koranyi ball rejection sampling exceeded its retry budget");
}

HPoint sphere_sample(mc::RngStream& rng, int n) {
  HPoint p = ball_sample(rng, n);
  return dilate(1.0 / gauge(p), p);
}

double unit_ball_volume(int n) {
  if (n < 1) throw ParameterError("n_positive", "n must be >= 1");
  const double sphere = 2.0 * std::pow(M_PI, n) / std::tgamma(static_cast<double>(n));
  const double beta = std::exp(std::lgamma(0.5 * n) + std::lgamma(1.5) - std::lgamma(0.5 * n + 1.5));
  return sphere * 0.5 * beta;
}

double sphere_measure(int n) { return (2.0 * n + 2.0) * unit_ball_volume(n); }

std::vector<quad::IntegralResult> cap_measure_psi_grid(std::span<const double> sigmas, int n,
                                                       std::int64_t samples, std::uint64_t seed,
                                                       int threads) {
  for (double s : sigmas) {
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("sigma_in_0_1", "sigma must lie in (0,1)");
  }
  const double box = std::pow(2.0, 2 * n + 1);
  const double Q = 2.0 * n + 2.0;
  std::vector<quad::IntegralResult> out;
  out.reserve(sigmas.size());
  // Same seed for every sigma: the estimates share samples and are exactly
  // monotone along the grid.
  for (double sigma : sigmas) {
    out.push_back(mc::run_chunks(samples, seed, threads, [&](int, std::int64_t count, mc::RngStream& rng) {
      mc::Accumulator acc;
      HPoint p(n);
      for (std::int64_t i = 0; i < count; ++i) {
        for (double& v : p.flat()) v = 2.0 * rng.uniform() - 1.0;
        const double d = gauge(p);
        acc.add(d <= 1.0 && -p.x(0) > sigma * d ? Q * box : 0.0);
      }
      return acc;
    }));
  }
  return out;
}

quad::IntegralResult cap_measure_psi(double sigma, int n, std::int64_t samples, std::uint64_t seed,
                                     int threads) {
  const double s[1] = {sigma};
  return cap_measure_psi_grid(s, n, samples, seed, threads).front();
}

std::vector<double> default_sigma_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 99; ++i) g.push_back(0.01 * i);
  return g;
}

CapConstant lemma33_constant(int n, double p, std::span<const double> sigma_grid,
                               std::int64_t samples, std::uint64_t seed, int threads) {
  if (sigma_grid.empty()) throw ParameterError("grid_nonempty", "sigma grid is empty");
  const auto psi = cap_measure_psi_grid(sigma_grid, n, samples, seed, threads);
  CapConstant best;
  best.C = -1.0;
  for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
    const double w = std::pow(sigma_grid[i], p) / p;
    if (w * psi[i].value > best.C) {
      best.C = w * psi[i].value;
      best.argmax_sigma = sigma_grid[i];
      best.stderr_C = w * psi[i].error_estimate;
    }
  }
  return best;
}

HorizontalDecomposition horizontal_decompose(const HPoint& h) {
  const int n = h.n();
  HorizontalDecomposition out;
  double xy = 0.0;
  for (int i = 0; i < n; ++i) {
    HPoint m(n);
    m.x(i) = h.x(i);
    out.moves.push_back(m);
  }
  for (int i = 0; i < n; ++i) {
    HPoint m(n);
    m.y(i) = h.y(i);
    out.moves.push_back(m);
    xy += h.x(i) * h.y(i);
  }
  // The coordinate moves land on t = -2<x,y>; the rest is central.
  const double tau = h.t() + 2.0 * xy;
  const double a = 0.5 * std::sqrt(std::abs(tau));
  HPoint X(n), Y(n), mX(n), mY(n);
  X.x(0) = a;
  Y.y(0) = a;
  mX.x(0) = -a;
  mY.y(0) = -a;
  if (tau < 0.0) {
    out.moves.insert(out.moves.end(), {X, Y, mX, mY});
  } else {
    out.moves.insert(out.moves.end(), {Y, X, mY, mX});
  }
  out.c0 = 1.0;
  return out;
}

}  // namespace hardy
