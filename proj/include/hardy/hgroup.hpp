#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hardy/mc.hpp"
#include "hardy/quad.hpp"

namespace hardy {

/// A point (x, y, t) of the Heisenberg group H^n, stored flat as
/// (x_1..x_n, y_1..y_n, t).
class HPoint {
 public:
  HPoint() = default;
  explicit HPoint(int n);  // identity element
  HPoint(std::vector<double> x, std::vector<double> y, double t);
  static HPoint from_flat(int n, std::span<const double> coords);

  int n() const { return n_; }
  double x(int i) const { return c_[i]; }
  double y(int i) const { return c_[n_ + i]; }
  double t() const { return c_[2 * n_]; }
  double& x(int i) { return c_[i]; }
  double& y(int i) { return c_[n_ + i]; }
  double& t() { return c_[2 * n_]; }

  /// |z|^2 = |x|^2 + |y|^2
  double z_norm2() const;
  std::span<const double> flat() const { return c_; }
  std::span<double> flat() { return c_; }

 private:
  int n_ = 0;
  std::vector<double> c_;
};

struct GroupDims {
  int n;
  int Q;
  explicit GroupDims(int n_);
};

/// Parameter tuple (n, s, p, alpha) with the hypothesis predicates used by the
/// Hardy inequalities.
struct HardyParams {
  int n = 1;
  double s = 0.5;
  double p = 2.0;
  double alpha = 0.0;

  /// Throws ParameterError unless n >= 1, 0 < s < 1, 1 < p, alpha >= 0.
  void validate() const;
  int Q() const { return 2 * n + 2; }
  double sp() const { return s * p; }
  double s_prime() const { return s + alpha / p; }
  double p_conjugate() const { return p / (p - 1.0); }

  /// alpha < min(Q-2, p(1-s)) and sp + alpha > 1.
  bool sharp_valid() const;
  /// alpha < Q-2.
  bool space_nontrivial() const;
  /// alpha < p(1-s): kernel integrable near the diagonal.
  bool diagonal_integrable() const;
  /// Name and description of the first violated sharp-constant hypothesis,
  /// empty when sharp_valid().
  std::string sharp_violation() const;
};

void require_same_dim(const HPoint& a, const HPoint& b);

HPoint compose(const HPoint& a, const HPoint& b);
/// out = a o b without allocation; out must already have dimension n.
void compose_into(const HPoint& a, const HPoint& b, HPoint& out);
HPoint inverse(const HPoint& a);
HPoint dilate(double r, const HPoint& a);
double gauge(const HPoint& a);
double left_dist(const HPoint& a, const HPoint& b);
double half_space_dist(const HPoint& a);

/// Uniform draw from the unit Koranyi ball by box rejection.
HPoint ball_sample(mc::RngStream& rng, int n);
/// Draw distributed proportionally to the Koranyi surface measure.
HPoint sphere_sample(mc::RngStream& rng, int n);

/// Lebesgue volume of the unit Koranyi ball, |S^{2n-1}| B(n/2, 3/2) / 2.
double unit_ball_volume(int n);
/// Total surface measure Q |B(0,1)| in polar coordinates.
double sphere_measure(int n);

/// psi(sigma): measure of the sphere cap {-omega_x1 > sigma}.
quad::IntegralResult cap_measure_psi(double sigma, int n, std::int64_t samples,
                                     std::uint64_t seed, int threads = 1);

/// psi on a whole grid from one shared sample set.
std::vector<quad::IntegralResult> cap_measure_psi_grid(std::span<const double> sigmas, int n,
                                                       std::int64_t samples, std::uint64_t seed,
                                                       int threads = 1);

struct CapConstant {
  double C = 0.0;
  double argmax_sigma = 0.0;
  double stderr_C = 0.0;
};

/// sup over the grid of sigma^p psi(sigma) / p.
CapConstant lemma33_constant(int n, double p, std::span<const double> sigma_grid,
                               std::int64_t samples = 200000, std::uint64_t seed = 1,
                               int threads = 1);
/// Default grid sigma = 0.01, 0.02, ..., 0.99.
std::vector<double> default_sigma_grid();

struct HorizontalDecomposition {
  std::vector<HPoint> moves;
  /// Scheme bound: gauge(move) <= c0 * gauge(h) for every move.
  double c0 = 1.0;
};

/// Writes h as 2n coordinate moves followed by a 4-move commutator that
/// supplies the central residual, M = 2n + 4.
HorizontalDecomposition horizontal_decompose(const HPoint& h);

}  // namespace hardy
