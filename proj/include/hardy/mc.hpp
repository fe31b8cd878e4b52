#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "hardy/quad.hpp"

namespace hardy::mc {

/// Reproducible random stream identified by (seed, stream id).
///
/// Uniform variates are built from the raw 64-bit engine output so the
/// sequence is identical across standard library implementations.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Running mean and variance (Welford), mergeable in a fixed order.
class Accumulator {
 public:
  void add(double x);
  void merge(const Accumulator& other);

  std::int64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;
  double stderr_mean() const;

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

inline constexpr int kChunks = 64;

/// Work done by one chunk: draw `count` samples from `rng` and accumulate.
using ChunkFn = std::function<Accumulator(int chunk, std::int64_t count, RngStream& rng)>;

enum class Combine {
  /// All chunks sample the same law; pool them.
  pooled,
  /// Chunk i is the i-th of kChunks equal-probability strata.
  stratified,
};

/// Runs kChunks chunks with per-chunk streams (seed, chunk) and combines them
/// in chunk order, so the result does not depend on `threads`.
quad::IntegralResult run_chunks(std::int64_t samples, std::uint64_t seed, int threads,
                                const ChunkFn& fn, Combine combine = Combine::pooled);

/// Sampling law on R^dim with a known density.
struct Sampler {
  int dim = 1;
  std::function<void(RngStream&, std::span<double>)> draw;
  std::function<double(std::span<const double>)> density;
};

/// Importance-sampling estimate of the integral of f with standard error.
/// Throws NumericalError when a sample has zero density but f != 0.
quad::IntegralResult mc_integrate(const std::function<double(std::span<const double>)>& f,
                                  const Sampler& sampler, std::int64_t samples,
                                  std::uint64_t seed, int threads = 1);

/// Resolves a thread request; 0 means all hardware threads.
int resolve_threads(int requested);

}  // namespace hardy::mc
