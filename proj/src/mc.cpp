#include "hardy/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "hardy/errors.hpp"

namespace hardy::mc {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x9e3779b9u};
  engine_.seed(seq);
}

double RngStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

void Accumulator::add(double x) {
  ++n_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
}

void Accumulator::merge(const Accumulator& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double n = static_cast<double>(n_ + o.n_);
  const double d = o.mean_ - mean_;
  mean_ += d * static_cast<double>(o.n_) / n;
  m2_ += o.m2_ + d * d * static_cast<double>(n_) * static_cast<double>(o.n_) / n;
  n_ += o.n_;
}

double Accumulator::variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

double Accumulator::stderr_mean() const {
  return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

quad::IntegralResult run_chunks(std::int64_t samples, std::uint64_t seed, int threads,
                                const ChunkFn& fn, Combine combine) {
  if (samples < kChunks) throw ParameterError("samples_min", "need at least 64 Monte-Carlo samples");
  std::vector<Accumulator> parts(kChunks);
  auto count_for = [samples](int c) {
    return samples / kChunks + (c < samples % kChunks ? 1 : 0);
  };
  const int nthreads = std::clamp(resolve_threads(threads), 1, kChunks);
  if (nthreads == 1) {
    for (int c = 0; c < kChunks; ++c) {
      RngStream rng(seed, static_cast<std::uint64_t>(c));
      parts[c] = fn(c, count_for(c), rng);
    }
  } else {
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&] {
        for (int c = next++; c < kChunks && !failed; c = next++) {
          try {
            RngStream rng(seed, static_cast<std::uint64_t>(c));
            parts[c] = fn(c, count_for(c), rng);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  quad::IntegralResult out;
  out.evaluations = samples;
  if (combine == Combine::pooled) {
    Accumulator all;
    for (const auto& p : parts) all.merge(p);
    out.value = all.mean();
    out.error_estimate = all.stderr_mean();
  } else {
    double mean = 0.0, var = 0.0;
    for (const auto& p : parts) {
      mean += p.mean();
      if (p.count() > 1) var += p.variance() / static_cast<double>(p.count());
    }
    out.value = mean / kChunks;
    out.error_estimate = std::sqrt(var) / kChunks;
  }
  return out;
}

quad::IntegralResult mc_integrate(const std::function<double(std::span<const double>)>& f,
                                  const Sampler& sampler, std::int64_t samples,
                                  std::uint64_t seed, int threads) {
  if (sampler.dim < 1 || !sampler.draw || !sampler.density) {
    throw ParameterError("sampler", "sampler needs dim, draw and density");
  }
  return run_chunks(samples, seed, threads, [&](int, std::int64_t count, RngStream& rng) {
    Accumulator acc;
    std::vector<double> x(sampler.dim);
    for (std::int64_t i = 0; i < count; ++i) {
      sampler.draw(rng, x);
      const double fx = f(x);
      const double q = sampler.density(x);
      if (!(q > 0.0)) {
        if (fx != 0.0) throw NumericalError("sampler density is zero where the integrand is not");
        acc.add(0.0);
        continue;
      }
      acc.add(fx / q);
    }
    return acc;
  });
}

}  // namespace hardy::mc
