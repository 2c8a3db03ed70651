#include "nmarank/random.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "nmarank/distributions.hpp"

namespace nmarank {

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double Rng::uniform() {
  // 53 random bits; both endpoints rejected.
  for (;;) {
    const double u = std::generate_canonical<double, 53>(engine_);
    if (u > 0.0 && u < 1.0) return u;
  }
}

double Rng::normal() { return normal_(engine_); }

double Rng::gamma(double shape) {
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(engine_);
}

double Rng::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  const double s = x + y;
  if (s <= 0.0) {
    // Both gamma draws underflowed (tiny shapes); fall back on the mean.
    return a / (a + b);
  }
  return x / s;
}

int Rng::binomial(int n, double prob) {
  std::binomial_distribution<int> dist(n, prob);
  return dist(engine_);
}

std::size_t Rng::categorical(std::span<const double> log_weights) {
  const double lse = log_sum_exp(log_weights);
  double u = uniform();
  std::size_t last_finite = 0;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    if (log_weights[i] == -std::numeric_limits<double>::infinity()) continue;
    last_finite = i;
    u -= std::exp(log_weights[i] - lse);
    if (u <= 0.0) return i;
  }
  return last_finite;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over seed + golden-ratio-spaced counter.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace nmarank
