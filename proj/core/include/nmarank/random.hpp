#ifndef NMARANK_RANDOM_HPP_
#define NMARANK_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <span>

namespace nmarank {

// Single-owner pseudo-random stream. Streams are derived from a master seed
// and a stream index (chain, replicate, ...) by feeding both 64-bit words
// through std::seed_seq into a Mersenne Twister, so distinct indices give
// decorrelated streams and the same (seed, stream) pair always reproduces the
// same sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  // Open interval (0, 1).
  double uniform();
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  // Gamma(shape, 1).
  double gamma(double shape);
  double beta(double a, double b);
  int binomial(int n, double prob);
  bool bernoulli(double prob) { return uniform() < prob; }
  // Draws an index with probability proportional to exp(log_weights[i]).
  // Entries equal to -inf are never selected.
  std::size_t categorical(std::span<const double> log_weights);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// Derives a child seed for sub-tasks (replicates, scenarios) from a master
// seed; the mapping is a fixed bijective mix so child seeds never collide
// for distinct (seed, index) within one master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace nmarank

#endif  // NMARANK_RANDOM_HPP_
