#ifndef NMARANK_MODEL_HPP_
#define NMARANK_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nmarank/distributions.hpp"

namespace nmarank {

enum class ModelKind { GaussianEffects, DpGaussian, DpSpikeSlab };

// "gaussian", "dp-gaussian", "dp-spike-slab".
std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);
inline bool is_dp(ModelKind kind) { return kind != ModelKind::GaussianEffects; }

struct PriorConfig {
  double m_b = 0.0;      // baseline effect mean
  double s_b = 10.0;     // baseline effect sd
  double m_ell = -2.34;  // mean of log tau^2
  double s_ell = 2.0;    // sd of log tau^2
  double m_d = 0.0;      // effect mean (Gaussian and DP Gaussian)
  double s_d = 1.0;      // effect sd
  double corr = 0.5;     // within-study correlation gamma
  double alpha = 1.0;    // DP concentration
  int H = 0;             // truncation; 0 resolves to K
  std::optional<double> v0;  // zero-effect half-width (spike-slab only)
  double a_omega = 1.0;
  double b_omega = 1.0;
  NlpSpec nlp;  // derived from v0 by resolved()

  // Validates and fills derived fields: H (when 0) and the calibrated slab.
  // Throws ConfigError.
  PriorConfig resolved(ModelKind kind, int n_treatments) const;
};

struct ProposalSteps {
  double mu = 0.2;
  double delta = 0.2;
  double log_tau2 = 0.5;
  double d = 0.2;  // d_1k or atoms d*_h
};

struct McmcConfig {
  int chains = 4;
  long iterations = 20000;
  long burn_in = 10000;
  long thin = 10;
  std::uint64_t seed = 1;
  ProposalSteps steps;
  // Robbins-Monro step-size adaptation during burn-in, frozen afterwards.
  bool adapt = false;
  // Worker threads for chains; 0 uses hardware concurrency.
  int jobs = 0;

  void validate() const;
  long kept_per_chain() const { return (iterations - burn_in) / thin; }
};

// Latent state of one chain. Treatment indices are 0-based with 0 the
// reference; component indices are 0-based (0..H-1).
struct ChainState {
  std::vector<double> mu;                  // per study, mu_{i,b_i}
  std::vector<std::vector<double>> delta;  // per study, non-baseline arms in arm order
  double tau2 = 0.1;

  // Gaussian effects: d[0] == 0 always.
  std::vector<double> d;

  // DP models.
  std::vector<double> atoms;   // d*_h
  std::vector<int> labels;     // c_k; labels[0] is unused (-1)
  std::vector<double> sticks;  // V_h, V_H = 1
  std::vector<double> weights; // pi_h

  // DP Spike-Slab.
  std::vector<int> spike;  // s_h in {0, 1}
  double omega0 = 0.5;
};

}  // namespace nmarank

#endif  // NMARANK_MODEL_HPP_
