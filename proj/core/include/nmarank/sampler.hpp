#ifndef NMARANK_SAMPLER_HPP_
#define NMARANK_SAMPLER_HPP_

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "nmarank/dataset.hpp"
#include "nmarank/model.hpp"
#include "nmarank/random.hpp"

namespace nmarank {

struct BlockCounter {
  long proposed = 0;
  long accepted = 0;
  double rate() const {
    return proposed == 0 ? 0.0 : static_cast<double>(accepted) / proposed;
  }
};

// Random-walk Metropolis bookkeeping per block.
struct AcceptanceStats {
  BlockCounter mu;
  BlockCounter delta;
  BlockCounter tau;
  BlockCounter d;  // d_1k (Gaussian) or atoms (DP)
};

// Metropolis-within-Gibbs kernels for one model fitted to one dataset.
// Immutable after construction and shareable between chains; all per-chain
// mutable data lives in ChainState, ProposalSteps and AcceptanceStats.
//
// log tau^2 is updated on eta = log tau^2 with prior N(m_ell, s_ell^2) on
// eta, so the random walk needs no Jacobian term. This equals LogN(tau^2)
// plus the log tau^2' - log tau^2 correction on the tau^2 scale.
class Sampler {
 public:
  // `prior` is resolved against the dataset (H default, slab calibration).
  // The sampler keeps a reference to `data`.
  Sampler(const Dataset& data, const PriorConfig& prior, ModelKind kind);
  Sampler(Dataset&&, const PriorConfig&, ModelKind) = delete;

  const Dataset& data() const { return *data_; }
  const PriorConfig& prior() const { return prior_; }
  ModelKind kind() const { return kind_; }
  int n_treatments() const { return data_->n_treatments(); }
  int n_components() const { return prior_.H; }

  // Prior-only mode: binomial likelihood terms are dropped from the
  // mu and delta targets.
  void set_likelihood_enabled(bool enabled) { likelihood_ = enabled; }
  bool likelihood_enabled() const { return likelihood_; }

  // Throws DataError if the network is disconnected.
  ChainState init_chain(Rng& rng) const;
  // Throws SamplerError describing the first violated ChainState invariant.
  void check_state(const ChainState& state) const;

  double effective_d(const ChainState& state, Treatment k) const;
  // d_1i: effective d of each non-baseline arm minus that of the baseline.
  std::vector<double> contrast_mean(const ChainState& state,
                                    std::size_t study) const;
  // Sum over arms of log Binomial(y; n, logistic(mu + delta)).
  double study_loglik(const ChainState& state, std::size_t study) const;
  // log N_{t_i}(delta_i; d_1i, S).
  double study_contrast_logpdf(const ChainState& state,
                               std::size_t study) const;

  // Log target ratios for single-coordinate random-walk moves.
  double mu_log_ratio(const ChainState& state, std::size_t study,
                      double proposal) const;
  double delta_log_ratio(const ChainState& state, std::size_t study,
                         std::size_t contrast, double proposal) const;
  double log_tau2_log_ratio(const ChainState& state,
                            double proposed_tau2) const;
  double d_log_ratio(const ChainState& state, Treatment k,
                     double proposal) const;
  double atom_log_ratio(const ChainState& state, int h, double proposal) const;

  // Gibbs full conditionals.
  // Normalized log Pr(c_k = h | -), h = 0..H-1.
  std::vector<double> label_log_probs(const ChainState& state,
                                      Treatment k) const;
  // (a*, b*) of the Beta full conditional of V_h, h < H - 1.
  std::pair<double, double> stick_shape(const ChainState& state, int h) const;
  // Normalized {log Pr(s_h = 0 | -), log Pr(s_h = 1 | -)}.
  std::array<double, 2> spike_log_probs(const ChainState& state, int h) const;
  std::pair<double, double> omega_shape(const ChainState& state) const;

  void update_mu(ChainState& state, const ProposalSteps& steps, Rng& rng,
                 AcceptanceStats& stats) const;
  void update_delta(ChainState& state, const ProposalSteps& steps, Rng& rng,
                    AcceptanceStats& stats) const;
  void update_tau(ChainState& state, const ProposalSteps& steps, Rng& rng,
                  AcceptanceStats& stats) const;
  void update_d_gaussian(ChainState& state, const ProposalSteps& steps,
                         Rng& rng, AcceptanceStats& stats) const;
  void update_atoms(ChainState& state, const ProposalSteps& steps, Rng& rng,
                    AcceptanceStats& stats) const;
  void update_labels(ChainState& state, Rng& rng) const;
  void update_sticks(ChainState& state, Rng& rng) const;
  void update_spike_indicators(ChainState& state, Rng& rng) const;
  void update_omega0(ChainState& state, Rng& rng) const;

  // mu, delta, tau, then the model block (d; or atoms, labels, sticks
  // [, spikes, omega0]).
  void sweep(ChainState& state, const ProposalSteps& steps, Rng& rng,
             AcceptanceStats& stats) const;

  std::string describe(const ChainState& state) const;

 private:
  template <class EffectFn>
  double contrast_logpdf_with(const ChainState& state, std::size_t study,
                              double tau2, EffectFn effect) const;
  double atom_log_prior(const ChainState& state, int h, double value) const;
  // Studies in which any treatment currently labelled h appears.
  std::vector<std::size_t> studies_of_component(const ChainState& state,
                                                int h) const;
  bool metropolis_accept(double log_ratio, Rng& rng,
                         const ChainState& state, const char* block) const;

  const Dataset* data_;
  PriorConfig prior_;
  ModelKind kind_;
  bool likelihood_ = true;
  std::vector<std::vector<std::size_t>> studies_of_;  // per treatment
  std::vector<std::vector<double>> log_binom_;       // per study, per arm
};

}  // namespace nmarank

#endif  // NMARANK_SAMPLER_HPP_
