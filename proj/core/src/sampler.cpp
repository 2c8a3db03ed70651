#include "nmarank/sampler.hpp"

#include <algorithm>
#include <boost/container/small_vector.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "nmarank/distributions.hpp"
#include "nmarank/error.hpp"

namespace nmarank {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kMinTau2 = 1e-12;

using SmallVec = boost::container::small_vector<double, 8>;
std::span<const double> view(const SmallVec& v) { return {v.data(), v.size()}; }

// Arm position of the c-th non-baseline arm.
std::size_t arm_of_contrast(const Study& s, std::size_t c) {
  return c < s.baseline_arm() ? c : c + 1;
}

double empirical_logit(const Arm& a) {
  return std::log((a.events + 0.5) / (a.trials - a.events + 0.5));
}

}  // namespace

Sampler::Sampler(const Dataset& data, const PriorConfig& prior, ModelKind kind)
    : data_(&data),
      prior_(prior.resolved(kind, data.n_treatments())),
      kind_(kind) {
  const int K = data.n_treatments();
  studies_of_.assign(K, {});
  log_binom_.reserve(data.n_studies());
  for (std::size_t i = 0; i < data.n_studies(); ++i) {
    const Study& s = data.studies()[i];
    std::vector<double> lb;
    for (const Arm& a : s.arms) {
      studies_of_[a.treatment].push_back(i);
      lb.push_back(log_binomial_coefficient(a.trials, a.events));
    }
    log_binom_.push_back(std::move(lb));
  }
}

ChainState Sampler::init_chain(Rng& rng) const {
  if (!validate_network(*data_).connected) {
    throw DataError("treatment network is disconnected; cannot fit");
  }
  const int K = n_treatments();
  ChainState st;
  st.mu.reserve(data_->n_studies());
  st.delta.reserve(data_->n_studies());
  for (const Study& s : data_->studies()) {
    const double base = empirical_logit(s.arms[s.baseline_arm()]);
    st.mu.push_back(base);
    std::vector<double> dl;
    for (std::size_t c = 0; c < s.n_contrasts(); ++c) {
      dl.push_back(empirical_logit(s.arms[arm_of_contrast(s, c)]) - base);
    }
    st.delta.push_back(std::move(dl));
  }
  st.tau2 = std::exp(prior_.m_ell);

  if (kind_ == ModelKind::GaussianEffects) {
    st.d.assign(K, 0.0);
    for (int k = 1; k < K; ++k) st.d[k] = rng.normal(prior_.m_d, prior_.s_d);
    return st;
  }

  const int H = prior_.H;
  st.atoms.assign(H, 0.0);
  if (kind_ == ModelKind::DpSpikeSlab) {
    st.spike.assign(H, 0);
    for (int h = 0; h < H; ++h) st.spike[h] = rng.bernoulli(0.5) ? 1 : 0;
    for (int h = 0; h < H; ++h) {
      st.atoms[h] = st.spike[h] ? rng.normal(0.0, spike_sd(*prior_.v0))
                                : sample_nlp(prior_.nlp, rng);
    }
    st.omega0 = 0.5;
  } else {
    for (int h = 0; h < H; ++h) st.atoms[h] = rng.normal(prior_.m_d, prior_.s_d);
  }
  st.labels.assign(K, -1);
  for (int k = 1; k < K; ++k) {
    st.labels[k] = std::min(H - 1, static_cast<int>(rng.uniform() * H));
  }
  st.sticks.assign(H, 1.0);
  for (int h = 0; h + 1 < H; ++h) st.sticks[h] = rng.beta(1.0, prior_.alpha);
  st.weights = stick_breaking_weights(st.sticks).weights;
  return st;
}

void Sampler::check_state(const ChainState& st) const {
  const int K = n_treatments();
  auto fail = [&](const std::string& what) {
    throw SamplerError("invalid chain state: " + what + "\n" + describe(st));
  };
  if (st.mu.size() != data_->n_studies() ||
      st.delta.size() != data_->n_studies()) {
    fail("study dimension");
  }
  for (std::size_t i = 0; i < data_->n_studies(); ++i) {
    if (st.delta[i].size() != data_->studies()[i].n_contrasts()) {
      fail("delta dimension");
    }
  }
  if (!(st.tau2 > 0.0)) fail("tau2 <= 0");
  if (kind_ == ModelKind::GaussianEffects) {
    if (static_cast<int>(st.d.size()) != K || st.d[0] != 0.0) fail("d_11 != 0");
    return;
  }
  const int H = prior_.H;
  if (static_cast<int>(st.atoms.size()) != H ||
      static_cast<int>(st.labels.size()) != K) {
    fail("component dimension");
  }
  for (int k = 1; k < K; ++k) {
    if (st.labels[k] < 0 || st.labels[k] >= H) fail("label out of range");
  }
  double total = 0.0;
  for (double w : st.weights) total += w;
  if (std::abs(total - 1.0) > 1e-12) fail("weights do not sum to 1");
  if (st.sticks.back() != 1.0) fail("V_H != 1");
  if (kind_ == ModelKind::DpSpikeSlab) {
    if (!(st.omega0 > 0.0 && st.omega0 < 1.0)) fail("omega0 outside (0, 1)");
    if (static_cast<int>(st.spike.size()) != H) fail("spike dimension");
  }
}

double Sampler::effective_d(const ChainState& st, Treatment k) const {
  if (k == 0) return 0.0;
  if (kind_ == ModelKind::GaussianEffects) return st.d[k];
  return st.atoms[st.labels[k]];
}

std::vector<double> Sampler::contrast_mean(const ChainState& st,
                                           std::size_t study) const {
  const Study& s = data_->studies()[study];
  const double base = effective_d(st, s.baseline);
  std::vector<double> out;
  for (const Arm& a : s.arms) {
    if (a.treatment != s.baseline) out.push_back(effective_d(st, a.treatment) - base);
  }
  return out;
}

template <class EffectFn>
double Sampler::contrast_logpdf_with(const ChainState& st, std::size_t study,
                                     double tau2, EffectFn effect) const {
  const Study& s = data_->studies()[study];
  const double base = effect(s.baseline);
  SmallVec mean;
  for (const Arm& a : s.arms) {
    if (a.treatment != s.baseline) mean.push_back(effect(a.treatment) - base);
  }
  const EquicorrSpec spec{static_cast<int>(mean.size()), tau2, prior_.corr};
  return equicorr_mvn_logpdf(st.delta[study], view(mean), spec);
}

double Sampler::study_loglik(const ChainState& st, std::size_t study) const {
  const Study& s = data_->studies()[study];
  const std::size_t b = s.baseline_arm();
  double out = 0.0;
  std::size_t c = 0;
  for (std::size_t a = 0; a < s.arms.size(); ++a) {
    const double eta = st.mu[study] + (a == b ? 0.0 : st.delta[study][c++]);
    out += log_binom_[study][a] +
           binomial_logit_kernel(s.arms[a].events, s.arms[a].trials, eta);
  }
  return out;
}

double Sampler::study_contrast_logpdf(const ChainState& st,
                                      std::size_t study) const {
  return contrast_logpdf_with(st, study, st.tau2,
                              [&](Treatment k) { return effective_d(st, k); });
}

double Sampler::mu_log_ratio(const ChainState& st, std::size_t study,
                             double proposal) const {
  const double cur = st.mu[study];
  double out = normal_logpdf(proposal, prior_.m_b, prior_.s_b) -
               normal_logpdf(cur, prior_.m_b, prior_.s_b);
  if (likelihood_) {
    const Study& s = data_->studies()[study];
    const std::size_t b = s.baseline_arm();
    std::size_t c = 0;
    for (std::size_t a = 0; a < s.arms.size(); ++a) {
      const double off = (a == b) ? 0.0 : st.delta[study][c++];
      const Arm& arm = s.arms[a];
      out += binomial_logit_kernel(arm.events, arm.trials, proposal + off) -
             binomial_logit_kernel(arm.events, arm.trials, cur + off);
    }
  }
  return out;
}

double Sampler::delta_log_ratio(const ChainState& st, std::size_t study,
                                std::size_t contrast, double proposal) const {
  const Study& s = data_->studies()[study];
  const auto& cur = st.delta[study];
  double out = 0.0;
  if (likelihood_) {
    const Arm& arm = s.arms[arm_of_contrast(s, contrast)];
    out += binomial_logit_kernel(arm.events, arm.trials, st.mu[study] + proposal) -
           binomial_logit_kernel(arm.events, arm.trials,
                                 st.mu[study] + cur[contrast]);
  }
  SmallVec mean;
  const double base = effective_d(st, s.baseline);
  for (const Arm& a : s.arms) {
    if (a.treatment != s.baseline) mean.push_back(effective_d(st, a.treatment) - base);
  }
  SmallVec moved(cur.begin(), cur.end());
  moved[contrast] = proposal;
  const EquicorrSpec spec{static_cast<int>(mean.size()), st.tau2, prior_.corr};
  out += equicorr_mvn_logpdf(view(moved), view(mean), spec) -
         equicorr_mvn_logpdf(cur, view(mean), spec);
  return out;
}

double Sampler::log_tau2_log_ratio(const ChainState& st,
                                   double proposed_tau2) const {
  if (!(proposed_tau2 >= kMinTau2)) return kNegInf;
  auto eff = [&](Treatment k) { return effective_d(st, k); };
  double out = normal_logpdf(std::log(proposed_tau2), prior_.m_ell, prior_.s_ell) -
               normal_logpdf(std::log(st.tau2), prior_.m_ell, prior_.s_ell);
  for (std::size_t i = 0; i < data_->n_studies(); ++i) {
    out += contrast_logpdf_with(st, i, proposed_tau2, eff) -
           contrast_logpdf_with(st, i, st.tau2, eff);
  }
  return out;
}

double Sampler::d_log_ratio(const ChainState& st, Treatment k,
                            double proposal) const {
  auto eff = [&](Treatment j) { return effective_d(st, j); };
  auto moved = [&](Treatment j) { return j == k ? proposal : effective_d(st, j); };
  double out = normal_logpdf(proposal, prior_.m_d, prior_.s_d) -
               normal_logpdf(st.d[k], prior_.m_d, prior_.s_d);
  for (std::size_t i : studies_of_[k]) {
    out += contrast_logpdf_with(st, i, st.tau2, moved) -
           contrast_logpdf_with(st, i, st.tau2, eff);
  }
  return out;
}

double Sampler::atom_log_prior(const ChainState& st, int h, double value) const {
  if (kind_ == ModelKind::DpGaussian) {
    return normal_logpdf(value, prior_.m_d, prior_.s_d);
  }
  return st.spike[h] ? normal_logpdf(value, 0.0, spike_sd(*prior_.v0))
                     : nlp_logpdf(value, prior_.nlp);
}

std::vector<std::size_t> Sampler::studies_of_component(const ChainState& st,
                                                       int h) const {
  std::vector<std::size_t> out;
  for (Treatment k = 1; k < n_treatments(); ++k) {
    if (st.labels[k] != h) continue;
    out.insert(out.end(), studies_of_[k].begin(), studies_of_[k].end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double Sampler::atom_log_ratio(const ChainState& st, int h,
                               double proposal) const {
  auto eff = [&](Treatment j) { return effective_d(st, j); };
  auto moved = [&](Treatment j) {
    return (j != 0 && st.labels[j] == h) ? proposal : effective_d(st, j);
  };
  double out = atom_log_prior(st, h, proposal) - atom_log_prior(st, h, st.atoms[h]);
  if (out == kNegInf) return out;
  for (std::size_t i : studies_of_component(st, h)) {
    out += contrast_logpdf_with(st, i, st.tau2, moved) -
           contrast_logpdf_with(st, i, st.tau2, eff);
  }
  return out;
}

std::vector<double> Sampler::label_log_probs(const ChainState& st,
                                             Treatment k) const {
  const int H = prior_.H;
  std::vector<double> lp(H);
  for (int h = 0; h < H; ++h) {
    const double w = st.weights[h];
    if (w <= 0.0) {
      lp[h] = kNegInf;
      continue;
    }
    auto with_h = [&](Treatment j) {
      return j == k ? st.atoms[h] : effective_d(st, j);
    };
    double v = std::log(w);
    for (std::size_t i : studies_of_[k]) {
      v += contrast_logpdf_with(st, i, st.tau2, with_h);
    }
    lp[h] = v;
  }
  const double lse = log_sum_exp(lp);
  for (double& v : lp) v -= lse;
  return lp;
}

std::pair<double, double> Sampler::stick_shape(const ChainState& st,
                                               int h) const {
  double a = 1.0;
  double b = prior_.alpha;
  for (Treatment k = 1; k < n_treatments(); ++k) {
    if (st.labels[k] == h) a += 1.0;
    else if (st.labels[k] > h) b += 1.0;
  }
  return {a, b};
}

std::array<double, 2> Sampler::spike_log_probs(const ChainState& st,
                                               int h) const {
  const double x = st.atoms[h];
  const double l0 = std::log1p(-st.omega0) + nlp_logpdf(x, prior_.nlp);
  const double l1 = std::log(st.omega0) +
                    normal_logpdf(x, 0.0, spike_sd(*prior_.v0));
  const std::array<double, 2> both{l0, l1};
  const double lse = log_sum_exp(both);
  return {l0 - lse, l1 - lse};
}

std::pair<double, double> Sampler::omega_shape(const ChainState& st) const {
  double ones = 0.0;
  for (int s : st.spike) ones += s;
  return {prior_.a_omega + ones,
          prior_.b_omega + static_cast<double>(st.spike.size()) - ones};
}

bool Sampler::metropolis_accept(double log_ratio, Rng& rng,
                                const ChainState& st, const char* block) const {
  const double u = rng.uniform();
  if (std::isnan(log_ratio)) {
    throw SamplerError(std::string("non-finite log target in ") + block +
                       " update\n" + describe(st));
  }
  return std::log(u) < log_ratio;
}

void Sampler::update_mu(ChainState& st, const ProposalSteps& steps, Rng& rng,
                        AcceptanceStats& stats) const {
  for (std::size_t i = 0; i < data_->n_studies(); ++i) {
    const double prop = st.mu[i] + steps.mu * rng.normal();
    ++stats.mu.proposed;
    if (metropolis_accept(mu_log_ratio(st, i, prop), rng, st, "mu")) {
      st.mu[i] = prop;
      ++stats.mu.accepted;
    }
  }
}

void Sampler::update_delta(ChainState& st, const ProposalSteps& steps,
                           Rng& rng, AcceptanceStats& stats) const {
  for (std::size_t i = 0; i < data_->n_studies(); ++i) {
    for (std::size_t c = 0; c < st.delta[i].size(); ++c) {
      const double prop = st.delta[i][c] + steps.delta * rng.normal();
      ++stats.delta.proposed;
      if (metropolis_accept(delta_log_ratio(st, i, c, prop), rng, st, "delta")) {
        st.delta[i][c] = prop;
        ++stats.delta.accepted;
      }
    }
  }
}

void Sampler::update_tau(ChainState& st, const ProposalSteps& steps, Rng& rng,
                         AcceptanceStats& stats) const {
  const double prop = std::exp(std::log(st.tau2) + steps.log_tau2 * rng.normal());
  ++stats.tau.proposed;
  if (metropolis_accept(log_tau2_log_ratio(st, prop), rng, st, "tau")) {
    st.tau2 = prop;
    ++stats.tau.accepted;
  }
}

void Sampler::update_d_gaussian(ChainState& st, const ProposalSteps& steps,
                                Rng& rng, AcceptanceStats& stats) const {
  for (Treatment k = 1; k < n_treatments(); ++k) {
    const double prop = st.d[k] + steps.d * rng.normal();
    ++stats.d.proposed;
    if (metropolis_accept(d_log_ratio(st, k, prop), rng, st, "d")) {
      st.d[k] = prop;
      ++stats.d.accepted;
    }
  }
}

void Sampler::update_atoms(ChainState& st, const ProposalSteps& steps,
                           Rng& rng, AcceptanceStats& stats) const {
  for (int h = 0; h < prior_.H; ++h) {
    const double prop = st.atoms[h] + steps.d * rng.normal();
    ++stats.d.proposed;
    if (metropolis_accept(atom_log_ratio(st, h, prop), rng, st, "atom")) {
      st.atoms[h] = prop;
      ++stats.d.accepted;
    }
  }
}

void Sampler::update_labels(ChainState& st, Rng& rng) const {
  for (Treatment k = 1; k < n_treatments(); ++k) {
    const auto lp = label_log_probs(st, k);
    st.labels[k] = static_cast<int>(rng.categorical(lp));
  }
}

void Sampler::update_sticks(ChainState& st, Rng& rng) const {
  const int H = prior_.H;
  for (int h = 0; h + 1 < H; ++h) {
    const auto [a, b] = stick_shape(st, h);
    st.sticks[h] = rng.beta(a, b);
  }
  st.sticks[H - 1] = 1.0;
  st.weights = stick_breaking_weights(st.sticks).weights;
}

void Sampler::update_spike_indicators(ChainState& st, Rng& rng) const {
  for (int h = 0; h < prior_.H; ++h) {
    const auto lp = spike_log_probs(st, h);
    st.spike[h] = rng.uniform() < std::exp(lp[1]) ? 1 : 0;
  }
}

void Sampler::update_omega0(ChainState& st, Rng& rng) const {
  const auto [a, b] = omega_shape(st);
  // Keep omega0 strictly inside (0, 1) so both log terms stay finite.
  constexpr double kEps = 1e-300;
  st.omega0 = std::clamp(rng.beta(a, b), kEps, 1.0 - 1e-16);
}

void Sampler::sweep(ChainState& st, const ProposalSteps& steps, Rng& rng,
                    AcceptanceStats& stats) const {
  update_mu(st, steps, rng, stats);
  update_delta(st, steps, rng, stats);
  update_tau(st, steps, rng, stats);
  switch (kind_) {
    case ModelKind::GaussianEffects:
      update_d_gaussian(st, steps, rng, stats);
      break;
    case ModelKind::DpGaussian:
      update_atoms(st, steps, rng, stats);
      update_labels(st, rng);
      update_sticks(st, rng);
      break;
    case ModelKind::DpSpikeSlab:
      update_atoms(st, steps, rng, stats);
      update_labels(st, rng);
      update_sticks(st, rng);
      update_spike_indicators(st, rng);
      update_omega0(st, rng);
      break;
  }
}

std::string Sampler::describe(const ChainState& st) const {
  std::ostringstream out;
  out.precision(17);
  auto list = [&](const char* name, const auto& v) {
    out << name << " = [";
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
    out << "]\n";
  };
  out << "model = " << to_string(kind_) << "\n";
  out << "tau2 = " << st.tau2 << "\n";
  list("mu", st.mu);
  for (std::size_t i = 0; i < st.delta.size(); ++i) {
    out << "delta[" << data_->studies()[i].id << "] = [";
    for (std::size_t c = 0; c < st.delta[i].size(); ++c) {
      out << (c ? ", " : "") << st.delta[i][c];
    }
    out << "]\n";
  }
  if (kind_ == ModelKind::GaussianEffects) {
    list("d", st.d);
  } else {
    list("atoms", st.atoms);
    list("labels", st.labels);
    list("weights", st.weights);
    if (kind_ == ModelKind::DpSpikeSlab) {
      list("spike", st.spike);
      out << "omega0 = " << st.omega0 << "\n";
    }
  }
  return out.str();
}

}  // namespace nmarank
