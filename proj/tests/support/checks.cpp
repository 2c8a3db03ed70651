#include "checks.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>

#include "nmarank/sampler.hpp"
#include "oracles.hpp"

namespace checks {

using nmarank::ChainState;
using nmarank::Dataset;
using nmarank::ModelKind;
using nmarank::Rng;

double equicorr_max_error(int cases, std::uint64_t seed) {
  Rng rng(seed, 11);
  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    const int dim = 1 + static_cast<int>(rng.uniform() * 5);
    const double tau2 = std::exp(rng.normal(-1.5, 1.0));
    const double corr = 0.9 * rng.uniform();
    std::vector<double> x(dim), mean(dim);
    for (int i = 0; i < dim; ++i) {
      mean[i] = rng.normal(0.0, 1.0);
      x[i] = mean[i] + rng.normal(0.0, 2.0 * std::sqrt(tau2));
    }
    const double got = nmarank::equicorr_mvn_logpdf(x, mean, {dim, tau2, corr});
    const double want =
        oracle::mvn_logpdf(x, mean, oracle::equicorr_cov(dim, tau2, corr));
    worst = std::max(worst, std::abs(got - want));
  }
  return worst;
}

InverseCheck equicorr_inverse_check(int dim, double tau2, double corr) {
  const nmarank::EquicorrSpec spec{dim, tau2, corr};
  const auto closed = nmarank::equicorr_precision(spec);
  const auto dense = oracle::invert(oracle::equicorr_cov(dim, tau2, corr));
  InverseCheck out;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      out.max_inverse_error = std::max(
          out.max_inverse_error, std::abs(closed[i * dim + j] - dense.inverse[i][j]));
    }
  }
  out.det = nmarank::equicorr_det(spec);
  out.det_error = std::abs(out.det - dense.det);
  return out;
}

namespace {

template <class F>
double half_line(F f, double split) {
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  return ts.integrate(f, 0.0, split) + es.integrate(f, split, INFINITY);
}

}  // namespace

double nlp_total_mass(const nmarank::NlpSpec& spec) {
  auto f = [&](double x) {
    return x <= 0.0 ? 0.0 : std::exp(oracle::nlp_logpdf(x, spec.shape));
  };
  return 2.0 * half_line(f, 1.0);
}

CalibrationCheck calibration_check(double v0) {
  CalibrationCheck out;
  out.v0 = v0;
  const nmarank::NlpSpec spec = nmarank::calibrate_nlp_shape(v0);
  out.p = spec.shape;
  const double sd = v0 / 3.0;
  out.x0 = oracle::std_normal_quantile(0.5 + 0.5 * nmarank::kSpikeMass) * sd;
  out.residual = std::abs(std::exp(oracle::nlp_logpdf(out.x0, spec.shape)) -
                          std::exp(oracle::normal_logpdf(out.x0, 0.0, sd)));
  out.mass_error = std::abs(nlp_total_mass(spec) - 1.0);
  auto low = [&](double x) {
    if (x <= 0.0) return 0.0;
    return std::min(std::exp(oracle::nlp_logpdf(x, spec.shape)),
                    std::exp(oracle::normal_logpdf(x, 0.0, sd)));
  };
  out.overlap = 2.0 * half_line(low, out.x0);
  return out;
}

DeltaCheck metropolis_consistency(ModelKind kind, int states, std::uint64_t seed) {
  DeltaCheck out;
  Rng rng(seed, 3 + static_cast<int>(kind));
  const double v0s[] = {0.05, 0.1, 0.5};
  auto note = [&](double lib, double want, const char* block) {
    ++out.moves;
    double err;
    if (std::isinf(lib) || std::isinf(want)) {
      err = lib == want ? 0.0 : INFINITY;
    } else {
      err = std::abs(lib - want);
    }
    if (!(err <= out.max_error)) {
      out.max_error = std::isnan(err) ? INFINITY : err;
      out.worst = block;
    }
  };
  for (int s = 0; s < states; ++s) {
    const int K = 3 + static_cast<int>(rng.uniform() * 3);
    const int N = K - 1 + static_cast<int>(rng.uniform() * 4);
    const Dataset data = oracle::random_dataset(rng, K, N);
    nmarank::PriorConfig pc;
    if (kind == ModelKind::DpSpikeSlab) pc.v0 = v0s[s % 3];
    const nmarank::Sampler sampler(data, pc, kind);
    const auto& prior = sampler.prior();
    ChainState st = oracle::random_state(sampler, rng);
    const double base = oracle::log_joint(data, prior, kind, st);
    auto joint_diff = [&](const ChainState& moved) {
      return oracle::log_joint(data, prior, kind, moved) - base;
    };

    for (std::size_t i = 0; i < st.mu.size(); ++i) {
      ChainState m = st;
      m.mu[i] += rng.normal(0.0, 0.3);
      note(sampler.mu_log_ratio(st, i, m.mu[i]), joint_diff(m), "mu");
    }
    for (std::size_t i = 0; i < st.delta.size(); ++i) {
      for (std::size_t c = 0; c < st.delta[i].size(); ++c) {
        ChainState m = st;
        m.delta[i][c] += rng.normal(0.0, 0.1);
        note(sampler.delta_log_ratio(st, i, c, m.delta[i][c]), joint_diff(m),
             "delta");
      }
    }
    {
      ChainState m = st;
      m.tau2 = st.tau2 * std::exp(rng.normal(0.0, 0.4));
      note(sampler.log_tau2_log_ratio(st, m.tau2), joint_diff(m), "tau");
    }
    if (kind == ModelKind::GaussianEffects) {
      for (int k = 1; k < K; ++k) {
        ChainState m = st;
        m.d[k] += rng.normal(0.0, 0.2);
        note(sampler.d_log_ratio(st, k, m.d[k]), joint_diff(m), "d");
      }
    } else {
      for (int h = 0; h < prior.H; ++h) {
        ChainState m = st;
        const double step = kind == ModelKind::DpSpikeSlab && st.spike[h]
                                ? *prior.v0 / 6.0
                                : 0.2;
        m.atoms[h] += rng.normal(0.0, step);
        note(sampler.atom_log_ratio(st, h, m.atoms[h]), joint_diff(m), "atom");
      }
    }
  }
  return out;
}

double GirStat::z() const {
  return (chain_mean - prior_mean) /
         std::sqrt(prior_se * prior_se + chain_se * chain_se);
}

namespace {

struct Gir {
  ModelKind kind;
  nmarank::PriorConfig prior;  // resolved
  Dataset design;

  ChainState draw_prior(Rng& rng) const {
    ChainState st;
    const int K = design.n_treatments();
    for (const auto& s : design.studies()) {
      st.mu.push_back(rng.normal(prior.m_b, prior.s_b));
      st.delta.push_back(std::vector<double>(s.n_contrasts(), 0.0));
    }
    st.tau2 = std::exp(rng.normal(prior.m_ell, prior.s_ell));
    if (kind == ModelKind::GaussianEffects) {
      st.d.assign(K, 0.0);
      for (int k = 1; k < K; ++k) st.d[k] = rng.normal(prior.m_d, prior.s_d);
    } else {
      const int H = prior.H;
      st.sticks.assign(H, 1.0);
      for (int h = 0; h + 1 < H; ++h) st.sticks[h] = rng.beta(1.0, prior.alpha);
      st.weights = oracle::stick_weights(st.sticks);
      std::vector<double> logw;
      for (double w : st.weights) logw.push_back(std::log(w));
      st.labels.assign(K, -1);
      for (int k = 1; k < K; ++k) st.labels[k] = static_cast<int>(rng.categorical(logw));
      st.atoms.assign(H, 0.0);
      if (kind == ModelKind::DpGaussian) {
        for (double& a : st.atoms) a = rng.normal(prior.m_d, prior.s_d);
      } else {
        st.omega0 = rng.beta(prior.a_omega, prior.b_omega);
        st.spike.assign(H, 0);
        const double p = prior.nlp.shape;
        for (int h = 0; h < H; ++h) {
          st.spike[h] = rng.bernoulli(st.omega0) ? 1 : 0;
          if (st.spike[h]) {
            st.atoms[h] = rng.normal(0.0, *prior.v0 / 3.0);
          } else {
            const double g = rng.gamma(1.0 / (2.0 * p));
            st.atoms[h] = (rng.bernoulli(0.5) ? 1.0 : -1.0) * std::pow(g, -1.0 / (2.0 * p));
          }
        }
      }
    }
    // delta | d, tau2 for two-arm studies.
    for (std::size_t i = 0; i < design.n_studies(); ++i) {
      const auto& s = design.studies()[i];
      const int other = s.arms[0].treatment == s.baseline ? s.arms[1].treatment
                                                           : s.arms[0].treatment;
      st.delta[i][0] = rng.normal(effect(st, other) - effect(st, s.baseline),
                                  std::sqrt(st.tau2));
    }
    return st;
  }

  double effect(const ChainState& st, int k) const {
    if (k == 0) return 0.0;
    if (kind == ModelKind::GaussianEffects) return st.d[k];
    return st.atoms[st.labels[k]];
  }

  Dataset draw_data(const ChainState& st, Rng& rng) const {
    std::vector<nmarank::Study> studies = design.studies();
    for (std::size_t i = 0; i < studies.size(); ++i) {
      for (auto& a : studies[i].arms) {
        const double eta =
            st.mu[i] + (a.treatment == studies[i].baseline ? 0.0 : st.delta[i][0]);
        a.events = rng.binomial(a.trials, 1.0 / (1.0 + std::exp(-eta)));
      }
    }
    return Dataset(std::move(studies), design.labels());
  }

  std::vector<std::string> names() const {
    if (kind == ModelKind::DpSpikeSlab) {
      return {"log_tau2", "tau2_below_median", "atan_d12", "d12_near_zero",
              "omega0", "omega0_sq"};
    }
    return {"log_tau2", "tau2_below_median", "d12", "d12_sq"};
  }

  std::vector<double> stats(const ChainState& st) const {
    const double d12 = effect(st, 1);
    std::vector<double> g{std::log(st.tau2), st.tau2 < std::exp(prior.m_ell) ? 1.0 : 0.0};
    if (kind == ModelKind::DpSpikeSlab) {
      g.insert(g.end(), {std::atan(d12), std::abs(d12) < *prior.v0 ? 1.0 : 0.0,
                         st.omega0, st.omega0 * st.omega0});
    } else {
      g.insert(g.end(), {d12, d12 * d12});
    }
    return g;
  }
};

Dataset gir_design() {
  std::vector<nmarank::Study> studies;
  const std::pair<int, int> pairs[] = {{0, 1}, {0, 2}, {1, 2}};
  int i = 0;
  for (auto [a, b] : pairs) {
    nmarank::Study s;
    s.id = "g" + std::to_string(++i);
    s.arms = {{a, 0, 10}, {b, 0, 10}};
    s.baseline = a;
    studies.push_back(std::move(s));
  }
  return Dataset(std::move(studies), {"1", "2", "3"});
}

}  // namespace

std::vector<GirStat> getting_it_right(ModelKind kind, long cycles,
                                      long prior_draws, std::uint64_t seed,
                                      double v0,
                                      const nmarank::ProposalSteps& steps) {
  nmarank::PriorConfig pc;
  if (kind == ModelKind::DpSpikeSlab) pc.v0 = v0;
  const Dataset design = gir_design();
  const Gir gir{kind, pc.resolved(kind, design.n_treatments()), design};
  const auto names = gir.names();
  const std::size_t m = names.size();

  // Marginal-conditional: independent prior draws.
  Rng prior_rng(seed, 1);
  std::vector<double> sum(m, 0.0), sum2(m, 0.0);
  for (long t = 0; t < prior_draws; ++t) {
    const auto g = gir.stats(gir.draw_prior(prior_rng));
    for (std::size_t j = 0; j < m; ++j) {
      sum[j] += g[j];
      sum2[j] += g[j] * g[j];
    }
  }
  std::vector<GirStat> out(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double mean = sum[j] / prior_draws;
    const double var = (sum2[j] / prior_draws - mean * mean) * prior_draws / (prior_draws - 1);
    out[j].name = names[j];
    out[j].prior_mean = mean;
    out[j].prior_se = std::sqrt(var / prior_draws);
  }

  // Successive-conditional.
  Rng rng(seed, 2);
  ChainState st = gir.draw_prior(rng);
  Dataset data = gir.draw_data(st, rng);
  nmarank::AcceptanceStats acc;
  std::vector<std::vector<double>> trace(m);
  for (long t = 0; t < cycles; ++t) {
    const nmarank::Sampler sampler(data, pc, kind);
    sampler.sweep(st, steps, rng, acc);
    data = gir.draw_data(st, rng);
    const auto g = gir.stats(st);
    for (std::size_t j = 0; j < m; ++j) trace[j].push_back(g[j]);
  }
  constexpr long kBatches = 25;
  const long size = cycles / kBatches;
  for (std::size_t j = 0; j < m; ++j) {
    double total = 0.0;
    std::vector<double> bm;
    for (long b = 0; b < kBatches; ++b) {
      double s = 0.0;
      for (long t = b * size; t < (b + 1) * size; ++t) s += trace[j][t];
      bm.push_back(s / size);
      total += s;
    }
    const double mean = total / (kBatches * size);
    double ss = 0.0;
    for (double v : bm) ss += (v - mean) * (v - mean);
    out[j].chain_mean = mean;
    out[j].chain_se = std::sqrt(ss / (kBatches - 1) / kBatches);
  }
  return out;
}

}  // namespace checks
