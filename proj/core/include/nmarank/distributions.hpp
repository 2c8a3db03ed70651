#ifndef NMARANK_DISTRIBUTIONS_HPP_
#define NMARANK_DISTRIBUTIONS_HPP_

#include <span>
#include <vector>

#include "nmarank/random.hpp"

// Density kernels used by the samplers. Every normal / lognormal second
// parameter is a standard deviation; LogN(m, s) is the law of exp(X) with
// X ~ N(m, s^2).

namespace nmarank {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double normal_logpdf(double x, double mean, double sd);
// Density of tau^2 itself (includes the -log x Jacobian).
double lognormal_logpdf(double x, double meanlog, double sdlog);
double beta_logpdf(double x, double a, double b);
double log_binomial_coefficient(int n, int k);
double binomial_logpmf(int y, int n, double prob);

// log(1 / (1 + exp(-x))) without overflow for any finite x.
double log_logistic(double x);
// Binomial log-likelihood on the logit scale, without the binomial
// coefficient: y log p + (n - y) log(1 - p), p = logistic(eta).
double binomial_logit_kernel(int y, int n, double eta);

double log_sum_exp(std::span<const double> values);

// Covariance gamma*tau2*(J - I) + tau2*I of dimension `dim`.
struct EquicorrSpec {
  int dim = 1;
  double tau2 = 1.0;
  double corr = 0.5;

  // Throws ConfigError unless dim >= 1, tau2 > 0, corr in [0, 1) and the
  // matrix is positive definite.
  void validate() const;
  double log_det() const;
};

// Exact MVN log-density using the closed-form inverse and determinant of
// the equicorrelated covariance; O(dim), no factorization.
double equicorr_mvn_logpdf(std::span<const double> x,
                           std::span<const double> mean,
                           const EquicorrSpec& spec);
// Row-major dim x dim closed-form inverse.
std::vector<double> equicorr_precision(const EquicorrSpec& spec);
double equicorr_det(const EquicorrSpec& spec);

// One-factor draw: mean + sqrt(corr*tau2) z0 1 + sqrt((1-corr) tau2) z.
// tau2 below 1e-300 returns the mean unchanged.
std::vector<double> sample_equicorr_mvn(std::span<const double> mean,
                                        const EquicorrSpec& spec, Rng& rng);

// Inverse-moment nonlocal density
//   NLP(x | p, r, u) = p r^{u/2} / Gamma(u / (2p)) (x^2)^{-(u+1)/2}
//                      exp(-(x^2 / r)^{-p}).
struct NlpSpec {
  double shape = 1.0;  // p
  double scale = 1.0;  // r
  double order = 1.0;  // u
  // Calibration inputs; zero when the spec was built directly.
  double v0 = 0.0;
  double x0 = 0.0;
  // log(p r^{u/2} / Gamma(u / 2p)), cached.
  double log_norm = 0.0;
};

NlpSpec make_nlp(double shape, double scale = 1.0, double order = 1.0);
// -inf at x == 0. Symmetric in x.
double nlp_logpdf(double x, const NlpSpec& spec);
// Exact draw: |x| = sqrt(r) G^{-1/(2p)} with G ~ Gamma(u / 2p), random sign.
double sample_nlp(const NlpSpec& spec, Rng& rng);

// Two-sided standard normal half-width holding this much mass.
inline constexpr double kSpikeMass = 0.999;
double spike_sd(double v0);

// Picks p so that NLP(x0 | p, 1, 1) = N(x0 | 0, v0/3), where x0 bounds the
// central kSpikeMass of the spike N(0, v0/3). When several p match, the
// largest (the slab most strongly repelled from the spike) is returned.
// Throws ConfigError naming the bracket if no p in [p_min, p_max] matches.
NlpSpec calibrate_nlp_shape(double v0, double p_min = 0.05,
                            double p_max = 8.0);

struct StickWeights {
  std::vector<double> sticks;   // V_1..V_H, V_H = 1
  std::vector<double> weights;  // pi_1..pi_H
};

// pi_h = V_h prod_{l<h} (1 - V_l). Throws ConfigError if V_H != 1, a stick
// lies outside [0, 1], or the weights miss 1 by more than 1e-12.
StickWeights stick_breaking_weights(std::span<const double> sticks);

}  // namespace nmarank

#endif  // NMARANK_DISTRIBUTIONS_HPP_
