#include "nmarank/distributions.hpp"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "nmarank/error.hpp"

namespace nmarank {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double normal_logpdf(double x, double mean, double sd) {
  if (!(sd > 0.0)) throw ConfigError("normal_logpdf: sd must be positive");
  const double z = (x - mean) / sd;
  return -0.5 * z * z - std::log(sd) - kLogSqrt2Pi;
}

double lognormal_logpdf(double x, double meanlog, double sdlog) {
  if (!(sdlog > 0.0)) throw ConfigError("lognormal_logpdf: sd must be positive");
  if (x <= 0.0) return kNegInf;
  const double lx = std::log(x);
  return normal_logpdf(lx, meanlog, sdlog) - lx;
}

double beta_logpdf(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw ConfigError("beta_logpdf: shapes must be positive");
  }
  if (x < 0.0 || x > 1.0) return kNegInf;
  const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  // xlogy-style handling of the endpoints.
  const double t1 = (a == 1.0) ? 0.0 : (a - 1.0) * std::log(x);
  const double t2 = (b == 1.0) ? 0.0 : (b - 1.0) * std::log1p(-x);
  return t1 + t2 - log_beta;
}

double log_binomial_coefficient(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binomial_logpmf(int y, int n, double prob) {
  if (n < 0 || !(prob >= 0.0 && prob <= 1.0)) {
    throw ConfigError("binomial_logpmf: invalid parameters");
  }
  if (y < 0 || y > n) return kNegInf;
  double out = log_binomial_coefficient(n, y);
  if (y > 0) out += y * std::log(prob);
  if (n - y > 0) out += (n - y) * std::log1p(-prob);
  return out;
}

double log_logistic(double x) {
  // -softplus(-x) = -(max(-x, 0) + log1p(exp(-|x|)))
  return -(std::max(-x, 0.0) + std::log1p(std::exp(-std::abs(x))));
}

double binomial_logit_kernel(int y, int n, double eta) {
  double out = 0.0;
  if (y > 0) out += y * log_logistic(eta);
  if (n - y > 0) out += (n - y) * log_logistic(-eta);
  return out;
}

double log_sum_exp(std::span<const double> values) {
  double m = kNegInf;
  for (double v : values) m = std::max(m, v);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double v : values) s += std::exp(v - m);
  return m + std::log(s);
}

void EquicorrSpec::validate() const {
  if (dim < 1) throw ConfigError("equicorrelated MVN: dimension must be >= 1");
  if (!(tau2 > 0.0)) throw ConfigError("equicorrelated MVN: tau2 must be > 0");
  if (!(corr >= 0.0 && corr < 1.0)) {
    throw ConfigError("equicorrelated MVN: correlation must lie in [0, 1)");
  }
  if (!(1.0 + (dim - 1) * corr > 0.0)) {
    throw ConfigError("equicorrelated MVN: covariance not positive definite");
  }
}

double EquicorrSpec::log_det() const {
  return dim * std::log(tau2) + (dim - 1) * std::log1p(-corr) +
         std::log1p((dim - 1) * corr);
}

double equicorr_mvn_logpdf(std::span<const double> x,
                           std::span<const double> mean,
                           const EquicorrSpec& spec) {
  if (x.size() != mean.size() || static_cast<int>(x.size()) != spec.dim) {
    throw ConfigError("equicorr_mvn_logpdf: dimension mismatch");
  }
  if (!(spec.tau2 > 0.0)) {
    throw ConfigError("equicorr_mvn_logpdf: tau2 must be positive");
  }
  const int t = spec.dim;
  const double g = spec.corr;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < t; ++i) {
    const double r = x[i] - mean[i];
    sum += r;
    sum_sq += r * r;
  }
  // r' S^{-1} r with S^{-1} = [I - g/(1+(t-1)g) J] / (tau2 (1-g)).
  const double quad =
      (sum_sq - g / (1.0 + (t - 1) * g) * sum * sum) / (spec.tau2 * (1.0 - g));
  return -0.5 * quad - 0.5 * spec.log_det() - t * kLogSqrt2Pi;
}

std::vector<double> equicorr_precision(const EquicorrSpec& spec) {
  spec.validate();
  const int t = spec.dim;
  const double g = spec.corr;
  const double c = 1.0 / (spec.tau2 * (1.0 - g));
  const double off = g / (1.0 + (t - 1) * g);
  std::vector<double> out(static_cast<std::size_t>(t) * t);
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j < t; ++j) {
      out[i * t + j] = c * ((i == j ? 1.0 : 0.0) - off);
    }
  }
  return out;
}

double equicorr_det(const EquicorrSpec& spec) {
  spec.validate();
  const int t = spec.dim;
  return std::pow(spec.tau2, t) * std::pow(1.0 - spec.corr, t - 1) *
         (1.0 + (t - 1) * spec.corr);
}

std::vector<double> sample_equicorr_mvn(std::span<const double> mean,
                                        const EquicorrSpec& spec, Rng& rng) {
  std::vector<double> out(mean.begin(), mean.end());
  if (spec.tau2 < 1e-300) return out;
  spec.validate();
  if (static_cast<int>(mean.size()) != spec.dim) {
    throw ConfigError("sample_equicorr_mvn: dimension mismatch");
  }
  const double shared = std::sqrt(spec.corr * spec.tau2) * rng.normal();
  const double own_sd = std::sqrt((1.0 - spec.corr) * spec.tau2);
  for (double& v : out) v += shared + own_sd * rng.normal();
  return out;
}

NlpSpec make_nlp(double shape, double scale, double order) {
  if (!(shape > 0.0) || !(scale > 0.0) || !(order > 0.0)) {
    throw ConfigError("nonlocal prior: p, r and u must be positive");
  }
  NlpSpec s;
  s.shape = shape;
  s.scale = scale;
  s.order = order;
  s.log_norm = std::log(shape) + 0.5 * order * std::log(scale) -
               std::lgamma(order / (2.0 * shape));
  return s;
}

double nlp_logpdf(double x, const NlpSpec& spec) {
  const double x2 = x * x;
  if (x2 == 0.0) return kNegInf;
  return spec.log_norm - 0.5 * (spec.order + 1.0) * std::log(x2) -
         std::pow(x2 / spec.scale, -spec.shape);
}

double sample_nlp(const NlpSpec& spec, Rng& rng) {
  const double g = rng.gamma(spec.order / (2.0 * spec.shape));
  const double magnitude =
      std::sqrt(spec.scale) * std::pow(g, -1.0 / (2.0 * spec.shape));
  return rng.bernoulli(0.5) ? magnitude : -magnitude;
}

double spike_sd(double v0) { return v0 / 3.0; }

NlpSpec calibrate_nlp_shape(double v0, double p_min, double p_max) {
  if (!(v0 > 0.0)) throw ConfigError("v0 must be positive");
  if (!(p_min > 0.0 && p_max > p_min)) {
    throw ConfigError("calibrate_nlp_shape: invalid search bracket");
  }
  const double sd = spike_sd(v0);
  const double z = std::sqrt(2.0) * boost::math::erf_inv(kSpikeMass);
  const double x0 = z * sd;
  const double target = std::exp(normal_logpdf(x0, 0.0, sd));
  auto residual = [&](double p) {
    return std::exp(nlp_logpdf(x0, make_nlp(p))) - target;
  };

  // Scan downward on a log grid for the largest sign change, then bisect.
  constexpr int kGrid = 400;
  const double ratio = std::pow(p_max / p_min, 1.0 / kGrid);
  double hi = p_max;
  double f_hi = residual(hi);
  double lo = 0.0;
  bool bracketed = false;
  for (int i = kGrid - 1; i >= 0; --i) {
    const double p = (i == 0) ? p_min : p_min * std::pow(ratio, i);
    const double f = residual(p);
    if (f == 0.0) {
      lo = hi = p;
      bracketed = true;
      break;
    }
    if ((f < 0.0) != (f_hi < 0.0)) {
      lo = p;
      bracketed = true;
      break;
    }
    hi = p;
    f_hi = f;
  }
  if (!bracketed) {
    std::ostringstream msg;
    msg << "calibrate_nlp_shape: no sign change of NLP(x0|p,1,1) - N(x0|0,v0/3)"
        << " for v0=" << v0 << " on p in [" << p_min << ", " << p_max << "]";
    throw ConfigError(msg.str());
  }
  for (int it = 0; it < 200 && lo != hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = residual(mid);
    if (f_mid == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((f_mid < 0.0) == (f_hi < 0.0)) {
      hi = mid;
      f_hi = f_mid;
    } else {
      lo = mid;
    }
  }
  const double p = std::abs(residual(lo)) <= std::abs(residual(hi)) ? lo : hi;
  if (!(std::abs(residual(p)) < 1e-10)) {
    std::ostringstream msg;
    msg << "calibrate_nlp_shape: bisection did not reach tolerance for v0="
        << v0;
    throw ConfigError(msg.str());
  }
  NlpSpec out = make_nlp(p);
  out.v0 = v0;
  out.x0 = x0;
  return out;
}

StickWeights stick_breaking_weights(std::span<const double> sticks) {
  if (sticks.empty()) throw ConfigError("stick-breaking: no sticks");
  if (sticks.back() != 1.0) throw ConfigError("stick-breaking: V_H must be 1");
  StickWeights out;
  out.sticks.assign(sticks.begin(), sticks.end());
  out.weights.resize(sticks.size());
  double remaining = 1.0;
  double total = 0.0;
  for (std::size_t h = 0; h < sticks.size(); ++h) {
    const double v = sticks[h];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ConfigError("stick-breaking: V outside [0, 1]");
    }
    out.weights[h] = v * remaining;
    remaining *= 1.0 - v;
    total += out.weights[h];
  }
  if (std::abs(1.0 - total) > 1e-12) {
    throw ConfigError("stick-breaking: weights do not sum to 1");
  }
  return out;
}

}  // namespace nmarank
