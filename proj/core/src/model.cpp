#include "nmarank/model.hpp"

#include "nmarank/error.hpp"

namespace nmarank {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::GaussianEffects: return "gaussian";
    case ModelKind::DpGaussian: return "dp-gaussian";
    case ModelKind::DpSpikeSlab: return "dp-spike-slab";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "gaussian") return ModelKind::GaussianEffects;
  if (name == "dp-gaussian") return ModelKind::DpGaussian;
  if (name == "dp-spike-slab") return ModelKind::DpSpikeSlab;
  throw ConfigError("unknown model '" + std::string(name) +
                    "' (expected gaussian, dp-gaussian or dp-spike-slab)");
}

PriorConfig PriorConfig::resolved(ModelKind kind, int n_treatments) const {
  PriorConfig out = *this;
  if (!(s_b > 0.0)) throw ConfigError("s_b must be positive");
  if (!(s_ell > 0.0)) throw ConfigError("s_ell must be positive");
  if (!(s_d > 0.0)) throw ConfigError("s_d must be positive");
  if (!(corr >= 0.0 && corr < 1.0)) throw ConfigError("corr must lie in [0, 1)");
  if (is_dp(kind)) {
    if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
    if (out.H == 0) out.H = n_treatments;
    if (out.H < 2) throw ConfigError("truncation H must be >= 2");
  }
  if (kind == ModelKind::DpSpikeSlab) {
    if (!(a_omega > 0.0) || !(b_omega > 0.0)) {
      throw ConfigError("a_omega and b_omega must be positive");
    }
    if (!v0) throw ConfigError("dp-spike-slab requires v0");
    if (!(*v0 > 0.0)) throw ConfigError("v0 must be positive");
    out.nlp = calibrate_nlp_shape(*v0);
  }
  return out;
}

void McmcConfig::validate() const {
  if (chains < 1) throw ConfigError("chains must be >= 1");
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (burn_in < 0 || burn_in >= iterations) {
    throw ConfigError("burn-in must satisfy 0 <= burn_in < iterations");
  }
  if (thin < 1) throw ConfigError("thin must be >= 1");
  if (!(steps.mu > 0.0 && steps.delta > 0.0 && steps.log_tau2 > 0.0 &&
        steps.d > 0.0)) {
    throw ConfigError("proposal step sizes must be positive");
  }
  if (jobs < 0) throw ConfigError("jobs must be >= 0");
}

}  // namespace nmarank
