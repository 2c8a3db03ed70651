#ifndef NMARANK_SIMULATION_HPP_
#define NMARANK_SIMULATION_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "nmarank/dataset.hpp"
#include "nmarank/model.hpp"
#include "nmarank/posterior.hpp"
#include "nmarank/random.hpp"
#include "nmarank/relation.hpp"

namespace nmarank {

struct Scenario {
  int index = 0;           // position in scenario_catalog()
  std::string base;        // "gaussian", "dp-gaussian" or "dp-spike-slab"
  int multiplier = 1;      // effect size, 0, 1 or 2
  double tau = 0.1;        // between-study sd
  std::vector<double> d1;  // base vector times multiplier, d1[0] == 0

  std::string label() const;
};

// Base vectors in catalog order; multipliers {0, 1, 2} and tau {0.05, 0.1}
// vary fastest to slowest as: tau, then multiplier, then base.
std::vector<Scenario> scenario_catalog();

// 55 two-arm studies over treatments "1".."6", bundled with the library.
std::string_view bundled_template_csv();
Dataset bundled_template();

struct SimulationOptions {
  double mu_mean = 0.0;  // mu_{i,b_i} ~ N(mu_mean, mu_sd^2)
  double mu_sd = 0.5;
  double corr = 0.5;
};

struct SimulatedData {
  Dataset data;
  Relation truth;
};

// Ties in the truth are exact equalities between entries of d1.
Relation true_relation(const Scenario& sc);

// Keeps the template's studies, arms, trials and baselines and redraws the
// events. Throws ConfigError if the template does not have d1.size()
// treatments.
SimulatedData generate_dataset(const Scenario& sc, const Dataset& tmpl,
                               Rng& rng, const SimulationOptions& opt = {});

struct RecoveryMetrics {
  double joint_prob_true_graph = 0.0;
  std::vector<double> pair_probs;  // per pair j < k, Pr(true statement)
  bool subgraph_correct = true;
  double subgraph_density = 0.0;
  double subgraph_joint_prob = 1.0;

  double mean_pair_prob() const;
};

RecoveryMetrics evaluate_fit(const Relation& truth, const PosteriorSamples& ps,
                             double threshold = 0.9);

struct SimulationConfig {
  std::vector<int> scenarios;  // catalog indices
  int replicates = 1;
  std::vector<ModelKind> models{ModelKind::GaussianEffects,
                                ModelKind::DpGaussian, ModelKind::DpSpikeSlab};
  McmcConfig mcmc;
  PriorConfig prior;  // v0 is used by the spike-slab fits only
  SimulationOptions data;
  double threshold = 0.9;
  std::uint64_t seed = 1;
  int jobs = 0;  // replicate workers; fits inside run single-threaded
};

struct ModelOutcome {
  ModelKind model;
  std::uint64_t fit_seed = 0;
  RecoveryMetrics metrics;
};

struct ReplicateResult {
  Scenario scenario;
  int replicate = 0;
  std::uint64_t data_seed = 0;
  std::vector<ModelOutcome> outcomes;  // in config.models order
};

// Seeds: data_seed = derive_seed(seed, scenario * 1e6 + replicate) and
// fit_seed = derive_seed(data_seed, 1 + model position). Results come back
// ordered by (scenario, replicate) for any jobs value. `done` is invoked
// once per finished replicate, serialized.
std::vector<ReplicateResult> run_simulation(
    const SimulationConfig& cfg, const Dataset& tmpl,
    const std::function<void(const ReplicateResult&)>& done = {});

// Scenarios are numbered from 1 in both writers.
std::string replicate_to_json(const ReplicateResult& r,
                              const SimulationConfig& cfg);
// Means across replicates per (scenario, model).
std::string aggregate_csv(const std::vector<ReplicateResult>& results);

}  // namespace nmarank

#endif  // NMARANK_SIMULATION_HPP_
