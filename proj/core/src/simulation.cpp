#include "nmarank/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <thread>

#include "nmarank/distributions.hpp"
#include "nmarank/error.hpp"
#include "nmarank/graph.hpp"

namespace nmarank {

namespace detail {
extern const char kBundledTemplate[];
}

namespace {

struct Base {
  const char* name;
  std::vector<double> d1;
};

const std::vector<Base>& bases() {
  static const std::vector<Base> b{
      {"gaussian", {0.0, -0.6, -0.3, 0.3, 0.6, 0.9}},
      {"dp-gaussian", {0.0, 0.3, -0.3, -0.3, 0.3, 0.3}},
      {"dp-spike-slab", {0.0, 0.3, 0.0, 0.0, 0.3, 0.3}},
  };
  return b;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

std::string Scenario::label() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s-x%d-tau%.2f", base.c_str(), multiplier, tau);
  return buf;
}

std::vector<Scenario> scenario_catalog() {
  std::vector<Scenario> out;
  for (const Base& b : bases()) {
    for (int m : {0, 1, 2}) {
      for (double tau : {0.05, 0.1}) {
        Scenario sc;
        sc.index = static_cast<int>(out.size());
        sc.base = b.name;
        sc.multiplier = m;
        sc.tau = tau;
        for (double v : b.d1) sc.d1.push_back(m * v);
        out.push_back(std::move(sc));
      }
    }
  }
  return out;
}

std::string_view bundled_template_csv() { return detail::kBundledTemplate; }

Dataset bundled_template() {
  ParseOptions opt;
  opt.require_outcomes = false;
  return parse_dataset(bundled_template_csv(), opt);
}

Relation true_relation(const Scenario& sc) {
  return Relation::from_values(sc.d1);
}

SimulatedData generate_dataset(const Scenario& sc, const Dataset& tmpl,
                               Rng& rng, const SimulationOptions& opt) {
  if (tmpl.n_treatments() != static_cast<int>(sc.d1.size())) {
    throw ConfigError("template has " + std::to_string(tmpl.n_treatments()) +
                      " treatments; scenario needs " +
                      std::to_string(sc.d1.size()));
  }
  std::vector<Study> studies = tmpl.studies();
  for (Study& s : studies) {
    const std::size_t b = s.baseline_arm();
    std::vector<double> mean;
    for (std::size_t a = 0; a < s.arms.size(); ++a) {
      if (a != b) mean.push_back(sc.d1[s.arms[a].treatment] - sc.d1[s.baseline]);
    }
    const EquicorrSpec spec{static_cast<int>(mean.size()), sc.tau * sc.tau, opt.corr};
    const std::vector<double> delta = sample_equicorr_mvn(mean, spec, rng);
    const double mu = rng.normal(opt.mu_mean, opt.mu_sd);
    std::size_t c = 0;
    for (std::size_t a = 0; a < s.arms.size(); ++a) {
      const double eta = a == b ? mu : mu + delta[c++];
      s.arms[a].events = rng.binomial(s.arms[a].trials, logistic(eta));
    }
  }
  return {Dataset(std::move(studies), tmpl.labels()), true_relation(sc)};
}

double RecoveryMetrics::mean_pair_prob() const {
  if (pair_probs.empty()) return 0.0;
  double s = 0.0;
  for (double p : pair_probs) s += p;
  return s / static_cast<double>(pair_probs.size());
}

RecoveryMetrics evaluate_fit(const Relation& truth, const PosteriorSamples& ps,
                             double threshold) {
  if (truth.n_treatments() != ps.n_treatments()) {
    throw DataError("truth and samples differ in treatment count");
  }
  const RelationSample rs(ps);
  const RankSummary rank = rank_posterior(rs);
  RecoveryMetrics m;
  long hits = 0;
  for (const Relation& r : rs.relations()) hits += r == truth ? 1 : 0;
  m.joint_prob_true_graph =
      static_cast<double>(hits) / static_cast<double>(rs.size());
  const int n = truth.n_treatments();
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      m.pair_probs.push_back(rank.pp.prob(j, k, truth.at(j, k)));
    }
  }
  const Selection sel = select_subgraph(rank.sequence, threshold, n);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const auto s = sel.graph.statement(j, k);
      if (s && *s != truth.at(j, k)) m.subgraph_correct = false;
    }
  }
  m.subgraph_density = sel.density();
  m.subgraph_joint_prob = sel.graph.joint_prob;
  return m;
}

std::vector<ReplicateResult> run_simulation(
    const SimulationConfig& cfg, const Dataset& tmpl,
    const std::function<void(const ReplicateResult&)>& done) {
  if (cfg.replicates < 1) throw ConfigError("replicates must be >= 1");
  if (cfg.models.empty()) throw ConfigError("no models to fit");
  cfg.mcmc.validate();
  const auto catalog = scenario_catalog();
  std::vector<std::pair<int, int>> tasks;
  for (int s : cfg.scenarios) {
    if (s < 0 || s >= static_cast<int>(catalog.size())) {
      throw ConfigError("scenario index out of range: " + std::to_string(s));
    }
    for (int r = 0; r < cfg.replicates; ++r) tasks.emplace_back(s, r);
  }
  // Surface configuration errors before any work starts.
  for (ModelKind kind : cfg.models) {
    (void)cfg.prior.resolved(kind, tmpl.n_treatments());
  }

  std::vector<ReplicateResult> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::mutex report;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      try {
        const auto [s, r] = tasks[t];
        ReplicateResult res;
        res.scenario = catalog[s];
        res.replicate = r;
        res.data_seed = derive_seed(
            cfg.seed, static_cast<std::uint64_t>(s) * 1000000u +
                          static_cast<std::uint64_t>(r));
        Rng rng(res.data_seed, 0);
        const SimulatedData sim = generate_dataset(res.scenario, tmpl, rng, cfg.data);
        for (std::size_t m = 0; m < cfg.models.size(); ++m) {
          McmcConfig mc = cfg.mcmc;
          mc.seed = derive_seed(res.data_seed, 1 + m);
          mc.jobs = 1;
          const PosteriorSamples ps =
              run_chains(sim.data, cfg.prior, mc, cfg.models[m]);
          res.outcomes.push_back(
              {cfg.models[m], mc.seed, evaluate_fit(sim.truth, ps, cfg.threshold)});
        }
        results[t] = std::move(res);
        if (done) {
          std::lock_guard lock(report);
          done(results[t]);
        }
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  int jobs = cfg.jobs > 0 ? cfg.jobs
                          : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::clamp(jobs, 1, std::max<int>(1, static_cast<int>(tasks.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::string replicate_to_json(const ReplicateResult& r,
                              const SimulationConfig& cfg) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["scenario"] = {{"number", r.scenario.index + 1},
                   {"label", r.scenario.label()},
                   {"base", r.scenario.base},
                   {"multiplier", r.scenario.multiplier},
                   {"tau", r.scenario.tau},
                   {"d1", r.scenario.d1}};
  j["replicate"] = r.replicate;
  j["seed"] = r.data_seed;
  j["metrics"] = ordered_json::array();
  for (const auto& o : r.outcomes) {
    j["metrics"].push_back({{"model", std::string(to_string(o.model))},
                            {"fit_seed", o.fit_seed},
                            {"joint_prob_true_graph", o.metrics.joint_prob_true_graph},
                            {"pair_probs", o.metrics.pair_probs},
                            {"mean_pair_prob", o.metrics.mean_pair_prob()},
                            {"subgraph_correct", o.metrics.subgraph_correct},
                            {"subgraph_density", o.metrics.subgraph_density},
                            {"subgraph_joint_prob", o.metrics.subgraph_joint_prob}});
  }
  j["mcmc_config"] = {{"chains", cfg.mcmc.chains},
                      {"iterations", cfg.mcmc.iterations},
                      {"burn_in", cfg.mcmc.burn_in},
                      {"thin", cfg.mcmc.thin},
                      {"adapt", cfg.mcmc.adapt},
                      {"threshold", cfg.threshold}};
  if (cfg.prior.v0) j["mcmc_config"]["v0"] = *cfg.prior.v0;
  return j.dump(2) + "\n";
}

std::string aggregate_csv(const std::vector<ReplicateResult>& results) {
  struct Acc {
    std::string label;
    long n = 0;
    double joint = 0.0, pair = 0.0, correct = 0.0, density = 0.0;
  };
  std::map<std::pair<int, std::string>, Acc> acc;
  for (const auto& r : results) {
    for (const auto& o : r.outcomes) {
      Acc& a = acc[{r.scenario.index, std::string(to_string(o.model))}];
      a.label = r.scenario.label();
      ++a.n;
      a.joint += o.metrics.joint_prob_true_graph;
      a.pair += o.metrics.mean_pair_prob();
      a.correct += o.metrics.subgraph_correct ? 1.0 : 0.0;
      a.density += o.metrics.subgraph_density;
    }
  }
  std::string out =
      "scenario,label,model,replicates,joint_prob,mean_pair_prob,"
      "subgraph_correct,subgraph_density\n";
  for (const auto& [key, a] : acc) {
    out += std::to_string(key.first + 1) + "," + a.label + "," + key.second + "," +
           std::to_string(a.n) + "," + format_double(a.joint / a.n) + "," +
           format_double(a.pair / a.n) + "," + format_double(a.correct / a.n) +
           "," + format_double(a.density / a.n) + "\n";
  }
  return out;
}

}  // namespace nmarank
