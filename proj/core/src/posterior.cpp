#include "nmarank/posterior.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <thread>

#include "nmarank/error.hpp"

namespace nmarank {

PosteriorSamples::PosteriorSamples(ModelKind kind, int n_treatments,
                                   std::vector<Draw> draws,
                                   std::vector<std::string> labels,
                                   std::vector<ChainReport> chains)
    : kind_(kind),
      n_treatments_(n_treatments),
      draws_(std::move(draws)),
      labels_(std::move(labels)),
      chains_(std::move(chains)) {
  if (n_treatments_ < 2) throw DataError("samples need at least 2 treatments");
  if (labels_.empty()) {
    for (int k = 0; k < n_treatments_; ++k) labels_.push_back(std::to_string(k + 1));
  }
  if (static_cast<int>(labels_.size()) != n_treatments_) {
    throw DataError("label count does not match the number of treatments");
  }
  for (const Draw& d : draws_) {
    if (static_cast<int>(d.d.size()) != n_treatments_) {
      throw DataError("draw has wrong number of treatment effects");
    }
    if (is_dp(kind_) && static_cast<int>(d.cluster.size()) != n_treatments_ &&
        !d.cluster.empty()) {
      throw DataError("draw has wrong number of cluster labels");
    }
    if (kind_ == ModelKind::DpSpikeSlab &&
        static_cast<int>(d.spike.size()) != n_treatments_) {
      throw DataError("spike-slab draw lacks spike flags");
    }
  }
}

Draw record_draw(const Sampler& sampler, const ChainState& st, int chain,
                 long iteration) {
  const int K = sampler.n_treatments();
  Draw out;
  out.chain = chain;
  out.iteration = iteration;
  out.d.resize(K);
  for (int k = 0; k < K; ++k) out.d[k] = sampler.effective_d(st, k);
  out.tau2 = st.tau2;
  if (is_dp(sampler.kind())) out.cluster = st.labels;
  if (sampler.kind() == ModelKind::DpSpikeSlab) {
    out.spike.resize(K);
    out.spike[0] = 1;
    for (int k = 1; k < K; ++k) out.spike[k] = st.spike[st.labels[k]] ? 1 : 0;
    out.omega0 = st.omega0;
  }
  return out;
}

namespace {

constexpr long kAdaptBatch = 50;
constexpr double kTargetAcceptance = 0.44;

struct ChainResult {
  std::vector<Draw> draws;
  ChainReport report;
};

void adapt_step(double& step, BlockCounter& batch, long batch_no) {
  if (batch.proposed == 0) return;
  const double gain = 1.0 / std::sqrt(static_cast<double>(batch_no));
  step *= std::exp(gain * (batch.rate() - kTargetAcceptance));
  batch = {};
}

ChainResult run_one_chain(const Sampler& sampler, const McmcConfig& mc,
                          int chain) {
  Rng rng(mc.seed, static_cast<std::uint64_t>(chain));
  ChainState st = sampler.init_chain(rng);
  ProposalSteps steps = mc.steps;
  AcceptanceStats stats;
  AcceptanceStats batch;
  ChainResult out;
  out.draws.reserve(static_cast<std::size_t>(mc.kept_per_chain()));
  long batch_no = 0;
  for (long it = 0; it < mc.iterations; ++it) {
    if (it == mc.burn_in) stats = {};
    AcceptanceStats& counter = (mc.adapt && it < mc.burn_in) ? batch : stats;
    sampler.sweep(st, steps, rng, counter);
    if (mc.adapt && it < mc.burn_in && (it + 1) % kAdaptBatch == 0) {
      ++batch_no;
      adapt_step(steps.mu, batch.mu, batch_no);
      adapt_step(steps.delta, batch.delta, batch_no);
      adapt_step(steps.log_tau2, batch.tau, batch_no);
      adapt_step(steps.d, batch.d, batch_no);
    }
    if (it >= mc.burn_in && (it - mc.burn_in + 1) % mc.thin == 0) {
      out.draws.push_back(record_draw(sampler, st, chain + 1, it + 1));
    }
  }
  out.report.chain = chain + 1;
  out.report.acceptance = stats;
  out.report.steps = steps;
  return out;
}

}  // namespace

PosteriorSamples run_chains(const Dataset& data, const PriorConfig& prior,
                            const McmcConfig& mc, ModelKind kind) {
  mc.validate();
  const Sampler sampler(data, prior, kind);
  if (!validate_network(data).connected) {
    throw DataError("treatment network is disconnected; cannot fit");
  }
  std::vector<ChainResult> results(mc.chains);
  std::vector<std::exception_ptr> errors(mc.chains);
  int jobs = mc.jobs > 0 ? mc.jobs
                         : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::clamp(jobs, 1, mc.chains);

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int c = next++; c < mc.chains; c = next++) {
      try {
        results[c] = run_one_chain(sampler, mc, c);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<Draw> draws;
  std::vector<ChainReport> reports;
  for (auto& r : results) {
    draws.insert(draws.end(), std::make_move_iterator(r.draws.begin()),
                 std::make_move_iterator(r.draws.end()));
    reports.push_back(r.report);
  }
  return PosteriorSamples(kind, data.n_treatments(), std::move(draws),
                          data.labels(), std::move(reports));
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_jsonl(std::ostream& out, const PosteriorSamples& samples) {
  const std::string model(to_string(samples.kind()));
  std::string line;
  for (const Draw& d : samples.draws()) {
    line.clear();
    line += "{\"chain\":" + std::to_string(d.chain);
    line += ",\"iter\":" + std::to_string(d.iteration);
    line += ",\"model\":\"" + model + "\"";
    line += ",\"d\":[";
    for (std::size_t k = 0; k < d.d.size(); ++k) {
      if (k) line += ',';
      line += format_double(d.d[k]);
    }
    line += "],\"spike\":";
    if (d.spike.empty()) {
      line += "null";
    } else {
      line += '[';
      for (std::size_t k = 0; k < d.spike.size(); ++k) {
        if (k) line += ',';
        line += d.spike[k] ? "true" : "false";
      }
      line += ']';
    }
    line += ",\"cluster\":";
    if (d.cluster.empty()) {
      line += "null";
    } else {
      line += '[';
      for (std::size_t k = 0; k < d.cluster.size(); ++k) {
        if (k) line += ',';
        line += d.cluster[k] < 0 ? std::string("null")
                                 : std::to_string(d.cluster[k] + 1);
      }
      line += ']';
    }
    line += ",\"tau2\":" + format_double(d.tau2);
    line += ",\"omega0\":";
    line += d.omega0 ? format_double(*d.omega0) : std::string("null");
    line += "}\n";
    out << line;
  }
}

PosteriorSamples read_jsonl(std::istream& in, std::vector<std::string> labels) {
  using nlohmann::json;
  std::vector<Draw> draws;
  std::optional<ModelKind> kind;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fail = [&](const std::string& what) {
      throw DataError("samples line " + std::to_string(line_no) + ": " + what);
    };
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      fail(e.what());
    }
    try {
      Draw d;
      d.chain = j.at("chain").get<int>();
      d.iteration = j.at("iter").get<long>();
      const ModelKind k = parse_model_kind(j.at("model").get<std::string>());
      if (kind && *kind != k) fail("mixed model kinds");
      kind = k;
      d.d = j.at("d").get<std::vector<double>>();
      if (j.contains("spike") && !j["spike"].is_null()) {
        for (const auto& v : j["spike"]) d.spike.push_back(v.get<bool>() ? 1 : 0);
      }
      if (j.contains("cluster") && !j["cluster"].is_null()) {
        for (const auto& v : j["cluster"]) {
          d.cluster.push_back(v.is_null() ? -1 : v.get<int>() - 1);
        }
      }
      d.tau2 = j.at("tau2").get<double>();
      if (j.contains("omega0") && !j["omega0"].is_null()) {
        d.omega0 = j["omega0"].get<double>();
      }
      draws.push_back(std::move(d));
    } catch (const json::exception& e) {
      fail(e.what());
    } catch (const ConfigError& e) {
      fail(e.what());
    }
  }
  if (draws.empty()) throw DataError("samples file contains no draws");
  const int K = static_cast<int>(draws.front().d.size());
  return PosteriorSamples(*kind, K, std::move(draws), std::move(labels));
}

}  // namespace nmarank
