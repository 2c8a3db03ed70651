#include "cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "nmarank/dataset.hpp"
#include "nmarank/error.hpp"
#include "nmarank/graph.hpp"
#include "nmarank/league.hpp"
#include "nmarank/posterior.hpp"
#include "nmarank/simulation.hpp"

namespace nmarank::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  char buf[1 << 15];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  }
  return hex.str();
}

namespace {

struct MissingOption : ConfigError {
  using ConfigError::ConfigError;
};

struct Profile {
  int chains;
  long iterations;
  long burn_in;
  long thin;
};

Profile mcmc_profile(const std::string& name) {
  if (name == "desk") return {4, 20000, 10000, 10};
  if (name == "paper") return {5, 200000, 100000, 100};
  throw ConfigError("unknown --mcmc profile '" + name + "' (expected desk or paper)");
}

// Options shared by fit and simulate.
struct McmcArgs {
  std::string profile = "desk";
  std::optional<int> chains;
  std::optional<long> iters;
  std::optional<long> burn;
  std::optional<long> thin;
  std::uint64_t seed = 1;
  bool adapt = false;
  ProposalSteps steps;
  int jobs = 0;

  void add(CLI::App* app) {
    app->add_option("--mcmc", profile, "MCMC profile: desk or paper");
    app->add_option("--chains", chains, "Number of chains");
    app->add_option("--iters", iters, "Iterations per chain");
    app->add_option("--burn", burn, "Burn-in iterations");
    app->add_option("--thin", thin, "Thinning interval");
    app->add_option("--seed", seed, "Master seed");
    app->add_flag("--adapt", adapt, "Adapt step sizes during burn-in");
    app->add_option("--step-mu", steps.mu, "Proposal sd for mu");
    app->add_option("--step-delta", steps.delta, "Proposal sd for delta");
    app->add_option("--step-tau", steps.log_tau2, "Proposal sd for log tau^2");
    app->add_option("--step-d", steps.d, "Proposal sd for d or atoms");
    app->add_option("--jobs", jobs, "Worker threads (0: all cores)")
        ->envname("NMARANK_JOBS");
  }

  McmcConfig resolve() const {
    const Profile p = mcmc_profile(profile);
    McmcConfig mc;
    mc.chains = chains.value_or(p.chains);
    mc.iterations = iters.value_or(p.iterations);
    mc.burn_in = burn.value_or(p.burn_in);
    mc.thin = thin.value_or(p.thin);
    mc.seed = seed;
    mc.adapt = adapt;
    mc.steps = steps;
    mc.jobs = jobs;
    mc.validate();
    return mc;
  }

  void to_json(ordered_json& j, const McmcConfig& mc) const {
    j["mcmc"] = profile;
    j["chains"] = mc.chains;
    j["iters"] = mc.iterations;
    j["burn"] = mc.burn_in;
    j["thin"] = mc.thin;
    j["seed"] = mc.seed;
    j["adapt"] = mc.adapt;
    j["step-mu"] = mc.steps.mu;
    j["step-delta"] = mc.steps.delta;
    j["step-tau"] = mc.steps.log_tau2;
    j["step-d"] = mc.steps.d;
  }
};

struct PriorArgs {
  PriorConfig prior;

  void add(CLI::App* app) {
    app->add_option("--m-b", prior.m_b, "Baseline effect prior mean");
    app->add_option("--s-b", prior.s_b, "Baseline effect prior sd");
    app->add_option("--m-ell", prior.m_ell, "Mean of log tau^2");
    app->add_option("--s-ell", prior.s_ell, "Sd of log tau^2");
    app->add_option("--m-d", prior.m_d, "Effect prior mean");
    app->add_option("--s-d", prior.s_d, "Effect prior sd");
    app->add_option("--corr", prior.corr, "Within-study correlation");
    app->add_option("--alpha-dp", prior.alpha, "DP concentration");
    app->add_option("--H", prior.H, "Stick-breaking truncation (0: K)");
    app->add_option("--v0", prior.v0, "Zero-effect half-width (dp-spike-slab)");
    app->add_option("--a-omega", prior.a_omega, "Beta prior a for omega0");
    app->add_option("--b-omega", prior.b_omega, "Beta prior b for omega0");
  }

  void to_json(ordered_json& j) const {
    j["m-b"] = prior.m_b;
    j["s-b"] = prior.s_b;
    j["m-ell"] = prior.m_ell;
    j["s-ell"] = prior.s_ell;
    j["m-d"] = prior.m_d;
    j["s-d"] = prior.s_d;
    j["corr"] = prior.corr;
    j["alpha-dp"] = prior.alpha;
    j["H"] = prior.H;
    if (prior.v0) j["v0"] = *prior.v0;
    j["a-omega"] = prior.a_omega;
    j["b-omega"] = prior.b_omega;
  }
};

std::string scalar_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  throw ConfigError("config value must be a scalar or an array of scalars");
}

// Fills every option of `app` not given on the command line from `cfg`,
// whose keys are long flag names without the leading dashes.
void apply_config(CLI::App* app, const nlohmann::json& cfg) {
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    if (key == "config") continue;
    CLI::Option* opt = app->get_option_no_throw("--" + key);
    if (opt == nullptr) throw ConfigError("unknown config key '" + key + "'");
    if (opt->count() > 0 || value.is_null()) continue;
    std::vector<std::string> vals;
    if (value.is_array()) {
      for (const auto& v : value) vals.push_back(scalar_text(v));
    } else {
      vals.push_back(scalar_text(value));
    }
    try {
      opt->add_result(vals);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
}

nlohmann::json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

fs::path prepare_out(const std::string& out) {
  if (out.empty()) throw MissingOption("--out is required");
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

struct Manifest {
  std::string command;
  ordered_json config = ordered_json::object();
  std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
  std::vector<std::string> outputs;
  std::vector<std::string> labels;

  void add_input(const std::string& path) {
    inputs.emplace_back(path, sha256_file(path));
  }

  void write(const fs::path& dir) const {
    ordered_json j;
    j["tool"] = "nmarank";
    j["version"] = kVersion;
    j["command"] = command;
    j["config"] = config;
    j["inputs"] = ordered_json::array();
    for (const auto& [p, d] : inputs) j["inputs"].push_back({{"path", p}, {"sha256", d}});
    j["outputs"] = ordered_json::array();
    for (const auto& o : outputs) {
      j["outputs"].push_back({{"path", o}, {"sha256", sha256_file(dir / o)}});
    }
    if (!labels.empty()) j["labels"] = labels;
    write_file(dir / "manifest.json", j.dump(2) + "\n");
  }
};

// Labels recorded by `fit` next to the samples, if any.
std::vector<std::string> sibling_labels(const fs::path& samples) {
  const fs::path m = samples.parent_path() / "manifest.json";
  std::error_code ec;
  if (!fs::exists(m, ec)) return {};
  std::ifstream in(m);
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.contains("labels")) return j["labels"].get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception&) {
  }
  return {};
}

PosteriorSamples load_samples(const std::string& path) {
  if (path.empty()) throw MissingOption("--samples is required");
  std::ifstream in(path);
  if (!in) throw DataError("cannot read samples " + path);
  return read_jsonl(in, sibling_labels(path));
}

// ---------------------------------------------------------------- commands

struct FitCmd {
  std::string input;
  std::optional<std::string> reference;
  std::string model;
  std::string out;
  McmcArgs mcmc;
  PriorArgs priors;

  void add(CLI::App* app) {
    app->add_option("--input", input, "Dataset CSV");
    app->add_option("--reference", reference, "Reference treatment label");
    app->add_option("--model", model, "gaussian, dp-gaussian or dp-spike-slab");
    app->add_option("--out", out, "Output directory");
    mcmc.add(app);
    priors.add(app);
  }

  int run(std::ostream& os) {
    if (input.empty()) throw MissingOption("--input is required");
    if (model.empty()) throw MissingOption("--model is required");
    const ModelKind kind = parse_model_kind(model);
    const McmcConfig mc = mcmc.resolve();
    ParseOptions po;
    po.reference = reference;
    const Dataset data = read_dataset(input, po);
    (void)priors.prior.resolved(kind, data.n_treatments());
    const fs::path dir = prepare_out(out);

    Manifest man;
    man.command = "fit";
    man.config["input"] = input;
    if (reference) man.config["reference"] = *reference;
    man.config["model"] = model;
    mcmc.to_json(man.config, mc);
    priors.to_json(man.config);
    man.add_input(input);
    man.labels = data.labels();

    const PosteriorSamples ps = run_chains(data, priors.prior, mc, kind);
    {
      std::ofstream f(dir / "samples.jsonl", std::ios::binary);
      write_jsonl(f, ps);
      if (!f) throw std::runtime_error("cannot write samples");
    }
    man.outputs.push_back("samples.jsonl");
    man.write(dir);

    os << "model " << to_string(kind) << ": " << ps.size() << " kept draws from "
       << mc.chains << " chains\n";
    os << "acceptance (post burn-in):\n";
    for (const ChainReport& c : ps.chains()) {
      os << "  chain " << c.chain << std::fixed << std::setprecision(3)
         << "  mu " << c.acceptance.mu.rate() << "  delta "
         << c.acceptance.delta.rate() << "  log-tau2 " << c.acceptance.tau.rate()
         << "  d " << c.acceptance.d.rate() << "\n";
      os.unsetf(std::ios::floatfield);
    }
    return kOk;
  }
};

struct RankCmd {
  std::string samples;
  std::optional<double> threshold;
  std::string out;

  void add(CLI::App* app) {
    app->add_option("--samples", samples, "Samples JSON-lines from fit");
    app->add_option("--threshold", threshold,
                    "Also select the densest graph with joint probability >= this");
    app->add_option("--out", out, "Output directory");
  }

  int run(std::ostream& os) {
    const PosteriorSamples ps = load_samples(samples);
    if (threshold && !(*threshold > 0.0 && *threshold <= 1.0)) {
      throw ConfigError("--threshold must lie in (0, 1]");
    }
    const fs::path dir = prepare_out(out);
    const auto& labels = ps.labels();
    const RelationSample rs(ps);
    const RankSummary rank = rank_posterior(rs);

    Manifest man;
    man.command = "rank";
    man.config["samples"] = samples;
    if (threshold) man.config["threshold"] = *threshold;
    man.add_input(samples);

    auto emit = [&](const std::string& stem, const ComparisonGraph& g) {
      write_file(dir / (stem + ".dot"), to_dot(g, labels));
      write_file(dir / (stem + ".json"), to_json(g, labels));
      man.outputs.push_back(stem + ".dot");
      man.outputs.push_back(stem + ".json");
    };
    emit("initial", rank.tilde);
    emit("closest", rank.e0);

    ordered_json index;
    index["draws"] = ps.size();
    index["model"] = std::string(to_string(ps.kind()));
    index["closest_distance"] = rank.e0_distance;
    index["closest_joint_prob"] = rank.e0.joint_prob;
    index["sequence"] = ordered_json::array();
    for (std::size_t i = 0; i < rank.sequence.size(); ++i) {
      char stem[32];
      std::snprintf(stem, sizeof stem, "trim_%02zu", i + 1);
      const ComparisonGraph& g = rank.sequence[i];
      emit(stem, g);
      index["sequence"].push_back({{"graph", std::string(stem) + ".dot"},
                                   {"gamma", g.gamma},
                                   {"joint_prob", g.joint_prob},
                                   {"pairs", g.size()},
                                   {"density", g.density()}});
    }
    if (threshold) {
      const Selection sel = select_subgraph(rank.sequence, *threshold, ps.n_treatments());
      emit("selected", sel.graph);
      index["selected"] = {{"threshold", *threshold},
                           {"found", sel.found},
                           {"joint_prob", sel.graph.joint_prob},
                           {"density", sel.density()}};
    }
    write_file(dir / "index.json", index.dump(2) + "\n");
    man.outputs.push_back("index.json");
    man.write(dir);

    os << rank.sequence.size() << " trimmed graphs; closest coherent graph at distance "
       << rank.e0_distance << " with joint probability " << rank.e0.joint_prob << "\n";
    return kOk;
  }
};

struct LeagueCmd {
  std::string samples;
  double alpha = 0.05;
  std::string triangle = "both";
  std::string out;

  void add(CLI::App* app) {
    app->add_option("--samples", samples, "Samples JSON-lines from fit");
    app->add_option("--alpha", alpha, "Credible level is 1 - alpha");
    app->add_option("--triangle", triangle, "both, upper or lower");
    app->add_option("--out", out, "Output directory");
  }

  int run(std::ostream& os) {
    Triangle tri;
    if (triangle == "both") {
      tri = Triangle::Both;
    } else if (triangle == "upper") {
      tri = Triangle::Upper;
    } else if (triangle == "lower") {
      tri = Triangle::Lower;
    } else {
      throw ConfigError("--triangle must be both, upper or lower");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("--alpha must lie in (0, 1)");
    const PosteriorSamples ps = load_samples(samples);
    const fs::path dir = prepare_out(out);
    const LeagueTable t = league_table(ps, alpha, {}, tri);

    Manifest man;
    man.command = "league";
    man.config["samples"] = samples;
    man.config["alpha"] = alpha;
    man.config["triangle"] = triangle;
    man.add_input(samples);
    write_file(dir / "league.csv", league_to_csv(t));
    const std::string md = league_to_markdown(t);
    write_file(dir / "league.md", md);
    man.outputs = {"league.csv", "league.md"};
    man.write(dir);
    os << md;
    return kOk;
  }
};

struct SimulateCmd {
  std::string scenario = "all";
  int replicates = 1;
  std::vector<std::string> models{"gaussian", "dp-gaussian", "dp-spike-slab"};
  std::optional<std::string> template_path;
  double threshold = 0.9;
  double mu_sd = 0.5;
  std::string out;
  McmcArgs mcmc;
  PriorArgs priors;

  void add(CLI::App* app) {
    app->add_option("--scenario", scenario, "Scenario number(s) 1..18, comma separated, or all");
    app->add_option("--replicates", replicates, "Replicates per scenario");
    app->add_option("--models", models, "Models to fit")->delimiter(',');
    app->add_option("--template", template_path, "Template network CSV (no events column)");
    app->add_option("--threshold", threshold, "Sub-graph selection threshold");
    app->add_option("--mu-sd", mu_sd, "Sd of the simulated baseline effects");
    app->add_option("--out", out, "Output directory");
    mcmc.add(app);
    priors.add(app);
    priors.prior.v0 = 0.05;
  }

  std::vector<int> scenario_indices() const {
    const int n = static_cast<int>(scenario_catalog().size());
    std::vector<int> out;
    if (scenario == "all") {
      for (int i = 0; i < n; ++i) out.push_back(i);
      return out;
    }
    std::stringstream ss(scenario);
    std::string item;
    while (std::getline(ss, item, ',')) {
      int v = 0;
      try {
        std::size_t used = 0;
        v = std::stoi(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ConfigError("bad --scenario entry '" + item + "'");
      }
      if (v < 1 || v > n) throw ConfigError("--scenario must lie in 1.." + std::to_string(n));
      out.push_back(v - 1);
    }
    if (out.empty()) throw ConfigError("--scenario is empty");
    return out;
  }

  int run(std::ostream& os) {
    SimulationConfig cfg;
    cfg.scenarios = scenario_indices();
    cfg.replicates = replicates;
    cfg.models.clear();
    for (const auto& m : models) cfg.models.push_back(parse_model_kind(m));
    cfg.mcmc = mcmc.resolve();
    cfg.prior = priors.prior;
    cfg.data.mu_sd = mu_sd;
    cfg.threshold = threshold;
    cfg.seed = mcmc.seed;
    cfg.jobs = mcmc.jobs;
    if (!(threshold > 0.0 && threshold <= 1.0)) throw ConfigError("--threshold must lie in (0, 1]");
    if (!(mu_sd >= 0.0)) throw ConfigError("--mu-sd must be nonnegative");

    Manifest man;
    man.command = "simulate";
    Dataset tmpl = bundled_template();
    if (template_path) {
      ParseOptions po;
      po.require_outcomes = false;
      tmpl = read_dataset(*template_path, po);
      man.add_input(*template_path);
      man.config["template"] = *template_path;
    }
    const fs::path dir = prepare_out(out);
    man.config["scenario"] = scenario;
    man.config["replicates"] = replicates;
    man.config["models"] = models;
    man.config["threshold"] = threshold;
    man.config["mu-sd"] = mu_sd;
    mcmc.to_json(man.config, cfg.mcmc);
    priors.to_json(man.config);

    auto name = [](const ReplicateResult& r) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "scenario_%02d_rep_%03d.json", r.scenario.index + 1,
                    r.replicate + 1);
      return std::string(buf);
    };
    const auto results = run_simulation(cfg, tmpl, [&](const ReplicateResult& r) {
      os << "done " << r.scenario.label() << " replicate " << r.replicate + 1 << "\n";
    });
    for (const auto& r : results) {
      write_file(dir / name(r), replicate_to_json(r, cfg));
      man.outputs.push_back(name(r));
    }
    write_file(dir / "summary.csv", aggregate_csv(results));
    man.outputs.push_back("summary.csv");
    man.write(dir);
    os << results.size() << " replicate files written to " << dir.string() << "\n";
    return kOk;
  }
};

struct Invocation {
  CLI::App app{"Bayesian network meta-analysis with coherent treatment rankings",
               "nmarank"};
  CLI::App* fit = nullptr;
  CLI::App* rank = nullptr;
  CLI::App* league = nullptr;
  CLI::App* simulate = nullptr;
  CLI::App* replay = nullptr;
  FitCmd fit_cmd;
  RankCmd rank_cmd;
  LeagueCmd league_cmd;
  SimulateCmd simulate_cmd;
  std::string replay_manifest;
  std::string replay_out;
  std::map<CLI::App*, std::string> config_files;

  Invocation() {
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    fit = app.add_subcommand("fit", "Fit a model by MCMC and write posterior samples");
    rank = app.add_subcommand("rank", "Comparison graphs from posterior samples");
    league = app.add_subcommand("league", "League table of conditional credible intervals");
    simulate = app.add_subcommand("simulate", "Simulation study over the scenario catalog");
    replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    fit_cmd.add(fit);
    rank_cmd.add(rank);
    league_cmd.add(league);
    simulate_cmd.add(simulate);
    for (CLI::App* sub : {fit, rank, league, simulate}) {
      sub->add_option("--config", config_files[sub], "JSON file mirroring the flags");
    }
    replay->add_option("--manifest", replay_manifest, "manifest.json to replay")->required();
    replay->add_option("--out", replay_out, "Output directory (default: the manifest's)");
  }

  CLI::App* selected() const {
    for (CLI::App* sub : {fit, rank, league, simulate, replay}) {
      if (sub->parsed()) return sub;
    }
    return nullptr;
  }

  int dispatch(CLI::App* sub, std::ostream& os) {
    if (sub == fit) return fit_cmd.run(os);
    if (sub == rank) return rank_cmd.run(os);
    if (sub == league) return league_cmd.run(os);
    return simulate_cmd.run(os);
  }
};

std::vector<std::string> reversed(std::vector<std::string> v) {
  std::reverse(v.begin(), v.end());
  return v;
}

int execute(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err, int depth);

int replay_manifest(const std::string& manifest_path, const std::string& out_dir,
                    std::ostream& out, std::ostream& err, int depth) {
  if (depth > 0) throw ConfigError("a manifest cannot replay another replay");
  const fs::path mpath(manifest_path);
  std::ifstream in(mpath);
  if (!in) throw DataError("cannot read manifest " + manifest_path);
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("manifest: " + std::string(e.what()));
  }
  if (!m.contains("command") || !m.contains("config")) {
    throw DataError("manifest lacks command or config");
  }
  for (const auto& input : m.value("inputs", nlohmann::json::array())) {
    const std::string path = input.at("path").get<std::string>();
    if (sha256_file(path) != input.at("sha256").get<std::string>()) {
      throw DataError("input " + path + " changed since the manifest was written");
    }
  }
  const fs::path dir = out_dir.empty() ? mpath.parent_path() : fs::path(out_dir);
  const fs::path cfg = fs::temp_directory_path() /
                       ("nmarank-replay-" + sha256_file(mpath).substr(0, 16) + ".json");
  write_file(cfg, m["config"].dump());
  const int code = execute({m["command"].get<std::string>(), "--config", cfg.string(),
                            "--out", dir.string()},
                           out, err, depth + 1);
  std::error_code ec;
  fs::remove(cfg, ec);
  return code;
}

int execute(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err, int depth) {
  Invocation inv;
  try {
    inv.app.parse(reversed(args));
  } catch (const CLI::CallForHelp& e) {
    return inv.app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return inv.app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return inv.app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    CLI::App* sub = inv.selected();
    err << (sub ? sub->help() : inv.app.help());
    return kConfigError;
  }
  CLI::App* sub = inv.selected();
  try {
    if (sub == inv.replay) {
      return replay_manifest(inv.replay_manifest, inv.replay_out, out, err, depth);
    }
    const std::string& cfg = inv.config_files[sub];
    if (!cfg.empty()) apply_config(sub, read_json_file(cfg));
    return inv.dispatch(sub, out);
  } catch (const MissingOption& e) {
    err << "error: " << e.what() << "\n" << sub->help();
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const SamplerError& e) {
    err << "sampler error: " << e.what() << "\n";
    return kSamplerError;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  try {
    return execute(args, out, err, 0);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace nmarank::cli
