// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "checks.hpp"
#include "cli.hpp"
#include "nmarank/graph.hpp"
#include "nmarank/league.hpp"
#include "nmarank/simulation.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace nmarank;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("nmarank_accept_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(const std::vector<std::string>& args, std::string* err = nullptr) {
  std::ostringstream out, e;
  const int code = cli::run(args, out, e);
  if (err) *err = e.str();
  return code;
}

Result kernel_exactness() {
  const double mvn = checks::equicorr_max_error(1000, 20240101);
  const auto inv = checks::equicorr_inverse_check(2, 0.01, 0.5);
  // Hand values: S^-1 = [[400/3, -200/3], [-200/3, 400/3]], det S = 7.5e-5.
  const auto closed = equicorr_precision({2, 0.01, 0.5});
  const double hand = std::max({std::abs(closed[0] - 400.0 / 3), std::abs(closed[1] + 200.0 / 3),
                                std::abs(closed[2] + 200.0 / 3), std::abs(closed[3] - 400.0 / 3)});
  const bool ok = mvn < 1e-10 && inv.max_inverse_error < 1e-9 &&
                  inv.det_error < 1e-9 && hand < 1e-9 &&
                  std::abs(inv.det - 7.5e-5) < 1e-9;
  return {ok, "max |logpdf err| " + fmt("%.2e", mvn) + ", inverse err " +
                  fmt("%.2e", inv.max_inverse_error) + ", det " +
                  fmt("%.6e", inv.det)};
}

Result nlp_calibration() {
  bool ok = true;
  std::string detail;
  for (double v0 : {0.05, 0.1, 0.5}) {
    const auto c = checks::calibration_check(v0);
    ok = ok && c.residual < 1e-10 && c.mass_error < 1e-6 && c.overlap < 5e-3;
    detail += "v0=" + fmt("%g", v0) + " p=" + fmt("%.5f", c.p) + " residual " +
              fmt("%.1e", c.residual) + " mass err " + fmt("%.1e", c.mass_error) +
              " overlap " + fmt("%.2e", c.overlap) + "; ";
  }
  return {ok, detail};
}

Result joint_consistency() {
  bool ok = true;
  std::string detail;
  for (ModelKind kind : {ModelKind::GaussianEffects, ModelKind::DpGaussian,
                         ModelKind::DpSpikeSlab}) {
    const auto c = checks::metropolis_consistency(kind, 500, 77);
    ok = ok && c.max_error < 1e-10;
    detail += std::string(to_string(kind)) + ": " + std::to_string(c.moves) +
              " moves, max err " + fmt("%.1e", c.max_error) + "; ";
  }
  return {ok, detail};
}

Result getting_it_right() {
  bool ok = true;
  std::string detail;
  for (ModelKind kind : {ModelKind::GaussianEffects, ModelKind::DpGaussian,
                         ModelKind::DpSpikeSlab}) {
    // 2 * 10^6 cycles: spike/slab switching has autocorrelation in the
    // thousands of sweeps, too long for batch means over 10^4 cycles.
    const ProposalSteps steps{1.5, 0.5, 1.0, 0.5};
    const auto stats = checks::getting_it_right(kind, 2000000, 200000, 4242, 0.5, steps);
    detail += std::string(to_string(kind)) + ":";
    for (const auto& s : stats) {
      ok = ok && std::abs(s.z()) < 4.0;
      detail += " " + s.name + " z=" + fmt("%.2f", s.z());
    }
    detail += "; ";
  }
  return {ok, detail};
}

// Hand-built fixtures over four treatments, 20 draws each.
std::vector<std::vector<std::vector<double>>> graph_fixtures() {
  std::vector<std::vector<std::vector<double>>> f;
  auto rep = [](std::vector<std::vector<double>>& out, int n, std::vector<double> v) {
    for (int i = 0; i < n; ++i) out.push_back(v);
  };
  {
    std::vector<std::vector<double>> a;
    rep(a, 12, {0, 0, 0.3, 0.3});
    rep(a, 5, {0, 0, 0.3, 0.6});
    rep(a, 3, {0, 0.3, 0.3, 0.3});
    f.push_back(a);
  }
  {
    // Pairwise majorities cycle among treatments 2, 3 and 4.
    std::vector<std::vector<double>> b;
    rep(b, 7, {0, 1, 2, 3});
    rep(b, 7, {0, 3, 1, 2});
    rep(b, 6, {0, 2, 3, 1});
    f.push_back(b);
  }
  {
    std::vector<std::vector<double>> c;
    rep(c, 6, {0, -0.3, -0.3, 0.3});
    rep(c, 6, {0, 0.3, -0.3, 0});
    rep(c, 4, {0, 0, 0, 0});
    rep(c, 4, {0, 0.3, 0.3, 0.3});
    f.push_back(c);
  }
  {
    std::vector<std::vector<double>> d;
    rep(d, 10, {0, 0.5, 1, 1.5});
    rep(d, 10, {0, 0.5, 1.5, 1});
    f.push_back(d);
  }
  // Random fixtures on a coarse grid so ties and cycles are common.
  Rng rng(99, 5);
  for (int r = 0; r < 300; ++r) {
    std::vector<std::vector<double>> g;
    for (int t = 0; t < 20; ++t) {
      std::vector<double> v{0};
      for (int k = 1; k < 4; ++k) v.push_back(std::floor(rng.uniform() * 3) - 1);
      g.push_back(v);
    }
    f.push_back(g);
  }
  return f;
}

std::vector<std::optional<Order>> statements(const ComparisonGraph& g) {
  std::vector<std::optional<Order>> s;
  const int n = g.n_treatments();
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) s.push_back(g.statement(j, k));
  }
  return s;
}

Result graph_oracle() {
  int fixtures = 0;
  int mismatches = 0;
  long joints = 0;
  std::string first;
  auto fail = [&](int f, const std::string& what) {
    if (mismatches++ == 0) first = "fixture " + std::to_string(f) + ": " + what;
  };
  for (const auto& values : graph_fixtures()) {
    const int f = fixtures++;
    const RelationSample rs(oracle::spike_slab_samples(values));
    const RankSummary lib = rank_posterior(rs);
    const oracle::BruteRank want = oracle::brute_rank(values);
    std::size_t p = 0;
    for (int j = 0; j < 4; ++j) {
      for (int k = j + 1; k < 4; ++k, ++p) {
        const auto& c = lib.pp.counts(j, k);
        if (c.eq != want.counts[p][0] || c.lt != want.counts[p][1] ||
            c.gt != want.counts[p][2]) {
          fail(f, "pair counts");
        }
      }
    }
    std::vector<std::optional<Order>> tilde(want.tilde.begin(), want.tilde.end());
    if (statements(lib.tilde) != tilde) fail(f, "initial graph");
    std::vector<std::optional<Order>> e0(want.e0.begin(), want.e0.end());
    if (statements(lib.e0) != e0) fail(f, "closest coherent graph");
    if (lib.e0_distance != want.e0_distance) fail(f, "distance");
    if (lib.e0.joint_prob != oracle::brute_joint(values, e0)) fail(f, "E0 joint");
    if (lib.sequence.size() != want.sequence.size()) {
      fail(f, "trim sequence length");
    } else {
      for (std::size_t i = 0; i < want.sequence.size(); ++i) {
        if (statements(lib.sequence[i]) != want.sequence[i].stmt ||
            lib.sequence[i].joint_prob != want.sequence[i].joint) {
          fail(f, "trim sequence entry " + std::to_string(i));
        }
      }
    }
    // Every sub-graph of E0.
    for (unsigned mask = 0; mask < (1u << 6); ++mask) {
      ComparisonGraph g(4);
      std::vector<std::optional<Order>> stmt(6);
      std::size_t q = 0;
      for (int j = 0; j < 4; ++j) {
        for (int k = j + 1; k < 4; ++k, ++q) {
          if (mask & (1u << q)) {
            g.set(j, k, want.e0[q]);
            stmt[q] = want.e0[q];
          }
        }
      }
      ++joints;
      if (joint_probability(g, rs) != oracle::brute_joint(values, stmt)) {
        fail(f, "joint probability");
      }
    }
  }
  // Coherence of every complete graph on four treatments.
  const auto weak = oracle::all_weak_orders(4);
  int graphs = 0;
  for (int code = 0; code < 729; ++code) {
    ComparisonGraph g(4);
    std::vector<Order> r;
    int c = code;
    for (int j = 0; j < 4; ++j) {
      for (int k = j + 1; k < 4; ++k) {
        const auto o = static_cast<Order>(c % 3);
        c /= 3;
        g.set(j, k, o);
        r.push_back(o);
      }
    }
    ++graphs;
    const bool want = std::binary_search(weak.begin(), weak.end(), r);
    if (is_coherent(g) != want) fail(-1, "coherence of graph " + std::to_string(code));
  }
  std::string detail = std::to_string(fixtures) + " fixtures, " +
                       std::to_string(joints) + " joint probabilities, " +
                       std::to_string(graphs) + " coherence cases, " +
                       std::to_string(weak.size()) + " weak orders";
  if (mismatches) detail += "; " + std::to_string(mismatches) + " mismatches, first " + first;
  return {mismatches == 0, detail};
}

Result simulation_trend() {
  const fs::path dir = scratch("sim");
  std::string err;
  const int code = cli({"simulate", "--scenario", "16,14", "--replicates", "10",
                        "--mcmc", "desk", "--seed", "2024", "--out", dir.string()},
                       &err);
  if (code != 0) return {false, "simulate exited " + std::to_string(code) + ": " + err};
  struct Acc {
    double sum = 0.0;
    double max = 0.0;
    int n = 0;
  };
  std::map<std::pair<int, std::string>, Acc> acc;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("scenario_", 0) != 0) continue;
    const auto j = nlohmann::json::parse(slurp(e.path()));
    const int sc = j["scenario"]["number"];
    for (const auto& m : j["metrics"]) {
      Acc& a = acc[{sc, m["model"].get<std::string>()}];
      const double p = m["joint_prob_true_graph"];
      a.sum += p;
      a.max = std::max(a.max, p);
      ++a.n;
    }
  }
  auto mean = [&](int sc, const char* model) {
    const Acc& a = acc[{sc, model}];
    return a.n ? a.sum / a.n : NAN;
  };
  const bool a_ok = acc[{16, "gaussian"}].n == 10 && acc[{16, "dp-gaussian"}].n == 10 &&
                    acc[{16, "gaussian"}].max == 0.0 &&
                    acc[{16, "dp-gaussian"}].max == 0.0;
  const bool b_ok = mean(16, "dp-spike-slab") > 0.2;
  const bool c_ok = mean(14, "dp-spike-slab") > 0.0 && mean(14, "gaussian") == 0.0 &&
                    mean(14, "dp-gaussian") == 0.0;
  std::string detail =
      std::string("(a) ") + (a_ok ? "ok" : "FAIL") + " max joint gaussian " +
      fmt("%.3f", acc[{16, "gaussian"}].max) + " dp-gaussian " +
      fmt("%.3f", acc[{16, "dp-gaussian"}].max) + "; (b) " + (b_ok ? "ok" : "FAIL") +
      " dp-spike-slab mean " + fmt("%.3f", mean(16, "dp-spike-slab")) + "; (c) " +
      (c_ok ? "ok" : "FAIL") + " effect 0 means " + fmt("%.3f", mean(14, "gaussian")) +
      "/" + fmt("%.3f", mean(14, "dp-gaussian")) + "/" +
      fmt("%.3f", mean(14, "dp-spike-slab"));
  return {a_ok && b_ok && c_ok, detail};
}

Result conditional_ci() {
  // Strictly positive log odds for every draw: p_lt = 1.
  Rng rng(7, 0);
  const int draws = 997;
  std::vector<std::vector<double>> lt;
  for (int i = 0; i < draws; ++i) lt.push_back({0.0, 0.05 + rng.uniform()});
  const auto ci = conditional_credible_interval(oracle::spike_slab_samples(lt), 0, 1, 0.05);
  const bool lt_ok = ci.kind == Order::Lt && ci.p_lt == 1.0 &&
                     std::abs(ci.coverage - 0.95) <= 1.0 / draws;

  std::vector<std::vector<double>> gt;
  for (int i = 0; i < draws; ++i) gt.push_back({0.0, -0.05 - rng.uniform()});
  const auto cg = conditional_credible_interval(oracle::spike_slab_samples(gt), 0, 1, 0.05);
  const bool gt_ok = cg.kind == Order::Gt && std::abs(cg.coverage - 0.95) <= 1.0 / draws;

  std::vector<std::vector<double>> eq;
  for (int i = 0; i < 50; ++i) {
    eq.push_back({0.0, i < 31 ? 0.0 : (i % 2 ? 0.4 : -0.4)});
  }
  const auto ce = conditional_credible_interval(oracle::spike_slab_samples(eq), 0, 1, 0.05);
  const bool eq_ok = ce.singleton() && ce.lo == 1.0 && ce.hi == 1.0 &&
                     ce.coverage == ce.p_eq && ce.p_eq == 31.0 / 50.0;
  return {lt_ok && gt_ok && eq_ok,
          "p_lt=1 coverage " + fmt("%.4f", ci.coverage) + ", p_gt=1 coverage " +
              fmt("%.4f", cg.coverage) + " (draws " + std::to_string(draws) +
              "), EQ {1} coverage " + fmt("%.4f", ce.coverage) + " = p_eq " +
              fmt("%.4f", ce.p_eq)};
}

Result determinism() {
  const fs::path root = scratch("det");
  Rng rng(3, 0);
  const auto sc = scenario_catalog()[15];
  const auto sim = generate_dataset(sc, bundled_template(), rng);
  const fs::path csv = root / "data.csv";
  std::ofstream(csv, std::ios::binary) << to_csv(sim.data);

  std::vector<std::string> diffs;
  auto run_pipeline = [&](const fs::path& dir, const std::string& jobs) {
    const std::string fit = (dir / "fit").string();
    const int a = cli({"fit", "--model", "dp-spike-slab", "--input", csv.string(),
                       "--v0", "0.1", "--chains", "3", "--iters", "2000", "--burn",
                       "1000", "--thin", "5", "--seed", "11", "--jobs", jobs,
                       "--out", fit});
    const int b = cli({"rank", "--samples", fit + "/samples.jsonl", "--threshold",
                       "0.9", "--out", (dir / "rank").string()});
    const int c = cli({"league", "--samples", fit + "/samples.jsonl", "--out",
                       (dir / "league").string()});
    return a == 0 && b == 0 && c == 0;
  };
  // Both runs use the same paths so that their manifests are identical; each
  // is moved aside afterwards. Run a is replayed stage by stage into c while
  // its inputs are still in place.
  const fs::path work = root / "run";
  const fs::path a = root / "a";
  const fs::path b = root / "b";
  const fs::path c = root / "c";
  bool ran = run_pipeline(work, "1");
  for (const char* stage : {"fit", "rank", "league"}) {
    ran = ran && cli({"replay", "--manifest", (work / stage / "manifest.json").string(),
                      "--out", (c / stage).string()}) == 0;
  }
  if (ran) fs::rename(work, a);
  ran = ran && run_pipeline(work, "3");
  if (ran) fs::rename(work, b);
  long files = 0;
  if (ran) {
    for (const auto& e : fs::recursive_directory_iterator(a)) {
      if (!e.is_regular_file()) continue;
      const fs::path rel = fs::relative(e.path(), a);
      const std::string want = slurp(e.path());
      ++files;
      if (slurp(b / rel) != want) diffs.push_back("a/b " + rel.string());
      if (slurp(c / rel) != want) diffs.push_back("a/replay " + rel.string());
    }
  }
  std::string detail = std::to_string(files) + " files compared across two runs " +
                       "and a manifest replay";
  if (!ran) detail = "pipeline failed to run";
  if (!diffs.empty()) detail += "; differing: " + diffs.front();
  return {ran && diffs.empty() && files > 0, detail};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Result()> run;
  };
  const std::vector<Criterion> all{
      {1, "kernel exactness", 1, kernel_exactness},
      {2, "NLP calibration", 5, nlp_calibration},
      {3, "conditional/full-joint consistency", 30, joint_consistency},
      {4, "getting it right", 600, getting_it_right},
      {5, "graph machinery vs brute force", 1, graph_oracle},
      {6, "simulation trends at desk scale", 1800, simulation_trend},
      {7, "conditional CI contract", 1, conditional_ci},
      {8, "determinism", 600, determinism},
  };
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = r.pass && in_time;
    failed += pass ? 0 : 1;
    std::cout << (pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": "
              << r.detail << " (" << fmt("%.2f", secs) << " s, budget "
              << fmt("%g", c.budget_s) << " s" << (in_time ? "" : ", OVER BUDGET")
              << ")" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
