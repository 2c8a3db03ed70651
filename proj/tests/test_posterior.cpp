#include <gtest/gtest.h>

#include <sstream>

#include "nmarank/error.hpp"
#include "nmarank/posterior.hpp"
#include "nmarank/relation.hpp"
#include "oracles.hpp"

using namespace nmarank;

namespace {

Dataset small_network() {
  Rng rng(21);
  return oracle::random_dataset(rng, 4, 6);
}

McmcConfig short_run(int jobs = 1) {
  McmcConfig mc;
  mc.chains = 3;
  mc.iterations = 1000;
  mc.burn_in = 500;
  mc.thin = 10;
  mc.seed = 99;
  mc.jobs = jobs;
  return mc;
}

PriorConfig prior_for(ModelKind kind) {
  PriorConfig pc;
  if (kind == ModelKind::DpSpikeSlab) pc.v0 = 0.1;
  return pc;
}

}  // namespace

TEST(RunChains, KeptDrawCounts) {
  const Dataset d = small_network();
  const auto ps = run_chains(d, {}, short_run(), ModelKind::GaussianEffects);
  ASSERT_EQ(ps.size(), 150u);
  EXPECT_EQ(ps.chains().size(), 3u);
  EXPECT_EQ(ps[0].chain, 1);
  EXPECT_EQ(ps[0].iteration, 510);
  EXPECT_EQ(ps[49].iteration, 1000);
  EXPECT_EQ(ps[50].chain, 2);
  EXPECT_EQ(ps.labels(), d.labels());

  McmcConfig mc = short_run();
  mc.iterations = 1005;
  mc.burn_in = 0;
  mc.thin = 7;
  EXPECT_EQ(run_chains(d, {}, mc, ModelKind::GaussianEffects).size(), 3u * 143u);
}

TEST(RunChains, IdenticalAcrossJobCounts) {
  const Dataset d = small_network();
  for (ModelKind kind : {ModelKind::GaussianEffects, ModelKind::DpGaussian,
                         ModelKind::DpSpikeSlab}) {
    const auto a = run_chains(d, prior_for(kind), short_run(1), kind);
    const auto b = run_chains(d, prior_for(kind), short_run(3), kind);
    EXPECT_EQ(a.draws(), b.draws()) << to_string(kind);
  }
}

TEST(RunChains, SeedsSeparateChains) {
  const Dataset d = small_network();
  const auto ps = run_chains(d, {}, short_run(), ModelKind::GaussianEffects);
  EXPECT_NE(ps[0].d, ps[50].d);
  McmcConfig mc = short_run();
  mc.seed = 100;
  EXPECT_NE(run_chains(d, {}, mc, ModelKind::GaussianEffects)[0].d, ps[0].d);
}

TEST(RunChains, AdaptationRunsOnlyDuringBurnIn) {
  const Dataset d = small_network();
  McmcConfig mc = short_run();
  mc.adapt = true;
  const auto ps = run_chains(d, {}, mc, ModelKind::GaussianEffects);
  for (const auto& c : ps.chains()) {
    EXPECT_NE(c.steps.mu, mc.steps.mu);
    EXPECT_EQ(c.acceptance.mu.proposed, 500 * static_cast<long>(d.n_studies()));
  }
}

TEST(RunChains, RejectsBadInput) {
  const Dataset d = small_network();
  McmcConfig mc = short_run();
  mc.burn_in = mc.iterations;
  EXPECT_THROW(run_chains(d, {}, mc, ModelKind::GaussianEffects), ConfigError);
  Study a{"a", {{0, 1, 5}, {1, 1, 5}}, 0};
  Study b{"b", {{2, 1, 5}, {3, 1, 5}}, 2};
  const Dataset split({a, b}, {"1", "2", "3", "4"});
  EXPECT_THROW(run_chains(split, {}, short_run(), ModelKind::GaussianEffects),
               DataError);
}

TEST(RecordDraw, SpikeFlagsFollowComponents) {
  const Dataset d = small_network();
  PriorConfig pc;
  pc.v0 = 0.1;
  const Sampler s(d, pc, ModelKind::DpSpikeSlab);
  Rng rng(1);
  ChainState st = s.init_chain(rng);
  st.labels = {-1, 2, 0, 2};
  st.spike = {1, 0, 0, 1};
  st.atoms = {0.01, 0.7, -0.003, 0.5};
  const Draw dr = record_draw(s, st, 2, 40);
  EXPECT_EQ(dr.chain, 2);
  EXPECT_EQ(dr.iteration, 40);
  EXPECT_EQ(dr.spike, (std::vector<char>{1, 0, 1, 0}));
  EXPECT_EQ(dr.cluster, st.labels);
  EXPECT_EQ(dr.d, (std::vector<double>{0.0, -0.003, 0.01, -0.003}));
  EXPECT_EQ(dr.omega0, st.omega0);

  // Spike atoms enter the relation as exact zeros.
  const Relation r = induced_relation(dr, ModelKind::DpSpikeSlab);
  EXPECT_EQ(r.at(0, 2), Order::Eq);
  EXPECT_EQ(r.at(1, 3), Order::Eq);
  EXPECT_EQ(r.at(0, 1), Order::Gt);
  EXPECT_EQ(r.at(1, 2), Order::Lt);
  EXPECT_EQ(effective_values(dr, ModelKind::DpSpikeSlab),
            (std::vector<double>{0.0, -0.003, 0.0, -0.003}));
}

TEST(Jsonl, RoundTripIsExact) {
  const Dataset d = small_network();
  for (ModelKind kind : {ModelKind::GaussianEffects, ModelKind::DpGaussian,
                         ModelKind::DpSpikeSlab}) {
    const auto ps = run_chains(d, prior_for(kind), short_run(), kind);
    std::stringstream buf;
    write_jsonl(buf, ps);
    const auto back = read_jsonl(buf, ps.labels());
    EXPECT_EQ(back.kind(), kind);
    EXPECT_EQ(back.draws(), ps.draws());
    std::stringstream again;
    write_jsonl(again, back);
    EXPECT_EQ(again.str(), buf.str());
  }
}

TEST(Jsonl, LineFormat) {
  Draw dr;
  dr.chain = 1;
  dr.iteration = 12;
  dr.d = {0.0, 0.1, -2.5};
  dr.cluster = {-1, 0, 1};
  dr.spike = {1, 1, 0};
  dr.tau2 = 0.25;
  dr.omega0 = 0.5;
  const PosteriorSamples ps(ModelKind::DpSpikeSlab, 3, {dr});
  std::stringstream out;
  write_jsonl(out, ps);
  EXPECT_EQ(out.str(),
            "{\"chain\":1,\"iter\":12,\"model\":\"dp-spike-slab\","
            "\"d\":[0,0.10000000000000001,-2.5],\"spike\":[true,true,false],"
            "\"cluster\":[null,1,2],\"tau2\":0.25,\"omega0\":0.5}\n");
}

TEST(Jsonl, ReadErrors) {
  auto read = [](const std::string& text) {
    std::istringstream in(text);
    return read_jsonl(in);
  };
  EXPECT_THROW(read(""), DataError);
  EXPECT_THROW(read("\n  \n"), DataError);
  EXPECT_THROW(read("{not json}\n"), DataError);
  EXPECT_THROW(read("{\"chain\":1}\n"), DataError);
  const std::string g =
      "{\"chain\":1,\"iter\":1,\"model\":\"gaussian\",\"d\":[0,1],\"tau2\":1}\n";
  EXPECT_EQ(read(g).size(), 1u);
  EXPECT_THROW(read(g + "{\"chain\":1,\"iter\":2,\"model\":\"gaussian\","
                        "\"d\":[0,1,2],\"tau2\":1}\n"),
               DataError);
  EXPECT_THROW(read(g + "{\"chain\":1,\"iter\":2,\"model\":\"dp-gaussian\","
                        "\"d\":[0,1],\"tau2\":1}\n"),
               DataError);
  EXPECT_THROW(read("{\"chain\":1,\"iter\":1,\"model\":\"lasso\",\"d\":[0,1],"
                    "\"tau2\":1}\n"),
               DataError);
  try {
    read(g + "oops\n");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(FormatDouble, SeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-0.0), "-0");
}
