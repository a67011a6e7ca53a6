#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "massred/reduction.hpp"

#include <random>

using namespace massred;

namespace {

// smallest feasible horizon for the c = 8 geometry: threshold 23, one code per
// block length, list size 1
PipelineConfig base_config(std::size_t j, std::size_t N, std::size_t hits = 1) {
  return make_pipeline_config(Rat(1, 8), Nat(8), j, 1, Rat(1, 4), Horizon(N, 0, hits));
}

// distinct binary tables of the horizon length
std::pair<FinFunc, FinFunc> binary_pair(std::mt19937_64& rng, std::size_t N) {
  std::vector<Nat> y, x;
  for (std::size_t n = 0; n < N; ++n) {
    int b = int(rng() & 1);
    y.push_back(Nat(b));
    x.push_back(Nat(1 - b));
  }
  return {FinFunc(y), FinFunc(x)};
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS(make_pipeline_config(Rat(1, 2), Nat(8), 0, 1, Rat(1, 4), Horizon(26, 0, 1)),
                  Error);
  CHECK_THROWS_AS(make_pipeline_config(Rat(2, 5), Nat(8), 0, 1, Rat(1, 4), Horizon(26, 0, 1)),
                  Error);  // 2/5 + 1/4 >= 1/2
  CHECK_THROWS_AS(base_config(0, 8), Error);  // horizon below the profile threshold
  PipelineConfig cfg = base_config(0, 26);
  CHECK(cfg.q == Rat(3, 8));
  CHECK(cfg.block_count() == 26);
  CHECK(cfg.geo.k == 12);
}

TEST_CASE("pipeline_D shape") {
  PipelineConfig cfg = base_config(1, 14);  // 28 blocks
  BitString y(cfg.geo.profile.total_len());
  PipelineDResult res = pipeline_D(y, cfg);
  CHECK(res.candidates.size() == 2);  // 2^j * L
  CHECK(res.trace.stages.front() == "density-to-blocks");
  CHECK(res.trace.stages.back() == "block-select");
  CHECK(res.trace.amplified.size() == 1);
  CHECK(res.trace.amplified[0].size() == 2);
  CHECK_THROWS_AS(pipeline_D(BitString(3), cfg), Error);
}

TEST_CASE("pipeline_B uniformity and replay") {
  std::mt19937_64 rng(11);
  PipelineConfig cfg = base_config(1, 14);
  for (int trial = 0; trial < 20; ++trial) {
    auto [y, x] = binary_pair(rng, 14);
    PipelineBResult run = pipeline_B(y, cfg);
    CHECK(run.z.size() == cfg.geo.profile.total_len());
    CHECK(replay_pipeline_B(run.trace) == run.z);
    CHECK(run.trace.stages == std::vector<std::string>{"block-join", "double-bound",
                                                       "index-to-blocks", "blocks-to-density"});
  }
}

TEST_CASE("complement concat split round trip") {
  std::mt19937_64 rng(5);
  PipelineConfig cfg = base_config(0, 26);
  const BlockProfile& p = cfg.geo.profile;
  for (int trial = 0; trial < 20; ++trial) {
    BitString w(p.total_len());
    for (std::size_t i = 0; i < w.size(); ++i) w.set(i, rng() & 1);
    BitString back = concat_blocks(split_blocks(p, w.complement())).complement();
    CHECK(back == w);
  }
}

TEST_CASE("avoidance chain has no violations on seeded instances") {
  std::mt19937_64 rng(2024);
  for (std::size_t j : {std::size_t(0), std::size_t(1)}) {
    std::size_t N = j == 0 ? 26 : 14;
    PipelineConfig cfg = base_config(j, N);
    for (int trial = 0; trial < 25; ++trial) {
      auto [y, x] = binary_pair(rng, N);
      PipelineBResult run = pipeline_B(y, cfg);
      CHECK(verify_avoidance_chain(y, x, cfg, run) == 0);
    }
  }
}

TEST_CASE("gamma delta estimators") {
  BitString A = BitString::parse("11110000");
  CHECK(estimate_gamma_delta(A, {A, BitString::parse("00000000")}, 1).gamma_hat == 1);
  GammaDelta gd = estimate_gamma_delta(A, {A, A.complement()}, 1);
  CHECK(gd.gamma_hat == 1);
  CHECK(gd.delta_hat == 0);
  GammaDelta half = estimate_gamma_delta(BitString::parse("11111111"),
                                         {BitString::parse("10101010")}, 1);
  CHECK(half.gamma_hat == Rat(1, 2));
  CHECK(half.delta_hat == Rat(1, 2));
  CHECK_THROWS_AS(estimate_gamma_delta(A, {}, 1), Error);

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<BitString> fam;
    for (int i = 0; i < 3; ++i) {
      BitString b(10);
      for (std::size_t k = 0; k < 10; ++k) b.set(k, rng() & 1);
      fam.push_back(b);
    }
    BitString a(10);
    for (std::size_t k = 0; k < 10; ++k) a.set(k, rng() & 1);
    GammaDelta g = estimate_gamma_delta(a, fam, 1 + rng() % 9);
    CHECK(g.gamma_hat >= g.delta_hat);
    CHECK(g.gamma_hat <= 1);
    CHECK(g.delta_hat >= 0);
  }
}

TEST_CASE("plantable respects the per-block code budget") {
  PipelineConfig cfg = base_config(0, 26);
  CHECK(plantable(cfg, 0, Nat(0)));
  CHECK(plantable(cfg, 0, Nat(1)));
  CHECK(!plantable(cfg, 0, Nat(2)));  // 2 >= 2^(2^0)
  CHECK(plantable(cfg, 25, Nat(1)));
}

TEST_CASE("constructed instances give a candidate meeting the hits contract") {
  std::mt19937_64 rng(31337);
  for (int round = 0; round < 10; ++round) {
    std::size_t j = rng() % 2;
    std::size_t N = j == 0 ? 26 : 14;
    std::size_t hits = 3;
    PipelineConfig cfg = base_config(j, N, hits);

    // members share a binary tail pattern and deviate only at position 0
    std::vector<Nat> shared;
    for (std::size_t n = 0; n < N; ++n) shared.push_back(Nat(rng() & 1));
    std::size_t m = 1 + rng() % 2;
    std::vector<FinFunc> family;
    for (std::size_t i = 0; i < m; ++i) {
      auto vals = shared;
      vals[0] = Nat(i & 1);
      family.push_back(FinFunc(vals));
    }

    BitString y = build_D_witness(family, cfg);
    PipelineDResult res = pipeline_D(y, cfg);
    bool some_candidate = false;
    for (const auto& cand : res.candidates) {
      bool covers_all = true;
      for (const auto& g : family) {
        std::size_t agree = 0;
        for (std::size_t n = cfg.horizon.tail; n < N; ++n) agree += cand(n) == g(n);
        covers_all = covers_all && agree >= hits;
      }
      some_candidate = some_candidate || covers_all;
    }
    CHECK(some_candidate);
  }
}

TEST_CASE("witness generator covers the empty family") {
  PipelineConfig cfg = base_config(0, 26);
  BitString y = build_D_witness({}, cfg);
  CHECK(y.size() == cfg.geo.profile.total_len());
}
