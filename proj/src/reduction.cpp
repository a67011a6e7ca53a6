#include "massred/reduction.hpp"

#include <algorithm>

namespace massred {

PipelineConfig make_pipeline_config(const Rat& p, const Nat& c, std::size_t j, std::size_t L,
                                    const Rat& rate, const Horizon& hz) {
  if (p <= 0 || p >= Rat(1, 2)) fail(Errc::ConfigIncompatible, "density parameter must be in (0, 1/2)");
  if (c < 1) fail(Errc::ConfigIncompatible, "distance margin parameter must be >= 1");
  if (L < 1) fail(Errc::ConfigIncompatible, "block count must be >= 1");
  if (j >= 16) fail(Errc::ConfigIncompatible, "too many doublings");
  PipelineConfig cfg;
  cfg.p = p;
  cfg.c = c;
  cfg.q = p + Rat(2, c);
  if (cfg.q >= Rat(1, 2)) fail(Errc::ConfigIncompatible, "p + 2/c must stay below 1/2");
  cfg.j = j;
  cfg.L = L;
  cfg.horizon = hz;
  cfg.geo = geometric_profile(c, hz.N << j);
  cfg.codes = code_family(cfg.geo.profile, cfg.q, L, rate);
  return cfg;
}

namespace {

FinFunc duplicated_with_bound(const FinFunc& prev, std::size_t L, std::size_t level) {
  OrderFunc u = OrderFunc::compose(doubly_exp_bound_blocks(L),
                                   OrderFunc::floor_div(std::size_t(1) << level));
  return amplify_b(prev, u);
}

}  // namespace

PipelineDResult pipeline_D(const BitString& y, const PipelineConfig& cfg) {
  if (y.size() != cfg.geo.profile.total_len())
    fail(Errc::ConfigIncompatible, "input length differs from the profile total");
  PipelineDResult out;
  out.trace.stages.push_back("density-to-blocks");
  out.trace.blocks = split_blocks(cfg.geo.profile, y);

  out.trace.stages.push_back("blocks-to-trace");
  out.trace.base_trace = ball_trace(*out.trace.blocks, cfg.codes, cfg.q);

  std::vector<Slalom> cur{*out.trace.base_trace};
  for (std::size_t i = 0; i < cfg.j; ++i) {
    out.trace.stages.push_back("halve-bound");
    std::vector<Slalom> next;
    next.reserve(cur.size() * 2);
    for (const auto& s : cur) {
      auto [a, b] = amplify_d(s);
      next.push_back(std::move(a));
      next.push_back(std::move(b));
    }
    cur = std::move(next);
    out.trace.amplified.push_back(cur);
  }

  out.trace.stages.push_back("block-select");
  for (const auto& s : cur) {
    auto cands = block_extract(s, cfg.L);
    for (auto& f : cands) out.candidates.push_back(std::move(f));
  }
  return out;
}

PipelineBResult pipeline_B(const FinFunc& y, const PipelineConfig& cfg) {
  if (y.size() != cfg.horizon.N)
    fail(Errc::ConfigIncompatible, "input length differs from the horizon");
  PipelineBResult out;
  out.trace.stages.push_back("block-join");
  out.trace.replicated = block_replicate(y, cfg.L);

  FinFunc cur = *out.trace.replicated;
  for (std::size_t i = 1; i <= cfg.j; ++i) {
    out.trace.stages.push_back("double-bound");
    cur = duplicated_with_bound(cur, cfg.L, i);
    out.trace.duplicated.push_back(cur);
  }

  out.trace.stages.push_back("index-to-blocks");
  out.trace.encoded = encode_index(cur, cfg.codes, cfg.geo.profile);

  out.trace.stages.push_back("blocks-to-density");
  out.trace.concatenated = concat_blocks(*out.trace.encoded);
  out.z = out.trace.concatenated->complement();
  return out;
}

BitString replay_pipeline_B(const PipelineTrace& trace) {
  if (!trace.encoded || !trace.concatenated || !trace.replicated)
    fail(Errc::MissingArtifact, "trace lacks the bounded-side intermediates");
  BitString again = concat_blocks(*trace.encoded);
  if (again != *trace.concatenated)
    fail(Errc::SchemaInvalid, "trace concatenation does not match its encoded blocks");
  return again.complement();
}

BlockFunc adversary_flip_blocks(const BlockFunc& x) {
  return split_blocks(x.profile, concat_blocks(x).complement());
}

FinFunc adversary_interleave(const FinFunc& x0, const FinFunc& x1) { return interleave(x0, x1); }

FinFunc adversary_block_concat(const std::vector<FinFunc>& xs) { return block_concat(xs); }

Slalom adversary_ball_trace(const BlockFunc& x, const CodeFamily& codes, const Rat& q) {
  return ball_trace(x, codes, q);
}

GammaDelta estimate_gamma_delta(const BitString& A, const std::vector<BitString>& family,
                                std::size_t from) {
  if (family.empty()) fail(Errc::EmptyFamily, "estimator needs a nonempty family");
  if (from >= A.size()) fail(Errc::EmptyRange, "estimator start beyond the sequence");
  std::optional<Rat> lo, hi;
  for (const auto& X : family) {
    if (X.size() != A.size()) fail(Errc::LengthMismatch, "family member of wrong length");
    Rat d = lower_density_estimate(agreement_indicator(A, X), std::max<std::size_t>(from, 1));
    if (!hi || d > *hi) hi = d;
    if (!lo || d < *lo) lo = d;
  }
  return GammaDelta{*hi, *lo};
}

BitString induced_bit_adversary(const FinFunc& g, const PipelineConfig& cfg) {
  return pipeline_B(g, cfg).z;
}

namespace {

// planted slalom element at candidate position n for adversary value g
Nat planted_value(const Nat& g, std::size_t n, std::size_t L) {
  std::vector<Nat> vals(n + 1, Nat(0));
  vals[n] = g;
  FinFunc one(std::move(vals), doubly_exp_bound());
  return block_replicate(one, L)(n);
}

}  // namespace

bool plantable(const PipelineConfig& cfg, std::size_t n, const Nat& g) {
  if (g < 0) return false;
  if (!value_below(doubly_exp_bound(), n, g)) return false;
  Nat v = planted_value(g, n, cfg.L);
  for (std::size_t e = 0; e < (std::size_t(1) << cfg.j); ++e) {
    std::size_t blk = (n << cfg.j) + e;
    const ListCode& code = cfg.codes.at(cfg.geo.profile.lens[blk]);
    if (v >= code.words.size()) return false;
  }
  return true;
}

BitString build_D_witness(const std::vector<FinFunc>& family, const PipelineConfig& cfg) {
  const BlockProfile& profile = cfg.geo.profile;
  std::size_t N = cfg.horizon.N, m = family.size();
  for (const auto& g : family)
    if (g.size() != N) fail(Errc::LengthMismatch, "family member length differs from horizon");

  std::vector<Nat> word_values(profile.size());
  for (std::size_t n = 0; n < N; ++n) {
    Nat g = m == 0 ? Nat(0) : family[n % m](n);
    if (m != 0 && !plantable(cfg, n, g))
      fail(Errc::Infeasible, "value at position " + std::to_string(n) + " exceeds the code budget");
    Nat v = planted_value(g, n, cfg.L);
    for (std::size_t e = 0; e < (std::size_t(1) << cfg.j); ++e) {
      std::size_t blk = (n << cfg.j) + e;
      const ListCode& code = cfg.codes.at(profile.lens[blk]);
      word_values[blk] = code.words[v.convert_to<std::size_t>()].to_number();
    }
  }
  BitString y = concat_blocks(BlockFunc(profile, std::move(word_values)));

  // post-hoc: each induced adversary's prefix agreement stays <= p at enough
  // block boundaries
  for (const auto& g : family) {
    BitString A = induced_bit_adversary(g, cfg);
    BitString agree = agreement_indicator(y, A);
    std::size_t good = 0;
    for (std::size_t blk = cfg.block_tail(); blk < profile.size(); ++blk) {
      std::size_t len = profile.block_hi(blk);
      if (Rat(Nat(agree.count_ones(len)), Nat(len)) <= cfg.p) ++good;
    }
    if (good < cfg.horizon.hits)
      fail(Errc::Infeasible, "an induced adversary keeps too much prefix agreement");
  }
  return y;
}

std::size_t verify_avoidance_chain(const FinFunc& y, const FinFunc& x, const PipelineConfig& cfg,
                                   const PipelineBResult& run) {
  if (cfg.horizon.tail != 0)
    fail(Errc::ConfigIncompatible, "the agreement bound needs the hypothesis on every block");
  std::size_t N = cfg.horizon.N;
  if (x.size() != N || y.size() != N) fail(Errc::LengthMismatch, "operand length differs from horizon");
  for (std::size_t n = 0; n < N; ++n)
    if (x(n) == y(n)) fail(Errc::ConfigIncompatible, "precondition x != y fails at " + std::to_string(n));

  std::size_t violations = 0;

  // block join keeps distinct values distinct
  FinFunc rep_x = block_replicate(x, cfg.L);
  const FinFunc& rep_y = *run.trace.replicated;
  for (std::size_t n = 0; n < N; ++n)
    if (rep_x(n) == rep_y(n)) ++violations;

  // each doubling keeps them distinct pointwise
  FinFunc cur_x = rep_x;
  for (std::size_t i = 1; i <= cfg.j; ++i) {
    cur_x = duplicated_with_bound(cur_x, cfg.L, i);
    const FinFunc& cur_y = run.trace.duplicated[i - 1];
    for (std::size_t n = 0; n < cur_x.size(); ++n)
      if (cur_x(n) == cur_y(n)) ++violations;
  }

  // distinct indices decode to blocks at distance >= q
  BlockFunc enc_x = encode_index(cur_x, cfg.codes, cfg.geo.profile);
  const BlockFunc& enc_y = *run.trace.encoded;
  for (std::size_t n = 0; n < enc_x.size(); ++n)
    if (normalized_distance(enc_x.block_string(n), enc_y.block_string(n)) < cfg.q) ++violations;

  // blockwise distance >= q forces prefix agreement > q - 2/c past the
  // profile's stability threshold
  BitString A = concat_blocks(enc_x);
  BitString agree = agreement_indicator(run.z, A);
  std::size_t start = cfg.geo.profile.block_hi(cfg.geo.threshold);
  for (std::size_t len = start; len <= agree.size(); ++len)
    if (Rat(Nat(agree.count_ones(len)), Nat(len)) <= cfg.q - Rat(2, cfg.c)) ++violations;

  return violations;
}

}  // namespace massred
