#pragma once

#include "massred/codec.hpp"
#include "massred/core.hpp"
#include "massred/listcode.hpp"
#include "massred/slalom.hpp"

namespace massred {

// ---------------------------------------------------------------------------
// PipelineConfig: shared parameters of the two composed pipelines.  The block
// profile covers 2^j * horizon.N blocks; one code per distinct block length.

struct PipelineConfig {
  Rat p;           // density parameter, 0 < p < 1/2
  Nat c;           // q = p + 2/c < 1/2
  Rat q;
  std::size_t j = 0;  // number of doublings
  std::size_t L = 0;  // list size / block count
  GeometricProfile geo;
  CodeFamily codes;
  Horizon horizon;  // over candidate positions (length N)

  std::size_t block_count() const { return horizon.N << j; }
  std::size_t block_tail() const { return horizon.tail << j; }
};

PipelineConfig make_pipeline_config(const Rat& p, const Nat& c, std::size_t j, std::size_t L,
                                    const Rat& rate, const Horizon& hz);

// ---------------------------------------------------------------------------
// PipelineTrace: stage-by-stage audit log with the typed intermediates.

struct PipelineTrace {
  std::vector<std::string> stages;

  // density-side intermediates
  std::optional<BlockFunc> blocks;
  std::optional<Slalom> base_trace;
  std::vector<std::vector<Slalom>> amplified;  // level i holds 2^(i+1) slaloms

  // bounded-side intermediates
  std::optional<FinFunc> replicated;
  std::vector<FinFunc> duplicated;  // one per doubling level
  std::optional<BlockFunc> encoded;
  std::optional<BitString> concatenated;  // before the final complement
};

// Non-uniform direction: 2^j * L candidate functions bounded by 2^(2^n).
struct PipelineDResult {
  std::vector<FinFunc> candidates;
  PipelineTrace trace;
};
PipelineDResult pipeline_D(const BitString& y, const PipelineConfig& cfg);

// Uniform direction: one output bit string of length H(block_count - 1).
struct PipelineBResult {
  BitString z;
  PipelineTrace trace;
};
PipelineBResult pipeline_B(const FinFunc& y, const PipelineConfig& cfg);

// Recompute z from the trace's own intermediates; must match bit-for-bit.
BitString replay_pipeline_B(const PipelineTrace& trace);

// ---------------------------------------------------------------------------
// Stage-wise adversary transforms.

// complement every block (bit-level complement pushed through the codec)
BlockFunc adversary_flip_blocks(const BlockFunc& x);
// pair of adversaries joined for the doubled problem
FinFunc adversary_interleave(const FinFunc& x0, const FinFunc& x1);
// tuple of adversaries joined into one block value per position
FinFunc adversary_block_concat(const std::vector<FinFunc>& xs);
// adversary of the trace problem induced by a block adversary
Slalom adversary_ball_trace(const BlockFunc& x, const CodeFamily& codes, const Rat& q);

// ---------------------------------------------------------------------------
// Verification helpers.

// Count of per-stage contrapositive violations on the avoidance chain when
// x(n) != y(n) for all n in [tail, N); zero on a correct pipeline.
std::size_t verify_avoidance_chain(const FinFunc& y, const FinFunc& x, const PipelineConfig& cfg,
                                   const PipelineBResult& run);

struct GammaDelta {
  Rat gamma_hat;
  Rat delta_hat;
};
GammaDelta estimate_gamma_delta(const BitString& A, const std::vector<BitString>& family,
                                std::size_t from);

// Test-instance generator: bit string whose pipeline_D candidates meet the
// hits contract against every family member while every induced bit-level
// adversary keeps prefix agreement <= p at >= hits block boundaries.
BitString build_D_witness(const std::vector<FinFunc>& family, const PipelineConfig& cfg);

// The bit-level adversary induced by a family member (shared with pipeline_B).
BitString induced_bit_adversary(const FinFunc& g, const PipelineConfig& cfg);

// Whether value g at candidate position n fits every per-block code budget.
bool plantable(const PipelineConfig& cfg, std::size_t n, const Nat& g);

}  // namespace massred
