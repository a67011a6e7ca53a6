#pragma once

#include "massred/codec.hpp"
#include "massred/core.hpp"
#include "massred/listcode.hpp"
#include "massred/slalom.hpp"

namespace massred {

// ---------------------------------------------------------------------------
// Universe: complete finite enumeration of one operand side.

struct Universe {
  std::vector<RelationOperand> elements;
  std::size_t size() const { return elements.size(); }
};

std::size_t universe_cap();  // default 2^16 elements, 2^MASSRED_BRUTEFORCE_CAP when set

Universe all_bitstrings(std::size_t N);
Universe all_finfuncs(std::size_t N, const OrderFunc& bound);
Universe all_slaloms(std::size_t N, const OrderFunc& bound, std::size_t L);

// ---------------------------------------------------------------------------
// WitnessFamily: candidate realization of one side of a covering/unbounding
// pair.  d-role: every universe element is related to some member.  b-role:
// every universe element fails the relation against some member.

struct RelationSpec {
  RelationKind kind;
  bool negated = false;  // satisfied via the finite negation check instead
};

enum class Role { d_witness, b_witness };

struct WitnessFamily {
  Role role = Role::d_witness;
  RelationSpec rel;
  std::vector<RelationOperand> members;
};

bool relation_satisfied(const RelationSpec& rel, const RelationOperand& lhs,
                        const RelationOperand& rhs, const Horizon& hz);

bool is_witness(const WitnessFamily& fam, const Universe& uni, const Horizon& hz);

// ---------------------------------------------------------------------------
// Family-level transformation steps.

enum class StepId {
  interleave_pairs,    // all ordered pairs p0 (+) p1
  even_odd_project,    // both halves of every member
  duplicate_step,      // duplicate every member
  split_blocks_step,   // bit string -> table of block values
  complement_concat,   // block values -> complemented concatenation
  complement_split,    // bit string -> block values of its complement
  encode_words,        // index table -> codeword-value table
  ball_trace_step,     // block values -> slalom of q-close codeword indices
  slalom_interleave,   // all ordered pairs of slaloms, entries interleaved
  slalom_project,      // both halves of every slalom
  block_join_tuples,   // all L-tuples joined into one block value per position
  block_split,         // slalom -> its L per-block candidate functions
};

struct StepParams {
  std::optional<BlockProfile> profile;
  const CodeFamily* codes = nullptr;
  Rat q;
  std::size_t L = 0;
  std::optional<RelationSpec> target;  // relation of the transformed family
};

WitnessFamily transform_witness_d(StepId step, const WitnessFamily& G, const StepParams& params);
WitnessFamily transform_witness_b(StepId step, const WitnessFamily& F, const StepParams& params);

}  // namespace massred
