#pragma once

#include "massred/codec.hpp"
#include "massred/core.hpp"
#include "massred/listcode.hpp"

namespace massred {

// entries(n) = indices of codewords strictly q-close to block n of x.
Slalom ball_trace(const BlockFunc& x, const CodeFamily& codes, const Rat& q);

// block n = the y(n)-th codeword (lex order) at the profile's block length.
BlockFunc encode_index(const FinFunc& y, const CodeFamily& codes, const BlockProfile& profile);

// Even/odd halves; each keeps L and inherits the exact shifted bound.
std::pair<Slalom, Slalom> amplify_d(const Slalom& s);

// duplicate(y) with the bound transfer y(n) < u(2n) <= u(2n+1).
FinFunc amplify_b(const FinFunc& y, const OrderFunc& u);

// Values of s are L blocks of length 2^n; candidate i reads block i of the
// i-th element (entries padded with 0 up to L, numeric ascending order).
std::vector<FinFunc> block_extract(const Slalom& s, std::size_t L);
std::vector<FinFunc> block_adversaries(const Slalom& s, std::size_t L);

// y(n) < 2^(2^n) replicated into L equal blocks.
FinFunc block_replicate(const FinFunc& y, std::size_t L);

// Inverse of extraction: value at n has block i = xs[i](n).
FinFunc block_concat(const std::vector<FinFunc>& xs);

// Exact bound expressions used by the block ops.
OrderFunc doubly_exp_bound();                   // 2^(2^n)
OrderFunc doubly_exp_bound_blocks(std::size_t L);  // 2^(L*2^n)

}  // namespace massred
