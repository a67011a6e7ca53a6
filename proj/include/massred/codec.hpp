#pragma once

#include "massred/core.hpp"

namespace massred {

// ---------------------------------------------------------------------------
// BlockProfile: finite table of block lengths with running sums.

enum class ProfileKind { geometric, superexp, explicit_ };

struct BlockProfile {
  ProfileKind kind = ProfileKind::explicit_;
  std::size_t k = 0;  // geometric shape parameter, 0 when not applicable
  std::vector<std::size_t> lens;
  std::vector<std::size_t> partial_sums;  // H(n) = sum of lens[0..n]

  BlockProfile() = default;
  BlockProfile(ProfileKind kd, std::size_t kk, std::vector<std::size_t> ls);

  std::size_t size() const { return lens.size(); }
  std::size_t total_len() const { return partial_sums.empty() ? 0 : partial_sums.back(); }
  std::size_t block_lo(std::size_t n) const { return n == 0 ? 0 : partial_sums[n - 1]; }
  std::size_t block_hi(std::size_t n) const { return partial_sums[n]; }

  bool operator==(const BlockProfile& o) const { return lens == o.lens; }
};

// BlockFunc: table with values(n) < 2^lens(n); block n doubles as the
// width-lens(n) binary string of values(n).

struct BlockFunc {
  BlockProfile profile;
  std::vector<Nat> values;

  BlockFunc() = default;
  BlockFunc(BlockProfile p, std::vector<Nat> v);

  std::size_t size() const { return values.size(); }
  const Nat& operator()(std::size_t n) const { return values.at(n); }
  BitString block_string(std::size_t n) const;

  bool operator==(const BlockFunc& o) const {
    return profile == o.profile && values == o.values;
  }
};

// ---------------------------------------------------------------------------
// Block codecs.

BitString concat_blocks(const BlockFunc& x);
BlockFunc split_blocks(const BlockProfile& profile, const BitString& z);

// m-th interval of the a-adic tiling: [lo, hi) with hi - lo = a^m.
struct IntervalBounds {
  Nat lo, hi;
};
IntervalBounds interval_bounds(const Nat& a, std::size_t m);

// Geometric block profile: k minimal with (1 + 1/(2c))^k > 2, lens(n) = floor(2^(n/k)),
// threshold = first index from which both H(n) >= n+1+2c and lens(m+1)*c <= H(m) hold
// out to the end of the table.
struct GeometricProfile {
  std::size_t k = 0;
  BlockProfile profile;
  std::size_t threshold = 0;
};
GeometricProfile geometric_profile(const Nat& c, std::size_t N);

// Superexponential profile: block lengths a^m for m = 2 .. 1+count.
BlockProfile superexp_profile(const Nat& a, std::size_t count);

// ---------------------------------------------------------------------------
// Doubling maps.

FinFunc interleave(const FinFunc& p0, const FinFunc& p1);
std::pair<FinFunc, FinFunc> even_odd_split(const FinFunc& y);
FinFunc duplicate(const FinFunc& y);

}  // namespace massred
