#include "massred/slalom.hpp"

#include <algorithm>

namespace massred {

namespace {

constexpr std::size_t kMaxMaterializedBits = std::size_t(1) << 20;

// number of bits block n may occupy: L * 2^n, rejecting absurd sizes for
// nonzero values
std::size_t block_width_bits(std::size_t n, std::size_t L, bool value_nonzero) {
  if (n >= 64) {
    if (value_nonzero) fail(Errc::BoundViolation, "block width beyond materializable range");
    return kMaxMaterializedBits + 1;
  }
  unsigned long long w = 1ULL << n;
  if (L != 0 && w > kMaxMaterializedBits / L) {
    if (value_nonzero) fail(Errc::BoundViolation, "block width beyond materializable range");
    return kMaxMaterializedBits + 1;
  }
  return static_cast<std::size_t>(w) * L;
}

// bound check via bit length; never materializes the width
void check_bits(const Nat& v, std::size_t n, std::size_t L, const char* what) {
  if (v < 0) fail(Errc::BoundViolation, std::string(what) + " negative");
  if (v == 0) return;
  if (n >= 64) return;  // width 2^n dwarfs any representable value
  unsigned long long w = 1ULL << n;
  if (L != 0 && w > (~0ULL) / L) return;
  if (static_cast<unsigned long long>(boost::multiprecision::msb(v)) >= w * L)
    fail(Errc::BoundViolation, std::string(what) + " exceeds 2^(L*2^n)");
}

}  // namespace

OrderFunc doubly_exp_bound() { return OrderFunc::exp2(OrderFunc::power(2)); }

OrderFunc doubly_exp_bound_blocks(std::size_t L) {
  return OrderFunc::exp2(OrderFunc::product(OrderFunc::constant(Nat(L)), OrderFunc::power(2)));
}

Slalom ball_trace(const BlockFunc& x, const CodeFamily& codes, const Rat& q) {
  if (codes.q != q) fail(Errc::UncertifiedCode, "code family certified for a different radius");
  Slalom s;
  s.L = codes.L;
  s.entries.reserve(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    const ListCode& code = codes.at(x.profile.lens[n]);
    if (!code.certified()) fail(Errc::UncertifiedCode, "code not certified for (q, L)");
    BitString blk = x.block_string(n);
    std::vector<Nat> hit;
    for (std::size_t i = 0; i < code.words.size(); ++i)
      if (normalized_distance(code.words[i], blk) < q) hit.push_back(Nat(i));
    if (hit.size() > s.L) fail(Errc::UncertifiedCode, "certificate contradicted by a real ball");
    s.entries.push_back(std::move(hit));
  }
  return s;
}

BlockFunc encode_index(const FinFunc& y, const CodeFamily& codes, const BlockProfile& profile) {
  if (y.size() != profile.size()) fail(Errc::LengthMismatch, "function length differs from profile");
  std::vector<Nat> vals;
  vals.reserve(y.size());
  for (std::size_t n = 0; n < y.size(); ++n) {
    const ListCode& code = codes.at(profile.lens[n]);
    if (y(n) >= code.words.size())
      fail(Errc::IndexOutOfRange, "index at " + std::to_string(n) + " beyond code size");
    vals.push_back(code.words[y(n).convert_to<std::size_t>()].to_number());
  }
  return BlockFunc(profile, std::move(vals));
}

std::pair<Slalom, Slalom> amplify_d(const Slalom& s) {
  if (s.size() % 2 != 0) fail(Errc::OddLength, "amplification needs even length");
  Slalom a, b;
  a.L = b.L = s.L;
  if (s.bound) {
    a.bound = OrderFunc::rescale(*s.bound);  // u(2n)
    // u(2n+1)
    b.bound = OrderFunc::compose(
        *s.bound, OrderFunc::sum(OrderFunc::product(OrderFunc::constant(2), OrderFunc::arg()),
                                 OrderFunc::constant(1)));
  }
  for (std::size_t n = 0; n < s.size() / 2; ++n) {
    a.entries.push_back(s.entries[2 * n]);
    b.entries.push_back(s.entries[2 * n + 1]);
  }
  return {std::move(a), std::move(b)};
}

FinFunc amplify_b(const FinFunc& y, const OrderFunc& u) {
  for (std::size_t n = 0; n < y.size(); ++n)
    if (!value_below(u, 2 * n, y(n)))
      fail(Errc::BoundViolation, "value at " + std::to_string(n) + " not below u(2n)");
  FinFunc out = duplicate(y);
  out.bound = u;
  return out;
}

std::vector<FinFunc> block_extract(const Slalom& s, std::size_t L) {
  if (L == 0) fail(Errc::RangeExceeded, "block count must be >= 1");
  std::vector<std::vector<Nat>> cand(L);
  for (std::size_t n = 0; n < s.size(); ++n) {
    std::vector<Nat> elems = s.entries[n];
    if (elems.size() > L) fail(Errc::BoundViolation, "slalom wider than block count");
    elems.resize(L, Nat(0));
    std::sort(elems.begin(), elems.end());  // zero padding goes to the front
    for (std::size_t i = 0; i < L; ++i) {
      const Nat& e = elems[i];
      check_bits(e, n, L, "slalom element");
      if (e == 0 || L == 1) {
        // single block: the element is its own block 0
        cand[i].push_back(e);
        continue;
      }
      block_width_bits(n, L, true);
      std::size_t blk = std::size_t(1) << n;
      Nat mask = (Nat(1) << static_cast<unsigned>(blk)) - 1;
      cand[i].push_back((e >> static_cast<unsigned>((L - 1 - i) * blk)) & mask);
    }
  }
  std::vector<FinFunc> out;
  out.reserve(L);
  for (auto& v : cand) out.emplace_back(std::move(v), doubly_exp_bound());
  return out;
}

std::vector<FinFunc> block_adversaries(const Slalom& s, std::size_t L) { return block_extract(s, L); }

FinFunc block_replicate(const FinFunc& y, std::size_t L) {
  if (L == 0) fail(Errc::RangeExceeded, "block count must be >= 1");
  std::vector<Nat> vals;
  vals.reserve(y.size());
  for (std::size_t n = 0; n < y.size(); ++n) {
    const Nat& v = y(n);
    check_bits(v, n, 1, "value");
    if (v == 0 || L == 1) {
      vals.push_back(v);
      continue;
    }
    block_width_bits(n, L, true);  // reject unmaterializable replication
    std::size_t blk = std::size_t(1) << n;
    Nat out = 0;
    for (std::size_t i = 0; i < L; ++i) out = (out << static_cast<unsigned>(blk)) | v;
    vals.push_back(std::move(out));
  }
  return FinFunc(std::move(vals), doubly_exp_bound_blocks(L));
}

FinFunc block_concat(const std::vector<FinFunc>& xs) {
  if (xs.empty()) fail(Errc::EmptyFamily, "block concatenation needs at least one function");
  std::size_t L = xs.size(), len = xs[0].size();
  for (const auto& x : xs)
    if (x.size() != len) fail(Errc::LengthMismatch, "block concatenation needs equal lengths");
  std::vector<Nat> vals;
  vals.reserve(len);
  for (std::size_t n = 0; n < len; ++n) {
    bool any = false;
    for (const auto& x : xs) {
      check_bits(x(n), n, 1, "block value");
      any = any || x(n) != 0;
    }
    if (!any || L == 1) {
      vals.push_back(xs[0](n));
      continue;
    }
    block_width_bits(n, L, true);
    std::size_t blk = std::size_t(1) << n;
    Nat out = 0;
    for (std::size_t i = 0; i < L; ++i) out = (out << static_cast<unsigned>(blk)) | xs[i](n);
    vals.push_back(std::move(out));
  }
  return FinFunc(std::move(vals), doubly_exp_bound_blocks(L));
}

}  // namespace massred
