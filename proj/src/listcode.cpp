#include "massred/listcode.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <numeric>
#include <random>

namespace massred {

namespace {

std::uint32_t word_bits(const BitString& w) {
  return w.to_number().convert_to<std::uint32_t>();
}

// largest diff count with diff/r < q, capped at r
std::size_t max_diff(std::size_t r, const Rat& q) {
  Nat num = rat_num(q), den = rat_den(q);
  if (num <= 0) fail(Errc::RangeExceeded, "radius must be positive");
  Nat d = (num * r - 1) / den;
  if (d > r) d = r;
  return d.convert_to<std::size_t>();
}

std::vector<std::uint32_t> ball_masks(std::size_t r, std::size_t maxdiff) {
  std::vector<std::uint32_t> masks;
  std::uint32_t total = std::uint32_t(1) << r;
  for (std::uint32_t m = 0; m < total; ++m)
    if (static_cast<std::size_t>(std::popcount(m)) <= maxdiff) masks.push_back(m);
  return masks;
}

struct GreedyState {
  std::size_t r;
  std::size_t L;
  std::vector<std::uint32_t> masks;         // ball offsets
  std::vector<std::uint16_t> counts;        // words within radius of each center
  std::vector<std::uint32_t> words;

  bool admissible(std::uint32_t w) const {
    for (auto m : masks)
      if (counts[w ^ m] >= L) return false;
    return true;
  }
  void admit(std::uint32_t w) {
    for (auto m : masks) ++counts[w ^ m];
    words.push_back(w);
  }
  void retract(std::uint32_t w) {
    for (auto m : masks) --counts[w ^ m];
    words.pop_back();
  }
};

bool exhaustive_search(GreedyState& st, std::uint32_t from, std::size_t target) {
  if (st.words.size() == target) return true;
  std::uint32_t total = std::uint32_t(1) << st.r;
  for (std::uint32_t w = from; w < total; ++w) {
    if (total - w < target - st.words.size()) return false;
    if (!st.admissible(w)) continue;
    st.admit(w);
    if (exhaustive_search(st, w + 1, target)) return true;
    st.retract(w);
  }
  return false;
}

ListCode finish(std::size_t r, const Rat& q, std::size_t L, std::vector<std::uint32_t> ws) {
  std::sort(ws.begin(), ws.end());
  ListCode code;
  code.r = r;
  code.q = q;
  code.L = L;
  code.words.reserve(ws.size());
  for (auto w : ws) code.words.push_back(BitString::from_number(Nat(w), r));
  std::size_t maxl = verify_list_max(code, q);
  if (maxl > L) fail(Errc::Infeasible, "built code fails its own certification");
  code.verified_max_list = maxl;
  return code;
}

}  // namespace

std::size_t bruteforce_cap() {
  if (const char* env = std::getenv("MASSRED_BRUTEFORCE_CAP")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v >= 1 && v <= 24) return static_cast<std::size_t>(v);
  }
  return 16;
}

std::size_t verify_list_max(const ListCode& cand, const Rat& q) {
  if (cand.r > bruteforce_cap())
    fail(Errc::BlockLengthTooLarge, "block length exceeds brute-force cap");
  if (cand.r == 0) fail(Errc::ZeroLength, "code words must be nonempty");
  for (std::size_t i = 0; i < cand.words.size(); ++i) {
    if (cand.words[i].size() != cand.r) fail(Errc::LengthMismatch, "code word of wrong length");
    if (i > 0 && !(cand.words[i - 1] < cand.words[i]))
      fail(Errc::SchemaInvalid, "code words must be strictly lex-increasing");
  }
  std::size_t maxdiff = max_diff(cand.r, q);
  std::vector<std::uint32_t> ws;
  ws.reserve(cand.words.size());
  for (const auto& w : cand.words) ws.push_back(word_bits(w));

  std::uint32_t total = std::uint32_t(1) << cand.r;
  std::size_t best = 0;
  for (std::uint32_t sigma = 0; sigma < total; ++sigma) {
    std::size_t c = 0;
    for (auto w : ws)
      c += static_cast<std::size_t>(std::popcount(sigma ^ w)) <= maxdiff;
    best = std::max(best, c);
  }
  return best;
}

ListCode build_code(std::size_t r, const Rat& q, std::size_t L, std::size_t target_size,
                    BuildStrategy strategy, std::uint64_t seed) {
  if (r > bruteforce_cap()) fail(Errc::BlockLengthTooLarge, "block length exceeds brute-force cap");
  if (r == 0) fail(Errc::ZeroLength, "block length must be >= 1");
  if (L == 0) fail(Errc::RangeExceeded, "list size must be >= 1");

  GreedyState st;
  st.r = r;
  st.L = L;
  st.masks = ball_masks(r, max_diff(r, q));
  st.counts.assign(std::size_t(1) << r, 0);

  std::uint32_t total = std::uint32_t(1) << r;
  if (strategy == BuildStrategy::exhaustive) {
    if (!exhaustive_search(st, 0, target_size))
      fail(Errc::Infeasible, "no code of the requested size exists");
    return finish(r, q, L, st.words);
  }

  std::vector<std::uint32_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  if (strategy == BuildStrategy::random_greedy) {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  // full scan; target_size is a floor, not a stopping point
  for (auto w : order)
    if (st.admissible(w)) st.admit(w);
  if (st.words.size() < target_size)
    fail(Errc::Infeasible, "greedy search exhausted below the target size");
  return finish(r, q, L, st.words);
}

const ListCode& CodeFamily::at(std::size_t r) const {
  auto it = by_len.find(r);
  if (it == by_len.end()) fail(Errc::UncertifiedCode, "no code for block length " + std::to_string(r));
  return it->second;
}

CodeFamily code_family(const BlockProfile& profile, const Rat& q, std::size_t L,
                       const Rat& rate) {
  CodeFamily fam;
  fam.q = q;
  fam.L = L;
  for (std::size_t n = 0; n < profile.size(); ++n) {
    std::size_t r = profile.lens[n];
    if (fam.by_len.count(r)) continue;
    Nat exp = rat_num(rate) * r / rat_den(rate);
    if (exp > 24) fail(Errc::RangeExceeded, "target code size too large");
    std::size_t target = std::size_t(1) << exp.convert_to<std::size_t>();
    if (target < 1) target = 1;
    try {
      fam.by_len.emplace(r, build_code(r, q, L, target, BuildStrategy::lex_greedy));
    } catch (const Error& e) {
      if (e.code == Errc::Infeasible)
        fail(Errc::Infeasible,
             "code family infeasible at block length " + std::to_string(r) + ": " + e.what());
      throw;
    }
  }
  return fam;
}

}  // namespace massred
