#pragma once

#include "massred/codec.hpp"
#include "massred/core.hpp"

#include <map>

namespace massred {

// ---------------------------------------------------------------------------
// ListCode: distinct lex-sorted words of length r; certification records the
// exact maximum over all centers of the number of words strictly inside the
// radius-q ball.

struct ListCode {
  std::size_t r = 0;
  Rat q;
  std::size_t L = 0;
  std::vector<BitString> words;                 // strictly increasing, lex
  std::optional<std::size_t> verified_max_list;  // set once certified

  bool certified() const { return verified_max_list && *verified_max_list <= L; }
};

// Brute-force cap on r; overridable via MASSRED_BRUTEFORCE_CAP.
std::size_t bruteforce_cap();

// Exhaustive: max over all centers sigma in 2^r of |{w : d(w, sigma) < q}|.
std::size_t verify_list_max(const ListCode& cand, const Rat& q);

enum class BuildStrategy { lex_greedy, random_greedy, exhaustive };

ListCode build_code(std::size_t r, const Rat& q, std::size_t L, std::size_t target_size,
                    BuildStrategy strategy, std::uint64_t seed = 0);

// One certified code per distinct block length of the profile, memoized.
// Target size per length r is 2^floor(rate * r), at least 1.
struct CodeFamily {
  Rat q;
  std::size_t L = 0;
  std::map<std::size_t, ListCode> by_len;

  const ListCode& at(std::size_t r) const;
};

CodeFamily code_family(const BlockProfile& profile, const Rat& q, std::size_t L,
                       const Rat& rate);

}  // namespace massred
