#include "massred/witness.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>

namespace massred {

std::size_t universe_cap() {
  if (const char* env = std::getenv("MASSRED_BRUTEFORCE_CAP")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v >= 1 && v <= 24) return std::size_t(1) << v;
  }
  return std::size_t(1) << 16;
}

Universe all_bitstrings(std::size_t N) {
  if (N >= 24 || (std::size_t(1) << N) > universe_cap())
    fail(Errc::UniverseTooLarge, "bit string universe exceeds the cap");
  Universe u;
  for (std::size_t v = 0; v < (std::size_t(1) << N); ++v)
    u.elements.push_back(BitString::from_number(Nat(v), N));
  return u;
}

Universe all_finfuncs(std::size_t N, const OrderFunc& bound) {
  Nat total = 1;
  std::vector<std::size_t> bounds(N);
  for (std::size_t n = 0; n < N; ++n) {
    Nat b = bound(n);
    if (b < 1) fail(Errc::EmptyRange, "value bound must be >= 1");
    total *= b;
    if (total > universe_cap()) fail(Errc::UniverseTooLarge, "function universe exceeds the cap");
    bounds[n] = b.convert_to<std::size_t>();
  }
  Universe u;
  std::vector<Nat> cur(N, Nat(0));
  while (true) {
    u.elements.push_back(FinFunc(cur, bound));
    std::size_t i = 0;
    while (i < N && cur[i] == bounds[i] - 1) cur[i++] = 0;
    if (i == N) break;
    ++cur[i];
  }
  if (N == 0) u.elements.assign(1, FinFunc());
  return u;
}

Universe all_slaloms(std::size_t N, const OrderFunc& bound, std::size_t L) {
  // subsets of size <= L of [0, bound(n)) at every position
  std::vector<std::vector<std::vector<Nat>>> per_pos(N);
  Nat total = 1;
  for (std::size_t n = 0; n < N; ++n) {
    Nat b = bound(n);
    if (b > 16) fail(Errc::UniverseTooLarge, "slalom value bound too large to enumerate");
    std::size_t bb = b.convert_to<std::size_t>();
    for (std::size_t mask = 0; mask < (std::size_t(1) << bb); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) > L) continue;
      std::vector<Nat> set;
      for (std::size_t v = 0; v < bb; ++v)
        if (mask & (std::size_t(1) << v)) set.push_back(Nat(v));
      per_pos[n].push_back(std::move(set));
    }
    total *= per_pos[n].size();
    if (total > universe_cap()) fail(Errc::UniverseTooLarge, "slalom universe exceeds the cap");
  }
  Universe u;
  std::vector<std::size_t> idx(N, 0);
  while (true) {
    Slalom s;
    s.L = L;
    s.bound = bound;
    for (std::size_t n = 0; n < N; ++n) s.entries.push_back(per_pos[n][idx[n]]);
    s.validate();
    u.elements.push_back(std::move(s));
    std::size_t i = 0;
    while (i < N && idx[i] == per_pos[i].size() - 1) idx[i++] = 0;
    if (i == N) break;
    ++idx[i];
  }
  return u;
}

bool relation_satisfied(const RelationSpec& rel, const RelationOperand& lhs,
                        const RelationOperand& rhs, const Horizon& hz) {
  return rel.negated ? check_negation(rel.kind, lhs, rhs, hz)
                     : check_relation(rel.kind, lhs, rhs, hz);
}

bool is_witness(const WitnessFamily& fam, const Universe& uni, const Horizon& hz) {
  if (uni.size() > universe_cap()) fail(Errc::UniverseTooLarge, "universe exceeds the cap");
  if (fam.role == Role::d_witness) {
    for (const auto& x : uni.elements) {
      bool covered = false;
      for (const auto& y : fam.members)
        if (relation_satisfied(fam.rel, x, y, hz)) {
          covered = true;
          break;
        }
      if (!covered) return false;
    }
    return true;
  }
  RelationSpec denial = fam.rel;
  denial.negated = !denial.negated;
  for (const auto& y : uni.elements) {
    bool escaped = false;
    for (const auto& x : fam.members)
      if (relation_satisfied(denial, x, y, hz)) {
        escaped = true;
        break;
      }
    if (!escaped) return false;
  }
  return true;
}

namespace {

const FinFunc& member_func(const RelationOperand& m) {
  if (const auto* f = std::get_if<FinFunc>(&m)) return *f;
  fail(Errc::TypeMismatch, "step needs function members");
}
const BitString& member_bits(const RelationOperand& m) {
  if (const auto* b = std::get_if<BitString>(&m)) return *b;
  fail(Errc::TypeMismatch, "step needs bit string members");
}
const Slalom& member_slalom(const RelationOperand& m) {
  if (const auto* s = std::get_if<Slalom>(&m)) return *s;
  fail(Errc::TypeMismatch, "step needs slalom members");
}

const BlockProfile& need_profile(const StepParams& p) {
  if (!p.profile) fail(Errc::ConfigIncompatible, "step needs a block profile");
  return *p.profile;
}
const CodeFamily& need_codes(const StepParams& p) {
  if (!p.codes) fail(Errc::ConfigIncompatible, "step needs a code family");
  return *p.codes;
}

Slalom interleave_slaloms(const Slalom& a, const Slalom& b) {
  if (a.size() != b.size()) fail(Errc::LengthMismatch, "slalom interleave needs equal lengths");
  if (a.L != b.L) fail(Errc::LengthMismatch, "slalom interleave needs equal widths");
  Slalom out;
  out.L = a.L;
  for (std::size_t n = 0; n < a.size(); ++n) {
    out.entries.push_back(a.entries[n]);
    out.entries.push_back(b.entries[n]);
  }
  return out;
}

std::vector<RelationOperand> apply_step(StepId step, const std::vector<RelationOperand>& in,
                                        const StepParams& params) {
  std::vector<RelationOperand> out;
  switch (step) {
    case StepId::interleave_pairs:
      for (const auto& a : in)
        for (const auto& b : in) out.push_back(interleave(member_func(a), member_func(b)));
      break;
    case StepId::even_odd_project:
      for (const auto& a : in) {
        auto [e, o] = even_odd_split(member_func(a));
        out.push_back(std::move(e));
        out.push_back(std::move(o));
      }
      break;
    case StepId::duplicate_step:
      for (const auto& a : in) out.push_back(duplicate(member_func(a)));
      break;
    case StepId::split_blocks_step:
      for (const auto& a : in)
        out.push_back(FinFunc(split_blocks(need_profile(params), member_bits(a)).values));
      break;
    case StepId::complement_concat:
      for (const auto& a : in)
        out.push_back(
            concat_blocks(BlockFunc(need_profile(params), member_func(a).values)).complement());
      break;
    case StepId::complement_split:
      for (const auto& a : in)
        out.push_back(FinFunc(split_blocks(need_profile(params), member_bits(a).complement()).values));
      break;
    case StepId::encode_words:
      for (const auto& a : in)
        out.push_back(FinFunc(
            encode_index(member_func(a), need_codes(params), need_profile(params)).values));
      break;
    case StepId::ball_trace_step:
      for (const auto& a : in)
        out.push_back(ball_trace(BlockFunc(need_profile(params), member_func(a).values),
                                 need_codes(params), params.q));
      break;
    case StepId::slalom_interleave:
      for (const auto& a : in)
        for (const auto& b : in)
          out.push_back(interleave_slaloms(member_slalom(a), member_slalom(b)));
      break;
    case StepId::slalom_project:
      for (const auto& a : in) {
        auto [x, y] = amplify_d(member_slalom(a));
        out.push_back(std::move(x));
        out.push_back(std::move(y));
      }
      break;
    case StepId::block_join_tuples: {
      if (params.L == 0) fail(Errc::ConfigIncompatible, "step needs a block count");
      if (in.empty()) break;
      std::vector<std::size_t> idx(params.L, 0);
      while (true) {
        std::vector<FinFunc> tuple;
        tuple.reserve(params.L);
        for (auto i : idx) tuple.push_back(member_func(in[i]));
        out.push_back(block_concat(tuple));
        std::size_t i = 0;
        while (i < params.L && idx[i] == in.size() - 1) idx[i++] = 0;
        if (i == params.L) break;
        ++idx[i];
      }
      break;
    }
    case StepId::block_split:
      for (const auto& a : in) {
        if (params.L == 0) fail(Errc::ConfigIncompatible, "step needs a block count");
        for (auto& f : block_adversaries(member_slalom(a), params.L)) out.push_back(std::move(f));
      }
      break;
  }
  return out;
}

}  // namespace

WitnessFamily transform_witness_d(StepId step, const WitnessFamily& G, const StepParams& params) {
  WitnessFamily out;
  out.role = Role::d_witness;
  out.rel = params.target.value_or(G.rel);
  out.members = apply_step(step, G.members, params);
  return out;
}

WitnessFamily transform_witness_b(StepId step, const WitnessFamily& F, const StepParams& params) {
  WitnessFamily out;
  out.role = Role::b_witness;
  out.rel = params.target.value_or(F.rel);
  out.members = apply_step(step, F.members, params);
  return out;
}

}  // namespace massred
