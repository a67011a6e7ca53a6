// End-to-end acceptance run: one pass/fail line per criterion, nonzero exit on
// any failure.  Budgets are generous; every check is exact rational/integer.

#include "massred/forcing.hpp"
#include "massred/reduction.hpp"
#include "massred/witness.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace massred;

namespace {

std::mt19937_64 rng_for(std::uint64_t seed) { return std::mt19937_64(seed); }

BlockProfile prof(std::vector<std::size_t> lens) {
  return BlockProfile(ProfileKind::explicit_, 0, std::move(lens));
}

OrderFunc two() { return OrderFunc::constant(Nat(2)); }

PipelineConfig base_config(std::size_t j, std::size_t L, std::size_t N, std::size_t hits) {
  return make_pipeline_config(Rat(1, 8), Nat(8), j, L, Rat(1, 4), Horizon(N, 0, hits));
}

// index combinations of sizes 0..k out of n elements
std::vector<std::vector<std::size_t>> subsets_upto(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out{{}};
  for (std::size_t start = 0; start < out.size(); ++start) {
    std::vector<std::size_t> cur = out[start];
    if (cur.size() == k) continue;
    std::size_t lo = cur.empty() ? 0 : cur.back() + 1;
    for (std::size_t i = lo; i < n; ++i) {
      cur.push_back(i);
      out.push_back(cur);
      cur.pop_back();
    }
  }
  return out;
}

// --------------------------------------------------------------------------
// 1. codec round trips

bool criterion_1() {
  auto rng = rng_for(101);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t N = 1 + rng() % 10;
    std::vector<std::size_t> lens;
    for (std::size_t n = 0; n < N; ++n) lens.push_back(1 + rng() % 8);
    BlockProfile p = prof(lens);
    std::vector<Nat> vals;
    for (std::size_t n = 0; n < N; ++n) vals.push_back(Nat(rng() % (std::uint64_t(1) << lens[n])));
    BlockFunc x(p, vals);
    if (split_blocks(p, concat_blocks(x)) != x) return false;
    BitString w(p.total_len());
    for (std::size_t i = 0; i < w.size(); ++i) w.set(i, rng() & 1);
    if (concat_blocks(split_blocks(p, w)) != w) return false;
  }
  return true;
}

// --------------------------------------------------------------------------
// 2. blockwise closeness forces prefix agreement above q - 2/c

bool criterion_2() {
  auto rng = rng_for(202);
  const Nat c(8);
  const Rat q(3, 8);
  GeometricProfile g = geometric_profile(c, 30);
  if (g.k != 12) return false;
  const BlockProfile& p = g.profile;
  Rat floor_ratio = q - Rat(2, c);
  for (int trial = 0; trial < 500; ++trial) {
    // per block: y random, x = y with exactly floor((1-q)*len) bits flipped
    BitString x(p.total_len()), y(p.total_len());
    for (std::size_t n = 0; n < p.size(); ++n) {
      std::size_t len = p.lens[n];
      std::size_t flips = 5 * len / 8;  // floor((1 - q) * len), q = 3/8
      std::vector<std::size_t> pos(len);
      for (std::size_t i = 0; i < len; ++i) pos[i] = i;
      std::shuffle(pos.begin(), pos.end(), rng);
      for (std::size_t i = 0; i < len; ++i) {
        bool b = rng() & 1;
        y.set(p.block_lo(n) + i, b);
        x.set(p.block_lo(n) + i, b);
      }
      for (std::size_t i = 0; i < flips; ++i)
        x.set(p.block_lo(n) + pos[i], !x[p.block_lo(n) + pos[i]]);
    }
    BitString agree = agreement_indicator(x, y);
    for (std::size_t m = 1; m <= agree.size(); ++m)
      if (!(Rat(Nat(agree.count_ones(m)), Nat(m)) > floor_ratio)) return false;
  }
  return true;
}

// --------------------------------------------------------------------------
// 3. list-decoding verifier vs oracle, greedy builds

std::size_t max_list_oracle(const std::vector<BitString>& words, std::size_t r, const Rat& q) {
  std::size_t best = 0;
  for (std::uint64_t center = 0; center < (std::uint64_t(1) << r); ++center) {
    BitString sigma = BitString::from_number(Nat(center), r);
    std::size_t inside = 0;
    for (const auto& w : words) {
      std::size_t diff = 0;
      for (std::size_t i = 0; i < r; ++i) diff += sigma[i] != w[i];
      if (Rat(Nat(diff), Nat(r)) < q) ++inside;
    }
    best = std::max(best, inside);
  }
  return best;
}

bool criterion_3() {
  auto rng = rng_for(303);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t r = 2 + rng() % 7;
    std::set<Nat> chosen;
    std::size_t count = 1 + rng() % std::min<std::size_t>(6, (std::size_t(1) << r) - 1);
    while (chosen.size() < count) chosen.insert(Nat(rng() % (std::uint64_t(1) << r)));
    ListCode c;
    c.r = r;
    c.q = Rat(1 + rng() % 7, 8);
    c.L = 8;
    for (const auto& v : chosen) c.words.push_back(BitString::from_number(v, r));
    std::sort(c.words.begin(), c.words.end());
    if (verify_list_max(c, c.q) != max_list_oracle(c.words, r, c.q)) return false;
  }
  struct Spec {
    std::size_t r, L;
    Rat q;
  };
  for (const Spec& s : {Spec{8, 1, Rat(1, 4)}, Spec{12, 2, Rat(1, 4)}, Spec{14, 2, Rat(3, 8)}}) {
    ListCode code = build_code(s.r, s.q, s.L, 2, BuildStrategy::lex_greedy);
    if (!code.certified() || code.words.size() < 2) return false;
    std::printf("  [3] r=%zu q=%lld/%lld L=%zu achieved |C|=%zu\n", s.r,
                rat_num(s.q).convert_to<long long>(), rat_den(s.q).convert_to<long long>(), s.L,
                code.words.size());
  }
  return true;
}

// --------------------------------------------------------------------------
// 4. slalom adjunction and capture/avoidance soundness

bool criterion_4() {
  auto rng = rng_for(404);
  BlockProfile p = prof({3, 3, 4});
  CodeFamily fam = code_family(p, Rat(1, 3), 2, Rat(1, 2));
  for (int trial = 0; trial < 250; ++trial) {
    std::vector<Nat> vals;
    for (auto len : p.lens) vals.push_back(Nat(rng() % (std::uint64_t(1) << len)));
    BlockFunc x(p, vals);
    Slalom s = ball_trace(x, fam, Rat(1, 3));
    for (std::size_t n = 0; n < p.size(); ++n) {
      const ListCode& code = fam.at(p.lens[n]);
      for (std::size_t i = 0; i < code.words.size(); ++i) {
        bool close = normalized_distance(code.words[i], x.block_string(n)) < Rat(1, 3);
        if (s.contains(n, Nat(i)) != close) return false;
      }
    }
  }
  // avoidance transfer through replication
  for (int trial = 0; trial < 250; ++trial) {
    std::size_t L = 1 + rng() % 3;
    std::size_t n = rng() % 3;
    std::size_t width = std::size_t(1) << n;
    Slalom s;
    s.L = L;
    s.entries.assign(n + 1, {});
    std::set<Nat> entry;
    while (entry.size() < L) entry.insert(Nat(rng() % (std::uint64_t(1) << (L * width))));
    s.entries[n] = std::vector<Nat>(entry.begin(), entry.end());
    auto xs = block_adversaries(s, L);
    Nat yv = Nat(rng() % (std::uint64_t(1) << width));
    bool all_differ = true;
    for (std::size_t i = 0; i < L; ++i) all_differ = all_differ && xs[i](n) != yv;
    std::vector<Nat> yvals(n + 1, Nat(0));
    yvals[n] = yv;
    Nat rep = block_replicate(FinFunc(yvals), L)(n);
    if (all_differ && s.contains(n, rep)) return false;
  }
  return true;
}

// --------------------------------------------------------------------------
// 5. D-pipeline candidate existence

bool criterion_5() {
  auto rng = rng_for(505);
  struct Shape {
    std::size_t j, L, N;
  };
  // block counts stay <= 36: the first length-9 block (index 39) would need a
  // 4-word code at q = 3/8, beyond the best possible packing
  std::vector<Shape> shapes = {{0, 1, 26}, {1, 1, 14}, {2, 1, 7}, {0, 1, 36}, {2, 2, 7}, {2, 3, 7}};
  std::vector<PipelineConfig> cfgs;
  for (const auto& s : shapes) cfgs.push_back(base_config(s.j, s.L, s.N, 3));
  for (int inst = 0; inst < 200; ++inst) {
    const Shape& s = shapes[inst % shapes.size()];
    const PipelineConfig& cfg = cfgs[inst % shapes.size()];
    std::size_t m = 1 + rng() % 3;
    std::vector<FinFunc> family;
    if (s.L == 1) {
      // binary members sharing everything except position 0
      std::vector<Nat> shared;
      for (std::size_t n = 0; n < s.N; ++n) shared.push_back(Nat(rng() & 1));
      for (std::size_t i = 0; i < m; ++i) {
        auto vals = shared;
        vals[0] = Nat(i & 1);
        family.push_back(FinFunc(vals));
      }
    } else {
      // L >= 2: replicated nonzero indices overflow the per-block code budget
      // at desk scale, so members stay at the always-plantable zero value
      for (std::size_t i = 0; i < m; ++i)
        family.push_back(FinFunc(std::vector<Nat>(s.N, Nat(0))));
    }
    BitString y = build_D_witness(family, cfg);
    PipelineDResult res = pipeline_D(y, cfg);
    bool some_candidate = false;
    for (const auto& cand : res.candidates) {
      bool covers_all = true;
      for (const auto& g : family) {
        std::size_t agreements = 0;
        for (std::size_t n = 0; n < s.N; ++n) agreements += cand(n) == g(n);
        covers_all = covers_all && agreements >= cfg.horizon.hits;
      }
      some_candidate = some_candidate || covers_all;
    }
    if (!some_candidate) return false;
  }
  return true;
}

// --------------------------------------------------------------------------
// 6. B-pipeline uniformity and avoidance chain

bool criterion_6() {
  auto rng = rng_for(606);
  std::vector<PipelineConfig> cfgs = {base_config(0, 1, 26, 1), base_config(1, 1, 14, 1)};
  for (int inst = 0; inst < 200; ++inst) {
    const PipelineConfig& cfg = cfgs[inst % 2];
    std::size_t N = cfg.horizon.N;
    std::vector<Nat> yv, xv;
    for (std::size_t n = 0; n < N; ++n) {
      int b = int(rng() & 1);
      yv.push_back(Nat(b));
      xv.push_back(Nat(1 - b));
    }
    FinFunc y(yv), x(xv);
    PipelineBResult run = pipeline_B(y, cfg);
    if (replay_pipeline_B(run.trace) != run.z) return false;
    if (verify_avoidance_chain(y, x, cfg, run) != 0) return false;
  }
  return true;
}

// --------------------------------------------------------------------------
// 7. witness transform preservation, exhaustive + adversary transfer

bool preserves(const Universe& src_uni, const Horizon& src_hz, const RelationSpec& src_rel,
               Role src_role, const Universe& dst_uni, const Horizon& dst_hz,
               const RelationSpec& dst_rel, Role dst_role,
               const std::function<WitnessFamily(const WitnessFamily&)>& step) {
  auto families = subsets_upto(src_uni.size(), 4);
  for (const auto& idx : families) {
    WitnessFamily fam;
    fam.role = src_role;
    fam.rel = src_rel;
    for (auto i : idx) fam.members.push_back(src_uni.elements[i]);
    if (!is_witness(fam, src_uni, src_hz)) continue;
    WitnessFamily out = step(fam);
    out.role = dst_role;
    out.rel = dst_rel;
    if (!is_witness(out, dst_uni, dst_hz)) return false;
  }
  return true;
}

bool criterion_7() {
  RelationSpec neq{AlwaysDifferent{}, false};

  // interleave step: always-different families double their horizon
  if (!preserves(all_finfuncs(2, two()), Horizon(2, 0, 1), neq, Role::d_witness,
                 all_finfuncs(4, two()), Horizon(4, 0, 1), neq, Role::d_witness,
                 [](const WitnessFamily& G) {
                   return transform_witness_d(StepId::interleave_pairs, G, StepParams{});
                 }))
    return false;

  // complement-concat step: blockwise escape turns into low agreement density
  OrderFunc stepped =
      OrderFunc::exp2(OrderFunc::sum(OrderFunc::constant(Nat(1)),
                                     OrderFunc::compose(OrderFunc::arg(), OrderFunc::floor_div(2))));
  StepParams kh_params;
  kh_params.profile = prof({1, 1, 2});
  if (!preserves(all_finfuncs(3, stepped), Horizon(3, 0, 1), neq, Role::b_witness,
                 all_bitstrings(4), Horizon(4, 0, 1), RelationSpec{AgreementAbove{Rat(1, 2)}, false},
                 Role::b_witness, [&](const WitnessFamily& F) {
                   return transform_witness_b(StepId::complement_concat, F, kh_params);
                 }))
    return false;

  // slalom doubling step: capture families double their horizon
  RelationSpec avoid{SlalomAvoids{std::nullopt, 1}, false};
  Universe slaloms2 = all_slaloms(2, two(), 1);
  {
    auto families = subsets_upto(slaloms2.size(), 4);
    Universe f2 = all_finfuncs(2, two()), f4 = all_finfuncs(4, two());
    for (const auto& idx : families) {
      WitnessFamily fam;
      fam.role = Role::b_witness;
      fam.rel = avoid;
      for (auto i : idx) fam.members.push_back(slaloms2.elements[i]);
      if (!is_witness(fam, f2, Horizon(2, 0, 1))) continue;
      WitnessFamily out = transform_witness_b(StepId::slalom_interleave, fam, StepParams{});
      out.role = Role::b_witness;
      out.rel = avoid;
      if (!is_witness(out, f4, Horizon(4, 0, 1))) return false;
    }
  }

  // blocks step: always-different families lift to joined block values
  StepParams blk_params;
  blk_params.L = 2;
  if (!preserves(all_finfuncs(2, doubly_exp_bound()), Horizon(2, 0, 1), neq, Role::d_witness,
                 all_finfuncs(2, doubly_exp_bound_blocks(2)), Horizon(2, 0, 1), neq,
                 Role::d_witness, [&](const WitnessFamily& G) {
                   return transform_witness_d(StepId::block_join_tuples, G, blk_params);
                 }))
    return false;

  // adversary transfer, code-backed steps, seeded
  auto rng = rng_for(707);
  BlockProfile cp = prof({2, 2});
  CodeFamily codes = code_family(cp, Rat(1, 4), 1, Rat(1, 1));
  for (int trial = 0; trial < 100; ++trial) {
    // trace step: avoidance of the trace equals blockwise distance >= q
    std::vector<Nat> bv;
    for (auto len : cp.lens) bv.push_back(Nat(rng() % (std::uint64_t(1) << len)));
    BlockFunc x(cp, bv);
    Slalom s = ball_trace(x, codes, Rat(1, 4));
    for (std::size_t n = 0; n < cp.size(); ++n) {
      Nat gi(rng() % codes.at(cp.lens[n]).words.size());
      bool avoided = !s.contains(n, gi);
      bool far = normalized_distance(codes.at(cp.lens[n]).words[gi.convert_to<std::size_t>()],
                                     x.block_string(n)) >= Rat(1, 4);
      if (avoided != far) return false;
    }
    // complement step: a full agreeing block caps the density estimate
    BlockProfile hp = prof({1, 1, 2});
    BitString w(4);
    for (std::size_t i = 0; i < 4; ++i) w.set(i, rng() & 1);
    std::vector<Nat> mv;
    for (auto len : hp.lens) mv.push_back(Nat(rng() % (std::uint64_t(1) << len)));
    BlockFunc member(hp, mv);
    BlockFunc wb = split_blocks(hp, w);
    BitString adv = concat_blocks(member).complement();
    for (std::size_t n = 0; n < hp.size(); ++n)
      if (wb(n) == member(n) &&
          lower_density_estimate(agreement_indicator(w, adv), 1) > Rat(1, 2))
        return false;
  }
  return true;
}

// --------------------------------------------------------------------------
// 8. partition thinning, exhaustive where enumerable

bool thin_ok(const PrunedTree& T, std::size_t n, const std::set<TreeNode>& C1,
             const std::set<TreeNode>& C2) {
  ThinResult r = thin_partition(T, {}, n, C1, C2);
  for (const auto& node : r.tree.nodes)
    if (!T.contains(node)) return false;
  if (r.case_id == 1) return r.tau.empty() && full_branching_check(r.tree, {}, n);
  return r.tau.size() == n && full_branching_check(r.tree, r.tau, n);
}

bool criterion_8() {
  // fully enumerable cases
  struct Cfg {
    Nat F;
    std::size_t n;
  };
  for (const Cfg& c : {Cfg{Nat(2), 1}, Cfg{Nat(2), 2}, Cfg{Nat(3), 1}}) {
    PrunedTree T = PrunedTree::complete(OrderFunc::constant(c.F), 2 * c.n);
    std::vector<TreeNode> leaves = T.leaves();
    std::uint64_t total = std::uint64_t(1) << leaves.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      std::set<TreeNode> C1, C2;
      for (std::size_t i = 0; i < leaves.size(); ++i)
        ((mask >> i) & 1 ? C1 : C2).insert(leaves[i]);
      if (!thin_ok(T, c.n, C1, C2)) return false;
    }
  }

  // F = 3, n = 2: 81 leaves, full enumeration infeasible; cylinder partitions
  // by depth-2 ancestor plus seeded random partitions
  PrunedTree T = PrunedTree::complete(OrderFunc::constant(Nat(3)), 4);
  std::vector<TreeNode> leaves = T.leaves();
  for (std::uint32_t mask = 0; mask < (1u << 9); ++mask) {
    std::set<TreeNode> C1, C2;
    for (const auto& leaf : leaves) {
      std::size_t anc = leaf[0] * 3 + leaf[1];
      ((mask >> anc) & 1 ? C1 : C2).insert(leaf);
    }
    if (!thin_ok(T, 2, C1, C2)) return false;
  }
  auto rng = rng_for(808);
  for (int trial = 0; trial < 20000; ++trial) {
    std::set<TreeNode> C1, C2;
    for (const auto& leaf : leaves) (rng() & 1 ? C1 : C2).insert(leaf);
    if (!thin_ok(T, 2, C1, C2)) return false;
  }
  return true;
}

// --------------------------------------------------------------------------
// 9. forcing defeats the table functionals

OrderFunc generous() {
  return OrderFunc::exp2(OrderFunc::exp2(
      OrderFunc::sum(OrderFunc::product(OrderFunc::constant(Nat(6)), OrderFunc::arg()),
                     OrderFunc::constant(Nat(2)))));
}

bool criterion_9() {
  std::vector<Functional> functionals;
  functionals.push_back(Functional::from_rule(
      [](const TreeNode& sigma, std::size_t t) -> std::optional<Nat> {
        if (t < sigma.size()) return Nat(sigma[t]);
        return std::nullopt;
      }));
  functionals.push_back(Functional::from_rule(
      [](const TreeNode& sigma, std::size_t) -> std::optional<Nat> {
        if (sigma.size() >= 1) return Nat(0);
        return std::nullopt;
      }));
  functionals.push_back(Functional::from_rule(
      [](const TreeNode& sigma, std::size_t t) -> std::optional<Nat> {
        if (t + 1 > sigma.size()) return std::nullopt;
        unsigned p = 0;
        for (std::size_t i = 0; i <= t; ++i) p ^= sigma[i] & 1;
        return Nat(p);
      }));

  OrderFunc G = generous();
  for (const auto& Phi : functionals) {
    ForcingResult zero = run_forcing(two(), G, Phi, 0, 4, 1000);
    if (zero.tree.nodes.size() != 31 || !zero.g.empty()) return false;

    ForcingResult res = run_forcing(two(), G, Phi, 1, 12, 1 << 20);
    res.tree.validate();
    verify_fatness(res.tree, G, res.cert);
    if (res.ns.size() != 1) return false;
    std::size_t n1 = res.ns[0];
    for (std::size_t t = 1; t <= n1; ++t) {
      if (!res.g.count(t)) return false;
      if (!value_below(G, t, res.g.at(t))) return false;
    }
    if (res.frontier.empty()) return false;
    for (const auto& rho : res.frontier)
      for (const auto& [t, gv] : res.g) {
        auto v = Phi.eval(rho, t);
        if (v && *v == gv) return false;
      }
    // exact halving ledger: one thinning per argument, heights 2^(2 n1) / 2^i
    if (res.ledger.size() != n1) return false;
    for (std::size_t i = 0; i < n1; ++i) {
      if (res.ledger[i].arg != i + 1) return false;
      if (res.ledger[i].height != (std::size_t(1) << (2 * n1)) >> (i + 1)) return false;
    }
    bool exhausted = false;
    try {
      run_forcing(two(), G, Phi, 2, 12, 1 << 20);
    } catch (const Error& e) {
      exhausted = e.code == Errc::DepthExhausted;
    }
    if (!exhausted) return false;
  }
  return true;
}

// --------------------------------------------------------------------------
// 10. gamma/delta estimator sanity

bool criterion_10() {
  auto rng = rng_for(1010);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t len = 4 + rng() % 13;
    auto random_bits = [&] {
      BitString b(len);
      for (std::size_t i = 0; i < len; ++i) b.set(i, rng() & 1);
      return b;
    };
    BitString a = random_bits();
    std::vector<BitString> fam;
    for (std::size_t i = 0; i < 1 + rng() % 3; ++i) fam.push_back(random_bits());
    std::size_t from = 1 + rng() % (len - 1);
    GammaDelta gd = estimate_gamma_delta(a, fam, from);
    if (gd.gamma_hat < gd.delta_hat || gd.gamma_hat > 1 || gd.delta_hat < 0) return false;
    if (estimate_gamma_delta(a, {a, random_bits()}, from).gamma_hat != 1) return false;
    BitString c = random_bits();
    // complement-closed family around a: the complement member pins delta at 0
    if (estimate_gamma_delta(a, {a, a.complement(), c, c.complement()}, from).delta_hat != 0)
      return false;
  }
  return true;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    bool (*fn)();
    double budget_s;
  };
  const Entry entries[] = {
      {"codec round trips", criterion_1, 1.0},
      {"prefix agreement transfer", criterion_2, 5.0},
      {"list-decoding verifier and builds", criterion_3, 60.0},
      {"slalom soundness", criterion_4, 5.0},
      {"D-pipeline candidate existence", criterion_5, 60.0},
      {"B-pipeline uniformity and avoidance", criterion_6, 30.0},
      {"witness transform preservation", criterion_7, 120.0},
      {"partition thinning", criterion_8, 30.0},
      {"forcing defeat", criterion_9, 60.0},
      {"gamma/delta sanity", criterion_10, 1.0},
  };
  int failures = 0;
  int id = 0;
  for (const auto& e : entries) {
    ++id;
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string note;
    try {
      ok = e.fn();
    } catch (const Error& err) {
      note = std::string(" (") + err.what() + ")";
    } catch (const std::exception& err) {
      note = std::string(" (") + err.what() + ")";
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > e.budget_s) {
      ok = false;
      note += " (over budget)";
    }
    std::printf("criterion %2d %-38s %s  %.2fs%s\n", id, e.name, ok ? "pass" : "FAIL", secs,
                note.c_str());
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
