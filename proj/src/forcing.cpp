#include "massred/forcing.hpp"

#include <algorithm>
#include <deque>

namespace massred {

bool is_prefix(const TreeNode& a, const TreeNode& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

namespace {

constexpr std::size_t kMaxTreeNodes = std::size_t(1) << 21;

TreeNode prefix_of(const TreeNode& n, std::size_t len) {
  return TreeNode(n.begin(), n.begin() + static_cast<std::ptrdiff_t>(len));
}

std::uint32_t branch_width(const OrderFunc& F, std::size_t level) {
  Nat b = F(level);
  if (b < 1) fail(Errc::EmptyRange, "branching bound must be >= 1");
  if (b > (std::uint32_t(1) << 20)) fail(Errc::RangeExceeded, "branching bound too wide");
  return b.convert_to<std::uint32_t>();
}

}  // namespace

PrunedTree PrunedTree::complete(const OrderFunc& F, std::size_t depth) {
  PrunedTree T;
  T.F = F;
  std::vector<TreeNode> level{TreeNode{}};
  T.nodes.insert(TreeNode{});
  for (std::size_t d = 0; d < depth; ++d) {
    std::uint32_t w = branch_width(F, d);
    std::vector<TreeNode> next;
    next.reserve(level.size() * w);
    for (const auto& n : level)
      for (std::uint32_t v = 0; v < w; ++v) {
        TreeNode c = n;
        c.push_back(v);
        next.push_back(std::move(c));
      }
    if (T.nodes.size() + next.size() > kMaxTreeNodes)
      fail(Errc::RangeExceeded, "complete tree too large");
    for (auto& n : next) T.nodes.insert(n);
    level = std::move(next);
  }
  return T;
}

std::size_t PrunedTree::depth() const {
  std::size_t d = 0;
  for (const auto& n : nodes) d = std::max(d, n.size());
  return d;
}

std::vector<TreeNode> PrunedTree::leaves() const {
  std::vector<TreeNode> out;
  for (const auto& n : nodes) {
    bool has_child = false;
    std::uint32_t w = branch_width(F, n.size());
    for (std::uint32_t v = 0; v < w && !has_child; ++v) {
      TreeNode c = n;
      c.push_back(v);
      has_child = contains(c);
    }
    if (!has_child) out.push_back(n);
  }
  return out;
}

std::vector<TreeNode> PrunedTree::stratum(const TreeNode& above, std::size_t len) const {
  std::vector<TreeNode> out;
  for (const auto& n : nodes)
    if (n.size() == len && is_prefix(above, n)) out.push_back(n);
  return out;
}

void PrunedTree::validate() const {
  if (!contains(TreeNode{})) fail(Errc::NodeAbsent, "tree lacks the root");
  for (const auto& n : nodes) {
    if (n.empty()) continue;
    if (Nat(n.back()) >= F(n.size() - 1)) fail(Errc::BoundViolation, "node value beyond branching bound");
    if (!contains(prefix_of(n, n.size() - 1))) fail(Errc::NodeAbsent, "tree not prefix-closed");
  }
}

bool full_branching_check(const PrunedTree& T, const TreeNode& sigma, std::size_t n) {
  if (!T.contains(sigma)) fail(Errc::NodeAbsent, "base node not in tree");
  std::vector<TreeNode> level{sigma};
  for (std::size_t d = 0; d < n; ++d) {
    std::uint32_t w = branch_width(T.F, sigma.size() + d);
    std::vector<TreeNode> next;
    next.reserve(level.size() * w);
    for (const auto& node : level)
      for (std::uint32_t v = 0; v < w; ++v) {
        TreeNode c = node;
        c.push_back(v);
        if (!T.contains(c)) return false;
        next.push_back(std::move(c));
      }
    level = std::move(next);
  }
  return true;
}

Nat w_F(const OrderFunc& F, std::size_t n) {
  Nat out = 1;
  for (std::size_t i = 0; i <= n; ++i) out *= F(i);
  return out;
}

Functional Functional::from_table(std::vector<TableEntry> entries) {
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      const auto& a = entries[i];
      const auto& b = entries[j];
      if (a.t != b.t) continue;
      if ((is_prefix(a.sigma, b.sigma) || is_prefix(b.sigma, a.sigma)) && a.value != b.value)
        fail(Errc::NonMonotone, "table assigns different values along one chain");
    }
  auto shared = std::make_shared<std::vector<TableEntry>>(std::move(entries));
  Functional f;
  f.eval = [shared](const TreeNode& rho, std::size_t t) -> std::optional<Nat> {
    for (const auto& e : *shared)
      if (e.t == t && is_prefix(e.sigma, rho)) return e.value;
    return std::nullopt;
  };
  return f;
}

Functional Functional::from_rule(
    std::function<std::optional<Nat>(const TreeNode&, std::size_t)> fn) {
  Functional f;
  f.eval = std::move(fn);
  return f;
}

namespace {

// keep prefixes of sigma, and extensions of sigma compatible with the kept
// side of the partition at stratum depth
PrunedTree restrict_to_side(const PrunedTree& T, const TreeNode& sigma, std::size_t stratum_len,
                            const std::set<TreeNode>& side) {
  PrunedTree out;
  out.F = T.F;
  for (const auto& n : T.nodes) {
    if (is_prefix(n, sigma)) {
      out.nodes.insert(n);
      continue;
    }
    if (!is_prefix(sigma, n)) continue;
    if (n.size() <= stratum_len) {
      bool compatible = false;
      for (const auto& c : side)
        if (is_prefix(n, c)) {
          compatible = true;
          break;
        }
      if (compatible) out.nodes.insert(n);
    } else if (side.count(prefix_of(n, stratum_len))) {
      out.nodes.insert(n);
    }
  }
  return out;
}

}  // namespace

ThinResult thin_partition(const PrunedTree& T, const TreeNode& sigma, std::size_t n,
                          const std::set<TreeNode>& C1, const std::set<TreeNode>& C2) {
  std::size_t m = sigma.size();
  if (!T.contains(sigma)) fail(Errc::NodeAbsent, "base node not in tree");
  if (!full_branching_check(T, sigma, 2 * n))
    fail(Errc::NotFullBranching, "tree not full-branching to twice the height");

  auto stratum = T.stratum(sigma, m + 2 * n);
  std::set<TreeNode> all(stratum.begin(), stratum.end());
  if (C1.size() + C2.size() != all.size()) fail(Errc::NotAPartition, "sides do not cover the stratum");
  for (const auto& c : C1)
    if (!all.count(c) || C2.count(c)) fail(Errc::NotAPartition, "sides overlap or leave the stratum");
  for (const auto& c : C2)
    if (!all.count(c)) fail(Errc::NotAPartition, "side leaves the stratum");

  PrunedTree T1 = restrict_to_side(T, sigma, m + 2 * n, C1);
  if (T1.contains(sigma) && full_branching_check(T1, sigma, n)) return ThinResult{1, std::move(T1), sigma};

  // some length m+n node has all its stratum extensions on side 2
  auto mid = T.stratum(sigma, m + n);
  for (const auto& tau : mid) {
    bool clean = true;
    for (const auto& c : C1)
      if (is_prefix(tau, c)) {
        clean = false;
        break;
      }
    if (!clean) continue;
    PrunedTree T2 = restrict_to_side(T, sigma, m + 2 * n, C2);
    if (!full_branching_check(T2, tau, n))
      fail(Errc::NotFullBranching, "side-2 subtree lost its full branching");
    return ThinResult{2, std::move(T2), tau};
  }
  fail(Errc::NotAPartition, "neither side certifies, partition data inconsistent");
}

bool exp2_below(const Nat& x, const OrderFunc& G, std::size_t n) {
  if (auto e = exp2_exponent(G)) return x < (*e)(n);
  if (x > (1u << 20)) fail(Errc::RangeExceeded, "growth comparison would materialize 2^x");
  return (Nat(1) << x.convert_to<unsigned>()) < G(n);
}

FatnessCert fat_check(const PrunedTree& T, const OrderFunc& G, const std::vector<std::size_t>& ns) {
  for (std::size_t i = 1; i < ns.size(); ++i)
    if (ns[i] <= ns[i - 1]) fail(Errc::NonMonotone, "ladder indices must strictly increase");
  FatnessCert cert;
  cert.ns = ns;
  for (const auto& leaf : T.leaves()) {
    std::vector<std::size_t> ms;
    std::size_t m_min = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      std::size_t t = i + 1;
      if (ns[i] * t >= 32) fail(Errc::RangeExceeded, "ladder height too large");
      std::size_t h = std::size_t(1) << (ns[i] * t);
      bool found = false;
      for (std::size_t m = m_min; m + h <= leaf.size() && m < leaf.size(); ++m) {
        if (!full_branching_check(T, prefix_of(leaf, m), h)) continue;
        if (!exp2_below(w_F(T.F, m + h), G, ns[i])) continue;
        ms.push_back(m);
        m_min = m + 1;
        found = true;
        break;
      }
      if (!found)
        fail(Errc::NotFat, "no ladder rung " + std::to_string(t) + " for a leaf of depth " +
                               std::to_string(leaf.size()));
    }
    cert.ladders[leaf] = std::move(ms);
  }
  return cert;
}

void verify_fatness(const PrunedTree& T, const OrderFunc& G, const FatnessCert& cert) {
  for (const auto& [leaf, ms] : cert.ladders) {
    if (!T.contains(leaf)) fail(Errc::NodeAbsent, "certified node not in tree");
    if (ms.size() != cert.ns.size()) fail(Errc::NotFat, "ladder length differs from index list");
    for (std::size_t i = 0; i < ms.size(); ++i) {
      std::size_t t = i + 1;
      std::size_t h = std::size_t(1) << (cert.ns[i] * t);
      if (i > 0 && ms[i] <= ms[i - 1]) fail(Errc::NotFat, "ladder not strictly increasing");
      if (ms[i] >= leaf.size()) fail(Errc::NotFat, "ladder rung beyond the leaf");
      if (!full_branching_check(T, prefix_of(leaf, ms[i]), h))
        fail(Errc::NotFat, "full branching condition fails on re-check");
      if (!exp2_below(w_F(T.F, ms[i] + h), G, cert.ns[i]))
        fail(Errc::NotFat, "growth inequality fails on re-check");
    }
  }
}

TreeNode seek_defined_extension(const Functional& Phi, const TreeNode& sigma,
                                const std::vector<std::size_t>& args, const PrunedTree& T,
                                std::size_t fuel) {
  if (!T.contains(sigma)) fail(Errc::NodeAbsent, "search base not in tree");
  std::deque<TreeNode> queue{sigma};
  std::size_t visited = 0;
  while (!queue.empty()) {
    TreeNode cur = queue.front();
    queue.pop_front();
    if (++visited > fuel) fail(Errc::FuelExhausted, "no defined extension within the fuel budget");
    bool ok = true;
    for (auto t : args)
      if (!Phi.eval(cur, t)) {
        ok = false;
        break;
      }
    if (ok) return cur;
    std::uint32_t w = branch_width(T.F, cur.size());
    for (std::uint32_t v = 0; v < w; ++v) {
      TreeNode c = cur;
      c.push_back(v);
      if (T.contains(c)) queue.push_back(std::move(c));
    }
  }
  fail(Errc::FuelExhausted, "search space exhausted with no defined extension");
}

namespace {

struct LeafBuild {
  std::set<TreeNode> kept;
  std::vector<TreeNode> frontier;
  TreeNode tau_final;
  std::size_t height_final = 0;
  std::vector<HalvingRecord> ledger;
  std::vector<int> forced_bits;  // per argument, in window order
};

// thinning chain for one old leaf at a fixed candidate n; throws on fuel or
// structural problems
LeafBuild build_leaf(const PrunedTree& tree, const TreeNode& sigma, std::size_t bit,
                     const TreeNode& tau_start, std::size_t h_start,
                     const std::vector<std::size_t>& args, const Functional& Phi,
                     std::size_t fuel) {
  // working subtree through tau_start
  PrunedTree W;
  W.F = tree.F;
  for (const auto& n : tree.nodes)
    if (is_prefix(n, tau_start) || is_prefix(tau_start, n)) W.nodes.insert(n);

  LeafBuild out;
  TreeNode tau = tau_start;
  std::size_t h = h_start;
  for (auto t : args) {
    if (h % 2 != 0) fail(Errc::DepthExhausted, "height cannot be halved further");
    std::set<TreeNode> C1, C2;
    for (const auto& rho : W.stratum(tau, tau.size() + h)) {
      TreeNode witness = seek_defined_extension(Phi, rho, {t}, W, fuel);
      Nat v = *Phi.eval(witness, t);
      (boost::multiprecision::bit_test(v, static_cast<unsigned>(bit)) ? C2 : C1).insert(rho);
    }
    ThinResult r = thin_partition(W, tau, h / 2, C1, C2);
    W = std::move(r.tree);
    tau = r.tau;
    h /= 2;
    out.forced_bits.push_back(r.case_id == 1 ? 0 : 1);
    out.ledger.push_back(HalvingRecord{tau, h, r.case_id, t});
  }

  out.tau_final = tau;
  out.height_final = h;

  // tails through the final stratum deciding every argument of the window
  std::size_t stratum_len = tau.size() + h;
  std::map<TreeNode, TreeNode> ext;
  for (const auto& rho : W.stratum(tau, stratum_len)) {
    ext[rho] = seek_defined_extension(Phi, rho, args, W, fuel);
    out.frontier.push_back(ext[rho]);
  }

  for (const auto& n : W.nodes) {
    if (!(is_prefix(n, tau) || is_prefix(tau, n))) continue;
    if (n.size() <= stratum_len) {
      out.kept.insert(n);
      continue;
    }
    auto it = ext.find(prefix_of(n, stratum_len));
    if (it != ext.end() && (is_prefix(n, it->second) || is_prefix(it->second, n)))
      out.kept.insert(n);
  }
  (void)sigma;
  return out;
}

}  // namespace

StepResult defeat_step(const PrunedTree& host, const std::vector<TreeNode>& frontier,
                       std::size_t k, std::size_t n_k, const Functional& Phi, const OrderFunc& G,
                       std::size_t fuel) {
  if (frontier.empty()) fail(Errc::EmptyFamily, "defeat step needs a nonempty frontier");
  std::size_t ell = frontier.size();
  if (!exp2_below(Nat(ell), G, n_k))
    fail(Errc::InductionViolated, "2^(leaf count) reaches the growth bound");

  std::size_t K = k + 1;
  std::size_t depth = host.depth();

  for (std::size_t n = n_k + 1;; ++n) {
    if (n * (K + 1) >= 32) fail(Errc::DepthExhausted, "required starting height overflows");
    std::size_t h_start = std::size_t(1) << (n * (K + 1));

    // find a full-branching base of height h_start above every frontier node
    std::vector<TreeNode> taus;
    bool fits = true;
    std::size_t required = 0;
    for (const auto& sigma : frontier) {
      required = std::max(required, sigma.size() + h_start);
      if (sigma.size() + h_start > depth) {
        fits = false;
        continue;
      }
      // breadth-first for the least base
      std::deque<TreeNode> queue{sigma};
      std::optional<TreeNode> found;
      while (!queue.empty() && !found) {
        TreeNode cur = queue.front();
        queue.pop_front();
        if (cur.size() + h_start <= depth && full_branching_check(host, cur, h_start)) {
          found = cur;
          break;
        }
        std::uint32_t w = branch_width(host.F, cur.size());
        for (std::uint32_t v = 0; v < w; ++v) {
          TreeNode c = cur;
          c.push_back(v);
          if (host.contains(c)) queue.push_back(std::move(c));
        }
      }
      if (!found) {
        fits = false;
        continue;
      }
      taus.push_back(*found);
    }
    if (!fits)
      fail(Errc::DepthExhausted,
           "tree of depth " + std::to_string(depth) + " cannot host the starting height, needs " +
               std::to_string(required));

    std::vector<std::size_t> args;
    for (std::size_t t = n_k + 1; t <= n; ++t) args.push_back(t);

    std::vector<LeafBuild> builds;
    builds.reserve(ell);
    for (std::size_t a = 0; a < ell; ++a)
      builds.push_back(build_leaf(host, frontier[a], a, taus[a], h_start, args, Phi, fuel));

    // growth inequality for the new ladder rung at every base
    bool growth_ok = true;
    std::size_t h_req = std::size_t(1) << (n * K);
    for (const auto& b : builds)
      if (!exp2_below(w_F(host.F, b.tau_final.size() + h_req), G, n)) growth_ok = false;
    if (!growth_ok) continue;

    StepResult out;
    out.n_next = n;
    out.tree.F = host.F;
    for (const auto& node : host.nodes) {
      bool replaced = false;
      for (const auto& sigma : frontier)
        if (is_prefix(sigma, node) && node.size() > sigma.size()) {
          replaced = true;
          break;
        }
      if (!replaced) out.tree.nodes.insert(node);
    }
    for (std::size_t a = 0; a < ell; ++a) {
      out.tree.nodes.insert(builds[a].kept.begin(), builds[a].kept.end());
      out.frontier_by_leaf.push_back(builds[a].frontier);
      out.bases.emplace_back(builds[a].tau_final, builds[a].height_final);
      for (const auto& rec : builds[a].ledger) out.ledger.push_back(rec);
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
      Nat g = 0;
      for (std::size_t a = 0; a < ell; ++a)
        if (builds[a].forced_bits[i] == 0) boost::multiprecision::bit_set(g, static_cast<unsigned>(a));
      if (!value_below(G, args[i], g))
        fail(Errc::InductionViolated, "assembled value reaches the growth bound");
      out.g[args[i]] = std::move(g);
    }
    return out;
  }
}

ForcingResult run_forcing(const OrderFunc& F, const OrderFunc& G, const Functional& Phi,
                          std::size_t steps, std::size_t depth, std::size_t fuel) {
  ForcingResult out;
  out.tree = PrunedTree::complete(F, depth);
  out.frontier = {TreeNode{}};

  std::map<TreeNode, std::vector<std::size_t>> ladders{{TreeNode{}, {}}};
  std::size_t n_cur = 0;
  for (std::size_t k = 0; k < steps; ++k) {
    StepResult res = defeat_step(out.tree, out.frontier, k, n_cur, Phi, G, fuel);
    std::map<TreeNode, std::vector<std::size_t>> next_ladders;
    std::vector<TreeNode> next_frontier;
    for (std::size_t a = 0; a < out.frontier.size(); ++a) {
      std::vector<std::size_t> ladder = ladders.at(out.frontier[a]);
      ladder.push_back(res.bases[a].first.size());
      for (const auto& node : res.frontier_by_leaf[a]) {
        next_ladders[node] = ladder;
        next_frontier.push_back(node);
      }
    }
    ladders = std::move(next_ladders);
    out.frontier = std::move(next_frontier);
    out.tree = std::move(res.tree);
    for (auto& [t, v] : res.g) out.g[t] = std::move(v);
    for (auto& rec : res.ledger) out.ledger.push_back(std::move(rec));
    out.ns.push_back(res.n_next);
    n_cur = res.n_next;
  }

  out.cert.ns = out.ns;
  out.cert.ladders = std::move(ladders);
  out.tree.validate();
  verify_fatness(out.tree, G, out.cert);

  for (const auto& rho : out.frontier)
    for (const auto& [t, gval] : out.g)
      if (auto v = Phi.eval(rho, t); v && *v == gval)
        fail(Errc::Infeasible, "a frontier node matches the assembled diagonal value");
  return out;
}

PrunedTree hit_function(const PrunedTree& T, const FinFunc& f) {
  // least (length, lex) node whose children are all present
  std::deque<TreeNode> queue{TreeNode{}};
  if (!T.contains(TreeNode{})) fail(Errc::NodeAbsent, "tree lacks the root");
  while (!queue.empty()) {
    TreeNode tau = queue.front();
    queue.pop_front();
    if (tau.size() < f.size() && full_branching_check(T, tau, 1)) {
      if (f(tau.size()) >= T.F(tau.size()))
        fail(Errc::BoundViolation, "function value beyond the branching bound");
      TreeNode target = tau;
      target.push_back(f(tau.size()).convert_to<std::uint32_t>());
      PrunedTree out;
      out.F = T.F;
      for (const auto& n : T.nodes)
        if (is_prefix(n, target) || is_prefix(target, n)) out.nodes.insert(n);
      if (out.nodes.empty()) fail(Errc::NodeAbsent, "restriction is empty");
      return out;
    }
    std::uint32_t w = branch_width(T.F, tau.size());
    for (std::uint32_t v = 0; v < w; ++v) {
      TreeNode c = tau;
      c.push_back(v);
      if (T.contains(c)) queue.push_back(std::move(c));
    }
  }
  fail(Errc::NotFullBranching, "no full-branching node available");
}

}  // namespace massred
