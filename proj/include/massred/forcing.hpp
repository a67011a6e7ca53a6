#pragma once

#include "massred/core.hpp"

#include <functional>
#include <map>
#include <set>

namespace massred {

using TreeNode = std::vector<std::uint32_t>;

bool is_prefix(const TreeNode& a, const TreeNode& b);  // a prefix of b

// ---------------------------------------------------------------------------
// PrunedTree: prefix-closed finite set of F-bounded strings.

struct PrunedTree {
  OrderFunc F;
  std::set<TreeNode> nodes;

  static PrunedTree complete(const OrderFunc& F, std::size_t depth);

  bool contains(const TreeNode& n) const { return nodes.count(n) != 0; }
  std::size_t depth() const;
  std::vector<TreeNode> leaves() const;
  std::vector<TreeNode> stratum(const TreeNode& above, std::size_t len) const;
  void validate() const;  // prefix closure, branching bounds, no dead ends
};

// every F-bounded extension of sigma to length |sigma|+n present
bool full_branching_check(const PrunedTree& T, const TreeNode& sigma, std::size_t n);

// w_F(n) = product of F(0..n)
Nat w_F(const OrderFunc& F, std::size_t n);

// ---------------------------------------------------------------------------
// Functional: monotone partial map (string, argument) -> value.

struct Functional {
  std::function<std::optional<Nat>(const TreeNode&, std::size_t)> eval;

  struct TableEntry {
    TreeNode sigma;
    std::size_t t;
    Nat value;
  };
  // validates monotonicity: comparable entries at the same argument agree
  static Functional from_table(std::vector<TableEntry> entries);
  static Functional from_rule(std::function<std::optional<Nat>(const TreeNode&, std::size_t)> fn);
};

// ---------------------------------------------------------------------------
// Partition thinning: keep one side of a leaf partition, certify half the
// full-branching height (above sigma for side 1, above a deeper tau for 2).

struct ThinResult {
  int case_id = 0;  // 1 or 2
  PrunedTree tree;
  TreeNode tau;
};

ThinResult thin_partition(const PrunedTree& T, const TreeNode& sigma, std::size_t n,
                          const std::set<TreeNode>& C1, const std::set<TreeNode>& C2);

// ---------------------------------------------------------------------------
// Fatness certificate: per leaf, a ladder m_1 < ... < m_k with full-branching
// height 2^(n_t * t) above the leaf's prefix of length m_t and growth bound
// 2^(w_F(m_t + 2^(n_t * t))) < G(n_t).

struct FatnessCert {
  std::vector<std::size_t> ns;
  std::map<TreeNode, std::vector<std::size_t>> ladders;
};

FatnessCert fat_check(const PrunedTree& T, const OrderFunc& G, const std::vector<std::size_t>& ns);
void verify_fatness(const PrunedTree& T, const OrderFunc& G, const FatnessCert& cert);

// 2^x < G(n), compared through the exponent when possible
bool exp2_below(const Nat& x, const OrderFunc& G, std::size_t n);

// least (length, then lex) tau in T extending sigma with Phi defined on every
// argument, visiting at most fuel nodes
TreeNode seek_defined_extension(const Functional& Phi, const TreeNode& sigma,
                                const std::vector<std::size_t>& args, const PrunedTree& T,
                                std::size_t fuel);

// ---------------------------------------------------------------------------
// Defeat construction.

struct HalvingRecord {
  TreeNode tau;           // full-branching base after the thinning
  std::size_t height;     // certified height after the thinning
  int case_id;
  std::size_t arg;        // processed argument
};

struct StepResult {
  PrunedTree tree;  // input tree with each frontier subtree replaced by its thinned form
  std::vector<std::vector<TreeNode>> frontier_by_leaf;  // extended stratum nodes per old leaf
  std::size_t n_next = 0;
  std::map<std::size_t, Nat> g;     // values on (n_k, n_next]
  std::vector<HalvingRecord> ledger;
  std::vector<std::pair<TreeNode, std::size_t>> bases;  // per old leaf: final tau, final height
};

StepResult defeat_step(const PrunedTree& host, const std::vector<TreeNode>& frontier,
                       std::size_t k, std::size_t n_k, const Functional& Phi, const OrderFunc& G,
                       std::size_t fuel);

struct ForcingResult {
  PrunedTree tree;
  std::vector<TreeNode> frontier;
  std::map<std::size_t, Nat> g;
  FatnessCert cert;
  std::vector<HalvingRecord> ledger;
  std::vector<std::size_t> ns;
};

ForcingResult run_forcing(const OrderFunc& F, const OrderFunc& G, const Functional& Phi,
                          std::size_t steps, std::size_t depth, std::size_t fuel);

// restrict T through tau followed by f(|tau|), for the least full-branching tau
PrunedTree hit_function(const PrunedTree& T, const FinFunc& f);

}  // namespace massred
