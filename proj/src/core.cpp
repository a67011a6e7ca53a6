#include "massred/core.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace massred {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NonMonotone: return "NonMonotone";
    case Errc::RangeExceeded: return "RangeExceeded";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::ZeroLength: return "ZeroLength";
    case Errc::EmptyRange: return "EmptyRange";
    case Errc::TypeMismatch: return "TypeMismatch";
    case Errc::BoundViolation: return "BoundViolation";
    case Errc::OddLength: return "OddLength";
    case Errc::HorizonTooShort: return "HorizonTooShort";
    case Errc::BlockLengthTooLarge: return "BlockLengthTooLarge";
    case Errc::Infeasible: return "Infeasible";
    case Errc::UncertifiedCode: return "UncertifiedCode";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::ConfigIncompatible: return "ConfigIncompatible";
    case Errc::EmptyFamily: return "EmptyFamily";
    case Errc::UniverseTooLarge: return "UniverseTooLarge";
    case Errc::NodeAbsent: return "NodeAbsent";
    case Errc::NotFullBranching: return "NotFullBranching";
    case Errc::NotAPartition: return "NotAPartition";
    case Errc::NotFat: return "NotFat";
    case Errc::FuelExhausted: return "FuelExhausted";
    case Errc::DepthExhausted: return "DepthExhausted";
    case Errc::InductionViolated: return "InductionViolated";
    case Errc::MissingArtifact: return "MissingArtifact";
    case Errc::SchemaInvalid: return "SchemaInvalid";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// BitString

BitString BitString::parse(const std::string& s) {
  BitString out;
  out.bits_.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') fail(Errc::SchemaInvalid, "bit string must contain only 0/1");
    out.bits_.push_back(c == '1' ? 1 : 0);
  }
  return out;
}

BitString BitString::slice(std::size_t lo, std::size_t hi) const {
  if (lo > hi || hi > size()) fail(Errc::RangeExceeded, "bit string slice out of range");
  BitString out;
  out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(lo),
                   bits_.begin() + static_cast<std::ptrdiff_t>(hi));
  return out;
}

BitString BitString::concat(const BitString& other) const {
  BitString out = *this;
  out.bits_.insert(out.bits_.end(), other.bits_.begin(), other.bits_.end());
  return out;
}

BitString BitString::complement() const {
  BitString out = *this;
  for (auto& b : out.bits_) b ^= 1;
  return out;
}

std::size_t BitString::count_ones(std::size_t prefix_len) const {
  if (prefix_len > size()) fail(Errc::RangeExceeded, "prefix exceeds bit string length");
  std::size_t c = 0;
  for (std::size_t i = 0; i < prefix_len; ++i) c += bits_[i];
  return c;
}

Nat BitString::to_number() const {
  Nat v = 0;
  for (auto b : bits_) {
    v <<= 1;
    if (b) v |= 1;
  }
  return v;
}

BitString BitString::from_number(const Nat& v, std::size_t width) {
  if (v < 0) fail(Errc::BoundViolation, "negative value has no bit string form");
  if (v != 0 && boost::multiprecision::msb(v) >= width)
    fail(Errc::BoundViolation, "value does not fit the requested width");
  BitString out(width);
  for (std::size_t i = 0; i < width; ++i)
    out.bits_[width - 1 - i] = boost::multiprecision::bit_test(v, static_cast<unsigned>(i)) ? 1 : 0;
  return out;
}

std::string BitString::str() const {
  std::string s;
  s.reserve(size());
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

// ---------------------------------------------------------------------------
// OrderFunc

Nat integer_kth_root(const Nat& x, std::size_t k) {
  if (k == 0) fail(Errc::RangeExceeded, "zeroth root");
  if (x <= 1 || k == 1) return x;
  std::size_t bits = boost::multiprecision::msb(x) + 1;
  Nat hi = Nat(1) << static_cast<unsigned>(bits / k + 1);
  Nat lo = 0;
  while (lo < hi) {  // smallest v with v^k > x, answer is v-1
    Nat mid = (lo + hi) / 2 + 1;
    if (boost::multiprecision::pow(mid, static_cast<unsigned>(k)) <= x)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

struct OrderFunc::Node {
  enum Kind { kConst, kArg, kPower, kExp2, kRootPow2, kProduct, kSum, kRescale, kCompose, kFloorDiv } kind;
  Nat a;            // constant or power base
  std::size_t k = 0;  // root index
  std::shared_ptr<const Node> lhs, rhs;

  mutable std::mutex mu;
  mutable std::vector<Nat> cache;  // values at 0..cache.size()-1, verified nondecreasing

  Nat raw_eval(std::size_t n) const {
    switch (kind) {
      case kConst: return a;
      case kArg: return Nat(n);
      case kPower: return boost::multiprecision::pow(a, static_cast<unsigned>(n));
      case kExp2: {
        Nat e = eval_checked(*lhs, n);
        if (e > 1u << 24) fail(Errc::RangeExceeded, "2^e exponent too large to materialize");
        return Nat(1) << static_cast<unsigned>(e.convert_to<std::size_t>());
      }
      case kRootPow2: return integer_kth_root(Nat(1) << static_cast<unsigned>(n), k);
      case kProduct: return eval_checked(*lhs, n) * eval_checked(*rhs, n);
      case kSum: return eval_checked(*lhs, n) + eval_checked(*rhs, n);
      case kRescale: return eval_checked(*lhs, 2 * n);
      case kCompose: {
        Nat inner = eval_checked(*rhs, n);
        if (inner > 1u << 24) fail(Errc::RangeExceeded, "composition argument too large");
        return eval_checked(*lhs, inner.convert_to<std::size_t>());
      }
      case kFloorDiv: return Nat(n / k);
    }
    fail(Errc::TypeMismatch, "bad expression node");
  }

  static Nat eval_checked(const Node& node, std::size_t n) {
    std::lock_guard<std::mutex> lock(node.mu);
    while (node.cache.size() <= n) {
      std::size_t m = node.cache.size();
      Nat v = node.raw_eval(m);
      if (!node.cache.empty() && v < node.cache.back())
        fail(Errc::NonMonotone, "order function decreases at argument " + std::to_string(m));
      node.cache.push_back(std::move(v));
    }
    return node.cache[n];
  }
};

namespace {
std::shared_ptr<OrderFunc::Node> node_of(OrderFunc::Node::Kind kind) {
  auto n = std::make_shared<OrderFunc::Node>();
  n->kind = kind;
  return n;
}
}  // namespace

struct OrderFuncAccess {
  static OrderFunc wrap(std::shared_ptr<const OrderFunc::Node> n);
  static std::shared_ptr<const OrderFunc::Node> unwrap(const OrderFunc& f) { return f.node_; }
};

OrderFunc OrderFuncAccess::wrap(std::shared_ptr<const OrderFunc::Node> n) { return OrderFunc(std::move(n)); }

OrderFunc OrderFunc::constant(Nat c) {
  auto n = node_of(Node::kConst);
  n->a = std::move(c);
  return OrderFuncAccess::wrap(n);
}
OrderFunc OrderFunc::arg() { return OrderFuncAccess::wrap(node_of(Node::kArg)); }
OrderFunc OrderFunc::power(Nat base) {
  if (base < 1) fail(Errc::RangeExceeded, "power base must be >= 1");
  auto n = node_of(Node::kPower);
  n->a = std::move(base);
  return OrderFuncAccess::wrap(n);
}
OrderFunc OrderFunc::exp2(OrderFunc e) {
  auto n = node_of(Node::kExp2);
  n->lhs = OrderFuncAccess::unwrap(e);
  return OrderFuncAccess::wrap(n);
}
OrderFunc OrderFunc::root_pow2(std::size_t k) {
  if (k == 0) fail(Errc::RangeExceeded, "root index must be >= 1");
  auto n = node_of(Node::kRootPow2);
  n->k = k;
  return OrderFuncAccess::wrap(n);
}
OrderFunc OrderFunc::product(OrderFunc a, OrderFunc b) {
  auto n = node_of(Node::kProduct);
  n->lhs = OrderFuncAccess::unwrap(a);
  n->rhs = OrderFuncAccess::unwrap(b);
  return OrderFuncAccess::wrap(n);
}
OrderFunc OrderFunc::sum(OrderFunc a, OrderFunc b) {
  auto n = node_of(Node::kSum);
  n->lhs = OrderFuncAccess::unwrap(a);
  n->rhs = OrderFuncAccess::unwrap(b);
  return OrderFuncAccess::wrap(n);
}
OrderFunc OrderFunc::rescale(OrderFunc e) {
  auto n = node_of(Node::kRescale);
  n->lhs = OrderFuncAccess::unwrap(e);
  return OrderFuncAccess::wrap(n);
}
OrderFunc OrderFunc::compose(OrderFunc outer, OrderFunc inner) {
  auto n = node_of(Node::kCompose);
  n->lhs = OrderFuncAccess::unwrap(outer);
  n->rhs = OrderFuncAccess::unwrap(inner);
  return OrderFuncAccess::wrap(n);
}
OrderFunc OrderFunc::floor_div(std::size_t d) {
  if (d == 0) fail(Errc::RangeExceeded, "division by zero");
  auto n = node_of(Node::kFloorDiv);
  n->k = d;
  return OrderFuncAccess::wrap(n);
}

Nat OrderFunc::operator()(std::size_t n) const {
  if (!node_) fail(Errc::TypeMismatch, "empty order function");
  return Node::eval_checked(*node_, n);
}

std::string OrderFunc::describe() const {
  if (!node_) return "<empty>";
  std::ostringstream os;
  struct Printer {
    std::ostringstream& os;
    void visit(const Node& n) {
      using K = Node::Kind;
      switch (n.kind) {
        case K::kConst: os << n.a; break;
        case K::kArg: os << "n"; break;
        case K::kPower: os << n.a << "^n"; break;
        case K::kExp2: os << "2^("; visit(*n.lhs); os << ")"; break;
        case K::kRootPow2: os << "floor(2^(n/" << n.k << "))"; break;
        case K::kProduct: os << "("; visit(*n.lhs); os << ")*("; visit(*n.rhs); os << ")"; break;
        case K::kSum: os << "("; visit(*n.lhs); os << ")+("; visit(*n.rhs); os << ")"; break;
        case K::kRescale: os << "["; visit(*n.lhs); os << "](2n)"; break;
        case K::kCompose: os << "["; visit(*n.lhs); os << "]o["; visit(*n.rhs); os << "]"; break;
        case K::kFloorDiv: os << "floor(n/" << n.k << ")"; break;
      }
    }
  } p{os};
  p.visit(*node_);
  return os.str();
}

Nat eval_order(const OrderFunc& e, std::size_t n) { return e(n); }

OrderFuncView inspect_order(const OrderFunc& e) {
  auto node = OrderFuncAccess::unwrap(e);
  if (!node) fail(Errc::TypeMismatch, "empty order function");
  OrderFuncView v;
  using K = OrderFunc::Node::Kind;
  switch (node->kind) {
    case K::kConst: v.kind = "const"; v.a = node->a; break;
    case K::kArg: v.kind = "arg"; break;
    case K::kPower: v.kind = "power"; v.a = node->a; break;
    case K::kExp2: v.kind = "exp2"; break;
    case K::kRootPow2: v.kind = "root_pow2"; v.k = node->k; break;
    case K::kProduct: v.kind = "product"; break;
    case K::kSum: v.kind = "sum"; break;
    case K::kRescale: v.kind = "rescale"; break;
    case K::kCompose: v.kind = "compose"; break;
    case K::kFloorDiv: v.kind = "floor_div"; v.k = node->k; break;
  }
  if (node->lhs) v.children.push_back(OrderFuncAccess::wrap(node->lhs));
  if (node->rhs) v.children.push_back(OrderFuncAccess::wrap(node->rhs));
  return v;
}

bool value_below(const OrderFunc& e, std::size_t n, const Nat& v) {
  if (v < 0) return false;
  auto node = OrderFuncAccess::unwrap(e);
  if (!node) fail(Errc::TypeMismatch, "empty order function");
  if (node->kind == OrderFunc::Node::kExp2) {
    if (v == 0) return true;
    // v < 2^E iff bitlength(v) <= E
    Nat bits = Nat(boost::multiprecision::msb(v)) + 1;
    return bits <= OrderFunc::Node::eval_checked(*node->lhs, n);
  }
  return v < e(n);
}

std::optional<OrderFunc> exp2_exponent(const OrderFunc& e) {
  auto node = OrderFuncAccess::unwrap(e);
  if (node && node->kind == OrderFunc::Node::kExp2) return OrderFuncAccess::wrap(node->lhs);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// FinFunc / Slalom

FinFunc::FinFunc(std::vector<Nat> v, std::optional<OrderFunc> b)
    : values(std::move(v)), bound(std::move(b)) {
  for (const auto& x : values)
    if (x < 0) fail(Errc::BoundViolation, "function values must be nonnegative");
  if (bound) {
    for (std::size_t n = 0; n < values.size(); ++n)
      if (!value_below(*bound, n, values[n]))
        fail(Errc::BoundViolation, "function value at " + std::to_string(n) + " exceeds bound");
  }
}

void Slalom::validate() const {
  for (std::size_t n = 0; n < entries.size(); ++n) {
    const auto& e = entries[n];
    if (e.size() > L) fail(Errc::BoundViolation, "slalom entry larger than L");
    if (!std::is_sorted(e.begin(), e.end())) fail(Errc::BoundViolation, "slalom entry not sorted");
    if (std::adjacent_find(e.begin(), e.end()) != e.end())
      fail(Errc::BoundViolation, "slalom entry has duplicates");
    if (bound)
      for (const auto& v : e)
        if (!value_below(*bound, n, v)) fail(Errc::BoundViolation, "slalom value exceeds bound");
  }
}

bool Slalom::contains(std::size_t n, const Nat& v) const {
  const auto& e = entries.at(n);
  return std::binary_search(e.begin(), e.end(), v);
}

// ---------------------------------------------------------------------------
// Pointwise operations

BitString agreement_indicator(const BitString& x, const BitString& y) {
  if (x.size() != y.size()) fail(Errc::LengthMismatch, "agreement needs equal lengths");
  BitString z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z.set(i, x[i] == y[i]);
  return z;
}

Rat lower_density_estimate(const BitString& z, std::size_t from) {
  if (from == 0) from = 1;
  if (from >= z.size() + 1 || z.empty()) fail(Errc::EmptyRange, "no prefixes in range");
  std::size_t ones = z.count_ones(from - 1);
  std::optional<Rat> best;
  for (std::size_t n = from; n <= z.size(); ++n) {
    ones += z[n - 1];
    Rat d{Nat(ones), Nat(n)};
    if (!best || d < *best) best = d;
  }
  return *best;
}

Rat normalized_distance(const BitString& x, const BitString& y) {
  if (x.size() != y.size()) fail(Errc::LengthMismatch, "distance needs equal lengths");
  if (x.empty()) fail(Errc::ZeroLength, "distance needs nonzero length");
  std::size_t diff = 0;
  for (std::size_t i = 0; i < x.size(); ++i) diff += x[i] != y[i];
  return Rat(Nat(diff), Nat(x.size()));
}

// ---------------------------------------------------------------------------
// Relations

namespace {

const FinFunc& as_func(const RelationOperand& op, const char* role) {
  if (const auto* f = std::get_if<FinFunc>(&op)) return *f;
  fail(Errc::TypeMismatch, std::string(role) + " must be a function table");
}
const BitString& as_bits(const RelationOperand& op, const char* role) {
  if (const auto* b = std::get_if<BitString>(&op)) return *b;
  fail(Errc::TypeMismatch, std::string(role) + " must be a bit string");
}
const Slalom& as_slalom(const RelationOperand& op, const char* role) {
  if (const auto* s = std::get_if<Slalom>(&op)) return *s;
  fail(Errc::TypeMismatch, std::string(role) + " must be a slalom");
}

void check_scope(std::size_t have, const Horizon& hz, const char* what) {
  if (have < hz.N) fail(Errc::BoundViolation, std::string(what) + " shorter than horizon");
}

std::vector<BitString> blocks_of(const FinFunc& f, const std::vector<std::size_t>& lens,
                                 const Horizon& hz) {
  check_scope(f.size(), hz, "block function");
  if (lens.size() < hz.N) fail(Errc::LengthMismatch, "block length table shorter than horizon");
  std::vector<BitString> out;
  out.reserve(hz.N);
  for (std::size_t n = 0; n < hz.N; ++n) out.push_back(BitString::from_number(f(n), lens[n]));
  return out;
}

}  // namespace

std::size_t count_relation_violations(const RelationKind& kind, const RelationOperand& lhs,
                                      const RelationOperand& rhs, const Horizon& hz) {
  std::size_t bad = 0;
  if (const auto* nd = std::get_if<AlwaysDifferent>(&kind)) {
    const FinFunc& x = as_func(lhs, "left operand");
    const FinFunc& y = as_func(rhs, "right operand");
    check_scope(x.size(), hz, "left operand");
    check_scope(y.size(), hz, "right operand");
    if (nd->value_bound)
      for (std::size_t n = hz.tail; n < hz.N; ++n)
        if (!value_below(*nd->value_bound, n, y(n)))
          fail(Errc::BoundViolation, "right operand exceeds bound");
    for (std::size_t n = hz.tail; n < hz.N; ++n) bad += x(n) == y(n);
    return bad;
  }
  if (const auto* bf = std::get_if<BlockwiseFar>(&kind)) {
    auto xb = blocks_of(as_func(lhs, "left operand"), bf->block_lens, hz);
    auto yb = blocks_of(as_func(rhs, "right operand"), bf->block_lens, hz);
    for (std::size_t n = hz.tail; n < hz.N; ++n)
      bad += normalized_distance(xb[n], yb[n]) < bf->q;
    return bad;
  }
  if (std::get_if<SlalomAvoids>(&kind) != nullptr) {
    const Slalom& s = as_slalom(lhs, "left operand");
    const FinFunc& y = as_func(rhs, "right operand");
    check_scope(s.size(), hz, "slalom");
    check_scope(y.size(), hz, "right operand");
    for (std::size_t n = hz.tail; n < hz.N; ++n) bad += s.contains(n, y(n));
    return bad;
  }
  fail(Errc::TypeMismatch, "violation counting applies to pointwise relations only");
}

bool check_relation(const RelationKind& kind, const RelationOperand& lhs,
                    const RelationOperand& rhs, const Horizon& hz) {
  if (const auto* ag = std::get_if<AgreementAbove>(&kind)) {
    const BitString& x = as_bits(lhs, "left operand");
    const BitString& y = as_bits(rhs, "right operand");
    check_scope(x.size(), hz, "left operand");
    check_scope(y.size(), hz, "right operand");
    BitString z = agreement_indicator(x.slice(0, hz.N), y.slice(0, hz.N));
    return lower_density_estimate(z, std::max<std::size_t>(hz.tail, 1)) > ag->p;
  }
  return count_relation_violations(kind, lhs, rhs, hz) == 0;
}

bool check_negation(const RelationKind& kind, const RelationOperand& lhs,
                    const RelationOperand& rhs, const Horizon& hz) {
  if (const auto* ag = std::get_if<AgreementAbove>(&kind)) {
    const BitString& x = as_bits(lhs, "left operand");
    const BitString& y = as_bits(rhs, "right operand");
    check_scope(x.size(), hz, "left operand");
    check_scope(y.size(), hz, "right operand");
    BitString z = agreement_indicator(x.slice(0, hz.N), y.slice(0, hz.N));
    return lower_density_estimate(z, std::max<std::size_t>(hz.tail, 1)) <= ag->p;
  }
  return count_relation_violations(kind, lhs, rhs, hz) >= hz.hits;
}

std::size_t count_agreements(const FinFunc& x, const FinFunc& y, const Horizon& hz) {
  if (x.size() < hz.N || y.size() < hz.N) fail(Errc::BoundViolation, "operand shorter than horizon");
  std::size_t c = 0;
  for (std::size_t n = hz.tail; n < hz.N; ++n) c += x(n) == y(n);
  return c;
}

}  // namespace massred
