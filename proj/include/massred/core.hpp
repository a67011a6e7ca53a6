#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace massred {

using Nat = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Nat rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Nat rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

enum class Errc {
  NonMonotone,
  RangeExceeded,
  LengthMismatch,
  ZeroLength,
  EmptyRange,
  TypeMismatch,
  BoundViolation,
  OddLength,
  HorizonTooShort,
  BlockLengthTooLarge,
  Infeasible,
  UncertifiedCode,
  IndexOutOfRange,
  ConfigIncompatible,
  EmptyFamily,
  UniverseTooLarge,
  NodeAbsent,
  NotFullBranching,
  NotAPartition,
  NotFat,
  FuelExhausted,
  DepthExhausted,
  InductionViolated,
  MissingArtifact,
  SchemaInvalid,
};

const char* errc_name(Errc c);

struct Error : std::runtime_error {
  Errc code;
  Error(Errc c, const std::string& what) : std::runtime_error(what), code(c) {}
};

[[noreturn]] inline void fail(Errc c, const std::string& what) { throw Error(c, what); }

// ---------------------------------------------------------------------------
// BitString: finite word over {0,1}.

class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t len, bool fill = false) : bits_(len, fill ? 1 : 0) {}
  static BitString parse(const std::string& s);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  int operator[](std::size_t i) const { return bits_[i]; }
  void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }
  void push_back(bool v) { bits_.push_back(v ? 1 : 0); }

  BitString slice(std::size_t lo, std::size_t hi) const;
  BitString concat(const BitString& other) const;
  BitString complement() const;
  std::size_t count_ones(std::size_t prefix_len) const;
  std::size_t count_ones() const { return count_ones(size()); }

  Nat to_number() const;                                   // most significant bit first
  static BitString from_number(const Nat& v, std::size_t width);

  std::string str() const;
  bool operator==(const BitString& o) const { return bits_ == o.bits_; }
  bool operator!=(const BitString& o) const { return bits_ != o.bits_; }
  bool operator<(const BitString& o) const { return bits_ < o.bits_; }  // lexicographic

 private:
  std::vector<std::uint8_t> bits_;
};

// ---------------------------------------------------------------------------
// OrderFunc: exact expression over Nat arguments, nondecreasing on the queried
// range (verified at evaluation time).

class OrderFunc {
 public:
  OrderFunc() = default;

  static OrderFunc constant(Nat c);
  static OrderFunc arg();                       // n
  static OrderFunc power(Nat base);             // base^n
  static OrderFunc exp2(OrderFunc e);           // 2^e(n)
  static OrderFunc root_pow2(std::size_t k);    // floor(2^(n/k)), integer k-th root of 2^n
  static OrderFunc product(OrderFunc a, OrderFunc b);
  static OrderFunc sum(OrderFunc a, OrderFunc b);
  static OrderFunc rescale(OrderFunc e);        // e(2n)
  static OrderFunc floor_div(std::size_t d);    // floor(n/d)
  static OrderFunc compose(OrderFunc outer, OrderFunc inner);  // outer(inner(n))

  bool valid() const { return node_ != nullptr; }
  // Exact value at n; checks that the function is nondecreasing on [0, n].
  Nat operator()(std::size_t n) const;

  std::string describe() const;

  struct Node;  // expression node, defined in the implementation file

 private:
  explicit OrderFunc(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
  friend struct OrderFuncAccess;
};

Nat eval_order(const OrderFunc& e, std::size_t n);

// One-level structural view of an expression, for serialization.
struct OrderFuncView {
  std::string kind;  // const, arg, power, exp2, root_pow2, product, sum, rescale, compose, floor_div
  Nat a;             // constant value or power base
  std::size_t k = 0; // root index or divisor
  std::vector<OrderFunc> children;
};
OrderFuncView inspect_order(const OrderFunc& e);

// v < e(n), comparing through the exponent when e is a power of two so that
// huge bounds like 2^(2^n) are never materialized.
bool value_below(const OrderFunc& e, std::size_t n, const Nat& v);

// the exponent subexpression when e is 2^(...), otherwise empty
std::optional<OrderFunc> exp2_exponent(const OrderFunc& e);

// Largest v with v^k <= x.
Nat integer_kth_root(const Nat& x, std::size_t k);

// ---------------------------------------------------------------------------
// Horizon: finite semantics for "almost everywhere" / "infinitely often".
// Universal clauses run over [tail, N); existential clauses need >= hits
// witnesses in [tail, N).

struct Horizon {
  std::size_t N = 0;
  std::size_t tail = 0;
  std::size_t hits = 1;

  Horizon() = default;
  Horizon(std::size_t n, std::size_t t, std::size_t h) : N(n), tail(t), hits(h) {
    if (t >= n) fail(Errc::RangeExceeded, "horizon tail must be below N");
    if (h < 1) fail(Errc::RangeExceeded, "horizon hits must be >= 1");
  }
};

// ---------------------------------------------------------------------------
// FinFunc: finite table of Nats, optionally bounded by an order function.

struct FinFunc {
  std::vector<Nat> values;
  std::optional<OrderFunc> bound;

  FinFunc() = default;
  explicit FinFunc(std::vector<Nat> v, std::optional<OrderFunc> b = std::nullopt);

  std::size_t size() const { return values.size(); }
  const Nat& operator()(std::size_t n) const { return values.at(n); }

  bool operator==(const FinFunc& o) const { return values == o.values; }
  bool operator<(const FinFunc& o) const { return values < o.values; }
};

// Slalom data record: entries(n) is a sorted duplicate-free set of size <= L,
// each value below bound(n) when a bound is present.  Operations live in
// slalom.hpp.

struct Slalom {
  std::size_t L = 0;
  std::optional<OrderFunc> bound;
  std::vector<std::vector<Nat>> entries;

  std::size_t size() const { return entries.size(); }
  void validate() const;
  bool contains(std::size_t n, const Nat& v) const;
};

// ---------------------------------------------------------------------------
// Pointwise sequence operations.

BitString agreement_indicator(const BitString& x, const BitString& y);  // 1 where equal
Rat lower_density_estimate(const BitString& z, std::size_t from);
Rat normalized_distance(const BitString& x, const BitString& y);

// ---------------------------------------------------------------------------
// The four finite-horizon relations.

struct AlwaysDifferent {                 // forall n in [tail,N): x(n) != y(n)
  std::optional<OrderFunc> value_bound;  // optional typing bound on y
};
struct AgreementAbove {                  // lower density of (x <-> y) exceeds p
  Rat p;
};
struct BlockwiseFar {                    // forall n in [tail,N): d(x(n), y(n)) >= q
  std::vector<std::size_t> block_lens;
  Rat q;
};
struct SlalomAvoids {                    // forall n in [tail,N): y(n) not in s(n)
  std::optional<OrderFunc> value_bound;
  std::size_t L = 0;
};

using RelationKind = std::variant<AlwaysDifferent, AgreementAbove, BlockwiseFar, SlalomAvoids>;
using RelationOperand = std::variant<BitString, FinFunc, Slalom>;

bool check_relation(const RelationKind& kind, const RelationOperand& lhs,
                    const RelationOperand& rhs, const Horizon& hz);

// Finite surrogate of the relation's negation: the universal kinds negate to
// "at least hz.hits violations in [tail, N)"; AgreementAbove negates to
// "density estimate <= p".
bool check_negation(const RelationKind& kind, const RelationOperand& lhs,
                    const RelationOperand& rhs, const Horizon& hz);

// Violation counting for the pointwise kinds (positions in [tail, N) where the
// universal clause fails).
std::size_t count_relation_violations(const RelationKind& kind, const RelationOperand& lhs,
                                      const RelationOperand& rhs, const Horizon& hz);

std::size_t count_agreements(const FinFunc& x, const FinFunc& y, const Horizon& hz);

}  // namespace massred
