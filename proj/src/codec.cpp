#include "massred/codec.hpp"

#include <limits>

namespace massred {

BlockProfile::BlockProfile(ProfileKind kd, std::size_t kk, std::vector<std::size_t> ls)
    : kind(kd), k(kk), lens(std::move(ls)) {
  partial_sums.reserve(lens.size());
  std::size_t acc = 0;
  for (std::size_t i = 0; i < lens.size(); ++i) {
    if (lens[i] < 1) fail(Errc::ZeroLength, "block length must be >= 1");
    if (kind == ProfileKind::geometric && i > 0 && lens[i] < lens[i - 1])
      fail(Errc::NonMonotone, "geometric profile lengths must be nondecreasing");
    acc += lens[i];
    partial_sums.push_back(acc);
  }
}

BlockFunc::BlockFunc(BlockProfile p, std::vector<Nat> v)
    : profile(std::move(p)), values(std::move(v)) {
  if (values.size() != profile.size())
    fail(Errc::LengthMismatch, "block function length differs from profile");
  for (std::size_t n = 0; n < values.size(); ++n) {
    if (values[n] < 0 || (values[n] != 0 && boost::multiprecision::msb(values[n]) >= profile.lens[n]))
      fail(Errc::BoundViolation, "block value at " + std::to_string(n) + " exceeds 2^len");
  }
}

BitString BlockFunc::block_string(std::size_t n) const {
  return BitString::from_number(values.at(n), profile.lens.at(n));
}

BitString concat_blocks(const BlockFunc& x) {
  BitString out;
  for (std::size_t n = 0; n < x.size(); ++n) out = out.concat(x.block_string(n));
  return out;
}

BlockFunc split_blocks(const BlockProfile& profile, const BitString& z) {
  if (z.size() != profile.total_len())
    fail(Errc::LengthMismatch, "bit string length differs from profile total");
  std::vector<Nat> vals;
  vals.reserve(profile.size());
  for (std::size_t n = 0; n < profile.size(); ++n)
    vals.push_back(z.slice(profile.block_lo(n), profile.block_hi(n)).to_number());
  return BlockFunc(profile, std::move(vals));
}

IntervalBounds interval_bounds(const Nat& a, std::size_t m) {
  if (a < 2) fail(Errc::RangeExceeded, "interval base must be >= 2");
  if (m < 2) fail(Errc::RangeExceeded, "interval index must be >= 2");
  Nat am = boost::multiprecision::pow(a, static_cast<unsigned>(m));
  IntervalBounds b;
  b.lo = (am - 1) / (a - 1);
  b.hi = (am * a - 1) / (a - 1);
  return b;
}

GeometricProfile geometric_profile(const Nat& c, std::size_t N) {
  if (c < 1) fail(Errc::RangeExceeded, "geometric parameter must be >= 1");
  // least k with (2c+1)^k > 2*(2c)^k, i.e. (1 + 1/(2c))^k > 2
  std::size_t k = 1;
  Nat num = 2 * c + 1, den = 2 * c;
  Nat numk = num, denk = den;
  while (numk <= 2 * denk) {
    ++k;
    numk *= num;
    denk *= den;
  }

  std::vector<std::size_t> lens;
  lens.reserve(N);
  for (std::size_t n = 0; n < N; ++n) {
    Nat v = integer_kth_root(Nat(1) << static_cast<unsigned>(n), k);
    if (v < 1) v = 1;  // never happens for n >= 0 but keep blocks nonempty
    lens.push_back(v.convert_to<std::size_t>());
  }
  GeometricProfile out;
  out.k = k;
  out.profile = BlockProfile(ProfileKind::geometric, k, std::move(lens));

  const auto& H = out.profile.partial_sums;
  Nat floor_c = c;
  bool found = false;
  for (std::size_t n = 0; n < N && !found; ++n) {
    if (Nat(H[n]) < Nat(n) + 1 + 2 * c) continue;
    bool ok = true;
    for (std::size_t m = n; m + 1 < N; ++m)
      if (Nat(out.profile.lens[m + 1]) * floor_c > Nat(H[m])) {
        ok = false;
        break;
      }
    if (ok) {
      out.threshold = n;
      found = true;
    }
  }
  if (!found) fail(Errc::HorizonTooShort, "profile never reaches its stability threshold");
  return out;
}

BlockProfile superexp_profile(const Nat& a, std::size_t count) {
  std::vector<std::size_t> lens;
  lens.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto b = interval_bounds(a, 2 + i);
    Nat len = b.hi - b.lo;
    if (len > (std::numeric_limits<std::size_t>::max)())
      fail(Errc::BlockLengthTooLarge, "interval length exceeds addressable size");
    lens.push_back(len.convert_to<std::size_t>());
  }
  return BlockProfile(ProfileKind::superexp, 0, std::move(lens));
}

FinFunc interleave(const FinFunc& p0, const FinFunc& p1) {
  if (p0.size() != p1.size()) fail(Errc::LengthMismatch, "interleave needs equal lengths");
  std::vector<Nat> out(2 * p0.size());
  for (std::size_t m = 0; m < p0.size(); ++m) {
    out[2 * m] = p0(m);
    out[2 * m + 1] = p1(m);
  }
  return FinFunc(std::move(out));
}

std::pair<FinFunc, FinFunc> even_odd_split(const FinFunc& y) {
  if (y.size() % 2 != 0) fail(Errc::OddLength, "even/odd split needs even length");
  std::vector<Nat> a(y.size() / 2), b(y.size() / 2);
  for (std::size_t n = 0; n < y.size() / 2; ++n) {
    a[n] = y(2 * n);
    b[n] = y(2 * n + 1);
  }
  return {FinFunc(std::move(a)), FinFunc(std::move(b))};
}

FinFunc duplicate(const FinFunc& y) {
  std::vector<Nat> out(2 * y.size());
  for (std::size_t n = 0; n < y.size(); ++n) out[2 * n] = out[2 * n + 1] = y(n);
  return FinFunc(std::move(out));
}

}  // namespace massred
