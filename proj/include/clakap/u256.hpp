#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace clakap {

// Fixed-width 256-bit unsigned integer, little-endian 64-bit limbs.
class U256 {
 public:
  using Limbs = std::array<std::uint64_t, 4>;

  constexpr U256() = default;
  constexpr explicit U256(std::uint64_t v) : limbs_{v, 0, 0, 0} {}
  constexpr explicit U256(const Limbs& limbs) : limbs_(limbs) {}

  // Accepts an optional "0x" prefix; at most 64 hex digits.
  static U256 from_hex(std::string_view hex);
  // Big-endian, at most 32 bytes.
  static U256 from_be_bytes(std::span<const std::uint8_t> bytes);

  // Writes the value big-endian into exactly out.size() bytes; throws if it
  // does not fit.
  void to_be_bytes(std::span<std::uint8_t> out) const;
  std::string to_hex() const;

  constexpr const Limbs& limbs() const { return limbs_; }
  constexpr std::uint64_t limb(std::size_t i) const { return limbs_[i]; }
  constexpr std::uint64_t& limb(std::size_t i) { return limbs_[i]; }

  bool bit(unsigned index) const { return (limbs_[index / 64] >> (index % 64)) & 1u; }
  unsigned bit_length() const;
  bool is_zero() const { return (limbs_[0] | limbs_[1] | limbs_[2] | limbs_[3]) == 0; }
  bool is_odd() const { return limbs_[0] & 1u; }
  // Value if it fits in 64 bits; callers check fits_u64 first.
  bool fits_u64() const { return (limbs_[1] | limbs_[2] | limbs_[3]) == 0; }
  std::uint64_t low_u64() const { return limbs_[0]; }

  friend bool operator==(const U256&, const U256&) = default;
  friend std::strong_ordering operator<=>(const U256& a, const U256& b) {
    for (int i = 3; i >= 0; --i) {
      if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] <=> b.limbs_[i];
    }
    return std::strong_ordering::equal;
  }

  // Wrapping arithmetic; return the carry / borrow out of the top limb.
  static std::uint64_t add(U256& out, const U256& a, const U256& b);
  static std::uint64_t sub(U256& out, const U256& a, const U256& b);

  // mask must be all-zeros or all-ones.
  static U256 select(std::uint64_t mask, const U256& if_set, const U256& if_clear);

  void wipe();

 private:
  Limbs limbs_{};
};

// Arithmetic modulo an odd modulus m > 2 in Montgomery form with R = 2^256.
// Values passed to add/sub/mul/neg must already be reduced below m.
class MontgomeryDomain {
 public:
  explicit MontgomeryDomain(const U256& modulus);

  const U256& modulus() const { return modulus_; }
  // R mod m, which is also Montgomery one.
  const U256& one() const { return r_mod_; }

  // Any 256-bit input is accepted by to_mont and reduce.
  U256 to_mont(const U256& a) const { return mul(a, r2_mod_); }
  U256 from_mont(const U256& a) const { return mul(a, U256{1}); }
  U256 reduce(const U256& a) const { return from_mont(to_mont(a)); }

  U256 add(const U256& a, const U256& b) const;
  U256 sub(const U256& a, const U256& b) const;
  U256 neg(const U256& a) const { return sub(U256{}, a); }
  U256 mul(const U256& a, const U256& b) const;
  U256 sqr(const U256& a) const { return mul(a, a); }

  // Montgomery-form base, plain exponent. Runs over every bit of the
  // modulus width regardless of the exponent value.
  U256 pow(const U256& base, const U256& exponent) const;
  // Fermat inversion; only meaningful for prime moduli. inv(0) == 0.
  U256 inv(const U256& a) const;

 private:
  U256 modulus_;
  std::uint64_t m_prime_ = 0;  // -m^{-1} mod 2^64
  U256 r_mod_;
  U256 r2_mod_;
  unsigned bits_ = 0;
};

namespace detail {
__extension__ typedef unsigned __int128 u128;
}  // namespace detail

inline std::uint64_t U256::add(U256& out, const U256& a, const U256& b) {
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const detail::u128 s = static_cast<detail::u128>(a.limbs_[i]) + b.limbs_[i] + carry;
    out.limbs_[i] = static_cast<std::uint64_t>(s);
    carry = static_cast<std::uint64_t>(s >> 64);
  }
  return carry;
}

inline std::uint64_t U256::sub(U256& out, const U256& a, const U256& b) {
  std::uint64_t borrow = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const detail::u128 d = static_cast<detail::u128>(a.limbs_[i]) - b.limbs_[i] - borrow;
    out.limbs_[i] = static_cast<std::uint64_t>(d);
    borrow = static_cast<std::uint64_t>(d >> 64) & 1u;
  }
  return borrow;
}

inline U256 U256::select(std::uint64_t mask, const U256& if_set, const U256& if_clear) {
  U256 out;
  for (std::size_t i = 0; i < 4; ++i) {
    out.limbs_[i] = (if_set.limbs_[i] & mask) | (if_clear.limbs_[i] & ~mask);
  }
  return out;
}

inline U256 MontgomeryDomain::add(const U256& a, const U256& b) const {
  U256 sum;
  const std::uint64_t carry = U256::add(sum, a, b);
  U256 reduced;
  const std::uint64_t borrow = U256::sub(reduced, sum, modulus_);
  // Keep the reduced value when the sum overflowed or was >= m.
  const std::uint64_t keep_reduced = carry | (borrow ^ 1u);
  return U256::select(0 - keep_reduced, reduced, sum);
}

inline U256 MontgomeryDomain::sub(const U256& a, const U256& b) const {
  U256 diff;
  const std::uint64_t borrow = U256::sub(diff, a, b);
  U256 corrected;
  U256::add(corrected, diff, modulus_);
  return U256::select(0 - borrow, corrected, diff);
}

inline U256 MontgomeryDomain::mul(const U256& a, const U256& b) const {
  // CIOS Montgomery multiplication.
  std::array<std::uint64_t, 6> t{};
  for (std::size_t i = 0; i < 4; ++i) {
    std::uint64_t carry = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      const detail::u128 s = static_cast<detail::u128>(a.limb(j)) * b.limb(i) + t[j] + carry;
      t[j] = static_cast<std::uint64_t>(s);
      carry = static_cast<std::uint64_t>(s >> 64);
    }
    detail::u128 s = static_cast<detail::u128>(t[4]) + carry;
    t[4] = static_cast<std::uint64_t>(s);
    t[5] = static_cast<std::uint64_t>(s >> 64);

    const std::uint64_t m = t[0] * m_prime_;
    s = static_cast<detail::u128>(m) * modulus_.limb(0) + t[0];
    carry = static_cast<std::uint64_t>(s >> 64);
    for (std::size_t j = 1; j < 4; ++j) {
      s = static_cast<detail::u128>(m) * modulus_.limb(j) + t[j] + carry;
      t[j - 1] = static_cast<std::uint64_t>(s);
      carry = static_cast<std::uint64_t>(s >> 64);
    }
    s = static_cast<detail::u128>(t[4]) + carry;
    t[3] = static_cast<std::uint64_t>(s);
    t[4] = t[5] + static_cast<std::uint64_t>(s >> 64);
  }

  const U256 low(U256::Limbs{t[0], t[1], t[2], t[3]});
  U256 reduced;
  const std::uint64_t borrow = U256::sub(reduced, low, modulus_);
  // t < 2m: subtract m unless the five-limb value is already below m.
  const std::uint64_t below = borrow & ~t[4] & 1u;
  return U256::select(0 - below, low, reduced);
}

}  // namespace clakap
