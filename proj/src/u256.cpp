#include "clakap/u256.hpp"

#include <openssl/crypto.h>

#include "clakap/error.hpp"

namespace clakap {

namespace {

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

U256 U256::from_hex(std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (hex.empty() || hex.size() > 64) {
    throw Error(Errc::malformed_encoding, "hex integer must have 1..64 digits");
  }
  U256 out;
  unsigned shift = 0;
  for (auto it = hex.rbegin(); it != hex.rend(); ++it, shift += 4) {
    const int d = hex_digit(*it);
    if (d < 0) throw Error(Errc::malformed_encoding, "non-hex digit in integer");
    out.limbs_[shift / 64] |= static_cast<std::uint64_t>(d) << (shift % 64);
  }
  return out;
}

U256 U256::from_be_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() > 32) throw Error(Errc::malformed_encoding, "integer wider than 256 bits");
  U256 out;
  unsigned shift = 0;
  for (auto it = bytes.rbegin(); it != bytes.rend(); ++it, shift += 8) {
    out.limbs_[shift / 64] |= static_cast<std::uint64_t>(*it) << (shift % 64);
  }
  return out;
}

void U256::to_be_bytes(std::span<std::uint8_t> out) const {
  if (out.size() < 32 && bit_length() > out.size() * 8) {
    throw Error(Errc::malformed_encoding, "integer does not fit the requested width");
  }
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t byte_index = n - 1 - i;  // little-endian byte position
    out[i] = byte_index < 32 ? static_cast<std::uint8_t>(limbs_[byte_index / 8] >> (8 * (byte_index % 8))) : 0;
  }
}

std::string U256::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (int i = 63; i >= 0; --i) {
    const auto nibble = (limbs_[i / 16] >> (4 * (i % 16))) & 0xf;
    if (out.empty() && nibble == 0 && i != 0) continue;
    out.push_back(kDigits[nibble]);
  }
  return out;
}

unsigned U256::bit_length() const {
  for (int i = 3; i >= 0; --i) {
    if (limbs_[i] != 0) return static_cast<unsigned>(64 * i + 64 - __builtin_clzll(limbs_[i]));
  }
  return 0;
}

void U256::wipe() { OPENSSL_cleanse(limbs_.data(), sizeof(limbs_)); }

MontgomeryDomain::MontgomeryDomain(const U256& modulus) : modulus_(modulus), bits_(modulus.bit_length()) {
  if (!modulus.is_odd() || modulus <= U256{2}) {
    throw Error(Errc::invalid_profile, "Montgomery modulus must be odd and greater than 2");
  }
  // Newton iteration doubles the number of correct low bits each step.
  std::uint64_t inv = 1;
  for (int i = 0; i < 6; ++i) inv *= 2 - modulus.limb(0) * inv;
  m_prime_ = ~inv + 1;

  U256 x{1};
  for (int i = 0; i < 256; ++i) x = add(x, x);
  r_mod_ = x;
  for (int i = 0; i < 256; ++i) x = add(x, x);
  r2_mod_ = x;
}

U256 MontgomeryDomain::pow(const U256& base, const U256& exponent) const {
  U256 acc = r_mod_;
  for (int i = static_cast<int>(bits_) - 1; i >= 0; --i) {
    acc = sqr(acc);
    const U256 product = mul(acc, base);
    const std::uint64_t bit = exponent.bit(static_cast<unsigned>(i));
    acc = U256::select(0 - bit, product, acc);
  }
  return acc;
}

U256 MontgomeryDomain::inv(const U256& a) const {
  U256 exponent;
  U256::sub(exponent, modulus_, U256{2});
  return pow(a, exponent);
}

}  // namespace clakap
