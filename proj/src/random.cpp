#include "clakap/random.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include <cstdlib>
#include <string>

#include "clakap/error.hpp"
#include "clakap/hex.hpp"

namespace clakap {

Scalar RandomSource::nonzero_scalar(const Curve& curve) {
  const unsigned bits = curve.order_bits();
  std::vector<std::uint8_t> buf((bits + 7) / 8);
  const unsigned top_bits = bits % 8;
  for (;;) {
    fill(buf);
    if (top_bits != 0) buf[0] &= static_cast<std::uint8_t>((1u << top_bits) - 1);
    U256 candidate = U256::from_be_bytes(buf);
    if (curve.is_nonzero_scalar(candidate)) {
      OPENSSL_cleanse(buf.data(), buf.size());
      return Scalar{candidate};
    }
  }
}

void SystemRandom::fill(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw std::runtime_error("RAND_bytes failed");
  }
}

DeterministicRandom::DeterministicRandom(std::span<const std::uint8_t> seed) : seed_(seed.begin(), seed.end()) {}

DeterministicRandom::DeterministicRandom(std::uint64_t seed) {
  for (int i = 7; i >= 0; --i) seed_.push_back(static_cast<std::uint8_t>(seed >> (8 * i)));
}

DeterministicRandom::~DeterministicRandom() {
  OPENSSL_cleanse(seed_.data(), seed_.size());
  OPENSSL_cleanse(block_.data(), block_.size());
}

void DeterministicRandom::refill() {
  std::vector<std::uint8_t> input(seed_);
  for (int i = 7; i >= 0; --i) input.push_back(static_cast<std::uint8_t>(counter_ >> (8 * i)));
  ++counter_;
  unsigned int len = 0;
  if (EVP_Digest(input.data(), input.size(), block_.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  used_ = 0;
}

void DeterministicRandom::fill(std::span<std::uint8_t> out) {
  for (auto& byte : out) {
    if (used_ == block_.size()) refill();
    byte = block_[used_++];
  }
}

std::unique_ptr<RandomSource> random_from_env() {
  const char* seed = std::getenv("CLAKAP_SEED");
  if (seed == nullptr || *seed == '\0') return std::make_unique<SystemRandom>();
  const auto bytes = hex_decode(seed);
  return std::make_unique<DeterministicRandom>(bytes);
}

}  // namespace clakap
