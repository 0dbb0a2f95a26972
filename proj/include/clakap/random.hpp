#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "clakap/ec_group.hpp"

namespace clakap {

class RandomSource {
 public:
  virtual ~RandomSource() = default;

  virtual void fill(std::span<std::uint8_t> out) = 0;

  // Uniform in [1, n-1] by rejection sampling over order_bits() wide draws.
  virtual Scalar nonzero_scalar(const Curve& curve);
};

// Operating-system entropy (OpenSSL RAND_bytes).
class SystemRandom final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

// SHA-256 in counter mode over a fixed seed; reproducible streams for tests
// and for CLAKAP_SEED.
class DeterministicRandom final : public RandomSource {
 public:
  explicit DeterministicRandom(std::span<const std::uint8_t> seed);
  explicit DeterministicRandom(std::uint64_t seed);
  ~DeterministicRandom() override;

  void fill(std::span<std::uint8_t> out) override;

 private:
  void refill();

  std::vector<std::uint8_t> seed_;
  std::uint64_t counter_ = 0;
  std::array<std::uint8_t, 32> block_{};
  std::size_t used_ = 32;
};

// DeterministicRandom seeded from the hex value of CLAKAP_SEED when set,
// SystemRandom otherwise.
std::unique_ptr<RandomSource> random_from_env();

}  // namespace clakap
