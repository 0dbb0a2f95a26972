#include "clakap/u256.hpp"

#include <gtest/gtest.h>

#include <random>

#include "clakap/error.hpp"

namespace clakap {
namespace {

__extension__ typedef unsigned __int128 u128;

TEST(U256Test, HexRoundTrip) {
  const auto v = U256::from_hex("0x1234567890abcdef1122334455667788");
  EXPECT_EQ(v.to_hex(), "1234567890abcdef1122334455667788");
  EXPECT_EQ(U256{}.to_hex(), "0");
  EXPECT_THROW(U256::from_hex("xyz"), Error);
  EXPECT_THROW(U256::from_hex(std::string(65, 'f')), Error);
}

TEST(U256Test, BigEndianBytes) {
  const std::uint8_t bytes[] = {0x01, 0x02, 0x03};
  const auto v = U256::from_be_bytes(bytes);
  EXPECT_EQ(v, U256{0x010203});
  std::array<std::uint8_t, 4> out{};
  v.to_be_bytes(out);
  EXPECT_EQ(out, (std::array<std::uint8_t, 4>{0x00, 0x01, 0x02, 0x03}));
  std::array<std::uint8_t, 2> narrow{};
  EXPECT_THROW(v.to_be_bytes(narrow), Error);
}

TEST(U256Test, BitLength) {
  EXPECT_EQ(U256{}.bit_length(), 0u);
  EXPECT_EQ(U256{19}.bit_length(), 5u);
  EXPECT_EQ(U256::from_hex("8000000000000000000000000000000000000000000000000000000000000000").bit_length(), 256u);
}

TEST(U256Test, AddSubCarry) {
  U256 all_ones;
  EXPECT_EQ(U256::sub(all_ones, U256{}, U256{1}), 1u);
  U256 sum;
  EXPECT_EQ(U256::add(sum, all_ones, U256{1}), 1u);
  EXPECT_TRUE(sum.is_zero());
}

// Property: Montgomery arithmetic agrees with 128-bit native arithmetic for
// a 61-bit prime modulus.
TEST(MontgomeryDomainTest, MatchesNativeArithmetic) {
  const std::uint64_t m = (1ull << 61) - 1;
  const MontgomeryDomain dom{U256{m}};
  std::mt19937_64 gen(7);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t a = gen() % m;
    const std::uint64_t b = gen() % m;
    const U256 am = dom.to_mont(U256{a});
    const U256 bm = dom.to_mont(U256{b});
    EXPECT_EQ(dom.from_mont(dom.mul(am, bm)), U256{static_cast<std::uint64_t>(static_cast<u128>(a) * b % m)});
    EXPECT_EQ(dom.from_mont(dom.add(am, bm)), U256{(a + b) % m});
    EXPECT_EQ(dom.from_mont(dom.sub(am, bm)), U256{(a + m - b) % m});
    if (a != 0) {
      EXPECT_EQ(dom.from_mont(dom.mul(dom.inv(am), am)), U256{1});
    }
  }
}

TEST(MontgomeryDomainTest, ReduceWideInput) {
  const MontgomeryDomain dom{U256{19}};
  U256 all_ones;
  U256::sub(all_ones, U256{}, U256{1});
  // 2^256 - 1 = 15 mod 19 (2^256 = 16 mod 19 since 2^18 = 1 and 256 = 14*18 + 4).
  EXPECT_EQ(dom.reduce(all_ones), U256{15});
  EXPECT_THROW(MontgomeryDomain{U256{16}}, Error);
}

}  // namespace
}  // namespace clakap
