#include "clakap/user_keys.hpp"

#include <gtest/gtest.h>

#include "clakap/error.hpp"
#include "support/fixtures.hpp"
#include "support/toy_oracle.hpp"

namespace clakap {
namespace {

using testing::kToyGenerator;
using testing::ScriptedRandom;
using testing::StubH1Oracle;
using testing::to_point;
using testing::toy17_oracle;

class ToyUserKeys : public ::testing::Test {
 protected:
  void SetUp() override {
    ScriptedRandom rng{4};
    std::tie(params_, master_) = setup(
        Curve::named("toy-17"), rng, std::make_shared<StubH1Oracle>(std::map<std::string, std::uint64_t>{{"A", 5}}));
  }

  SystemParams params_;
  MasterKey master_;
};

TEST_F(ToyUserKeys, SecretValueTwoDoublesTheGenerator) {
  ScriptedRandom rng{2};
  const SecretValue secret = set_secret_value(params_, rng);
  EXPECT_EQ(toy17_oracle().add(kToyGenerator, kToyGenerator), testing::ToyPoint::at(6, 3));
  EXPECT_EQ(secret.x.value(), U256{2});
  EXPECT_EQ(secret.user_point, Point::affine(6, 3));
}

TEST_F(ToyUserKeys, SecretValueSix) {
  ScriptedRandom rng{6};
  const SecretValue secret = set_secret_value(params_, rng);
  EXPECT_EQ(to_point(toy17_oracle().repeated(6, kToyGenerator)), Point::affine(16, 13));
  EXPECT_EQ(secret.user_point, Point::affine(16, 13));
}

TEST_F(ToyUserKeys, RandomSecretValuesAreOnCurve) {
  DeterministicRandom rng(8);
  for (int i = 0; i < 200; ++i) {
    const SecretValue secret = set_secret_value(params_, rng);
    ASSERT_FALSE(secret.user_point.is_infinity());
    ASSERT_TRUE(params_.group().is_on_curve(secret.user_point));
  }
}

TEST_F(ToyUserKeys, AssembleChainExample) {
  ScriptedRandom rng{2, 3};
  const SecretValue secret = set_secret_value(params_, rng);
  const PartialKey partial = extract_partial_key(master_, params_, Identity("A"), secret.user_point, rng);
  const UserKeys keys = assemble_keys(secret.x, partial, params_, Identity("A"));
  EXPECT_EQ(keys.priv.secret_value.value(), U256{2});
  EXPECT_EQ(keys.priv.partial.value(), U256{4});
  EXPECT_EQ(keys.pub.user_point, Point::affine(6, 3));
  EXPECT_EQ(keys.pub.commitment, Point::affine(10, 6));

  const Curve& c = params_.group();
  // (x+s)P = P_i + R_i + h*P_pub, here 6P = 2P + 3P + 5*4P.
  EXPECT_EQ(c.mul_base(c.scalar_add(keys.priv.secret_value, keys.priv.partial)),
            to_point(toy17_oracle().repeated(6, kToyGenerator)));
  EXPECT_EQ(c.mul_base(c.scalar(6)),
            c.add(c.add(keys.pub.user_point, keys.pub.commitment), c.mul(c.scalar(5), params_.master_public)));
}

TEST_F(ToyUserKeys, TamperedPartialIsRejected) {
  ScriptedRandom rng{2, 3};
  const SecretValue secret = set_secret_value(params_, rng);
  PartialKey partial = extract_partial_key(master_, params_, Identity("A"), secret.user_point, rng);
  partial.secret = params_.group().scalar(5);
  try {
    assemble_keys(secret.x, partial, params_, Identity("A"));
    FAIL() << "expected invalid-partial-key";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_partial_key);
  }
}

TEST_F(ToyUserKeys, DegenerateCombinedKeyIsRejected) {
  // x = 15 and s_i = 4 sum to 19 = 0 mod n.
  ScriptedRandom rng{15, 3};
  const SecretValue secret = set_secret_value(params_, rng);
  const PartialKey partial = extract_partial_key(master_, params_, Identity("A"), secret.user_point, rng);
  ASSERT_EQ(partial.secret.value(), U256{4});
  try {
    assemble_keys(secret.x, partial, params_, Identity("A"));
    FAIL() << "expected degenerate-key";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::degenerate_key);
  }
}

TEST_F(ToyUserKeys, PublicKeyValidation) {
  EXPECT_NO_THROW(validate_public_key(params_.group(), PublicKey{Point::affine(6, 3), Point::affine(10, 6)}));
  EXPECT_THROW(validate_public_key(params_.group(), PublicKey{Point::infinity(), Point::affine(10, 6)}), Error);
  EXPECT_THROW(validate_public_key(params_.group(), PublicKey{Point::affine(6, 4), Point::affine(10, 6)}), Error);
}

class KeyConsistency : public ::testing::TestWithParam<const char*> {};

TEST_P(KeyConsistency, CombinedKeyMatchesPublicSide) {
  DeterministicRandom rng(77);
  const auto [params, master] = setup(Curve::named(GetParam()), rng);
  const Curve& c = params.group();
  for (int i = 0; i < 1000; ++i) {
    const Identity id("member-" + std::to_string(i));
    const UserKeys keys = provision_user(params, master, id, rng);
    const Scalar h = h1(c, id, keys.pub.commitment, keys.pub.user_point);
    const Point lhs = c.mul_base(c.scalar_add(keys.priv.secret_value, keys.priv.partial));
    const Point rhs = c.add(c.add(keys.pub.user_point, keys.pub.commitment), c.mul(h, params.master_public));
    ASSERT_EQ(lhs, rhs) << id.str();
  }
}

INSTANTIATE_TEST_SUITE_P(Profiles, KeyConsistency, ::testing::Values("toy-17", "p256"));

}  // namespace
}  // namespace clakap
