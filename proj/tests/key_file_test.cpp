#include "clakap/key_file.hpp"

#include <gtest/gtest.h>
#include <sys/stat.h>

#include <filesystem>

#include "clakap/error.hpp"
#include "support/fixtures.hpp"

namespace clakap {
namespace {

namespace fs = std::filesystem;

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::transport;
}

class KeyFileRoundTrip : public ::testing::TestWithParam<const char*> {
 protected:
  void SetUp() override {
    std::tie(params_, master_) = setup(Curve::named(GetParam()), rng_);
    secret_ = set_secret_value(params_, rng_);
    partial_ = extract_partial_key(master_, params_, id_, secret_.user_point, rng_);
    keys_ = assemble_keys(secret_.x, partial_, params_, id_);
  }

  static KeyFile reparse(const KeyFile& f) {
    const KeyFile back = KeyFile::parse(f.serialize());
    EXPECT_EQ(back.serialize(), f.serialize());
    return back;
  }

  DeterministicRandom rng_{99};
  const Identity id_{"carol"};
  SystemParams params_;
  MasterKey master_;
  SecretValue secret_;
  PartialKey partial_;
  UserKeys keys_{Identity("carol"), {}, {}};
};

TEST_P(KeyFileRoundTrip, EveryRoleSurvivesSerialization) {
  const Curve& c = params_.group();

  const SystemParams params = params_from(reparse(to_key_file(params_)));
  EXPECT_EQ(params.master_public, params_.master_public);
  EXPECT_EQ(params.group().profile().name, c.profile().name);

  EXPECT_EQ(master_from(reparse(to_key_file(c, master_))).second.s, master_.s);

  const auto [pid, partial] = partial_from(reparse(to_key_file(c, id_, partial_)), c);
  EXPECT_EQ(pid, id_);
  EXPECT_EQ(partial, partial_);

  const auto [sid, secret] = secret_from(reparse(to_key_file(c, id_, secret_)), c);
  EXPECT_EQ(secret.x, secret_.x);
  EXPECT_EQ(secret.user_point, secret_.user_point);

  EXPECT_EQ(user_point_from(reparse(user_point_file(c, id_, secret_.user_point)), c).second, secret_.user_point);
  EXPECT_EQ(private_key_from(reparse(private_key_file(c, id_, keys_.priv)), c).second, keys_.priv);
  EXPECT_EQ(public_key_from(reparse(public_key_file(c, id_, keys_.pub)), c).second, keys_.pub);
}

TEST_P(KeyFileRoundTrip, FieldsAppearInFixedOrder) {
  const Curve& c = params_.group();
  const KeyFile f = public_key_file(c, id_, keys_.pub);
  ASSERT_EQ(f.fields().size(), field_order(KeyRole::public_key).size());
  for (std::size_t i = 0; i < f.fields().size(); ++i) {
    EXPECT_EQ(f.fields()[i].first, field_order(KeyRole::public_key)[i]);
  }
  const std::string text = f.serialize();
  EXPECT_EQ(text.rfind("clakap-key v1\nprofile " + c.profile().name + "\nrole public\nid ", 0), 0u) << text;
}

TEST_P(KeyFileRoundTrip, SecretRolesAreWrittenOwnerOnly) {
  const Curve& c = params_.group();
  const fs::path dir = fs::temp_directory_path() / ("clakap-kf-" + std::string(GetParam()) + "-" +
                                                    std::to_string(::getpid()));
  fs::create_directories(dir);
  write_key_file(dir / "m.key", to_key_file(c, master_));
  write_key_file(dir / "pub.key", public_key_file(c, id_, keys_.pub));
  struct stat st{};
  ASSERT_EQ(::stat((dir / "m.key").c_str(), &st), 0);
  EXPECT_EQ(st.st_mode & 0777, 0600u);
  ASSERT_EQ(::stat((dir / "pub.key").c_str(), &st), 0);
  EXPECT_EQ(st.st_mode & 0777, 0644u);
  EXPECT_EQ(master_from(read_key_file(dir / "m.key")).second.s, master_.s);
  fs::remove_all(dir);
}

INSTANTIATE_TEST_SUITE_P(Profiles, KeyFileRoundTrip, ::testing::Values("toy-17", "p256"));

TEST(KeyFileParse, RejectsOtherVersions) {
  EXPECT_EQ(code_of([] { KeyFile::parse("clakap-key v2\nprofile toy-17\nrole master\ns 04\n"); }),
            Errc::unsupported_version);
}

TEST(KeyFileParse, RejectsMalformedEnvelopes) {
  const auto curve = Curve::named("toy-17");
  for (const char* text : {"", "other v1\n", "clakap-key v1\nrole master\n", "clakap-key v1\nprofile toy-17\n",
                           "clakap-key v1\nprofile toy-17\nrole wizard\n",
                           "clakap-key v1\nprofile toy-17\nrole master\ns\n",
                           "clakap-key v1\nprofile toy-17\nrole master\n",
                           "clakap-key v1\nprofile toy-17\nrole master\nx 04\n"}) {
    EXPECT_EQ(code_of([&] { KeyFile::parse(text); }), Errc::bad_key_file) << text;
  }
  const KeyFile zero = KeyFile::parse("clakap-key v1\nprofile toy-17\nrole master\ns 00\n");
  EXPECT_EQ(code_of([&] { master_from(zero); }), Errc::bad_key_file);
  const KeyFile bad_point =
      KeyFile::parse("clakap-key v1\nprofile toy-17\nrole public\nid 41\nP 0201\nR 0305\n");
  EXPECT_EQ(code_of([&] { public_key_from(bad_point, *curve); }), Errc::bad_key_file);
  const KeyFile wrong_role = KeyFile::parse("clakap-key v1\nprofile toy-17\nrole master\ns 04\n");
  EXPECT_EQ(code_of([&] { public_key_from(wrong_role, *curve); }), Errc::bad_key_file);
  const KeyFile unknown_profile = KeyFile::parse("clakap-key v1\nprofile toy-99\nrole master\ns 04\n");
  EXPECT_EQ(code_of([&] { master_from(unknown_profile); }), Errc::bad_key_file);
  EXPECT_EQ(code_of([] { read_key_file("/nonexistent/clakap.key"); }), Errc::bad_key_file);
}

TEST(KeyFileParse, ToyMasterKnownText) {
  const auto curve = Curve::named("toy-17");
  const KeyFile f = to_key_file(*curve, MasterKey{curve->scalar(4)});
  EXPECT_EQ(f.serialize(), "clakap-key v1\nprofile toy-17\nrole master\ns 04\n");
}

}  // namespace
}  // namespace clakap
