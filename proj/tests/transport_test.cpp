#include "clakap/transport.hpp"

#include <gtest/gtest.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <future>
#include <thread>

#include "clakap/error.hpp"
#include "clakap/hex.hpp"
#include "clakap/wire.hpp"
#include "support/fixtures.hpp"

namespace clakap {
namespace {

using namespace std::chrono_literals;

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::truncated_frame;
}

// Raw client used to feed the responder hand-made bytes.
int raw_connect(std::uint16_t port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    ::close(fd);
    return -1;
  }
  return fd;
}

class Loopback : public ::testing::TestWithParam<const char*> {
 protected:
  void SetUp() override {
    std::tie(params_, master_) = setup(Curve::named(GetParam()), rng_);
    alice_ = provision_user(params_, master_, Identity("alice"), rng_);
    bob_ = provision_user(params_, master_, Identity("bob"), rng_);
  }

  AgreementMaterial material(const UserKeys& own, const UserKeys& peer) const {
    return AgreementMaterial{params_, own, PeerInfo{peer.id, peer.pub}};
  }

  DeterministicRandom rng_{4};
  SystemParams params_;
  MasterKey master_;
  UserKeys alice_{Identity("alice"), {}, {}};
  UserKeys bob_{Identity("bob"), {}, {}};
};

TEST_P(Loopback, BothEndsDeriveTheSameKey) {
  Listener listener(Endpoint::parse("127.0.0.1:0"));
  ASSERT_NE(listener.port(), 0);
  const AgreementMaterial bob_side = material(bob_, alice_);
  auto responder = std::async(std::launch::async, [&] {
    DeterministicRandom rng(100);
    return listener.accept_and_respond(bob_side, rng);
  });
  DeterministicRandom rng(200);
  const AgreementResult a = connect_and_initiate(Endpoint{"127.0.0.1", listener.port()}, material(alice_, bob_), rng);
  const AgreementResult b = responder.get();

  EXPECT_EQ(a.role, Role::initiator);
  EXPECT_EQ(b.role, Role::responder);
  EXPECT_EQ(a.key, b.key);
  EXPECT_EQ(a.key.fingerprint(), b.key.fingerprint());
  EXPECT_EQ(a.transcript, b.transcript);
  EXPECT_EQ(a.m1, b.m1);
  EXPECT_EQ(a.m2, b.m2);
  EXPECT_EQ(decode_msg(a.m1, params_.group()).message.sender, alice_.id);
  EXPECT_EQ(a.log.front(), "send M1 " + hex_encode(a.m1));
  EXPECT_EQ(b.log.front(), "recv M1 " + hex_encode(a.m1));
  EXPECT_EQ(describe_transcript(params_.group(), a.transcript)[0], "ID_A alice");
}

TEST_P(Loopback, WrongPeerKeyGivesDifferentFingerprints) {
  const UserKeys mallory = provision_user(params_, master_, Identity("alice"), rng_);
  Listener listener(Endpoint::parse("127.0.0.1:0"));
  const AgreementMaterial bob_side = material(bob_, mallory);
  auto responder = std::async(std::launch::async, [&] {
    DeterministicRandom rng(1);
    return listener.accept_and_respond(bob_side, rng);
  });
  DeterministicRandom rng(2);
  const AgreementResult a = connect_and_initiate(Endpoint{"127.0.0.1", listener.port()}, material(alice_, bob_), rng);
  const AgreementResult b = responder.get();
  EXPECT_EQ(a.transcript, b.transcript);
  EXPECT_NE(a.key.fingerprint(), b.key.fingerprint());
}

INSTANTIATE_TEST_SUITE_P(Profiles, Loopback, ::testing::Values("toy-17", "p256"));

class TransportFailures : public Loopback {};

TEST_P(TransportFailures, ClosedPortIsATransportError) {
  std::uint16_t port = 0;
  {
    Listener probe(Endpoint::parse("127.0.0.1:0"));
    port = probe.port();
  }
  DeterministicRandom rng(3);
  EXPECT_EQ(code_of([&] { connect_and_initiate(Endpoint{"127.0.0.1", port}, material(alice_, bob_), rng); }),
            Errc::transport);
}

TEST_P(TransportFailures, ResponderRejectsWrongMessageType) {
  Listener listener(Endpoint::parse("127.0.0.1:0"));
  auto responder = std::async(std::launch::async, [&] {
    DeterministicRandom rng(1);
    return code_of([&] { listener.accept_and_respond(material(bob_, alice_), rng); });
  });
  const int fd = raw_connect(listener.port());
  ASSERT_GE(fd, 0);
  const auto frame = encode_msg(params_.group(), KaMessage{alice_.id, params_.group().generator()}, MsgType::m2);
  ASSERT_EQ(::send(fd, frame.data(), frame.size(), 0), static_cast<ssize_t>(frame.size()));
  EXPECT_EQ(responder.get(), Errc::bad_type);
  ::close(fd);
}

TEST_P(TransportFailures, PeerClosingMidFrameIsATransportError) {
  Listener listener(Endpoint::parse("127.0.0.1:0"));
  auto responder = std::async(std::launch::async, [&] {
    DeterministicRandom rng(1);
    return code_of([&] { listener.accept_and_respond(material(bob_, alice_), rng); });
  });
  const int fd = raw_connect(listener.port());
  ASSERT_GE(fd, 0);
  const std::uint8_t partial[] = {0x01, 0x00, 0x05, 'a', 'l'};
  ASSERT_EQ(::send(fd, partial, sizeof partial, 0), 5);
  ::close(fd);
  EXPECT_EQ(responder.get(), Errc::transport);
}

TEST_P(TransportFailures, SilentPeerTimesOut) {
  Listener listener(Endpoint::parse("127.0.0.1:0"));
  auto responder = std::async(std::launch::async, [&] {
    DeterministicRandom rng(1);
    return code_of([&] { listener.accept_and_respond(material(bob_, alice_), rng, 200ms); });
  });
  const int fd = raw_connect(listener.port());
  ASSERT_GE(fd, 0);
  EXPECT_EQ(responder.get(), Errc::transport);
  ::close(fd);
}

INSTANTIATE_TEST_SUITE_P(Profiles, TransportFailures, ::testing::Values("toy-17"));

TEST(EndpointTest, Parsing) {
  const Endpoint e = Endpoint::parse("localhost:7000");
  EXPECT_EQ(e.host, "localhost");
  EXPECT_EQ(e.port, 7000);
  EXPECT_EQ(e.str(), "localhost:7000");
  const Endpoint v6 = Endpoint::parse("[::1]:9");
  EXPECT_EQ(v6.host, "::1");
  EXPECT_EQ(v6.str(), "[::1]:9");
  for (const char* bad : {"nohost", "h:", "h:70000", "h:-1", "h:12ab"}) {
    EXPECT_EQ(code_of([&] { Endpoint::parse(bad); }), Errc::transport) << bad;
  }
}

}  // namespace
}  // namespace clakap
