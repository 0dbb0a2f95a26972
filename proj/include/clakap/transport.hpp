#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "clakap/codec_hash.hpp"
#include "clakap/key_agreement.hpp"
#include "clakap/kgc.hpp"
#include "clakap/random.hpp"
#include "clakap/user_keys.hpp"

namespace clakap {

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;

  // "host:port"; the host may be a bracketed IPv6 literal.
  static Endpoint parse(std::string_view text);
  std::string str() const;
};

struct AgreementMaterial {
  SystemParams params;
  UserKeys own;
  PeerInfo peer;
};

struct AgreementResult {
  Role role = Role::initiator;
  SessionKey key;
  SessionTranscript transcript;
  std::vector<std::uint8_t> m1;
  std::vector<std::uint8_t> m2;
  // Human-readable trace of the exchange, one entry per event.
  std::vector<std::string> log;
};

inline constexpr std::chrono::milliseconds kDefaultIoTimeout{10000};

// Bound listening socket serving one responder run per accept.
class Listener {
 public:
  explicit Listener(const Endpoint& endpoint);
  ~Listener();
  Listener(const Listener&) = delete;
  Listener& operator=(const Listener&) = delete;

  // Actual bound port, useful when the endpoint asked for port 0.
  std::uint16_t port() const { return port_; }

  AgreementResult accept_and_respond(const AgreementMaterial& material, RandomSource& rng,
                                     std::chrono::milliseconds timeout = kDefaultIoTimeout);

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

AgreementResult connect_and_initiate(const Endpoint& endpoint, const AgreementMaterial& material, RandomSource& rng,
                                     std::chrono::milliseconds timeout = kDefaultIoTimeout);

// Socket failures throw Errc::transport; protocol failures keep their own
// error codes.
AgreementResult agree_over_socket(Role role, const Endpoint& endpoint, const AgreementMaterial& material,
                                  RandomSource& rng, std::chrono::milliseconds timeout = kDefaultIoTimeout);

std::vector<std::string> describe_transcript(const Curve& curve, const SessionTranscript& transcript);

}  // namespace clakap
