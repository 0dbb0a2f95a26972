#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clakap/ec_group.hpp"
#include "clakap/identity.hpp"

namespace clakap {

inline constexpr std::size_t kSessionKeyBits = 256;
inline constexpr std::size_t kSessionKeyBytes = kSessionKeyBits / 8;

inline constexpr std::uint8_t kH1Tag = 0x01;
inline constexpr std::uint8_t kH2Tag = 0x02;
// Counter values 0..255; one initial attempt plus 255 retries.
inline constexpr unsigned kH1MaxAttempts = 256;

class SessionKey {
 public:
  using Bytes = std::array<std::uint8_t, kSessionKeyBytes>;

  SessionKey() = default;
  explicit SessionKey(const Bytes& bytes) : bytes_(bytes) {}

  const Bytes& bytes() const { return bytes_; }
  std::string hex() const;
  // First 8 bytes, hex.
  std::string fingerprint() const;

  friend bool operator==(const SessionKey&, const SessionKey&) = default;

 private:
  Bytes bytes_{};
};

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::span<const std::uint8_t> data);

// Builds hash inputs: a one-byte domain tag followed by the fields in order.
// Identities carry a 2-byte big-endian length prefix; points use the
// self-delimiting compressed encoding.
class TranscriptEncoder {
 public:
  explicit TranscriptEncoder(std::uint8_t domain_tag) : bytes_{domain_tag} {}

  TranscriptEncoder& identity(const Identity& id);
  TranscriptEncoder& point(const Curve& curve, const Point& p);
  TranscriptEncoder& byte(std::uint8_t b);

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

std::vector<std::uint8_t> h1_input(const Curve& curve, const Identity& id, const Point& r, const Point& p,
                                   std::uint8_t counter);
std::vector<std::uint8_t> h2_input(const Curve& curve, const Identity& initiator, const Identity& responder,
                                   const Point& t_initiator, const Point& t_responder, const Point& k1,
                                   const Point& k2);

// H1(ID, R, P) -> [1, n-1]. A digest d is accepted when d < n*floor(2^256/n)
// and d mod n != 0; otherwise the counter byte is incremented.
Scalar h1(const Curve& curve, const Identity& id, const Point& r, const Point& p);

// H2(ID_A || ID_B || T_A || T_B || K1 || K2) -> 256-bit session key.
SessionKey h2(const Curve& curve, const Identity& initiator, const Identity& responder, const Point& t_initiator,
              const Point& t_responder, const Point& k1, const Point& k2);

// The hash pair carried by the system parameters. Replaceable so tests can
// stub H1 outputs.
class HashOracle {
 public:
  virtual ~HashOracle() = default;

  virtual std::string_view name() const = 0;
  virtual Scalar h1(const Curve& curve, const Identity& id, const Point& r, const Point& p) const = 0;
  virtual SessionKey h2(const Curve& curve, const Identity& initiator, const Identity& responder,
                        const Point& t_initiator, const Point& t_responder, const Point& k1,
                        const Point& k2) const = 0;
};

class Sha256Oracle final : public HashOracle {
 public:
  std::string_view name() const override { return "sha256"; }
  Scalar h1(const Curve& curve, const Identity& id, const Point& r, const Point& p) const override {
    return clakap::h1(curve, id, r, p);
  }
  SessionKey h2(const Curve& curve, const Identity& initiator, const Identity& responder, const Point& t_initiator,
                const Point& t_responder, const Point& k1, const Point& k2) const override {
    return clakap::h2(curve, initiator, responder, t_initiator, t_responder, k1, k2);
  }
};

std::shared_ptr<const HashOracle> sha256_oracle();

}  // namespace clakap
