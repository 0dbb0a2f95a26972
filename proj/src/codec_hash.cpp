#include "clakap/codec_hash.hpp"

#include <openssl/evp.h>

#include <stdexcept>

#include "clakap/error.hpp"
#include "clakap/hex.hpp"

namespace clakap {

std::string SessionKey::hex() const { return hex_encode(bytes_); }

std::string SessionKey::fingerprint() const { return hex_encode(std::span(bytes_).first(8)); }

Digest sha256(std::span<const std::uint8_t> data) {
  Digest out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 || len != out.size()) {
    throw std::runtime_error("SHA-256 failed");
  }
  return out;
}

TranscriptEncoder& TranscriptEncoder::identity(const Identity& id) {
  const auto& s = id.str();
  bytes_.push_back(static_cast<std::uint8_t>(s.size() >> 8));
  bytes_.push_back(static_cast<std::uint8_t>(s.size()));
  bytes_.insert(bytes_.end(), s.begin(), s.end());
  return *this;
}

TranscriptEncoder& TranscriptEncoder::point(const Curve& curve, const Point& p) {
  const auto enc = curve.encode(p);
  bytes_.insert(bytes_.end(), enc.begin(), enc.end());
  return *this;
}

TranscriptEncoder& TranscriptEncoder::byte(std::uint8_t b) {
  bytes_.push_back(b);
  return *this;
}

std::vector<std::uint8_t> h1_input(const Curve& curve, const Identity& id, const Point& r, const Point& p,
                                   std::uint8_t counter) {
  return TranscriptEncoder(kH1Tag).identity(id).point(curve, r).point(curve, p).byte(counter).bytes();
}

std::vector<std::uint8_t> h2_input(const Curve& curve, const Identity& initiator, const Identity& responder,
                                   const Point& t_initiator, const Point& t_responder, const Point& k1,
                                   const Point& k2) {
  return TranscriptEncoder(kH2Tag)
      .identity(initiator)
      .identity(responder)
      .point(curve, t_initiator)
      .point(curve, t_responder)
      .point(curve, k1)
      .point(curve, k2)
      .bytes();
}

Scalar h1(const Curve& curve, const Identity& id, const Point& r, const Point& p) {
  // 2^256 mod n, then the largest multiple of n not exceeding 2^256 is
  // 2^256 - that remainder (wrapping arithmetic).
  U256 all_ones;
  U256::sub(all_ones, U256{}, U256{1});
  Scalar remainder = curve.scalar_add(curve.reduce_scalar(all_ones), curve.scalar(1));
  U256 threshold;
  U256::sub(threshold, U256{}, remainder.value());
  const bool accept_all = remainder.is_zero();

  for (unsigned counter = 0; counter < kH1MaxAttempts; ++counter) {
    const Digest digest = sha256(h1_input(curve, id, r, p, static_cast<std::uint8_t>(counter)));
    const U256 value = U256::from_be_bytes(digest);
    if (!accept_all && value >= threshold) continue;
    const Scalar reduced = curve.reduce_scalar(value);
    if (!reduced.is_zero()) return reduced;
  }
  throw Error(Errc::hash_exhausted, "H1 rejection sampling exceeded its retry cap");
}

SessionKey h2(const Curve& curve, const Identity& initiator, const Identity& responder, const Point& t_initiator,
              const Point& t_responder, const Point& k1, const Point& k2) {
  static_assert(kSessionKeyBytes == std::tuple_size_v<Digest>);
  return SessionKey{sha256(h2_input(curve, initiator, responder, t_initiator, t_responder, k1, k2))};
}

std::shared_ptr<const HashOracle> sha256_oracle() {
  static const auto oracle = std::make_shared<const Sha256Oracle>();
  return oracle;
}

}  // namespace clakap
