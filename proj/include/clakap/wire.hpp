#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "clakap/ec_group.hpp"
#include "clakap/key_agreement.hpp"

namespace clakap {

enum class MsgType : std::uint8_t { m1 = 0x01, m2 = 0x02 };

// msg-type (1) | id-length (2, big-endian) | id (UTF-8) | compressed T
struct WireMessage {
  MsgType type;
  KaMessage message;

  friend bool operator==(const WireMessage&, const WireMessage&) = default;
};

std::vector<std::uint8_t> encode_msg(const Curve& curve, const KaMessage& message, MsgType type);

// Decodes exactly one complete frame. Throws Errc::truncated_frame,
// Errc::bad_type, Errc::invalid_identity, Errc::malformed_encoding (bad
// point bytes or trailing data) and Errc::invalid_point (off-curve T or
// T = O).
WireMessage decode_msg(std::span<const std::uint8_t> frame, const Curve& curve);

// Total frame length implied by the bytes seen so far, or 0 while the
// header is incomplete.
std::size_t frame_length(std::span<const std::uint8_t> prefix, const Curve& curve);

}  // namespace clakap
