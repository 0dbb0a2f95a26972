#include "clakap/wire.hpp"

#include <string>

#include "clakap/error.hpp"

namespace clakap {

namespace {

constexpr std::size_t kHeaderBytes = 3;

}  // namespace

std::vector<std::uint8_t> encode_msg(const Curve& curve, const KaMessage& message, MsgType type) {
  const auto& id = message.sender.str();
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + id.size() + 1 + curve.field_bytes());
  out.push_back(static_cast<std::uint8_t>(type));
  out.push_back(static_cast<std::uint8_t>(id.size() >> 8));
  out.push_back(static_cast<std::uint8_t>(id.size()));
  out.insert(out.end(), id.begin(), id.end());
  const auto point = curve.encode(message.t);
  out.insert(out.end(), point.begin(), point.end());
  return out;
}

std::size_t frame_length(std::span<const std::uint8_t> prefix, const Curve& curve) {
  if (prefix.size() < kHeaderBytes + 1) return 0;
  const std::size_t id_length = (std::size_t{prefix[1]} << 8) | prefix[2];
  const std::size_t point_offset = kHeaderBytes + id_length;
  if (prefix.size() <= point_offset) return 0;
  return point_offset + (prefix[point_offset] == 0x00 ? 1 : 1 + curve.field_bytes());
}

WireMessage decode_msg(std::span<const std::uint8_t> frame, const Curve& curve) {
  if (frame.size() < kHeaderBytes) throw Error(Errc::truncated_frame, "frame shorter than its header");
  const auto type = frame[0];
  if (type != static_cast<std::uint8_t>(MsgType::m1) && type != static_cast<std::uint8_t>(MsgType::m2)) {
    throw Error(Errc::bad_type, "unknown message type " + std::to_string(type));
  }
  const std::size_t id_length = (std::size_t{frame[1]} << 8) | frame[2];
  if (frame.size() < kHeaderBytes + id_length + 1) throw Error(Errc::truncated_frame, "frame ends inside identity");
  const auto id_bytes = frame.subspan(kHeaderBytes, id_length);
  Identity sender(std::string_view(reinterpret_cast<const char*>(id_bytes.data()), id_bytes.size()));

  const auto point_bytes = frame.subspan(kHeaderBytes + id_length);
  const std::size_t point_length = point_bytes[0] == 0x00 ? 1 : 1 + curve.field_bytes();
  if (point_bytes.size() < point_length) throw Error(Errc::truncated_frame, "frame ends inside point");
  if (point_bytes.size() > point_length) throw Error(Errc::malformed_encoding, "trailing bytes after frame");
  const Point t = curve.decode(point_bytes);
  if (t.is_infinity()) throw Error(Errc::invalid_point, "ephemeral point is the identity");
  return WireMessage{static_cast<MsgType>(type), KaMessage{std::move(sender), t}};
}

}  // namespace clakap
