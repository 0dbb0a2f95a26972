#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace clakap {

// Participant identity: 1..255 bytes of well-formed UTF-8, compared bytewise.
class Identity {
 public:
  static constexpr std::size_t kMaxBytes = 255;

  // Throws Errc::invalid_identity.
  explicit Identity(std::string_view utf8);

  const std::string& str() const { return bytes_; }
  std::size_t size() const { return bytes_.size(); }

  friend bool operator==(const Identity&, const Identity&) = default;
  friend auto operator<=>(const Identity&, const Identity&) = default;

 private:
  std::string bytes_;
};

bool is_valid_utf8(std::string_view bytes);

}  // namespace clakap
