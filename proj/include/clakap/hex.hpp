#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace clakap {

std::string hex_encode(std::span<const std::uint8_t> bytes);
// Throws Errc::malformed_encoding on odd length or non-hex characters.
std::vector<std::uint8_t> hex_decode(std::string_view hex);

}  // namespace clakap
