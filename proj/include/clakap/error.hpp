#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace clakap {

enum class Errc {
  invalid_point,
  malformed_encoding,
  invalid_profile,
  oracle_scope,
  invalid_scalar,
  invalid_identity,
  hash_exhausted,
  invalid_partial_key,
  degenerate_key,
  invalid_ephemeral,
  unexpected_peer,
  wrong_state,
  duplicate_identity,
  unknown_identity,
  unknown_oracle,
  no_key_held,
  not_fresh,
  forbidden_query,
  truncated_frame,
  bad_type,
  bad_key_file,
  unsupported_version,
  script_error,
  transport,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace clakap
