#include "clakap/error.hpp"

namespace clakap {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_point: return "invalid-point";
    case Errc::malformed_encoding: return "malformed-encoding";
    case Errc::invalid_profile: return "invalid-profile";
    case Errc::oracle_scope: return "oracle-scope";
    case Errc::invalid_scalar: return "invalid-scalar";
    case Errc::invalid_identity: return "invalid-identity";
    case Errc::hash_exhausted: return "hash-exhausted";
    case Errc::invalid_partial_key: return "invalid-partial-key";
    case Errc::degenerate_key: return "degenerate-key";
    case Errc::invalid_ephemeral: return "invalid-ephemeral";
    case Errc::unexpected_peer: return "unexpected-peer";
    case Errc::wrong_state: return "wrong-state";
    case Errc::duplicate_identity: return "duplicate-identity";
    case Errc::unknown_identity: return "unknown-identity";
    case Errc::unknown_oracle: return "unknown-oracle";
    case Errc::no_key_held: return "no-key-held";
    case Errc::not_fresh: return "not-fresh";
    case Errc::forbidden_query: return "forbidden-query";
    case Errc::truncated_frame: return "truncated-frame";
    case Errc::bad_type: return "bad-type";
    case Errc::bad_key_file: return "bad-key-file";
    case Errc::unsupported_version: return "unsupported-version";
    case Errc::script_error: return "script-error";
    case Errc::transport: return "transport";
  }
  return "unknown";
}

}  // namespace clakap
