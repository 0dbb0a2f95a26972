#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "clakap/codec_hash.hpp"
#include "clakap/ec_group.hpp"
#include "clakap/identity.hpp"
#include "clakap/kgc.hpp"
#include "clakap/random.hpp"
#include "clakap/user_keys.hpp"

namespace clakap {

enum class Role { initiator, responder };
enum class SessionState { awaiting_peer, completed, failed };

std::string_view to_string(Role role);
std::string_view to_string(SessionState state);

// M1 = {ID_A, T_A} or M2 = {ID_B, T_B}.
struct KaMessage {
  Identity sender;
  Point t;

  friend bool operator==(const KaMessage&, const KaMessage&) = default;
};

// Group and hash operations performed by one party in one session.
struct OpCounter {
  std::uint64_t scalar_mults = 0;
  std::uint64_t point_adds = 0;
  std::uint64_t scalar_adds = 0;
  std::uint64_t hash_evals = 0;

  OpCounter& operator+=(const OpCounter& other);
  friend bool operator==(const OpCounter&, const OpCounter&) = default;
};

// What a party knows about the other side before the run: identity and the
// out-of-band provisioned public key.
struct PeerInfo {
  Identity id;
  PublicKey pub;
};

// Role-ordered view of a run; initiator fields come first.
struct SessionTranscript {
  Identity initiator;
  Identity responder;
  Point t_initiator;
  Point t_responder;

  friend bool operator==(const SessionTranscript&, const SessionTranscript&) = default;
};

struct SharedSecrets {
  Point k1;
  Point k2;

  friend bool operator==(const SharedSecrets&, const SharedSecrets&) = default;
};

// One protocol run from one party's point of view. Owned by a single thread
// of control; movable, not copyable. The ephemeral scalar is erased as soon
// as the session completes or fails.
class Session {
 public:
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;
  Session(Session&& other) noexcept = default;
  Session& operator=(Session&& other) noexcept = default;
  ~Session();

  Role role() const { return role_; }
  SessionState state() const { return state_; }
  const Identity& own_id() const { return own_.id; }
  const Identity& peer_id() const { return peer_.id; }
  const PublicKey& peer_public_key() const { return peer_.pub; }
  const Point& own_ephemeral_point() const { return own_t_; }
  bool holds_ephemeral() const { return ephemeral_.has_value(); }

  const std::optional<SessionKey>& key() const { return key_; }
  const std::optional<SessionTranscript>& transcript() const { return transcript_; }
  const std::optional<SharedSecrets>& shared_secrets() const { return secrets_; }
  const OpCounter& ops() const { return ops_; }

  // Initiator only: consume M2 and derive the key.
  // Throws Errc::wrong_state, Errc::unexpected_peer or Errc::invalid_ephemeral;
  // the latter two leave the session failed.
  SessionKey finalize(const KaMessage& incoming);

 private:
  friend std::pair<Session, KaMessage> initiate(const SystemParams&, const UserKeys&, const PeerInfo&,
                                                RandomSource&);
  friend std::pair<Session, KaMessage> respond(const SystemParams&, const UserKeys&, const PeerInfo&,
                                               const KaMessage&, RandomSource&);

  Session(SystemParams params, UserKeys own, PeerInfo peer, Role role);

  void begin(RandomSource& rng);
  void complete(const KaMessage& incoming);
  void fail();
  void erase_ephemeral();

  SystemParams params_;
  UserKeys own_;
  PeerInfo peer_;
  Role role_;
  SessionState state_ = SessionState::awaiting_peer;
  std::optional<Scalar> ephemeral_;
  Point own_t_;
  std::optional<SessionKey> key_;
  std::optional<SessionTranscript> transcript_;
  std::optional<SharedSecrets> secrets_;
  OpCounter ops_;
};

// Step 1: choose a, send M1 = {ID_A, a*P}. Throws Errc::invalid_point for a
// malformed peer public key.
std::pair<Session, KaMessage> initiate(const SystemParams& params, const UserKeys& own, const PeerInfo& peer,
                                       RandomSource& rng);

// Step 2: on M1, choose b, reply M2 = {ID_B, b*P} and derive the key.
// Throws Errc::invalid_ephemeral when T_A is O or off the curve and
// Errc::unexpected_peer when M1 names someone other than peer.id.
std::pair<Session, KaMessage> respond(const SystemParams& params, const UserKeys& own, const PeerInfo& peer,
                                      const KaMessage& incoming, RandomSource& rng);

// K1 = (x + s)*T_peer + e*(P_peer + R_peer + H1(ID_peer, R_peer, P_peer)*P_pub)
// K2 = e*T_peer
// where e is the caller's ephemeral. Each group and hash operation is
// tallied in ops.
SharedSecrets compute_shared_secrets(const SystemParams& params, const PrivateKey& own, const PeerInfo& peer,
                                     const Scalar& ephemeral, const Point& peer_t, OpCounter& ops);

// H2 over the role-ordered transcript.
SessionKey derive_session_key(const SystemParams& params, const SessionTranscript& transcript,
                              const SharedSecrets& secrets);

}  // namespace clakap
