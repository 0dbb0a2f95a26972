#include "clakap/key_agreement.hpp"

#include "clakap/error.hpp"

namespace clakap {

namespace {

void require_valid_ephemeral(const Curve& curve, const Point& t) {
  if (!curve.is_on_curve(t)) throw Error(Errc::invalid_ephemeral, "ephemeral point is not on the curve");
  if (t.is_infinity()) throw Error(Errc::invalid_ephemeral, "ephemeral point is the identity");
}

}  // namespace

std::string_view to_string(Role role) { return role == Role::initiator ? "initiator" : "responder"; }

std::string_view to_string(SessionState state) {
  switch (state) {
    case SessionState::awaiting_peer: return "awaiting-peer";
    case SessionState::completed: return "completed";
    case SessionState::failed: return "failed";
  }
  return "unknown";
}

OpCounter& OpCounter::operator+=(const OpCounter& other) {
  scalar_mults += other.scalar_mults;
  point_adds += other.point_adds;
  scalar_adds += other.scalar_adds;
  hash_evals += other.hash_evals;
  return *this;
}

SharedSecrets compute_shared_secrets(const SystemParams& params, const PrivateKey& own, const PeerInfo& peer,
                                     const Scalar& ephemeral, const Point& peer_t, OpCounter& ops) {
  const Curve& curve = params.group();

  Scalar long_term = curve.scalar_add(own.secret_value, own.partial);
  ++ops.scalar_adds;
  const Point own_term = curve.mul(long_term, peer_t);
  ++ops.scalar_mults;
  long_term.wipe();

  const Scalar h = params.hash->h1(curve, peer.id, peer.pub.commitment, peer.pub.user_point);
  ++ops.hash_evals;
  const Point h_pub = curve.mul(h, params.master_public);
  ++ops.scalar_mults;
  Point peer_combined = curve.add(peer.pub.user_point, peer.pub.commitment);
  ++ops.point_adds;
  peer_combined = curve.add(peer_combined, h_pub);
  ++ops.point_adds;
  const Point peer_term = curve.mul(ephemeral, peer_combined);
  ++ops.scalar_mults;

  const Point k1 = curve.add(own_term, peer_term);
  ++ops.point_adds;
  const Point k2 = curve.mul(ephemeral, peer_t);
  ++ops.scalar_mults;
  return SharedSecrets{k1, k2};
}

SessionKey derive_session_key(const SystemParams& params, const SessionTranscript& transcript,
                              const SharedSecrets& secrets) {
  return params.hash->h2(params.group(), transcript.initiator, transcript.responder, transcript.t_initiator,
                         transcript.t_responder, secrets.k1, secrets.k2);
}

Session::Session(SystemParams params, UserKeys own, PeerInfo peer, Role role)
    : params_(std::move(params)), own_(std::move(own)), peer_(std::move(peer)), role_(role) {}

Session::~Session() {
  erase_ephemeral();
  own_.priv.secret_value.wipe();
  own_.priv.partial.wipe();
}

void Session::erase_ephemeral() {
  if (ephemeral_) {
    ephemeral_->wipe();
    ephemeral_.reset();
  }
}

void Session::begin(RandomSource& rng) {
  const Curve& curve = params_.group();
  ephemeral_ = rng.nonzero_scalar(curve);
  own_t_ = curve.mul_base(*ephemeral_);
  ++ops_.scalar_mults;
}

void Session::fail() {
  state_ = SessionState::failed;
  erase_ephemeral();
}

void Session::complete(const KaMessage& incoming) {
  try {
    if (incoming.sender != peer_.id) {
      throw Error(Errc::unexpected_peer, "message from '" + incoming.sender.str() + "', expected '" +
                                             peer_.id.str() + "'");
    }
    require_valid_ephemeral(params_.group(), incoming.t);
  } catch (...) {
    fail();
    throw;
  }

  SessionTranscript transcript = role_ == Role::initiator
                                     ? SessionTranscript{own_.id, peer_.id, own_t_, incoming.t}
                                     : SessionTranscript{peer_.id, own_.id, incoming.t, own_t_};
  secrets_ = compute_shared_secrets(params_, own_.priv, peer_, *ephemeral_, incoming.t, ops_);
  erase_ephemeral();
  key_ = derive_session_key(params_, transcript, *secrets_);
  ++ops_.hash_evals;
  transcript_ = std::move(transcript);
  state_ = SessionState::completed;
}

SessionKey Session::finalize(const KaMessage& incoming) {
  if (role_ != Role::initiator || state_ != SessionState::awaiting_peer) {
    throw Error(Errc::wrong_state, std::string("cannot finalize a ") + std::string(to_string(role_)) +
                                       " session in state " + std::string(to_string(state_)));
  }
  complete(incoming);
  return *key_;
}

std::pair<Session, KaMessage> initiate(const SystemParams& params, const UserKeys& own, const PeerInfo& peer,
                                       RandomSource& rng) {
  validate_public_key(params.group(), peer.pub);
  Session session(params, own, peer, Role::initiator);
  session.begin(rng);
  KaMessage m1{own.id, session.own_t_};
  return {std::move(session), std::move(m1)};
}

std::pair<Session, KaMessage> respond(const SystemParams& params, const UserKeys& own, const PeerInfo& peer,
                                      const KaMessage& incoming, RandomSource& rng) {
  validate_public_key(params.group(), peer.pub);
  if (incoming.sender != peer.id) {
    throw Error(Errc::unexpected_peer, "message from '" + incoming.sender.str() + "', expected '" + peer.id.str() +
                                           "'");
  }
  require_valid_ephemeral(params.group(), incoming.t);
  Session session(params, own, peer, Role::responder);
  session.begin(rng);
  session.complete(incoming);
  KaMessage m2{own.id, session.own_t_};
  return {std::move(session), std::move(m2)};
}

}  // namespace clakap
