#include "clakap/game.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "clakap/error.hpp"
#include "clakap/hex.hpp"
#include "clakap/wire.hpp"

namespace clakap {

std::string_view to_string(AdversaryType type) { return type == AdversaryType::type1 ? "type1" : "type2"; }

std::string to_string(const OracleId& id) {
  return "Pi^" + std::to_string(id.instance) + "_{" + id.owner.str() + "," + id.partner.str() + "}";
}

OracleTable::OracleTable(SystemParams params, MasterKey master, AdversaryType type, RandomSource& rng)
    : params_(std::move(params)), master_(master), type_(type), rng_(&rng) {
  validate_params(params_);
}

OracleTable OracleTable::with_setup(std::shared_ptr<const Curve> curve, AdversaryType type, RandomSource& rng) {
  auto [params, master] = setup(std::move(curve), rng);
  return OracleTable(std::move(params), master, type, rng);
}

OracleTable::Participant& OracleTable::participant(const Identity& id) {
  auto it = participants_.find(id);
  if (it == participants_.end()) throw Error(Errc::unknown_identity, "no participant '" + id.str() + "'");
  return it->second;
}

const OracleTable::Participant& OracleTable::participant(const Identity& id) const {
  auto it = participants_.find(id);
  if (it == participants_.end()) throw Error(Errc::unknown_identity, "no participant '" + id.str() + "'");
  return it->second;
}

OracleTable::OracleRecord& OracleTable::record(const OracleId& oracle) {
  auto it = oracles_.find(oracle);
  if (it == oracles_.end()) throw Error(Errc::unknown_oracle, to_string(oracle) + " does not exist");
  return it->second;
}

const OracleTable::OracleRecord& OracleTable::record(const OracleId& oracle) const {
  auto it = oracles_.find(oracle);
  if (it == oracles_.end()) throw Error(Errc::unknown_oracle, to_string(oracle) + " does not exist");
  return it->second;
}

const PublicKey& OracleTable::o_create(const Identity& id) {
  if (participants_.contains(id)) throw Error(Errc::duplicate_identity, "participant '" + id.str() + "' exists");
  for (;;) {
    const SecretValue secret = set_secret_value(params_, *rng_);
    const PartialKey partial = extract_partial_key(master_, params_, id, secret.user_point, *rng_);
    try {
      UserKeys keys = assemble_keys(secret.x, partial, params_, id);
      const PublicKey pub = keys.pub;
      auto [it, inserted] = participants_.emplace(id, Participant{std::move(keys), partial, pub});
      return it->second.registered;
    } catch (const Error& e) {
      if (e.code() != Errc::degenerate_key) throw;
    }
  }
}

const PublicKey& OracleTable::o_public_key(const Identity& id) const { return participant(id).registered; }

const PartialKey& OracleTable::o_partial_private_key(const Identity& id) {
  Participant& p = participant(id);
  if (type_ == AdversaryType::type1 && test_oracle_ && test_oracle_->partner == id) {
    throw Error(Errc::forbidden_query, "type 1 adversary may not learn the Test partner's partial key");
  }
  p.partial_revealed = true;
  return p.partial;
}

std::optional<PrivateKey> OracleTable::o_corrupt(const Identity& id) {
  Participant& p = participant(id);
  if (test_oracle_ && test_oracle_->partner == id) {
    throw Error(Errc::forbidden_query, "may not corrupt the Test oracle's partner");
  }
  p.corrupted = true;
  if (p.replaced) return std::nullopt;
  return p.honest.priv;
}

void OracleTable::o_replace_public_key(const Identity& id, const PublicKey& replacement) {
  Participant& p = participant(id);
  if (type_ == AdversaryType::type2) throw Error(Errc::forbidden_query, "type 2 adversary may not replace keys");
  params_.group().require_on_curve(replacement.user_point, "replacement P");
  params_.group().require_on_curve(replacement.commitment, "replacement R");
  replacements_.push_back(Replacement{id, p.registered, replacement});
  p.registered = replacement;
  p.replaced = true;
}

const MasterKey& OracleTable::o_master_key() const {
  if (type_ != AdversaryType::type2) throw Error(Errc::forbidden_query, "type 1 adversary has no master key");
  return master_;
}

std::optional<KaMessage> OracleTable::o_send(const OracleId& oracle, const std::optional<KaMessage>& message) {
  auto it = oracles_.find(oracle);
  if (it == oracles_.end()) {
    const Participant& owner = participant(oracle.owner);
    const PeerInfo peer{oracle.partner, participant(oracle.partner).registered};
    if (!message) {
      auto [session, m1] = initiate(params_, owner.honest, peer, *rng_);
      oracles_.emplace(oracle, OracleRecord{std::move(session)});
      return m1;
    }
    auto [session, m2] = respond(params_, owner.honest, peer, *message, *rng_);
    oracles_.emplace(oracle, OracleRecord{std::move(session)});
    return m2;
  }
  if (!message) throw Error(Errc::wrong_state, to_string(oracle) + " already started");
  it->second.session.finalize(*message);
  return std::nullopt;
}

void OracleTable::check_after_test_reveal(const OracleId& oracle) const {
  if (!test_oracle_) return;
  if (oracle == *test_oracle_) throw Error(Errc::forbidden_query, "may not reveal the Test oracle");
  if (const auto match = matching_oracle(*test_oracle_); match && *match == oracle) {
    throw Error(Errc::forbidden_query, "may not reveal the Test oracle's matching oracle");
  }
}

SessionKey OracleTable::o_reveal(const OracleId& oracle) {
  OracleRecord& rec = record(oracle);
  check_after_test_reveal(oracle);
  if (!rec.session.key()) throw Error(Errc::no_key_held, to_string(oracle) + " holds no session key");
  rec.revealed = true;
  return *rec.session.key();
}

SessionKey OracleTable::o_test(const OracleId& oracle, int coin) {
  if (coin != 0 && coin != 1) throw std::invalid_argument("coin must be 0 or 1");
  if (test_oracle_) throw Error(Errc::forbidden_query, "Test was already asked");
  if (!is_fresh(oracle)) throw Error(Errc::not_fresh, to_string(oracle) + " is not fresh");
  const SessionKey real = *record(oracle).session.key();
  test_oracle_ = oracle;
  if (coin == 0) return real;
  SessionKey::Bytes bytes{};
  rng_->fill(bytes);
  return SessionKey{bytes};
}

bool OracleTable::is_fresh(const OracleId& oracle) const {
  auto it = oracles_.find(oracle);
  if (it == oracles_.end()) return false;
  const OracleRecord& rec = it->second;
  if (rec.session.state() != SessionState::completed || rec.revealed) return false;
  const Participant& partner = participant(oracle.partner);
  if (partner.corrupted) return false;
  if (type_ == AdversaryType::type1 && partner.partial_revealed) return false;
  if (const auto match = matching_oracle(oracle); match && record(*match).revealed) return false;
  return true;
}

std::optional<OracleId> OracleTable::matching_oracle(const OracleId& oracle) const {
  const auto& transcript = record(oracle).session.transcript();
  if (!transcript) return std::nullopt;
  for (const auto& [id, rec] : oracles_) {
    if (id.owner == oracle.partner && id.partner == oracle.owner && rec.session.transcript() == transcript) {
      return id;
    }
  }
  return std::nullopt;
}

const Session& OracleTable::session(const OracleId& oracle) const { return record(oracle).session; }

bool OracleTable::is_revealed(const OracleId& oracle) const { return record(oracle).revealed; }

bool OracleTable::is_corrupted(const Identity& id) const { return participant(id).corrupted; }

bool OracleTable::is_replaced(const Identity& id) const { return participant(id).replaced; }

ChiSquare chi_square_uniform(std::vector<std::uint64_t> counts) {
  ChiSquare out;
  out.counts = std::move(counts);
  if (out.counts.size() < 2) return out;
  std::uint64_t total = 0;
  for (auto c : out.counts) total += c;
  if (total == 0) return out;
  const double expected = static_cast<double>(total) / static_cast<double>(out.counts.size());
  for (auto c : out.counts) {
    const double d = static_cast<double>(c) - expected;
    out.statistic += d * d / expected;
  }
  out.degrees_of_freedom = out.counts.size() - 1;
  const boost::math::chi_squared dist(static_cast<double>(out.degrees_of_freedom));
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

BenignReport run_benign_adversary(const SystemParams& params, const MasterKey& master, std::size_t trials,
                                  RandomSource& rng) {
  BenignReport report;
  if (trials == 0) return report;

  OracleTable table(params, master, AdversaryType::type1, rng);
  const Identity a("A");
  const Identity b("B");
  table.o_create(a);
  table.o_create(b);

  std::vector<Point> points;
  try {
    points = params.group().enumerate_group();
  } catch (const Error& e) {
    if (e.code() != Errc::oracle_scope) throw;
  }
  std::vector<std::uint64_t> counts(points.empty() ? 0 : points.size() - 1, 0);

  for (std::size_t k = 1; k <= trials; ++k) {
    const auto instance = static_cast<std::uint32_t>(k);
    const OracleId initiator{a, b, instance};
    const OracleId responder{b, a, instance};
    const auto m1 = table.o_send(initiator, std::nullopt);
    const auto m2 = table.o_send(responder, m1);
    table.o_send(initiator, m2);
    ++report.trials;

    const auto& key_a = table.session(initiator).key();
    const auto& key_b = table.session(responder).key();
    if (key_a && key_b && *key_a == *key_b) ++report.agreements;

    if (!counts.empty()) {
      // points[0] is O, which a nonzero ephemeral never produces.
      for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i] == m1->t) {
          ++counts[i - 1];
          break;
        }
      }
    }
  }
  if (!counts.empty()) report.initiator_ephemerals = chi_square_uniform(std::move(counts));
  return report;
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

class ScenarioRunner {
 public:
  ScenarioRunner(std::ostream& out, RandomSource& rng) : out_(out), rng_(rng) {}

  ScenarioSummary run(std::istream& script) {
    std::size_t line_no = 0;
    for (std::string line; std::getline(script, line);) {
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const auto tokens = tokenize(line);
      if (tokens.empty()) continue;
      execute(line_no, tokens);
    }
    return summary_;
  }

 private:
  [[noreturn]] void syntax(std::size_t line_no, const std::string& what) {
    throw Error(Errc::script_error, "line " + std::to_string(line_no) + ": " + what);
  }

  void arity(std::size_t line_no, const std::vector<std::string>& tokens, std::size_t n) {
    if (tokens.size() != n) syntax(line_no, tokens[0] + " expects " + std::to_string(n - 1) + " arguments");
  }

  OracleId oracle_id(std::size_t line_no, const std::vector<std::string>& t) {
    std::uint32_t instance = 0;
    try {
      instance = static_cast<std::uint32_t>(std::stoul(t[3]));
    } catch (const std::exception&) {
      syntax(line_no, "bad instance number '" + t[3] + "'");
    }
    return OracleId{Identity(t[1]), Identity(t[2]), instance};
  }

  OracleTable& table() {
    if (!table_) table_.emplace(OracleTable::with_setup(Curve::named(profile_), type_, rng_));
    return *table_;
  }

  const Curve& curve() { return table().params().group(); }

  void execute(std::size_t line_no, const std::vector<std::string>& t) {
    const std::string& cmd = t[0];
    if (cmd == "PROFILE" || cmd == "ADVERSARY") {
      arity(line_no, t, 2);
      if (table_) syntax(line_no, cmd + " must precede all queries");
      if (cmd == "PROFILE") {
        profile_ = t[1];
      } else if (t[1] == "type1" || t[1] == "type2") {
        type_ = t[1] == "type1" ? AdversaryType::type1 : AdversaryType::type2;
      } else {
        syntax(line_no, "unknown adversary type '" + t[1] + "'");
      }
      out_ << cmd << " " << t[1] << "\n";
      return;
    }

    static const std::map<std::string, std::size_t, std::less<>> kArity{
        {"CREATE", 2}, {"REPLACE", 3}, {"SEND", 5},       {"REVEAL", 4}, {"CORRUPT", 2},
        {"TEST", 5},   {"PUBLIC-KEY", 2}, {"PARTIAL", 2}, {"MASTER", 1}};
    const auto ar = kArity.find(cmd);
    if (ar == kArity.end()) syntax(line_no, "unknown command '" + cmd + "'");
    arity(line_no, t, ar->second);

    ++summary_.commands;
    std::string result;
    try {
      result = dispatch(line_no, t);
    } catch (const Error& e) {
      if (e.code() == Errc::script_error) throw;
      ++summary_.errors;
      result = "error " + std::string(errc_name(e.code())) + " (" + e.what() + ")";
    }
    out_ << "L" << line_no << " " << cmd << ": " << result << "\n";
  }

  std::string pk_text(const PublicKey& pub) {
    return "P=" + hex_encode(curve().encode(pub.user_point)) + " R=" + hex_encode(curve().encode(pub.commitment));
  }

  std::string scalar_text(const Scalar& s) { return s.value().to_hex(); }

  std::string dispatch(std::size_t line_no, const std::vector<std::string>& t) {
    const std::string& cmd = t[0];
    OracleTable& tbl = table();
    if (cmd == "CREATE") return pk_text(tbl.o_create(Identity(t[1])));
    if (cmd == "PUBLIC-KEY") return pk_text(tbl.o_public_key(Identity(t[1])));
    if (cmd == "PARTIAL") {
      const auto& partial = tbl.o_partial_private_key(Identity(t[1]));
      return "s=" + scalar_text(partial.secret) + " R=" + hex_encode(curve().encode(partial.commitment));
    }
    if (cmd == "CORRUPT") {
      const auto priv = tbl.o_corrupt(Identity(t[1]));
      if (!priv) return "absent";
      return "x=" + scalar_text(priv->secret_value) + " s=" + scalar_text(priv->partial);
    }
    if (cmd == "MASTER") return "s=" + scalar_text(tbl.o_master_key().s);
    if (cmd == "REPLACE") {
      const auto bytes = hex_decode(t[2]);
      if (bytes.empty()) throw Error(Errc::malformed_encoding, "empty public key");
      const std::size_t p_len = std::min(bytes.size(), bytes[0] == 0x00 ? std::size_t{1} : 1 + curve().field_bytes());
      const Point p = curve().decode(std::span(bytes).first(p_len));
      const Point r = curve().decode(std::span(bytes).subspan(p_len));
      tbl.o_replace_public_key(Identity(t[1]), PublicKey{p, r});
      return "replaced";
    }
    if (cmd == "SEND") {
      const OracleId id = oracle_id(line_no, t);
      std::optional<KaMessage> message;
      if (t[4] != "LAMBDA") {
        std::vector<std::uint8_t> frame;
        if (t[4].starts_with("@")) {
          std::size_t ref = 0;
          try {
            ref = std::stoul(t[4].substr(1));
          } catch (const std::exception&) {
            syntax(line_no, "bad message reference '" + t[4] + "'");
          }
          const auto it = emitted_.find(ref);
          if (it == emitted_.end()) syntax(line_no, "no message was emitted on line " + std::to_string(ref));
          frame = it->second;
        } else {
          frame = hex_decode(t[4]);
        }
        message = decode_msg(frame, curve()).message;
      }
      const auto reply = tbl.o_send(id, message);
      const Session& session = tbl.session(id);
      std::string result = std::string(to_string(session.state()));
      if (reply) {
        const MsgType type = session.role() == Role::initiator ? MsgType::m1 : MsgType::m2;
        auto frame = encode_msg(curve(), *reply, type);
        result += " emit " + hex_encode(frame);
        emitted_[line_no] = std::move(frame);
      }
      return result;
    }
    if (cmd == "REVEAL") return "key " + tbl.o_reveal(oracle_id(line_no, t)).hex();
    if (cmd == "TEST") {
      if (t[4] != "0" && t[4] != "1") syntax(line_no, "coin must be 0 or 1");
      return "key " + tbl.o_test(oracle_id(line_no, t), t[4] == "1").hex();
    }
    syntax(line_no, "unhandled command");
  }

  std::ostream& out_;
  RandomSource& rng_;
  std::string profile_ = "toy-17";
  AdversaryType type_ = AdversaryType::type1;
  std::optional<OracleTable> table_;
  std::map<std::size_t, std::vector<std::uint8_t>> emitted_;
  ScenarioSummary summary_;
};

}  // namespace

ScenarioSummary run_scenario(std::istream& script, std::ostream& out, RandomSource& rng) {
  return ScenarioRunner(out, rng).run(script);
}

}  // namespace clakap
