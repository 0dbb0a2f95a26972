#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clakap/identity.hpp"
#include "clakap/key_agreement.hpp"
#include "clakap/kgc.hpp"
#include "clakap/random.hpp"
#include "clakap/user_keys.hpp"

namespace clakap {

// Type 1: no master key, may replace public keys.
// Type 2: holds the master key, may not replace public keys.
enum class AdversaryType { type1, type2 };

std::string_view to_string(AdversaryType type);

// Session oracle: the instance-th run of owner believing it talks to partner.
struct OracleId {
  Identity owner;
  Identity partner;
  std::uint32_t instance = 0;

  friend bool operator==(const OracleId&, const OracleId&) = default;
  friend auto operator<=>(const OracleId&, const OracleId&) = default;
};

std::string to_string(const OracleId& id);

struct Replacement {
  Identity id;
  PublicKey previous;
  PublicKey replacement;
};

// Challenger state for one scenario. Queries are strictly sequential.
//
// A participant keeps running its own oracles with the keys it was created
// with. Other participants' oracles, and the Public-Key query, see the
// currently registered public key, so a replacement only reaches honest runs
// through what the adversary relays. After a replacement Corrupt returns no
// private key.
class OracleTable {
 public:
  OracleTable(SystemParams params, MasterKey master, AdversaryType type, RandomSource& rng);

  // Fresh KGC setup on the given curve.
  static OracleTable with_setup(std::shared_ptr<const Curve> curve, AdversaryType type, RandomSource& rng);

  const SystemParams& params() const { return params_; }
  AdversaryType adversary_type() const { return type_; }

  // Create: set_secret_value -> extract_partial_key -> assemble_keys.
  const PublicKey& o_create(const Identity& id);
  const PublicKey& o_public_key(const Identity& id) const;
  const PartialKey& o_partial_private_key(const Identity& id);
  std::optional<PrivateKey> o_corrupt(const Identity& id);
  void o_replace_public_key(const Identity& id, const PublicKey& replacement);
  // Type 2 only.
  const MasterKey& o_master_key() const;

  // nullopt message is lambda: start oracle as initiator. A first real
  // message makes a responder; a second message finalizes an initiator.
  std::optional<KaMessage> o_send(const OracleId& oracle, const std::optional<KaMessage>& message);
  SessionKey o_reveal(const OracleId& oracle);
  // coin 0: the held key; coin 1: a uniform 256-bit string. At most one Test
  // per table.
  SessionKey o_test(const OracleId& oracle, int coin);

  bool is_fresh(const OracleId& oracle) const;
  // A completed oracle of the partner with an identical transcript.
  std::optional<OracleId> matching_oracle(const OracleId& oracle) const;
  const Session& session(const OracleId& oracle) const;
  bool is_revealed(const OracleId& oracle) const;
  bool is_corrupted(const Identity& id) const;
  bool is_replaced(const Identity& id) const;
  const std::vector<Replacement>& replacements() const { return replacements_; }
  const std::optional<OracleId>& test_oracle() const { return test_oracle_; }

 private:
  struct Participant {
    UserKeys honest;
    PartialKey partial;
    PublicKey registered;
    bool replaced = false;
    bool corrupted = false;
    bool partial_revealed = false;
  };

  struct OracleRecord {
    Session session;
    bool revealed = false;
  };

  Participant& participant(const Identity& id);
  const Participant& participant(const Identity& id) const;
  OracleRecord& record(const OracleId& oracle);
  const OracleRecord& record(const OracleId& oracle) const;
  // Throws Errc::forbidden_query when the query would touch the Test
  // oracle's protected set.
  void check_after_test_reveal(const OracleId& oracle) const;

  SystemParams params_;
  MasterKey master_;
  AdversaryType type_;
  RandomSource* rng_;
  std::map<Identity, Participant> participants_;
  std::map<OracleId, OracleRecord> oracles_;
  std::vector<Replacement> replacements_;
  std::optional<OracleId> test_oracle_;
};

struct ChiSquare {
  std::vector<std::uint64_t> counts;
  double statistic = 0;
  std::size_t degrees_of_freedom = 0;
  double p_value = 1;
};

// Pearson goodness-of-fit against the uniform distribution over counts.
ChiSquare chi_square_uniform(std::vector<std::uint64_t> counts);

struct BenignReport {
  std::size_t trials = 0;
  std::size_t agreements = 0;
  // T_A frequencies over the n-1 non-identity points; enumerable curves only.
  std::optional<ChiSquare> initiator_ephemerals;
};

// Two participants "A" and "B"; for each trial, relay M1 and M2 faithfully
// between Pi^k_{A,B} and Pi^k_{B,A} and compare the keys.
BenignReport run_benign_adversary(const SystemParams& params, const MasterKey& master, std::size_t trials,
                                  RandomSource& rng);

// Line-oriented adversary scripts:
//
//   # comment
//   PROFILE toy-17|p256        (before any other command; default toy-17)
//   ADVERSARY type1|type2      (before any other command; default type1)
//   CREATE id
//   REPLACE id hexpk           hexpk = encode(P) || encode(R)
//   SEND i j n LAMBDA|hexmsg|@line
//   REVEAL i j n
//   CORRUPT id
//   TEST i j n coin
//   PUBLIC-KEY id
//   PARTIAL id
//   MASTER
//
// hexmsg is a wire frame; @line relays the message emitted by the SEND on
// that script line. Each command prints one result line; failed queries
// print "error <code>" and the script continues.
struct ScenarioSummary {
  std::size_t commands = 0;
  std::size_t errors = 0;
};

// Throws Errc::script_error for syntax errors.
ScenarioSummary run_scenario(std::istream& script, std::ostream& out, RandomSource& rng);

}  // namespace clakap
