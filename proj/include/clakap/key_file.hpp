#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clakap/identity.hpp"
#include "clakap/kgc.hpp"
#include "clakap/user_keys.hpp"

namespace clakap {

// Versioned text envelope:
//
//   clakap-key v1
//   profile <name>
//   role <role>
//   <field> <hex>
//   ...
//
// Fields appear in a fixed order per role and every value is hex: scalars as
// fixed-width big-endian, points in compressed encoding, identities as their
// UTF-8 bytes.
enum class KeyRole { system_params, master, partial, secret, user_point, private_key, public_key };

std::string_view to_string(KeyRole role);

class KeyFile {
 public:
  static constexpr std::string_view kMagic = "clakap-key";
  static constexpr std::string_view kVersion = "v1";

  KeyFile(std::string profile, KeyRole role) : profile_(std::move(profile)), role_(role) {}

  // Throws Errc::unsupported_version for another version tag and
  // Errc::bad_key_file for anything else that is off.
  static KeyFile parse(std::string_view text);
  std::string serialize() const;

  const std::string& profile() const { return profile_; }
  KeyRole role() const { return role_; }
  const std::vector<std::pair<std::string, std::string>>& fields() const { return fields_; }

  KeyFile& add(std::string name, std::string hex);
  const std::string& get(std::string_view name) const;

 private:
  std::string profile_;
  KeyRole role_;
  std::vector<std::pair<std::string, std::string>> fields_;
};

// Field names in the order each role stores them.
const std::vector<std::string_view>& field_order(KeyRole role);

KeyFile to_key_file(const SystemParams& params);
KeyFile to_key_file(const Curve& curve, const MasterKey& master);
KeyFile to_key_file(const Curve& curve, const Identity& id, const PartialKey& partial);
KeyFile to_key_file(const Curve& curve, const Identity& id, const SecretValue& secret);
KeyFile user_point_file(const Curve& curve, const Identity& id, const Point& user_point);
KeyFile private_key_file(const Curve& curve, const Identity& id, const PrivateKey& priv);
KeyFile public_key_file(const Curve& curve, const Identity& id, const PublicKey& pub);

SystemParams params_from(const KeyFile& file);
std::pair<std::shared_ptr<const Curve>, MasterKey> master_from(const KeyFile& file);
std::pair<Identity, PartialKey> partial_from(const KeyFile& file, const Curve& curve);
std::pair<Identity, SecretValue> secret_from(const KeyFile& file, const Curve& curve);
std::pair<Identity, Point> user_point_from(const KeyFile& file, const Curve& curve);
std::pair<Identity, PrivateKey> private_key_from(const KeyFile& file, const Curve& curve);
std::pair<Identity, PublicKey> public_key_from(const KeyFile& file, const Curve& curve);

KeyFile read_key_file(const std::filesystem::path& path);
// Secret roles (master, partial, secret, private) are written owner-only.
void write_key_file(const std::filesystem::path& path, const KeyFile& file);

}  // namespace clakap
