#include "clakap/key_file.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "clakap/error.hpp"
#include "clakap/hex.hpp"

namespace clakap {

namespace {

constexpr std::array<std::pair<KeyRole, std::string_view>, 7> kRoleNames{{
    {KeyRole::system_params, "system-params"},
    {KeyRole::master, "master"},
    {KeyRole::partial, "partial"},
    {KeyRole::secret, "secret"},
    {KeyRole::user_point, "user-point"},
    {KeyRole::private_key, "private"},
    {KeyRole::public_key, "public"},
}};

KeyRole role_from(std::string_view name) {
  for (const auto& [role, text] : kRoleNames) {
    if (text == name) return role;
  }
  throw Error(Errc::bad_key_file, "unknown role '" + std::string(name) + "'");
}

bool is_secret(KeyRole role) {
  return role == KeyRole::master || role == KeyRole::partial || role == KeyRole::secret ||
         role == KeyRole::private_key;
}

void expect_role(const KeyFile& file, KeyRole role) {
  if (file.role() != role) {
    throw Error(Errc::bad_key_file, "expected a " + std::string(to_string(role)) + " key file, got " +
                                        std::string(to_string(file.role())));
  }
}

void expect_profile(const KeyFile& file, const Curve& curve) {
  if (file.profile() != curve.profile().name) {
    throw Error(Errc::bad_key_file, "key file is for profile " + file.profile() + ", expected " +
                                        curve.profile().name);
  }
}

std::string scalar_hex(const Curve& curve, const Scalar& s) {
  std::vector<std::uint8_t> bytes(curve.scalar_bytes());
  s.value().to_be_bytes(bytes);
  return hex_encode(bytes);
}

std::string point_hex(const Curve& curve, const Point& p) { return hex_encode(curve.encode(p)); }

std::string identity_hex(const Identity& id) {
  const auto& s = id.str();
  return hex_encode(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

// Decoding errors inside a key file are reported as bad-key-file.
template <typename F>
auto field_value(const KeyFile& file, std::string_view name, F&& decode) {
  try {
    return decode(file.get(name));
  } catch (const Error& e) {
    if (e.code() == Errc::bad_key_file) throw;
    throw Error(Errc::bad_key_file, "field '" + std::string(name) + "': " + e.what());
  }
}

Scalar read_scalar(const KeyFile& file, std::string_view name, const Curve& curve) {
  return field_value(file, name, [&](const std::string& hex) {
    const auto bytes = hex_decode(hex);
    if (bytes.size() != curve.scalar_bytes()) throw Error(Errc::malformed_encoding, "wrong scalar width");
    const U256 value = U256::from_be_bytes(bytes);
    if (!curve.is_nonzero_scalar(value)) throw Error(Errc::invalid_scalar, "scalar outside [1, n-1]");
    return Scalar{value};
  });
}

Point read_point(const KeyFile& file, std::string_view name, const Curve& curve) {
  return field_value(file, name, [&](const std::string& hex) { return curve.decode(hex_decode(hex)); });
}

Identity read_identity(const KeyFile& file) {
  return field_value(file, "id", [](const std::string& hex) {
    const auto bytes = hex_decode(hex);
    return Identity(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  });
}

std::shared_ptr<const Curve> curve_for(const KeyFile& file) {
  try {
    return Curve::named(file.profile());
  } catch (const Error& e) {
    throw Error(Errc::bad_key_file, e.what());
  }
}

}  // namespace

std::string_view to_string(KeyRole role) {
  for (const auto& [r, text] : kRoleNames) {
    if (r == role) return text;
  }
  return "unknown";
}

const std::vector<std::string_view>& field_order(KeyRole role) {
  static const std::vector<std::string_view> params{"hash", "p_pub"};
  static const std::vector<std::string_view> master{"s"};
  static const std::vector<std::string_view> partial{"id", "s", "R"};
  static const std::vector<std::string_view> secret{"id", "x", "P"};
  static const std::vector<std::string_view> user_point{"id", "P"};
  static const std::vector<std::string_view> priv{"id", "x", "s"};
  static const std::vector<std::string_view> pub{"id", "P", "R"};
  switch (role) {
    case KeyRole::system_params: return params;
    case KeyRole::master: return master;
    case KeyRole::partial: return partial;
    case KeyRole::secret: return secret;
    case KeyRole::user_point: return user_point;
    case KeyRole::private_key: return priv;
    case KeyRole::public_key: return pub;
  }
  return params;
}

KeyFile KeyFile::parse(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
  }

  auto split = [](const std::string& line) {
    const auto space = line.find(' ');
    if (space == std::string::npos || space == 0 || space + 1 == line.size() ||
        line.find(' ', space + 1) != std::string::npos) {
      throw Error(Errc::bad_key_file, "malformed line '" + line + "'");
    }
    return std::pair{line.substr(0, space), line.substr(space + 1)};
  };

  if (lines.size() < 3) throw Error(Errc::bad_key_file, "key file is missing its header");
  const auto [magic, version] = split(lines[0]);
  if (magic != kMagic) throw Error(Errc::bad_key_file, "not a clakap key file");
  if (version != kVersion) throw Error(Errc::unsupported_version, "key file version " + version);
  const auto [profile_tag, profile] = split(lines[1]);
  const auto [role_tag, role_name] = split(lines[2]);
  if (profile_tag != "profile" || role_tag != "role") throw Error(Errc::bad_key_file, "bad key file header");

  KeyFile file(profile, role_from(role_name));
  const auto& order = field_order(file.role());
  if (lines.size() != 3 + order.size()) throw Error(Errc::bad_key_file, "wrong number of fields");
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto [name, value] = split(lines[3 + i]);
    if (name != order[i]) {
      throw Error(Errc::bad_key_file, "expected field '" + std::string(order[i]) + "', got '" + name + "'");
    }
    file.fields_.emplace_back(std::move(name), std::move(value));
  }
  return file;
}

std::string KeyFile::serialize() const {
  std::string out;
  out.append(kMagic).append(" ").append(kVersion).append("\n");
  out.append("profile ").append(profile_).append("\n");
  out.append("role ").append(to_string(role_)).append("\n");
  for (const auto& [name, value] : fields_) out.append(name).append(" ").append(value).append("\n");
  return out;
}

KeyFile& KeyFile::add(std::string name, std::string hex) {
  fields_.emplace_back(std::move(name), std::move(hex));
  return *this;
}

const std::string& KeyFile::get(std::string_view name) const {
  for (const auto& [n, v] : fields_) {
    if (n == name) return v;
  }
  throw Error(Errc::bad_key_file, "missing field '" + std::string(name) + "'");
}

KeyFile to_key_file(const SystemParams& params) {
  const auto& name = params.hash->name();
  KeyFile file(params.group().profile().name, KeyRole::system_params);
  file.add("hash", hex_encode(std::span(reinterpret_cast<const std::uint8_t*>(name.data()), name.size())));
  file.add("p_pub", point_hex(params.group(), params.master_public));
  return file;
}

KeyFile to_key_file(const Curve& curve, const MasterKey& master) {
  return std::move(KeyFile(curve.profile().name, KeyRole::master).add("s", scalar_hex(curve, master.s)));
}

KeyFile to_key_file(const Curve& curve, const Identity& id, const PartialKey& partial) {
  KeyFile file(curve.profile().name, KeyRole::partial);
  file.add("id", identity_hex(id)).add("s", scalar_hex(curve, partial.secret)).add("R", point_hex(curve, partial.commitment));
  return file;
}

KeyFile to_key_file(const Curve& curve, const Identity& id, const SecretValue& secret) {
  KeyFile file(curve.profile().name, KeyRole::secret);
  file.add("id", identity_hex(id)).add("x", scalar_hex(curve, secret.x)).add("P", point_hex(curve, secret.user_point));
  return file;
}

KeyFile user_point_file(const Curve& curve, const Identity& id, const Point& user_point) {
  KeyFile file(curve.profile().name, KeyRole::user_point);
  file.add("id", identity_hex(id)).add("P", point_hex(curve, user_point));
  return file;
}

KeyFile private_key_file(const Curve& curve, const Identity& id, const PrivateKey& priv) {
  KeyFile file(curve.profile().name, KeyRole::private_key);
  file.add("id", identity_hex(id))
      .add("x", scalar_hex(curve, priv.secret_value))
      .add("s", scalar_hex(curve, priv.partial));
  return file;
}

KeyFile public_key_file(const Curve& curve, const Identity& id, const PublicKey& pub) {
  KeyFile file(curve.profile().name, KeyRole::public_key);
  file.add("id", identity_hex(id)).add("P", point_hex(curve, pub.user_point)).add("R", point_hex(curve, pub.commitment));
  return file;
}

SystemParams params_from(const KeyFile& file) {
  expect_role(file, KeyRole::system_params);
  auto curve = curve_for(file);
  const auto hash = field_value(file, "hash", [](const std::string& hex) {
    const auto bytes = hex_decode(hex);
    return std::string(bytes.begin(), bytes.end());
  });
  if (hash != sha256_oracle()->name()) throw Error(Errc::bad_key_file, "unsupported hash suite '" + hash + "'");
  const Point p_pub = read_point(file, "p_pub", *curve);
  SystemParams params{curve, p_pub, sha256_oracle()};
  try {
    validate_params(params);
  } catch (const Error& e) {
    throw Error(Errc::bad_key_file, e.what());
  }
  return params;
}

std::pair<std::shared_ptr<const Curve>, MasterKey> master_from(const KeyFile& file) {
  expect_role(file, KeyRole::master);
  auto curve = curve_for(file);
  return {curve, MasterKey{read_scalar(file, "s", *curve)}};
}

std::pair<Identity, PartialKey> partial_from(const KeyFile& file, const Curve& curve) {
  expect_role(file, KeyRole::partial);
  expect_profile(file, curve);
  return {read_identity(file), PartialKey{read_scalar(file, "s", curve), read_point(file, "R", curve)}};
}

std::pair<Identity, SecretValue> secret_from(const KeyFile& file, const Curve& curve) {
  expect_role(file, KeyRole::secret);
  expect_profile(file, curve);
  SecretValue secret{read_scalar(file, "x", curve), read_point(file, "P", curve)};
  if (curve.mul_base(secret.x) != secret.user_point) throw Error(Errc::bad_key_file, "P does not match x");
  return {read_identity(file), secret};
}

std::pair<Identity, Point> user_point_from(const KeyFile& file, const Curve& curve) {
  expect_role(file, KeyRole::user_point);
  expect_profile(file, curve);
  return {read_identity(file), read_point(file, "P", curve)};
}

std::pair<Identity, PrivateKey> private_key_from(const KeyFile& file, const Curve& curve) {
  expect_role(file, KeyRole::private_key);
  expect_profile(file, curve);
  return {read_identity(file), PrivateKey{read_scalar(file, "x", curve), read_scalar(file, "s", curve)}};
}

std::pair<Identity, PublicKey> public_key_from(const KeyFile& file, const Curve& curve) {
  expect_role(file, KeyRole::public_key);
  expect_profile(file, curve);
  PublicKey pub{read_point(file, "P", curve), read_point(file, "R", curve)};
  try {
    validate_public_key(curve, pub);
  } catch (const Error& e) {
    throw Error(Errc::bad_key_file, e.what());
  }
  return {read_identity(file), pub};
}

KeyFile read_key_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::bad_key_file, "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return KeyFile::parse(text.str());
}

void write_key_file(const std::filesystem::path& path, const KeyFile& file) {
  const mode_t mode = is_secret(file.role()) ? 0600 : 0644;
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, mode);
  if (fd < 0) throw Error(Errc::bad_key_file, "cannot write " + path.string() + ": " + std::strerror(errno));
  // O_CREAT does not touch the mode of an existing file.
  ::fchmod(fd, mode);
  const std::string text = file.serialize();
  std::size_t written = 0;
  while (written < text.size()) {
    const ssize_t n = ::write(fd, text.data() + written, text.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      throw Error(Errc::bad_key_file, "write failed for " + path.string());
    }
    written += static_cast<std::size_t>(n);
  }
  ::close(fd);
}

}  // namespace clakap
