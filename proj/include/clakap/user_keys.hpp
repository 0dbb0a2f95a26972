#pragma once

#include "clakap/ec_group.hpp"
#include "clakap/identity.hpp"
#include "clakap/kgc.hpp"
#include "clakap/random.hpp"

namespace clakap {

// x_i and P_i = x_i * P, produced before partial-key extraction.
struct SecretValue {
  Scalar x;
  Point user_point;
};

// sk_i = (x_i, s_i).
struct PrivateKey {
  Scalar secret_value;
  Scalar partial;

  friend bool operator==(const PrivateKey&, const PrivateKey&) = default;
};

// pk_i = {P_i, R_i}.
struct PublicKey {
  Point user_point;
  Point commitment;

  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

struct UserKeys {
  Identity id;
  PrivateKey priv;
  PublicKey pub;
};

SecretValue set_secret_value(const SystemParams& params, RandomSource& rng);

// Checks the partial key against P_i = x_i * P before accepting it.
// Throws Errc::invalid_partial_key when validation fails and
// Errc::degenerate_key when x_i + s_i = 0 mod n.
UserKeys assemble_keys(const Scalar& x, const PartialKey& partial, const SystemParams& params, const Identity& id);

// Runs the whole issuance flow for one user with a local KGC, drawing a
// fresh secret value on the rare degenerate outcome.
UserKeys provision_user(const SystemParams& params, const MasterKey& master, const Identity& id, RandomSource& rng);

// Both points on the curve and neither is O; throws Errc::invalid_point.
void validate_public_key(const Curve& curve, const PublicKey& pub);

}  // namespace clakap
