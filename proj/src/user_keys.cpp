#include "clakap/user_keys.hpp"

#include "clakap/error.hpp"

namespace clakap {

SecretValue set_secret_value(const SystemParams& params, RandomSource& rng) {
  const Scalar x = rng.nonzero_scalar(params.group());
  return SecretValue{x, params.group().mul_base(x)};
}

UserKeys assemble_keys(const Scalar& x, const PartialKey& partial, const SystemParams& params, const Identity& id) {
  const Curve& curve = params.group();
  if (!curve.is_nonzero_scalar(x.value())) throw Error(Errc::invalid_scalar, "secret value must be in [1, n-1]");
  if (!curve.is_nonzero_scalar(partial.secret.value())) {
    throw Error(Errc::invalid_partial_key, "partial key scalar must be in [1, n-1]");
  }
  if (partial.commitment.is_infinity()) throw Error(Errc::invalid_partial_key, "partial key commitment is O");

  const Point user_point = curve.mul_base(x);
  if (!validate_partial_key(params, id, user_point, partial)) {
    throw Error(Errc::invalid_partial_key, "s_i*P != R_i + h_i*P_pub for '" + id.str() + "'");
  }
  if (curve.scalar_add(x, partial.secret).is_zero()) {
    throw Error(Errc::degenerate_key, "x_i + s_i = 0 mod n; regenerate the secret value");
  }
  return UserKeys{id, PrivateKey{x, partial.secret}, PublicKey{user_point, partial.commitment}};
}

UserKeys provision_user(const SystemParams& params, const MasterKey& master, const Identity& id, RandomSource& rng) {
  for (;;) {
    const SecretValue secret = set_secret_value(params, rng);
    const PartialKey partial = extract_partial_key(master, params, id, secret.user_point, rng);
    try {
      return assemble_keys(secret.x, partial, params, id);
    } catch (const Error& e) {
      if (e.code() != Errc::degenerate_key) throw;
    }
  }
}

void validate_public_key(const Curve& curve, const PublicKey& pub) {
  curve.require_on_curve(pub.user_point, "public key P_i");
  curve.require_on_curve(pub.commitment, "public key R_i");
  if (pub.user_point.is_infinity() || pub.commitment.is_infinity()) {
    throw Error(Errc::invalid_point, "public key component is the identity");
  }
}

}  // namespace clakap
