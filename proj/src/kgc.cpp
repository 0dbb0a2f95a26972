#include "clakap/kgc.hpp"

#include "clakap/error.hpp"

namespace clakap {

void validate_params(const SystemParams& params) {
  if (!params.curve || !params.hash) throw Error(Errc::invalid_profile, "system parameters are incomplete");
  params.group().require_on_curve(params.master_public, "master public key");
  if (params.master_public.is_infinity()) throw Error(Errc::invalid_point, "master public key is the identity");
}

std::pair<SystemParams, MasterKey> setup(std::shared_ptr<const Curve> curve, RandomSource& rng,
                                         std::shared_ptr<const HashOracle> hash) {
  MasterKey master{rng.nonzero_scalar(*curve)};
  SystemParams params = params_for_master(std::move(curve), master, std::move(hash));
  return {std::move(params), master};
}

SystemParams params_for_master(std::shared_ptr<const Curve> curve, const MasterKey& master,
                               std::shared_ptr<const HashOracle> hash) {
  if (!curve->is_nonzero_scalar(master.s.value())) throw Error(Errc::invalid_scalar, "master key must be in [1, n-1]");
  const Point p_pub = curve->mul_base(master.s);
  SystemParams params{std::move(curve), p_pub, std::move(hash)};
  validate_params(params);
  return params;
}

PartialKey extract_partial_key(const MasterKey& master, const SystemParams& params, const Identity& id,
                               const Point& user_point, RandomSource& rng) {
  const Curve& curve = params.group();
  curve.require_on_curve(user_point, "user point");
  if (user_point.is_infinity()) throw Error(Errc::invalid_point, "user point is the identity");

  for (;;) {
    Scalar r = rng.nonzero_scalar(curve);
    const Point commitment = curve.mul_base(r);
    const Scalar h = params.hash->h1(curve, id, commitment, user_point);
    const Scalar secret = curve.scalar_add(r, curve.scalar_mul(h, master.s));
    r.wipe();
    if (!secret.is_zero()) return PartialKey{secret, commitment};
  }
}

bool validate_partial_key(const SystemParams& params, const Identity& id, const Point& user_point,
                          const PartialKey& partial) {
  const Curve& curve = params.group();
  if (!curve.is_on_curve(user_point) || !curve.is_on_curve(partial.commitment)) return false;
  if (!curve.is_scalar(partial.secret.value())) return false;
  const Scalar h = params.hash->h1(curve, id, partial.commitment, user_point);
  const Point lhs = curve.mul_base(partial.secret);
  const Point rhs = curve.add(partial.commitment, curve.mul(h, params.master_public));
  return lhs == rhs;
}

}  // namespace clakap
