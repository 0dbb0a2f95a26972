#pragma once

#include <memory>
#include <utility>

#include "clakap/codec_hash.hpp"
#include "clakap/ec_group.hpp"
#include "clakap/identity.hpp"
#include "clakap/random.hpp"

namespace clakap {

// Public system parameters: the curve, P_pub = s*P, and the hash pair.
struct SystemParams {
  std::shared_ptr<const Curve> curve;
  Point master_public;
  std::shared_ptr<const HashOracle> hash;

  const Curve& group() const { return *curve; }
};

// The KGC's secret s in [1, n-1].
struct MasterKey {
  Scalar s;
};

// KGC-issued (s_i, R_i) with s_i = r_i + H1(ID_i, R_i, P_i) * s mod n and
// R_i = r_i * P.
struct PartialKey {
  Scalar secret;
  Point commitment;

  friend bool operator==(const PartialKey&, const PartialKey&) = default;
};

// Throws Errc::invalid_point if P_pub is O or off the curve.
void validate_params(const SystemParams& params);

std::pair<SystemParams, MasterKey> setup(std::shared_ptr<const Curve> curve, RandomSource& rng,
                                         std::shared_ptr<const HashOracle> hash = sha256_oracle());

// Recomputes P_pub from a stored master key.
SystemParams params_for_master(std::shared_ptr<const Curve> curve, const MasterKey& master,
                               std::shared_ptr<const HashOracle> hash = sha256_oracle());

// The user's point P_i = x_i * P is an input: H1 binds it into s_i. r_i is
// resampled when s_i would be zero and is wiped before returning.
PartialKey extract_partial_key(const MasterKey& master, const SystemParams& params, const Identity& id,
                               const Point& user_point, RandomSource& rng);

// s_i * P == R_i + H1(ID_i, R_i, P_i) * P_pub. Off-curve inputs yield false.
bool validate_partial_key(const SystemParams& params, const Identity& id, const Point& user_point,
                          const PartialKey& partial);

}  // namespace clakap
