#pragma once

#include <deque>
#include <map>
#include <string>
#include <utility>

#include "clakap/codec_hash.hpp"
#include "clakap/ec_group.hpp"
#include "clakap/random.hpp"
#include "toy_oracle.hpp"

namespace clakap::testing {

inline Point to_point(const ToyPoint& p) {
  if (p.inf) return Point::infinity();
  return Point::affine(static_cast<std::uint64_t>(p.x), static_cast<std::uint64_t>(p.y));
}

inline ToyPoint to_toy(const Point& p) {
  if (p.is_infinity()) return ToyPoint{};
  return ToyPoint::at(static_cast<std::int64_t>(p.x().value.low_u64()),
                      static_cast<std::int64_t>(p.y().value.low_u64()));
}

// Hands out a scripted sequence of nonzero scalars, then falls back to a
// deterministic stream.
class ScriptedRandom final : public RandomSource {
 public:
  explicit ScriptedRandom(std::initializer_list<std::uint64_t> scalars, std::uint64_t fallback_seed = 1)
      : fallback_(fallback_seed) {
    for (auto s : scalars) queue_.push_back(s);
  }

  void push(std::uint64_t s) { queue_.push_back(s); }
  std::size_t remaining() const { return queue_.size(); }

  void fill(std::span<std::uint8_t> out) override { fallback_.fill(out); }

  Scalar nonzero_scalar(const Curve& curve) override {
    if (queue_.empty()) return fallback_.nonzero_scalar(curve);
    const auto v = queue_.front();
    queue_.pop_front();
    return curve.scalar(v);
  }

 private:
  std::deque<std::uint64_t> queue_;
  DeterministicRandom fallback_;
};

// Returns fixed H1 values per identity (falling back to the real H1 for
// unknown identities); H2 is the reference SHA-256 construction.
class StubH1Oracle final : public HashOracle {
 public:
  explicit StubH1Oracle(std::map<std::string, std::uint64_t> values) : values_(std::move(values)) {}

  std::string_view name() const override { return "stub-h1"; }

  Scalar h1(const Curve& curve, const Identity& id, const Point& r, const Point& p) const override {
    if (auto it = values_.find(id.str()); it != values_.end()) return curve.scalar(it->second);
    return clakap::h1(curve, id, r, p);
  }

  SessionKey h2(const Curve& curve, const Identity& initiator, const Identity& responder, const Point& t_initiator,
                const Point& t_responder, const Point& k1, const Point& k2) const override {
    return clakap::h2(curve, initiator, responder, t_initiator, t_responder, k1, k2);
  }

 private:
  std::map<std::string, std::uint64_t> values_;
};

}  // namespace clakap::testing
