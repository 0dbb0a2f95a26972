#pragma once

// Independent reference arithmetic for small curves: plain 64-bit integers,
// affine chord-and-tangent, repeated addition and brute-force discrete logs.
// Shares nothing with the library's Montgomery/projective path.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace clakap::testing {

struct ToyPoint {
  bool inf = true;
  std::int64_t x = 0;
  std::int64_t y = 0;

  static ToyPoint at(std::int64_t x, std::int64_t y) { return {false, x, y}; }
  friend bool operator==(const ToyPoint&, const ToyPoint&) = default;
};

class ToyCurve {
 public:
  ToyCurve(std::int64_t p, std::int64_t a, std::int64_t b) : p_(p), a_(a), b_(b) {}

  std::int64_t p() const { return p_; }

  std::int64_t mod(std::int64_t v) const { return ((v % p_) + p_) % p_; }

  std::int64_t inverse(std::int64_t v) const {
    v = mod(v);
    for (std::int64_t c = 1; c < p_; ++c) {
      if (mod(v * c) == 1) return c;
    }
    throw std::domain_error("no inverse");
  }

  bool on_curve(const ToyPoint& pt) const {
    if (pt.inf) return true;
    return mod(pt.y * pt.y) == mod(pt.x * pt.x * pt.x + a_ * pt.x + b_);
  }

  ToyPoint add(const ToyPoint& p, const ToyPoint& q) const {
    if (p.inf) return q;
    if (q.inf) return p;
    std::int64_t lambda;
    if (p.x == q.x) {
      if (mod(p.y + q.y) == 0) return ToyPoint{};
      lambda = mod((3 * p.x * p.x + a_) * inverse(2 * p.y));
    } else {
      lambda = mod((q.y - p.y) * inverse(q.x - p.x));
    }
    const std::int64_t x3 = mod(lambda * lambda - p.x - q.x);
    const std::int64_t y3 = mod(lambda * (p.x - x3) - p.y);
    return ToyPoint::at(x3, y3);
  }

  ToyPoint repeated(std::int64_t t, const ToyPoint& p) const {
    ToyPoint acc;
    for (std::int64_t i = 0; i < t; ++i) acc = add(acc, p);
    return acc;
  }

  std::vector<ToyPoint> all_points() const {
    std::vector<ToyPoint> out{ToyPoint{}};
    for (std::int64_t x = 0; x < p_; ++x) {
      for (std::int64_t y = 0; y < p_; ++y) {
        if (on_curve(ToyPoint::at(x, y))) out.push_back(ToyPoint::at(x, y));
      }
    }
    return out;
  }

  // Smallest t >= 0 with t*g == target, searching [0, order).
  std::optional<std::int64_t> discrete_log(const ToyPoint& g, const ToyPoint& target, std::int64_t order) const {
    ToyPoint acc;
    for (std::int64_t t = 0; t < order; ++t) {
      if (acc == target) return t;
      acc = add(acc, g);
    }
    return std::nullopt;
  }

 private:
  std::int64_t p_;
  std::int64_t a_;
  std::int64_t b_;
};

inline const ToyCurve& toy17_oracle() {
  static const ToyCurve curve(17, 2, 2);
  return curve;
}

inline const ToyPoint kToyGenerator = ToyPoint::at(5, 1);
inline constexpr std::int64_t kToyOrder = 19;

}  // namespace clakap::testing
