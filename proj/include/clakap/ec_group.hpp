#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clakap/u256.hpp"

namespace clakap {

// Short Weierstrass curve y^2 = x^3 + ax + b over F_p with a generator of
// prime order n.
struct CurveProfile {
  std::string name;
  U256 p;
  U256 a;
  U256 b;
  U256 gx;
  U256 gy;
  U256 n;
  std::uint64_t cofactor = 1;

  // p = 17, a = 2, b = 2, G = (5, 1), n = 19.
  static const CurveProfile& toy17();
  // NIST P-256 / secp256r1.
  static const CurveProfile& p256();
  static const CurveProfile& by_name(std::string_view name);
};

// Canonical residue in [0, p-1]; the modulus is carried by the Curve.
struct FieldElement {
  U256 value;

  friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

// Integer in [0, n-1].
class Scalar {
 public:
  constexpr Scalar() = default;
  constexpr explicit Scalar(const U256& value) : value_(value) {}
  constexpr explicit Scalar(std::uint64_t value) : value_(value) {}

  const U256& value() const { return value_; }
  bool is_zero() const { return value_.is_zero(); }
  void wipe() { value_.wipe(); }

  friend bool operator==(const Scalar&, const Scalar&) = default;

 private:
  U256 value_;
};

// Affine point or the identity O.
class Point {
 public:
  Point() = default;  // O
  static Point infinity() { return Point{}; }
  static Point affine(const FieldElement& x, const FieldElement& y) { return Point{x, y}; }
  static Point affine(std::uint64_t x, std::uint64_t y) {
    return Point{FieldElement{U256{x}}, FieldElement{U256{y}}};
  }

  bool is_infinity() const { return infinity_; }
  const FieldElement& x() const { return x_; }
  const FieldElement& y() const { return y_; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  Point(const FieldElement& x, const FieldElement& y) : infinity_(false), x_(x), y_(y) {}

  bool infinity_ = true;
  FieldElement x_{};
  FieldElement y_{};
};

std::string to_string(const Point& point);

class Curve {
 public:
  // Validates the discriminant, the generator, n*G = O, and (when p and n
  // fit 32 bits) their primality. Throws Errc::invalid_profile.
  explicit Curve(CurveProfile profile);

  // Shared instance for a named profile.
  static std::shared_ptr<const Curve> named(std::string_view name);

  const CurveProfile& profile() const { return profile_; }
  const Point& generator() const { return generator_; }
  const U256& order() const { return profile_.n; }
  unsigned order_bits() const { return order_bits_; }
  // Bytes of a big-endian x coordinate in the compressed encoding.
  std::size_t field_bytes() const { return field_bytes_; }
  std::size_t scalar_bytes() const { return (order_bits_ + 7) / 8; }

  bool is_on_curve(const Point& point) const;
  // Throws Errc::invalid_point unless is_on_curve.
  void require_on_curve(const Point& point, std::string_view what) const;

  Point add(const Point& lhs, const Point& rhs) const;
  Point negate(const Point& point) const;
  // Fixed 4-bit windows over the full scalar width with complete projective
  // formulas and scanning table lookups: the operation sequence does not
  // depend on the scalar. The scalar must be below n.
  Point mul(const Scalar& k, const Point& point) const;
  // Same, against a precomputed table of generator multiples.
  Point mul_base(const Scalar& k) const;

  // Arithmetic in Z_n.
  bool is_scalar(const U256& value) const { return value < profile_.n; }
  bool is_nonzero_scalar(const U256& value) const { return !value.is_zero() && value < profile_.n; }
  Scalar scalar(const U256& value) const;  // throws Errc::invalid_scalar if >= n
  Scalar scalar(std::uint64_t value) const { return scalar(U256{value}); }
  Scalar reduce_scalar(const U256& value) const;
  Scalar scalar_add(const Scalar& a, const Scalar& b) const;
  Scalar scalar_mul(const Scalar& a, const Scalar& b) const;

  // Compressed encoding: 0x00 for O, else 0x02/0x03 (y parity) then x as
  // field_bytes() big-endian bytes.
  std::vector<std::uint8_t> encode(const Point& point) const;
  std::size_t encoded_size(const Point& point) const { return point.is_infinity() ? 1 : 1 + field_bytes_; }
  // Throws Errc::malformed_encoding or Errc::invalid_point.
  Point decode(std::span<const std::uint8_t> bytes) const;

  // Every point of the group including O, for p <= 2^16. Throws
  // Errc::oracle_scope for larger fields.
  std::vector<Point> enumerate_group() const;

 private:
  // Homogeneous (X:Y:Z) in Montgomery form; O is (0:1:0).
  struct Projective {
    U256 x;
    U256 y;
    U256 z;
  };

  static constexpr unsigned kWindowBits = 4;
  static constexpr std::size_t kWindowSize = std::size_t{1} << kWindowBits;

  Projective to_projective(const Point& point) const;
  Point to_affine(const Projective& point) const;
  Projective complete_add(const Projective& lhs, const Projective& rhs) const;
  Projective complete_double(const Projective& point) const;
  unsigned window_count() const;
  static std::uint64_t window_digit(const U256& k, unsigned window);
  static Projective lookup(std::span<const Projective> table, std::uint64_t digit);
  void build_base_table();
  U256 curve_rhs_mont(const U256& x_mont) const;
  bool sqrt_mont(const U256& value_mont, U256& root_mont) const;

  CurveProfile profile_;
  MontgomeryDomain field_;
  MontgomeryDomain scalars_;
  U256 a_mont_;
  U256 b_mont_;
  U256 b3_mont_;
  Point generator_;
  unsigned order_bits_ = 0;
  std::size_t field_bytes_ = 0;
  // window_count() rows of j * 16^w * G, j in [0, 16).
  std::vector<Projective> base_table_;
};

}  // namespace clakap
