#include "clakap/ec_group.hpp"

#include <array>
#include <map>
#include <mutex>

#include "clakap/error.hpp"

namespace clakap {

namespace {

U256 shift_right(const U256& value, unsigned bits) {
  U256 out;
  const unsigned limb_shift = bits / 64;
  const unsigned bit_shift = bits % 64;
  for (unsigned i = 0; i + limb_shift < 4; ++i) {
    std::uint64_t limb = value.limb(i + limb_shift) >> bit_shift;
    if (bit_shift != 0 && i + limb_shift + 1 < 4) limb |= value.limb(i + limb_shift + 1) << (64 - bit_shift);
    out.limb(i) = limb;
  }
  return out;
}

bool is_prime_u64(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

CurveProfile make_p256() {
  CurveProfile profile;
  profile.name = "p256";
  profile.p = U256::from_hex("ffffffff00000001000000000000000000000000ffffffffffffffffffffffff");
  profile.a = U256::from_hex("ffffffff00000001000000000000000000000000fffffffffffffffffffffffc");
  profile.b = U256::from_hex("5ac635d8aa3a93e7b3ebbd55769886bc651d06b0cc53b0f63bce3c3e27d2604b");
  profile.gx = U256::from_hex("6b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296");
  profile.gy = U256::from_hex("4fe342e2fe1a7f9b8ee7eb4a7c0f9e162bce33576b315ececbb6406837bf51f5");
  profile.n = U256::from_hex("ffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551");
  profile.cofactor = 1;
  return profile;
}

}  // namespace

const CurveProfile& CurveProfile::toy17() {
  static const CurveProfile profile{"toy-17", U256{17}, U256{2}, U256{2}, U256{5}, U256{1}, U256{19}, 1};
  return profile;
}

const CurveProfile& CurveProfile::p256() {
  static const CurveProfile profile = make_p256();
  return profile;
}

const CurveProfile& CurveProfile::by_name(std::string_view name) {
  if (name == "toy-17") return toy17();
  if (name == "p256") return p256();
  throw Error(Errc::invalid_profile, "unknown curve profile '" + std::string(name) + "'");
}

std::string to_string(const Point& point) {
  if (point.is_infinity()) return "O";
  return "(" + point.x().value.to_hex() + "," + point.y().value.to_hex() + ")";
}

Curve::Curve(CurveProfile profile)
    : profile_(std::move(profile)), field_(profile_.p), scalars_(profile_.n) {
  const auto& pr = profile_;
  if (pr.a >= pr.p || pr.b >= pr.p || pr.gx >= pr.p || pr.gy >= pr.p) {
    throw Error(Errc::invalid_profile, pr.name + ": coefficients must be reduced mod p");
  }
  if (pr.cofactor != 1) {
    throw Error(Errc::invalid_profile, pr.name + ": only prime-order groups are supported");
  }
  if (pr.p.bit_length() <= 32 && !is_prime_u64(pr.p.low_u64())) {
    throw Error(Errc::invalid_profile, pr.name + ": p is not prime");
  }
  if (pr.n.bit_length() <= 32 && !is_prime_u64(pr.n.low_u64())) {
    throw Error(Errc::invalid_profile, pr.name + ": n is not prime");
  }

  a_mont_ = field_.to_mont(pr.a);
  b_mont_ = field_.to_mont(pr.b);
  b3_mont_ = field_.add(field_.add(b_mont_, b_mont_), b_mont_);
  order_bits_ = pr.n.bit_length();
  field_bytes_ = (pr.p.bit_length() + 7) / 8;

  // 4a^3 + 27b^2 != 0
  const U256 four = field_.to_mont(U256{4});
  const U256 twenty_seven = field_.to_mont(U256{27});
  const U256 a3 = field_.mul(field_.sqr(a_mont_), a_mont_);
  const U256 disc = field_.add(field_.mul(four, a3), field_.mul(twenty_seven, field_.sqr(b_mont_)));
  if (disc.is_zero()) throw Error(Errc::invalid_profile, pr.name + ": singular curve");

  generator_ = Point::affine(FieldElement{pr.gx}, FieldElement{pr.gy});
  if (!is_on_curve(generator_)) throw Error(Errc::invalid_profile, pr.name + ": generator not on curve");
  build_base_table();

  // n*G = O  <=>  (n-1)*G = -G
  U256 n_minus_one;
  U256::sub(n_minus_one, pr.n, U256{1});
  if (mul(Scalar{n_minus_one}, generator_) != negate(generator_)) {
    throw Error(Errc::invalid_profile, pr.name + ": generator order is not n");
  }
}

std::shared_ptr<const Curve> Curve::named(std::string_view name) {
  static std::mutex mutex;
  static std::map<std::string, std::shared_ptr<const Curve>, std::less<>> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(name); it != cache.end()) return it->second;
  auto curve = std::make_shared<const Curve>(CurveProfile::by_name(name));
  cache.emplace(std::string(name), curve);
  return curve;
}

U256 Curve::curve_rhs_mont(const U256& x_mont) const {
  const U256 x3 = field_.mul(field_.sqr(x_mont), x_mont);
  return field_.add(field_.add(x3, field_.mul(a_mont_, x_mont)), b_mont_);
}

bool Curve::is_on_curve(const Point& point) const {
  if (point.is_infinity()) return true;
  if (point.x().value >= profile_.p || point.y().value >= profile_.p) return false;
  const U256 x = field_.to_mont(point.x().value);
  const U256 y = field_.to_mont(point.y().value);
  return field_.sqr(y) == curve_rhs_mont(x);
}

void Curve::require_on_curve(const Point& point, std::string_view what) const {
  if (!is_on_curve(point)) {
    throw Error(Errc::invalid_point, std::string(what) + " " + to_string(point) + " is not on " + profile_.name);
  }
}

Curve::Projective Curve::to_projective(const Point& point) const {
  if (point.is_infinity()) return {U256{}, field_.one(), U256{}};
  return {field_.to_mont(point.x().value), field_.to_mont(point.y().value), field_.one()};
}

Point Curve::to_affine(const Projective& point) const {
  if (point.z.is_zero()) return Point::infinity();
  const U256 z_inv = field_.inv(point.z);
  return Point::affine(FieldElement{field_.from_mont(field_.mul(point.x, z_inv))},
                       FieldElement{field_.from_mont(field_.mul(point.y, z_inv))});
}

// Complete addition for prime-order short Weierstrass curves with arbitrary a
// (Renes-Costello-Batina, algorithm 1). Valid for doubling and for O.
Curve::Projective Curve::complete_add(const Projective& p1, const Projective& p2) const {
  const auto& f = field_;
  U256 t0 = f.mul(p1.x, p2.x);
  U256 t1 = f.mul(p1.y, p2.y);
  U256 t2 = f.mul(p1.z, p2.z);
  U256 t3 = f.add(p1.x, p1.y);
  U256 t4 = f.add(p2.x, p2.y);
  t3 = f.mul(t3, t4);
  t4 = f.add(t0, t1);
  t3 = f.sub(t3, t4);
  t4 = f.add(p1.x, p1.z);
  U256 t5 = f.add(p2.x, p2.z);
  t4 = f.mul(t4, t5);
  t5 = f.add(t0, t2);
  t4 = f.sub(t4, t5);
  t5 = f.add(p1.y, p1.z);
  U256 x3 = f.add(p2.y, p2.z);
  t5 = f.mul(t5, x3);
  x3 = f.add(t1, t2);
  t5 = f.sub(t5, x3);
  U256 z3 = f.mul(a_mont_, t4);
  x3 = f.mul(b3_mont_, t2);
  z3 = f.add(x3, z3);
  x3 = f.sub(t1, z3);
  z3 = f.add(t1, z3);
  U256 y3 = f.mul(x3, z3);
  t1 = f.add(t0, t0);
  t1 = f.add(t1, t0);
  t2 = f.mul(a_mont_, t2);
  t4 = f.mul(b3_mont_, t4);
  t1 = f.add(t1, t2);
  t2 = f.sub(t0, t2);
  t2 = f.mul(a_mont_, t2);
  t4 = f.add(t4, t2);
  t0 = f.mul(t1, t4);
  y3 = f.add(y3, t0);
  t0 = f.mul(t5, t4);
  x3 = f.mul(t3, x3);
  x3 = f.sub(x3, t0);
  t0 = f.mul(t3, t1);
  z3 = f.mul(t5, z3);
  z3 = f.add(z3, t0);
  return {x3, y3, z3};
}

Point Curve::add(const Point& lhs, const Point& rhs) const {
  require_on_curve(lhs, "addend");
  require_on_curve(rhs, "addend");
  return to_affine(complete_add(to_projective(lhs), to_projective(rhs)));
}

Point Curve::negate(const Point& point) const {
  require_on_curve(point, "point");
  if (point.is_infinity()) return point;
  return Point::affine(point.x(), FieldElement{field_.from_mont(field_.neg(field_.to_mont(point.y().value)))});
}

// Dedicated doubling for arbitrary a (Renes-Costello-Batina, algorithm 3).
Curve::Projective Curve::complete_double(const Projective& p) const {
  const auto& f = field_;
  U256 t0 = f.sqr(p.x);
  U256 t1 = f.sqr(p.y);
  U256 t2 = f.sqr(p.z);
  U256 t3 = f.mul(p.x, p.y);
  t3 = f.add(t3, t3);
  U256 z3 = f.mul(p.x, p.z);
  z3 = f.add(z3, z3);
  U256 x3 = f.mul(a_mont_, z3);
  U256 y3 = f.mul(b3_mont_, t2);
  y3 = f.add(x3, y3);
  x3 = f.sub(t1, y3);
  y3 = f.add(t1, y3);
  y3 = f.mul(x3, y3);
  x3 = f.mul(t3, x3);
  z3 = f.mul(b3_mont_, z3);
  t2 = f.mul(a_mont_, t2);
  t3 = f.sub(t0, t2);
  t3 = f.mul(a_mont_, t3);
  t3 = f.add(t3, z3);
  z3 = f.add(t0, t0);
  t0 = f.add(z3, t0);
  t0 = f.add(t0, t2);
  t0 = f.mul(t0, t3);
  y3 = f.add(y3, t0);
  t2 = f.mul(p.y, p.z);
  t2 = f.add(t2, t2);
  t0 = f.mul(t2, t3);
  x3 = f.sub(x3, t0);
  z3 = f.mul(t2, t1);
  z3 = f.add(z3, z3);
  z3 = f.add(z3, z3);
  return {x3, y3, z3};
}

unsigned Curve::window_count() const { return (order_bits_ + kWindowBits - 1) / kWindowBits; }

std::uint64_t Curve::window_digit(const U256& k, unsigned window) {
  std::uint64_t digit = 0;
  for (unsigned b = 0; b < kWindowBits; ++b) {
    const unsigned index = window * kWindowBits + b;
    if (index < 256) digit |= static_cast<std::uint64_t>(k.bit(index)) << b;
  }
  return digit;
}

// Reads every entry so the memory access pattern does not depend on digit.
Curve::Projective Curve::lookup(std::span<const Projective> table, std::uint64_t digit) {
  Projective out = table[0];
  for (std::uint64_t j = 1; j < table.size(); ++j) {
    const std::uint64_t mask = 0 - static_cast<std::uint64_t>(j == digit);
    out.x = U256::select(mask, table[j].x, out.x);
    out.y = U256::select(mask, table[j].y, out.y);
    out.z = U256::select(mask, table[j].z, out.z);
  }
  return out;
}

void Curve::build_base_table() {
  const unsigned windows = window_count();
  base_table_.resize(static_cast<std::size_t>(windows) * kWindowSize);
  Projective base = to_projective(generator_);
  for (unsigned w = 0; w < windows; ++w) {
    Projective* row = &base_table_[static_cast<std::size_t>(w) * kWindowSize];
    row[0] = {U256{}, field_.one(), U256{}};
    for (std::size_t j = 1; j < kWindowSize; ++j) row[j] = complete_add(row[j - 1], base);
    for (unsigned b = 0; b < kWindowBits; ++b) base = complete_double(base);
  }
}

Point Curve::mul(const Scalar& k, const Point& point) const {
  require_on_curve(point, "multiplicand");
  if (!is_scalar(k.value())) throw Error(Errc::invalid_scalar, "scalar is not below the group order");

  std::array<Projective, kWindowSize> table;
  table[0] = {U256{}, field_.one(), U256{}};
  table[1] = to_projective(point);
  for (std::size_t j = 2; j < kWindowSize; ++j) table[j] = complete_add(table[j - 1], table[1]);

  Projective acc = table[0];
  for (int w = static_cast<int>(window_count()) - 1; w >= 0; --w) {
    for (unsigned b = 0; b < kWindowBits; ++b) acc = complete_double(acc);
    acc = complete_add(acc, lookup(table, window_digit(k.value(), static_cast<unsigned>(w))));
  }
  return to_affine(acc);
}

Point Curve::mul_base(const Scalar& k) const {
  if (!is_scalar(k.value())) throw Error(Errc::invalid_scalar, "scalar is not below the group order");
  Projective acc{U256{}, field_.one(), U256{}};
  for (unsigned w = 0; w < window_count(); ++w) {
    const auto row = std::span(base_table_).subspan(static_cast<std::size_t>(w) * kWindowSize, kWindowSize);
    acc = complete_add(acc, lookup(row, window_digit(k.value(), w)));
  }
  return to_affine(acc);
}

Scalar Curve::scalar(const U256& value) const {
  if (!is_scalar(value)) throw Error(Errc::invalid_scalar, "value " + value.to_hex() + " is not below the group order");
  return Scalar{value};
}

Scalar Curve::reduce_scalar(const U256& value) const { return Scalar{scalars_.reduce(value)}; }

Scalar Curve::scalar_add(const Scalar& a, const Scalar& b) const {
  return Scalar{scalars_.add(a.value(), b.value())};
}

Scalar Curve::scalar_mul(const Scalar& a, const Scalar& b) const {
  // mont(a) * b = a*b*R/R
  return Scalar{scalars_.mul(scalars_.to_mont(a.value()), b.value())};
}

std::vector<std::uint8_t> Curve::encode(const Point& point) const {
  require_on_curve(point, "encoded point");
  if (point.is_infinity()) return {0x00};
  std::vector<std::uint8_t> out(1 + field_bytes_);
  out[0] = point.y().value.is_odd() ? 0x03 : 0x02;
  point.x().value.to_be_bytes(std::span(out).subspan(1));
  return out;
}

bool Curve::sqrt_mont(const U256& value, U256& root) const {
  const auto& f = field_;
  if (value.is_zero()) {
    root = U256{};
    return true;
  }
  U256 p_minus_one;
  U256::sub(p_minus_one, profile_.p, U256{1});
  if (f.pow(value, shift_right(p_minus_one, 1)) != f.one()) return false;

  if ((profile_.p.limb(0) & 3u) == 3u) {
    U256 p_plus_one;
    U256::add(p_plus_one, profile_.p, U256{1});
    root = f.pow(value, shift_right(p_plus_one, 2));
    return true;
  }

  // Tonelli-Shanks.
  U256 q = p_minus_one;
  unsigned s = 0;
  while (!q.is_odd()) {
    q = shift_right(q, 1);
    ++s;
  }
  const U256 minus_one = f.neg(f.one());
  U256 z = f.add(f.one(), f.one());
  while (f.pow(z, shift_right(p_minus_one, 1)) != minus_one) z = f.add(z, f.one());

  U256 q_plus_one;
  U256::add(q_plus_one, q, U256{1});
  unsigned m = s;
  U256 c = f.pow(z, q);
  U256 t = f.pow(value, q);
  U256 r = f.pow(value, shift_right(q_plus_one, 1));
  while (t != f.one()) {
    unsigned i = 0;
    U256 t2 = t;
    while (t2 != f.one()) {
      t2 = f.sqr(t2);
      ++i;
    }
    U256 b = c;
    for (unsigned j = 0; j + i + 1 < m; ++j) b = f.sqr(b);
    m = i;
    c = f.sqr(b);
    t = f.mul(t, c);
    r = f.mul(r, b);
  }
  root = r;
  return true;
}

Point Curve::decode(std::span<const std::uint8_t> bytes) const {
  if (bytes.empty()) throw Error(Errc::malformed_encoding, "empty point encoding");
  if (bytes[0] == 0x00) {
    if (bytes.size() != 1) throw Error(Errc::malformed_encoding, "trailing bytes after identity encoding");
    return Point::infinity();
  }
  if (bytes[0] != 0x02 && bytes[0] != 0x03) throw Error(Errc::malformed_encoding, "unknown point prefix");
  if (bytes.size() != 1 + field_bytes_) throw Error(Errc::malformed_encoding, "wrong compressed point length");

  const U256 x = U256::from_be_bytes(bytes.subspan(1));
  if (x >= profile_.p) throw Error(Errc::malformed_encoding, "x coordinate not reduced");
  const U256 x_mont = field_.to_mont(x);
  U256 y_mont;
  if (!sqrt_mont(curve_rhs_mont(x_mont), y_mont)) {
    throw Error(Errc::invalid_point, "x=" + x.to_hex() + " has no point on " + profile_.name);
  }
  U256 y = field_.from_mont(y_mont);
  const bool want_odd = bytes[0] == 0x03;
  if (y.is_odd() != want_odd) {
    if (y.is_zero()) throw Error(Errc::invalid_point, "no odd root for y = 0");
    y = field_.from_mont(field_.neg(y_mont));
  }
  return Point::affine(FieldElement{x}, FieldElement{y});
}

std::vector<Point> Curve::enumerate_group() const {
  if (profile_.p > U256{1u << 16}) {
    throw Error(Errc::oracle_scope, profile_.name + " is too large to enumerate");
  }
  const std::uint64_t p = profile_.p.low_u64();
  const std::uint64_t a = profile_.a.low_u64();
  const std::uint64_t b = profile_.b.low_u64();

  std::vector<std::vector<std::uint64_t>> roots(p);
  for (std::uint64_t y = 0; y < p; ++y) roots[y * y % p].push_back(y);

  std::vector<Point> points{Point::infinity()};
  for (std::uint64_t x = 0; x < p; ++x) {
    const std::uint64_t rhs = (x * x % p * x + a * x + b) % p;
    for (std::uint64_t y : roots[rhs]) points.push_back(Point::affine(x, y));
  }
  return points;
}

}  // namespace clakap
