#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "ftile/errors.hpp"

namespace ftile {

using BigInt = boost::multiprecision::cpp_int;

/// 64-bit integer whose arithmetic throws OverflowAbort instead of wrapping.
/// Used as the fast path of the exact lattice computations; callers catch the
/// error and redo the work with BigInt.
class Checked64 {
public:
  constexpr Checked64() = default;
  constexpr Checked64(std::int64_t v) : v_(v) {}

  constexpr std::int64_t value() const noexcept { return v_; }

  friend Checked64 operator+(Checked64 a, Checked64 b) {
    std::int64_t r;
    if (__builtin_add_overflow(a.v_, b.v_, &r)) overflow();
    return r;
  }
  friend Checked64 operator-(Checked64 a, Checked64 b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a.v_, b.v_, &r)) overflow();
    return r;
  }
  friend Checked64 operator*(Checked64 a, Checked64 b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a.v_, b.v_, &r)) overflow();
    return r;
  }
  Checked64 operator-() const { return Checked64(0) - *this; }
  Checked64 &operator+=(Checked64 o) { return *this = *this + o; }
  Checked64 &operator-=(Checked64 o) { return *this = *this - o; }
  Checked64 &operator*=(Checked64 o) { return *this = *this * o; }

  friend constexpr bool operator==(Checked64, Checked64) = default;
  friend constexpr auto operator<=>(Checked64, Checked64) = default;

private:
  [[noreturn]] static void overflow() {
    throw Error(ErrorKind::OverflowAbort, "64-bit lattice arithmetic overflowed");
  }

  std::int64_t v_ = 0;
};

inline double to_double(const BigInt &x) { return x.convert_to<double>(); }
inline double to_double(Checked64 x) { return static_cast<double>(x.value()); }

inline BigInt to_bigint(const BigInt &x) { return x; }
inline BigInt to_bigint(Checked64 x) { return BigInt(x.value()); }

template <class T> T from_bigint(const BigInt &x);

template <> inline BigInt from_bigint<BigInt>(const BigInt &x) { return x; }

template <> inline Checked64 from_bigint<Checked64>(const BigInt &x) {
  if (x > std::numeric_limits<std::int64_t>::max() ||
      x < std::numeric_limits<std::int64_t>::min())
    throw Error(ErrorKind::OverflowAbort, "integer does not fit in 64 bits");
  return Checked64(x.convert_to<std::int64_t>());
}

/// Appends the sign-magnitude encoding of x: one sign byte (0 zero, 1
/// positive, 2 negative), a 4-byte big-endian length, then the magnitude in
/// big-endian bytes with no leading zeros.
void append_sign_magnitude(std::string &out, const BigInt &x);
void append_sign_magnitude(std::string &out, std::int64_t x);
inline void append_sign_magnitude(std::string &out, Checked64 x) {
  append_sign_magnitude(out, x.value());
}

} // namespace ftile
