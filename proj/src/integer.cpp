#include "ftile/integer.hpp"

#include <iterator>
#include <vector>

namespace ftile {

namespace {

void append_length(std::string &out, std::size_t n) {
  for (int shift = 24; shift >= 0; shift -= 8)
    out.push_back(static_cast<char>((n >> shift) & 0xffu));
}

} // namespace

void append_sign_magnitude(std::string &out, const BigInt &x) {
  if (x == 0) {
    out.push_back('\0');
    append_length(out, 0);
    return;
  }
  out.push_back(x > 0 ? '\1' : '\2');
  std::vector<unsigned char> bytes;
  const BigInt mag = boost::multiprecision::abs(x);
  export_bits(mag, std::back_inserter(bytes), 8, true);
  append_length(out, bytes.size());
  out.append(bytes.begin(), bytes.end());
}

void append_sign_magnitude(std::string &out, std::int64_t x) {
  if (x == 0) {
    out.push_back('\0');
    append_length(out, 0);
    return;
  }
  out.push_back(x > 0 ? '\1' : '\2');
  std::uint64_t mag = x > 0 ? static_cast<std::uint64_t>(x)
                            : ~static_cast<std::uint64_t>(x) + 1u;
  unsigned char buf[8];
  int len = 0;
  while (mag) {
    buf[len++] = static_cast<unsigned char>(mag & 0xffu);
    mag >>= 8;
  }
  append_length(out, static_cast<std::size_t>(len));
  while (len) out.push_back(static_cast<char>(buf[--len]));
}

} // namespace ftile
